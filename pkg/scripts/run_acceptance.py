"""Run the acceptance suite and print one line per criterion.

    python3 scripts/run_acceptance.py [-k PATTERN]
"""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]


def main(argv=None) -> int:
    args = [str(ROOT / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider"]
    return pytest.main(args + list(argv if argv is not None else sys.argv[1:]))


if __name__ == "__main__":
    sys.exit(main())
