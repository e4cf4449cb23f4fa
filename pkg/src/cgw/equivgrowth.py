"""The preorder f <= g (f(n) <= g(Cn) for all n) and equivalence on sampled
functions, with reference functions for comparison.

Every verdict is finite-scale evidence over the sampled range only.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

Number = Union[int, Fraction]

DISCLAIMER = "finite-scale evidence only: checked on the sampled range, not a statement about all n"


@dataclass
class SampledFunction:
    """Values on 1..N. ``formula`` (when present) evaluates beyond N."""

    name: str
    values: dict  # n -> value, contiguous 1..N
    formula: Optional[Callable[[int], Number]] = None
    provenance: str = ""

    def __post_init__(self):
        if not self.values:
            raise ValueError(f"{self.name}: no samples")
        keys = sorted(self.values)
        if keys != list(range(keys[0], keys[0] + len(keys))):
            raise ValueError(f"{self.name}: samples must cover a contiguous range")
        for n, v in self.values.items():
            if v < 1:
                raise ValueError(f"{self.name}: value {v} at n={n} is below 1")

    @property
    def lo(self) -> int:
        return min(self.values)

    @property
    def N(self) -> int:
        return max(self.values)

    def defined(self, n: int) -> bool:
        return n in self.values or (self.formula is not None and n >= self.lo)

    def __call__(self, n: int) -> Number:
        if n in self.values:
            return self.values[n]
        if self.formula is not None:
            return self.formula(n)
        raise KeyError(n)

    @classmethod
    def from_table(cls, table, name: Optional[str] = None, column: str = "value") -> "SampledFunction":
        """From a GrowthTable, dropping n = 0. ``column`` picks value/lower/upper."""
        src = {"value": table.values, "lower": table.lower, "upper": table.upper}[column]
        if src is None:
            raise ValueError(f"table has no {column!r} column")
        if any(v is None for v in src[1:]):
            raise ValueError("bracketed table: choose column='lower' or column='upper'")
        vals = {n: src[n] for n in range(1, len(src))}
        return cls(name or f"{table.kind}[{table.descriptor}]", vals, None, f"table {table.descriptor}")


def _clog2(n: int) -> int:
    # ceil(log2(n + 1)) for n >= 1
    return n.bit_length()


def reference_function(name: str, N: int) -> SampledFunction:
    """poly(d), exp(a) (a > 1 rational), nsq_log (n^2 * ceil(log2(n+1)))."""
    if N < 1:
        raise ValueError("N must be >= 1")
    name = name.strip()
    m = re.fullmatch(r"poly\(\s*(\d+)\s*\)", name)
    if m:
        d = int(m.group(1))
        f = lambda n: n**d
    elif (m := re.fullmatch(r"exp\(\s*([0-9/]+)\s*\)", name)):
        a = Fraction(m.group(1))
        if a <= 1:
            raise ValueError("exp(a) needs a > 1")
        if a.denominator == 1:
            ai = int(a)
            f = lambda n: ai**n
        else:
            f = lambda n: a**n
    elif name == "nsq_log":
        f = lambda n: n * n * _clog2(n)
    else:
        raise ValueError(f"unknown reference function {name!r} (poly(d), exp(a), nsq_log)")
    prov = f"reference {name}" + ("; log realized as ceil(log2(n+1))" if name == "nsq_log" else "")
    return SampledFunction(name, {n: f(n) for n in range(1, N + 1)}, f, prov)


@dataclass
class EquivVerdict:
    relation: str  # preceq | equiv | refuted-within
    C: Optional[int] = None
    N: int = 0
    Cmax: int = 0
    counterexamples: dict = field(default_factory=dict)  # C -> (n, f(n), g(Cn))
    checked: dict = field(default_factory=dict)  # C -> checked n range (lo, hi)
    direction: str = ""
    parts: list = field(default_factory=list)
    scope: str = DISCLAIMER

    @property
    def holds(self) -> bool:
        return self.relation in ("preceq", "equiv")

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "C": self.C,
            "N": self.N,
            "Cmax": self.Cmax,
            "direction": self.direction,
            "counterexamples": {str(c): [v[0], str(v[1]), str(v[2])] for c, v in self.counterexamples.items()},
            "checked": {str(c): list(r) for c, r in self.checked.items()},
            "parts": [p.to_dict() for p in self.parts],
            "scope": self.scope,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _checkable(f: SampledFunction, g: SampledFunction, C: int) -> list[int]:
    return [n for n in range(f.lo, f.N + 1) if g.defined(C * n)]


def preceq_witness(f: SampledFunction, g: SampledFunction, Cmax: int) -> EquivVerdict:
    """Smallest C <= Cmax with f(n) <= g(Cn) on every checkable n."""
    if Cmax < 1:
        raise ValueError("Cmax must be >= 1")
    if not _checkable(f, g, Cmax):
        raise ValueError(
            f"empty checkable range: {g.name} is sampled to {g.N} with no formula, "
            f"so no n has {Cmax}n in range"
        )
    N = f.N
    counter, checked = {}, {}
    for C in range(1, Cmax + 1):
        ns = _checkable(f, g, C)
        if not ns:
            continue
        checked[C] = (ns[0], ns[-1])
        # report the largest violating n: evidence at the top of the range
        bad = next((n for n in reversed(ns) if f(n) > g(C * n)), None)
        if bad is None:
            return EquivVerdict("preceq", C, N, Cmax, counter, checked, f"{f.name} <= {g.name}")
        counter[C] = (bad, f(bad), g(C * bad))
    return EquivVerdict("refuted-within", None, N, Cmax, counter, checked, f"{f.name} <= {g.name}")


def equiv_verdict(f: SampledFunction, g: SampledFunction, Cmax: int) -> EquivVerdict:
    fg = preceq_witness(f, g, Cmax)
    gf = preceq_witness(g, f, Cmax)
    if fg.holds and gf.holds:
        return EquivVerdict("equiv", max(fg.C, gf.C), max(f.N, g.N), Cmax,
                            direction=f"{f.name} ~ {g.name}", parts=[fg, gf])
    failing = fg if not fg.holds else gf
    return EquivVerdict("refuted-within", None, failing.N, Cmax, failing.counterexamples,
                        failing.checked, failing.direction, parts=[fg, gf])
