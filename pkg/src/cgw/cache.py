"""On-disk result cache keyed by a content hash of (descriptor, operation,
parameters, tool version). Entries carry a checksum; corrupt entries are
treated as misses."""

from __future__ import annotations

import hashlib
import json
import os
import time
import warnings
from pathlib import Path
from typing import Optional

from filelock import FileLock

from . import __version__


def cache_key(descriptor: str, op: str, params: dict, version: str = __version__) -> str:
    blob = json.dumps({"descriptor": descriptor, "op": op, "params": params, "version": version},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class ResultCache:
    def __init__(self, directory: Optional[str | os.PathLike]):
        self.dir: Optional[Path] = None
        if directory is None:
            return
        try:
            d = Path(directory)
            d.mkdir(parents=True, exist_ok=True)
            probe = d / ".write-probe"
            probe.write_text("ok")
            probe.unlink()
            self.dir = d
        except OSError as exc:
            warnings.warn(f"cache directory {directory} is not writable ({exc}); caching disabled")

    @property
    def enabled(self) -> bool:
        return self.dir is not None

    def _path(self, key: str) -> Path:
        return self.dir / f"{key}.json"

    def load(self, key: str) -> Optional[str]:
        if not self.enabled:
            return None
        path = self._path(key)
        with FileLock(str(path) + ".lock"):
            if not path.exists():
                return None
            try:
                entry = json.loads(path.read_text())
                payload = entry["payload"]
                if entry["key"] != key or hashlib.sha256(payload.encode()).hexdigest() != entry["checksum"]:
                    return None
                return payload
            except (ValueError, KeyError, TypeError):
                return None

    def store(self, key: str, payload: str) -> None:
        if not self.enabled:
            return
        path = self._path(key)
        entry = {
            "key": key,
            "version": __version__,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "checksum": hashlib.sha256(payload.encode()).hexdigest(),
            "payload": payload,
        }
        with FileLock(str(path) + ".lock"):
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(entry, sort_keys=True))
            os.replace(tmp, path)

    def get_or_compute(self, key: str, compute) -> tuple[str, bool]:
        """(payload, hit)."""
        hit = self.load(key)
        if hit is not None:
            return hit, True
        payload = compute()
        self.store(key, payload)
        return payload, False
