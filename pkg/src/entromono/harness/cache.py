"""Content-addressed on-disk cache of per-level trajectory summaries.

Each record is a small JSON file named by the SHA-256 digest of its key.
Writes go to a temporary file in the same directory followed by
``os.replace``, so concurrent runs sharing a directory never see partial
records.  Unreadable records are recomputed and overwritten.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Callable

from .scenario import canonical_json, digest

log = logging.getLogger(__name__)

ENV_VAR = "ENTROMONO_CACHE_DIR"
RECORD_VERSION = 1


def default_cache_dir() -> Path | None:
    v = os.environ.get(ENV_VAR)
    return Path(v) if v else None


class LevelCache:
    def __init__(self, directory: str | Path | None):
        self.directory = Path(directory) if directory else None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    @property
    def enabled(self) -> bool:
        return self.directory is not None

    def _path(self, key: Any) -> Path:
        h = digest(key)
        return self.directory / h[:2] / f"{h}.json"

    def get(self, key: Any) -> Any | None:
        if not self.enabled:
            return None
        p = self._path(key)
        if not p.exists():
            return None
        try:
            rec = json.loads(p.read_text())
            if rec.get("version") != RECORD_VERSION or rec.get("key") != json.loads(canonical_json(key)):
                raise ValueError("record does not match its key")
            return rec["value"]
        except (OSError, ValueError, KeyError, TypeError) as e:
            log.warning("corrupt cache record %s (%s); recomputing", p, e)
            return None

    def put(self, key: Any, value: Any) -> None:
        if not self.enabled:
            return
        p = self._path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        rec = {"version": RECORD_VERSION, "key": json.loads(canonical_json(key)), "value": value}
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(canonical_json(rec))
            os.replace(tmp, p)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise

    def levels(self, base_key: dict, ns: list[int], compute: Callable[[list[int]], dict[int, Any]]) -> dict[int, Any]:
        """Per-level values for ``ns``; ``compute`` is called once with the missing levels."""
        out: dict[int, Any] = {}
        missing = []
        for n in ns:
            v = self.get({**base_key, "n": n})
            if v is None:
                missing.append(n)
            else:
                out[n] = v
        self.hits += len(ns) - len(missing)
        self.misses += len(missing)
        if missing:
            fresh = compute(missing)
            for n in missing:
                out[n] = fresh[n]
                self.put({**base_key, "n": n}, fresh[n])
        return out

    def stats(self) -> dict:
        total = self.hits + self.misses
        return {"hits": self.hits, "misses": self.misses, "hit_rate": (self.hits / total) if total else 0.0}

    def merge(self, other: dict) -> None:
        self.hits += other.get("hits", 0)
        self.misses += other.get("misses", 0)
