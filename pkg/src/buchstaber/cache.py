"""Persistent JSON cache of exact invariant values.

The cache is an optimisation only: a missing or corrupt file behaves like an
empty cache, and intervals are never stored.
"""

from __future__ import annotations

import json
import os
import tempfile
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

from .invariants import InvariantResult

TOOL_VERSION = "0.1.0"
ENV_VAR = "BUCHSTABER_CACHE"


def default_path() -> Path:
    base = os.environ.get("XDG_DATA_HOME") or os.path.join(Path.home(), ".local", "share")
    return Path(base) / "buchstaber" / "cache.json"


def resolve_path(flag: str | None = None) -> Path:
    """Flag, then environment variable, then the user data directory."""
    if flag:
        return Path(flag)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else default_path()


@dataclass
class CacheEntry:
    key: str
    p: int
    value: InvariantResult
    created: float
    tool_version: str = TOOL_VERSION

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "p": self.p,
            "value": self.value.to_json(),
            "created": self.created,
            "tool_version": self.tool_version,
        }


class ResultCache:
    def __init__(self, path: Path | str):
        self.path = Path(path)
        self._entries: dict[str, dict] = {}
        self._load()

    @staticmethod
    def _slot(key: str, p: int) -> str:
        return f"{key}|{int(p)}"

    def _load(self) -> None:
        if not self.path.exists():
            return
        try:
            data = json.loads(self.path.read_text())
            entries = data["entries"]
            if not isinstance(entries, dict):
                raise TypeError("entries must be an object")
            self._entries = entries
        except (OSError, ValueError, KeyError, TypeError) as exc:
            warnings.warn(f"ignoring unreadable cache {self.path}: {exc}", stacklevel=2)
            self._entries = {}

    def get(self, key: str, p: int) -> InvariantResult | None:
        raw = self._entries.get(self._slot(key, p))
        if raw is None:
            return None
        try:
            res = InvariantResult.from_json(raw["value"])
        except (KeyError, ValueError, TypeError) as exc:
            warnings.warn(f"ignoring bad cache entry {key}: {exc}", stacklevel=2)
            return None
        if not res.exact or res.complex.key() != key or res.p != int(p):
            return None
        return res

    def put(self, result: InvariantResult) -> bool:
        """Store an exact result and write the file; intervals are skipped."""
        if not result.exact:
            return False
        key = result.complex.key()
        entry = CacheEntry(key, int(result.p), result, time.time())
        self._entries[self._slot(key, result.p)] = entry.to_json()
        self._write()
        return True

    def _write(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps({"tool_version": TOOL_VERSION, "entries": self._entries}, sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=".cache-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(payload)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def __len__(self) -> int:
        return len(self._entries)
