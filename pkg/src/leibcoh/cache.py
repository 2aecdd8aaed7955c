"""On-disk result cache keyed by a content hash.

The key hashes the canonical JSON of the inputs together with the operation
name, the rank strategy and the package version, so exact and modular runs
never share an entry.  Entries are written to a temporary file and renamed
into place; an entry that fails to parse or whose checksum does not match is
deleted and treated as a miss.
"""

from __future__ import annotations

import hashlib
import json
import os
from typing import Any, Callable

from . import __version__

ENV_VAR = "LEIBCOH_CACHE_DIR"


def canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cache_key(inputs: Any, operation: str, strategy: str) -> str:
    blob = canonical({"inputs": inputs, "op": operation, "strategy": strategy, "version": __version__})
    return hashlib.sha256(blob.encode()).hexdigest()


class ResultCache:
    def __init__(self, directory: str | None = None):
        self.directory = directory if directory is not None else os.environ.get(ENV_VAR)
        if self.directory:
            os.makedirs(self.directory, exist_ok=True)

    @property
    def enabled(self) -> bool:
        return bool(self.directory)

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, f"{key}.json")

    def get(self, key: str) -> Any | None:
        if not self.enabled:
            return None
        path = self._path(key)
        try:
            with open(path, encoding="utf-8") as fh:
                entry = json.load(fh)
            payload = entry["payload"]
            ok = entry.get("key") == key and entry.get("sha256") == hashlib.sha256(canonical(payload).encode()).hexdigest()
        except FileNotFoundError:
            return None
        except (OSError, ValueError, KeyError, TypeError):
            ok = False
            payload = None
        if not ok:
            try:
                os.remove(path)
            except OSError:
                pass
            return None
        return payload

    def put(self, key: str, payload: Any) -> None:
        if not self.enabled:
            return
        entry = {"key": key, "payload": payload, "sha256": hashlib.sha256(canonical(payload).encode()).hexdigest()}
        path = self._path(key)
        tmp = f"{path}.tmp{os.getpid()}"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(entry, fh, sort_keys=True)
        os.replace(tmp, path)

    def get_or_compute(self, inputs: Any, operation: str, strategy: str, compute: Callable[[], Any]) -> tuple[Any, bool]:
        """``(payload, hit)``; ``payload`` must be JSON-serializable."""
        key = cache_key(inputs, operation, strategy)
        hit = self.get(key)
        if hit is not None:
            return hit, True
        payload = json.loads(canonical(compute()))
        self.put(key, payload)
        return payload, False
