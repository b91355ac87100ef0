"""Content-addressed cache for expensive per-place computations.

A single append-friendly JSONL file; each entry carries its own payload
checksum, so truncated or corrupted lines are detected and treated as
misses.  Keys are digests of (tool version, curve canonical form, place).
"""

import hashlib
import json
import os


def entry_key(*parts):
    h = hashlib.sha256("|".join(str(p) for p in parts).encode()).hexdigest()
    return h


def _payload_sum(payload_json):
    return hashlib.sha256(payload_json.encode()).hexdigest()


class ResultCache:
    def __init__(self, path):
        self.path = path
        self._mem = {}
        self._load()

    def _load(self):
        if not self.path or not os.path.exists(self.path):
            return
        try:
            with open(self.path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        obj = json.loads(line)
                        key = obj["k"]
                        payload_json = json.dumps(
                            obj["v"], sort_keys=True, separators=(",", ":")
                        )
                        if _payload_sum(payload_json) != obj["c"]:
                            continue  # corrupted entry: miss
                        self._mem[key] = obj["v"]
                    except (ValueError, KeyError, TypeError):
                        continue  # corrupted line: miss
        except OSError:
            pass

    def get(self, key):
        return self._mem.get(key)

    def put(self, key, value):
        if key in self._mem and self._mem[key] == value:
            return
        self._mem[key] = value
        if not self.path:
            return
        payload_json = json.dumps(value, sort_keys=True, separators=(",", ":"))
        rec = json.dumps(
            {"k": key, "c": _payload_sum(payload_json), "v": value},
            sort_keys=True,
            separators=(",", ":"),
        )
        try:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(rec + "\n")
        except OSError:
            pass


class NullCache:
    def get(self, key):
        return None

    def put(self, key, value):
        pass
