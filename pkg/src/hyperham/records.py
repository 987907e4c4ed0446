"""Seeded, replayable experiment records.

Records are persisted as append-only line-delimited JSON: diff-friendly,
crash-safe, and trivially mergeable across parallel runs.  A record's
manifest (instance hash, command, params, seed) is enough to re-execute
the run; replay must reproduce verdicts and certificates byte for byte.
Wall time is carried for reporting but excluded from replay comparison.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .hypergraph import Hypergraph


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def instance_hash(H: Hypergraph) -> str:
    return hashlib.sha256(canonical_json(H.to_json_obj()).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ExperimentRecord:
    spec_hash: str
    command: str
    seed: int
    params: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    wall_time: float = 0.0
    version: str = __version__

    def replay_key(self) -> str:
        """Canonical bytes of everything replay must reproduce."""
        return canonical_json({"verdicts": self.verdicts, "certificates": self.certificates})

    def to_json_obj(self) -> dict:
        return {
            "spec_hash": self.spec_hash, "command": self.command, "seed": self.seed,
            "params": self.params, "verdicts": self.verdicts,
            "certificates": self.certificates, "wall_time": self.wall_time,
            "version": self.version,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ExperimentRecord":
        return cls(
            spec_hash=obj["spec_hash"], command=obj["command"], seed=int(obj["seed"]),
            params=obj.get("params", {}), verdicts=obj.get("verdicts", {}),
            certificates=obj.get("certificates", {}),
            wall_time=float(obj.get("wall_time", 0.0)),
            version=obj.get("version", "unknown"),
        )


def append_record(path: str | Path, record: ExperimentRecord) -> None:
    line = canonical_json(record.to_json_obj())
    with open(path, "a") as fh:
        fh.write(line + "\n")


def load_records(path: str | Path) -> tuple[list[ExperimentRecord], int]:
    """All parseable records plus the count of corrupt lines skipped."""
    records: list[ExperimentRecord] = []
    corrupt = 0
    p = Path(path)
    if not p.exists():
        return records, corrupt
    for line in p.read_text().splitlines():
        if not line.strip():
            continue
        try:
            records.append(ExperimentRecord.from_json_obj(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            corrupt += 1
    return records, corrupt
