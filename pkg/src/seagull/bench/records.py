"""Run records and the append-only JSON-lines archive."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path

from seagull.optim import TrainReport
from seagull.symmetry import SymmetryReport

log = logging.getLogger(__name__)

RECORDS_FILE = "records.jsonl"


@dataclass
class RunRecord:
    key: str
    cell_index: int
    run_index: int
    target: str
    transform: str
    activation: str
    seagull_first: bool
    train_n: int
    seed: int
    status: str
    layer_activations: list[str]
    init_digest: str
    data_digest: str
    train_report: TrainReport | None = None
    symmetry: SymmetryReport | None = None
    error: str | None = None
    noise: dict = field(default_factory=dict)
    init_scheme: str = "glorot-uniform"
    versions: dict = field(default_factory=dict)
    timestamp: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def metric(self, which: str = "best") -> float | None:
        if not self.ok or self.train_report is None:
            return None
        return self.train_report.best_test_mae if which == "best" else self.train_report.final_test_mae

    def to_dict(self) -> dict:
        d = asdict(self)
        d["train_report"] = self.train_report.to_dict() if self.train_report else None
        d["symmetry"] = self.symmetry.to_dict() if self.symmetry else None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> RunRecord:
        d = dict(d)
        if d.get("train_report") is not None:
            d["train_report"] = TrainReport.from_dict(d["train_report"])
        if d.get("symmetry") is not None:
            d["symmetry"] = SymmetryReport.from_dict(d["symmetry"])
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def append_record(path, record: RunRecord) -> None:
    with open(path, "a") as fh:
        fh.write(record.to_json() + "\n")
        fh.flush()


def write_records(path, records) -> None:
    with open(path, "w") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")


def load_records(path) -> tuple[list[RunRecord], list[str]]:
    """Read every parseable line; corrupt or truncated lines become warnings."""
    path = Path(path)
    if not path.exists():
        return [], []
    records, warnings = [], []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        if not line.strip():
            continue
        try:
            records.append(RunRecord.from_dict(json.loads(line)))
        except (json.JSONDecodeError, TypeError, KeyError, ValueError) as exc:
            msg = f"{path}:{lineno}: skipped unreadable record ({exc.__class__.__name__})"
            log.warning(msg)
            warnings.append(msg)
    return records, warnings
