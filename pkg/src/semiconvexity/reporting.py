"""Deterministic check reports and their JSON encoding."""

import json
from dataclasses import dataclass, field


def sanitize(obj):
    """Convert numpy scalars/arrays to plain Python so reports serialize cleanly."""
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return sanitize(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, float):
        if obj != obj:  # nan
            return "nan"
        if obj == float("inf"):
            return "inf"
        if obj == float("-inf"):
            return "-inf"
    return obj


@dataclass
class MarginReport:
    """Outcome of one sampled inequality check.

    ``min_margin >= -tol * scale`` is the pass criterion; ``witness`` holds the
    worst sample so near-misses and failures are auditable.  ``passed`` may be
    None when the check asserts nothing (e.g. no quantitative bound applies).
    """

    check: str
    n_samples: int
    min_margin: float
    witness: dict
    seed: int
    tol: float
    passed: bool | None
    config: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return sanitize(
            {
                "check": self.check,
                "n_samples": self.n_samples,
                "min_margin": self.min_margin,
                "witness": self.witness,
                "seed": self.seed,
                "tol": self.tol,
                "pass": self.passed,
                "config": self.config,
                "extra": self.extra,
            }
        )

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


@dataclass
class RefutationEntry:
    """One defeated candidate constant: a pair on the ray violating D*omega."""

    D: float
    t1: float
    t2: float
    gap: float
    bound: float

    def to_dict(self):
        return sanitize({"D": self.D, "t1": self.t1, "t2": self.t2, "gap": self.gap, "bound": self.bound})


@dataclass
class RefutationReport:
    """Escalation record: for each scheduled D, a violating pair or an 'undefeated' flag."""

    schedule: list
    entries: list
    undefeated: list
    largest_defeated: float | None
    t_ceiling: float
    verdict: str
    config: dict = field(default_factory=dict)

    def to_dict(self):
        return sanitize(
            {
                "schedule": list(self.schedule),
                "entries": [e.to_dict() for e in self.entries],
                "undefeated": list(self.undefeated),
                "largest_defeated": self.largest_defeated,
                "t_ceiling": self.t_ceiling,
                "verdict": self.verdict,
                "config": self.config,
            }
        )

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)
