from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass
class CheckRecord:
    """One verification check. ``statistic <= threshold`` is the usual pass rule."""

    name: str
    statistic: float
    threshold: float
    passed: bool
    n: int
    seed: int | None

    def to_json(self):
        d = asdict(self)
        d["pass"] = bool(d.pop("passed"))
        d["statistic"] = float(d["statistic"])
        d["threshold"] = float(d["threshold"])
        return d

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: statistic={self.statistic:.6g} threshold={self.threshold:.6g} n={self.n} seed={self.seed}"


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    def add(self, name, statistic, threshold, passed, n=0, seed=None):
        self.checks.append(CheckRecord(name, float(statistic), float(threshold), bool(passed), int(n), seed))

    def extend(self, other: "VerificationReport"):
        self.checks.extend(other.checks)
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_json(self):
        return {"checks": [c.to_json() for c in self.checks]}

    def write(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")
