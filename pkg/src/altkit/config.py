"""Run configuration shared by all CLI commands.

A config is one JSON document; command-line flags override individual
fields.  The resolved config is echoed into every emitted report so a
run can be reproduced from any of its artifacts.
"""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .axioms import ALL_AXIOMS
from .domain import BoxDomain
from .errors import ConfigError


@dataclass
class RunConfig:
    oracle: str = ""
    domain: dict | None = None          # {"lower": [...], "upper": [...]}
    seed: int = 0
    trials: int = 1000
    depth: int = 10
    eps_eq: float | None = None
    tol_t: float = 1e-10
    h: float = 1e-3
    threshold: float = 1e-3
    delta: float = 1e-8                 # continuity-proxy perturbation fraction
    probes: int = 8
    b: float | None = None              # diagonal scale for smoothness
    workers: int | None = None          # None -> one per CPU
    outdir: str = "altkit-reports"
    axioms: list[str] | None = None
    strict: bool = False
    grid: int = 11
    anchors: list[float] = field(default_factory=lambda: [0.25, 0.75])
    second_anchors: list[float] | None = None
    pair: list[int] = field(default_factory=lambda: [0, 1])
    debreu_trials: int = 50

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls)]

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as bad:
            raise ConfigError(f"config file {path} is not valid JSON: {bad}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")
        unknown = set(doc) - set(cls.field_names())
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)

    def merge_overrides(self, overrides: dict) -> "RunConfig":
        """New config with every non-None override applied."""
        known = set(self.field_names())
        clean = {k: v for k, v in overrides.items() if k in known and v is not None}
        return dataclasses.replace(self, **clean)

    @property
    def resolved_workers(self) -> int:
        if self.workers is not None:
            return self.workers
        return os.cpu_count() or 1

    def box_override(self) -> BoxDomain | None:
        if self.domain is None:
            return None
        try:
            return BoxDomain(self.domain["lower"], self.domain["upper"])
        except (KeyError, TypeError) as bad:
            raise ConfigError(f"domain override needs 'lower' and 'upper' lists: {bad}") from None

    def validate(self) -> None:
        if not self.oracle:
            raise ConfigError("no oracle selected (use --oracle or the config file)")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.debreu_trials < 1:
            raise ConfigError("debreu_trials must be >= 1")
        if self.depth < 0:
            raise ConfigError("depth must be >= 0")
        for name in ("tol_t", "h", "threshold", "delta"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be > 0")
        if self.eps_eq is not None and self.eps_eq <= 0:
            raise ConfigError("eps_eq must be > 0 when given")
        if self.probes < 1:
            raise ConfigError("probes must be >= 1")
        if self.grid < 2:
            raise ConfigError("grid must be >= 2")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.b is not None and self.b <= 0:
            raise ConfigError("b must be > 0")
        for label, pair in (("anchors", self.anchors), ("second_anchors", self.second_anchors)):
            if pair is None:
                continue
            if len(pair) != 2 or not 0.0 <= pair[0] < pair[1] <= 1.0:
                raise ConfigError(f"{label} must be two diagonal parameters with 0 <= lo < hi <= 1")
        if len(self.pair) != 2 or any(not isinstance(i, int) or i < 0 for i in self.pair):
            raise ConfigError("pair must be two non-negative coordinate indices")
        if self.axioms is not None:
            unknown = set(self.axioms) - set(ALL_AXIOMS)
            if unknown:
                raise ConfigError(f"unknown axioms {sorted(unknown)}; "
                                  f"known: {', '.join(ALL_AXIOMS)}")
        self.box_override()  # raises on malformed domain

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)
