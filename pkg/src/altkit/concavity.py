"""Concavity diagnosis from intensity comparisons.

The generalized first law of diminishing marginal utility says the gain
from x to the midpoint z=(x+y)/2 is at least the gain from z on to y;
for represented systems this holds iff the utility is concave (strictly,
when strict for distinct pairs).  The oracle-side checker samples pairs
and applies the law directly; a value-side checker certifies midpoint
concavity of any real-valued function (e.g. a reconstruction), with an
optional dyadic sweep over chord parameters m/2**l.  The round-trip
driver ties the two to a fixture's ground-truth tag.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .axioms import WITNESS_CAP, Witness, _pt
from .domain import BoxDomain, Segment
from .errors import ConfigError
from .fixtures import (CONCAVE, NON_CONCAVE, STRICTLY_CONCAVE, UtilitySpec,
                       make_difference_oracle)
from .ladder import reconstruct_utility
from .oracle import AltOracle, IntensityOrder
from .sampling import Sampler, box_sampler, run_indexed, subrng

GREATER, EQUAL, LESS = IntensityOrder.GREATER, IntensityOrder.EQUAL, IntensityOrder.LESS

HOLDS = "holds"
HOLDS_STRICTLY = "holds-strictly"
FAILS = "fails"

STRICTNESS_FLOOR_FRACTION = 1e-6  # of the box diameter


@dataclass
class ConcavityVerdict:
    """Outcome of a midpoint-law scan: holds / holds-strictly / fails."""

    law: str
    verdict: str
    trials: int
    seed: int
    violations: list[Witness]
    violation_count: int
    strict_count: int
    equal_count: int
    below_floor: int
    floor: float
    dyadic_depth: int | None = None
    extras: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict != FAILS

    @property
    def strict(self) -> bool:
        return self.verdict == HOLDS_STRICTLY

    def to_dict(self) -> dict:
        return {
            "law": self.law,
            "verdict": self.verdict,
            "trials": self.trials,
            "seed": self.seed,
            "violations": [w.to_dict() for w in self.violations],
            "violation_count": self.violation_count,
            "strict_count": self.strict_count,
            "equal_count": self.equal_count,
            "below_floor": self.below_floor,
            "floor": self.floor,
            "dyadic_depth": self.dyadic_depth,
            "extras": self.extras,
        }

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("sort_keys", True)
        kwargs.setdefault("indent", 2)
        return json.dumps(self.to_dict(), **kwargs)


def _fold_verdict(law: str, trials: int, seed: int, rows: list, floor: float,
                  witness_cap: int, dyadic_depth: int | None = None,
                  extras: dict | None = None) -> ConcavityVerdict:
    """Fold per-trial rows (kind, witness-or-None) into a verdict.

    Kinds: 'violation', 'strict', 'equal', 'below-floor'.
    """
    violations: list[Witness] = []
    counts = {"violation": 0, "strict": 0, "equal": 0, "below-floor": 0}
    for kind, witness in rows:
        counts[kind] += 1
        if kind == "violation" and len(violations) < witness_cap:
            violations.append(witness)
    if counts["violation"]:
        verdict = FAILS
    elif counts["strict"] and not counts["equal"]:
        verdict = HOLDS_STRICTLY
    else:
        verdict = HOLDS
    return ConcavityVerdict(law, verdict, trials, seed, violations,
                            counts["violation"], counts["strict"], counts["equal"],
                            counts["below-floor"], floor, dyadic_depth, extras or {})


def check_gossen_law(oracle: AltOracle, sampler: Sampler | None = None,
                     trials: int = 1000, seed: int = 0, workers: int = 1,
                     floor: float | None = None, parameterization: str = "pair",
                     witness_cap: int = WITNESS_CAP) -> ConcavityVerdict:
    """Sample pairs and assert the midpoint gain law [z,x] >= [y,z], z=(x+y)/2.

    ``parameterization`` chooses how colinear triples are drawn: "pair"
    samples both endpoints uniformly, "step" samples a base point plus a
    feasible step v and tests [x+v,x] >= [x+2v,x+v] (the same comparison
    on the triple x, x+v, x+2v).  Pairs closer than ``floor`` (default
    1e-6 of the box diameter) never count toward strictness.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if parameterization not in ("pair", "step"):
        raise ConfigError(f"unknown parameterization {parameterization!r}")
    box = oracle.domain
    sampler = sampler or box_sampler(box)
    if floor is None:
        floor = STRICTNESS_FLOOR_FRACTION * box.diameter

    def draw_pair(rng) -> tuple[np.ndarray, np.ndarray]:
        if parameterization == "pair":
            return (box.require(sampler(rng), "sampled point"),
                    box.require(sampler(rng), "sampled point"))
        x = box.require(sampler(rng), "sampled point")
        d = rng.standard_normal(box.dim)
        d /= np.linalg.norm(d)
        # Largest m with x + m*d still inside the box, split into two steps.
        with np.errstate(divide="ignore", invalid="ignore"):
            bounds = np.where(d > 0, (box.upper - x) / d,
                              np.where(d < 0, (box.lower - x) / d, np.inf))
        m_max = float(np.min(bounds))
        v = (0.5 * m_max * rng.random()) * d
        return x, x + 2.0 * v

    def trial(i: int):
        rng = subrng(seed, i)
        x, y = draw_pair(rng)
        z = 0.5 * (x + y)
        out = oracle.compare(z, x, y, z)
        distinct = float(np.linalg.norm(x - y)) >= floor
        if out is LESS:
            return ("violation", Witness({"x": _pt(x), "y": _pt(y), "z": _pt(z)},
                                         {"midpoint_law": out.value}))
        if not distinct:
            return ("below-floor", None)
        return ("strict" if out is GREATER else "equal", None)

    rows = run_indexed(trial, trials, workers)
    return _fold_verdict("gossen-first-law", trials, seed, rows, floor, witness_cap,
                         extras={"parameterization": parameterization,
                                 "oracle": oracle.name})


def _dyadic_params(depth: int) -> list[float]:
    """All fractions m/2**l for l<=depth with odd m, ascending (1/2 first level)."""
    ts: set[float] = set()
    for level in range(1, depth + 1):
        scale = 1 << level
        ts.update(m / scale for m in range(1, scale, 2))
    return sorted(ts)


def check_midpoint_concavity(u_fn, domain: BoxDomain, sampler: Sampler | None = None,
                             trials: int = 200, seed: int = 0, workers: int = 1,
                             tol: float = 0.0, dyadic_depth: int | None = None,
                             floor: float | None = None,
                             witness_cap: int = WITNESS_CAP) -> ConcavityVerdict:
    """Assert u((x+y)/2) >= (u(x)+u(y))/2 - tol on sampled pairs.

    With ``dyadic_depth`` set, all chord parameters m/2**l up to that
    level are checked against the chord (full-interval concavity on a
    dyadic grid); otherwise only the midpoint.  Strictness requires a
    margin beyond ``tol`` (floored at float-noise scale) on every pair
    farther apart than ``floor``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if tol < 0:
        raise ValueError("tol must be >= 0")
    sampler = sampler or box_sampler(domain)
    if floor is None:
        floor = STRICTNESS_FLOOR_FRACTION * domain.diameter
    params = _dyadic_params(dyadic_depth) if dyadic_depth else [0.5]

    def trial(i: int):
        rng = subrng(seed, i)
        x = domain.require(sampler(rng), "sampled point")
        y = domain.require(sampler(rng), "sampled point")
        ux, uy = u_fn(x), u_fn(y)
        distinct = float(np.linalg.norm(x - y)) >= floor
        worst = np.inf
        for t in params:
            p = x + t * (y - x)
            margin = u_fn(p) - ((1.0 - t) * ux + t * uy)
            tol_eff = max(tol, 1e-12 * (1.0 + abs(ux) + abs(uy)))
            if margin < -tol_eff:
                return ("violation", Witness(
                    {"x": _pt(x), "y": _pt(y), "point": _pt(p)},
                    {"chord_parameter": f"{t:.10g}", "margin": f"{margin:.6g}"}))
            worst = min(worst, margin - tol_eff)
        if not distinct:
            return ("below-floor", None)
        return ("strict" if worst > 0 else "equal", None)

    rows = run_indexed(trial, trials, workers)
    return _fold_verdict("midpoint-concavity", trials, seed, rows, floor, witness_cap,
                         dyadic_depth=dyadic_depth, extras={"tol": tol})


def concavity_roundtrip(spec: UtilitySpec, domain: BoxDomain | None = None,
                        trials: int = 2000, seed: int = 0, workers: int = 1,
                        depth: int = 8, segment: Segment | None = None,
                        floor: float | None = None) -> dict:
    """Tie the oracle-side law, the reconstruction, and the ground-truth tag.

    Builds a difference oracle for the fixture, runs the midpoint gain
    law on it, reconstructs a utility, and certifies midpoint concavity
    of the reconstruction (tolerance: twice the interpolation budget).
    Strictness agreement is judged from the oracle-side law only; the
    piecewise-linear reconstruction is flat within a rung, so it cannot
    witness strictness.  Non-monotone fixtures need a caller-supplied
    strictly-increasing ``segment``.
    """
    if spec.concavity not in (CONCAVE, STRICTLY_CONCAVE, NON_CONCAVE):
        raise ConfigError(f"fixture {spec.name!r} carries no usable concavity tag")
    oracle = make_difference_oracle(spec, domain)
    gossen = check_gossen_law(oracle, trials=trials, seed=seed, workers=workers, floor=floor)
    recon = reconstruct_utility(oracle, depth=depth, segment=segment)
    midpoint = check_midpoint_concavity(
        recon, oracle.domain, trials=max(1, trials // 10), seed=seed + 1,
        workers=workers, tol=2.0 * recon.interpolation_budget)

    tag_concave = spec.concavity in (CONCAVE, STRICTLY_CONCAVE)
    tag_strict = spec.concavity == STRICTLY_CONCAVE
    mismatches = []
    if gossen.holds != tag_concave:
        mismatches.append(f"gossen law verdict {gossen.verdict!r} vs tag {spec.concavity!r}")
    if midpoint.holds != tag_concave:
        mismatches.append(f"midpoint verdict {midpoint.verdict!r} vs tag {spec.concavity!r}")
    # One-sided strictness check: sampling can refute a claimed strictness
    # by exhibiting an above-floor equality, but finding no equality never
    # certifies non-strictness (flat directions can be arbitrarily thin),
    # so a strict verdict against a plain concave tag is not a mismatch.
    if tag_strict and gossen.holds and not gossen.strict:
        mismatches.append(f"strictness {gossen.verdict!r} vs tag {spec.concavity!r}")
    return {
        "fixture": spec.name,
        "tag": spec.concavity,
        "gossen": gossen.to_dict(),
        "midpoint": midpoint.to_dict(),
        "reconstruction_depth": depth,
        "agree": not mismatches,
        "mismatches": mismatches,
    }
