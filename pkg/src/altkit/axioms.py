"""Randomized axiom checkers for intensity-comparison oracles.

Each checker draws seeded samples, evaluates one candidate instance of an
axiom per sample, and reports capped witness lists plus a total violation
count.  Sub-seeds are derived per sample index, so a report regenerated
from its stored seed is bit-identical regardless of worker count.

The continuity check is a necessary-condition proxy (strict outcomes must
survive small coordinate perturbations); its reports carry ``proxy=True``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .domain import Segment
from .errors import DomainError
from .oracle import AltOracle, IntensityOrder, Preference
from .sampling import Sampler, box_sampler, run_indexed, subrng
from .solvers import band_bisect

GREATER, EQUAL, LESS = IntensityOrder.GREATER, IntensityOrder.EQUAL, IntensityOrder.LESS

WITNESS_CAP = 10


@dataclass
class Witness:
    """A violating instance: the points involved and the oracle's answers."""

    points: dict[str, list[float]]
    outputs: dict[str, str]
    note: str = ""

    def to_dict(self) -> dict:
        return {"points": self.points, "outputs": self.outputs, "note": self.note}

    @classmethod
    def from_dict(cls, d: dict) -> "Witness":
        return cls(d["points"], d["outputs"], d.get("note", ""))


@dataclass
class AxiomReport:
    axiom: str
    trials: int
    seed: int
    verdict: str                       # "pass" | "fail"
    violations: list[Witness]
    violation_count: int
    proxy: bool = False
    skipped: int = 0
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "trials": self.trials,
            "seed": self.seed,
            "verdict": self.verdict,
            "violations": [w.to_dict() for w in self.violations],
            "violation_count": self.violation_count,
            "proxy": self.proxy,
            "skipped": self.skipped,
            "extras": self.extras,
        }

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("sort_keys", True)
        kwargs.setdefault("indent", 2)
        return json.dumps(self.to_dict(), **kwargs)


def _pt(p: np.ndarray) -> list[float]:
    return [float(v) for v in p]


def _validate_trials(trials: int) -> None:
    if trials < 1:
        raise ValueError("trials must be >= 1")


def _collect(axiom: str, trials: int, seed: int, results: list,
             proxy: bool = False, witness_cap: int = WITNESS_CAP,
             extras: dict | None = None) -> AxiomReport:
    """Fold per-trial results (None | 'skip' | Witness) into a report."""
    violations: list[Witness] = []
    count = 0
    skipped = 0
    for r in results:
        if r is None:
            continue
        if r == "skip":
            skipped += 1
            continue
        count += 1
        if len(violations) < witness_cap:
            violations.append(r)
    return AxiomReport(axiom, trials, seed, "fail" if count else "pass",
                       violations, count, proxy, skipped, extras or {})


def _checked_sample(oracle: AltOracle, sampler: Sampler, rng) -> np.ndarray:
    p = sampler(rng)
    if getattr(sampler, "box", None) is oracle.domain:
        return p  # drawn from the oracle's own box; membership holds by construction
    return oracle.domain.require(p, "sampled point")


def check_consistency(oracle: AltOracle, sampler: Sampler | None = None,
                      trials: int = 1000, seed: int = 0, workers: int = 1,
                      witness_cap: int = WITNESS_CAP) -> AxiomReport:
    """Shifting both sides by a common reference point z must preserve the
    derived order: x weakly preferred to y iff [x,z] >= [y,z].  Applied to
    the pair in both orders this is an exact sign match between the
    preference trichotomy and the shifted comparison.
    """
    _validate_trials(trials)
    sampler = sampler or box_sampler(oracle.domain)

    def trial(i: int):
        rng = subrng(seed, i)
        x = _checked_sample(oracle, sampler, rng)
        y = _checked_sample(oracle, sampler, rng)
        z = _checked_sample(oracle, sampler, rng)
        p = oracle.compare(x, y, y, y)
        c = oracle.compare(x, z, y, z)
        if p.sign != c.sign:
            return Witness({"x": _pt(x), "y": _pt(y), "z": _pt(z)},
                           {"preference": p.value, "shifted": c.value})
        return None

    return _collect("consistency", trials, seed,
                    run_indexed(trial, trials, workers), witness_cap=witness_cap)


def check_second_consistency(oracle: AltOracle, sampler: Sampler | None = None,
                             trials: int = 1000, seed: int = 0, workers: int = 1,
                             witness_cap: int = WITNESS_CAP) -> AxiomReport:
    """Mirror form of consistency on the second slot: x weakly preferred
    to y iff [z,y] >= [z,x]."""
    _validate_trials(trials)
    sampler = sampler or box_sampler(oracle.domain)

    def trial(i: int):
        rng = subrng(seed, i)
        x = _checked_sample(oracle, sampler, rng)
        y = _checked_sample(oracle, sampler, rng)
        z = _checked_sample(oracle, sampler, rng)
        p = oracle.compare(x, y, y, y)
        c = oracle.compare(z, y, z, x)
        if p.sign != c.sign:
            return Witness({"x": _pt(x), "y": _pt(y), "z": _pt(z)},
                           {"preference": p.value, "mirrored": c.value})
        return None

    return _collect("second-consistency", trials, seed,
                    run_indexed(trial, trials, workers), witness_cap=witness_cap)


def _scan_for_equal(side: Callable[[float], IntensityOrder],
                    s_first: IntensityOrder, s_last: IntensityOrder,
                    tol: float, subintervals: int = 16) -> float | None:
    """Parameter where a possibly non-monotone trichotomy answers EQUAL.

    Evaluates ``side`` on a uniform grid, then bisects the first adjacent
    pair whose answers straddle EQUAL (in either orientation).  Returns
    None when no straddle exists, i.e. the target value is out of reach.
    """
    ts = [j / subintervals for j in range(subintervals + 1)]
    states = [s_first] + [side(t) for t in ts[1:-1]] + [s_last]
    for t, st in zip(ts, states):
        if st is EQUAL:
            return t
    for j in range(subintervals):
        a, b = states[j], states[j + 1]
        if a is LESS and b is GREATER:
            return band_bisect(side, ts[j], ts[j + 1], tol,
                               lo_state=a, hi_state=b, refine=False)
        if a is GREATER and b is LESS:
            return band_bisect(lambda t: side(t).flipped(), ts[j], ts[j + 1],
                               tol, lo_state=LESS, hi_state=GREATER,
                               refine=False)
    return None


def check_crossover(oracle: AltOracle, sampler: Sampler | None = None,
                    trials: int = 1000, seed: int = 0, workers: int = 1,
                    witness_cap: int = WITNESS_CAP, tol_t: float = 1e-10) -> AxiomReport:
    """Equally strong improvements stay equally strong when the inner
    points are exchanged: [x,y] = [z,w] implies [x,z] = [y,w].

    Random quadruples almost never satisfy the Equal premise, so each
    trial manufactures one: after sampling (x, y, z), the fourth point w
    is solved for on the domain diagonal until [z,w] matches [x,y].  For
    systems that are not monotone along the diagonal the solve falls back
    to a coarse bracketing scan before bisecting.  Samples whose target
    cannot be bracketed on the diagonal are counted as skipped, not
    failed.  Each trial also asserts the degenerate consequence
    [x,x] = [y,y].
    """
    _validate_trials(trials)
    sampler = sampler or box_sampler(oracle.domain)
    diag = oracle.domain.diagonal()
    # Probe once whether preference is monotone along the diagonal; if it
    # is, a failed endpoint bracket means the target is genuinely out of
    # range and the per-trial fallback scan can be skipped.
    corners = [diag.at(k / 8) for k in range(9)]
    steps = [oracle.compare(corners[k + 1], corners[k], corners[k], corners[k]).sign
             for k in range(8)]
    diag_monotone = all(s >= 0 for s in steps) or all(s <= 0 for s in steps)

    def trial(i: int):
        rng = subrng(seed, i)
        x = _checked_sample(oracle, sampler, rng)
        y = _checked_sample(oracle, sampler, rng)
        z = _checked_sample(oracle, sampler, rng)

        # w runs down the diagonal so that [z,w] rises with s when the
        # system is increasing along the diagonal.
        def side(s: float) -> IntensityOrder:
            return oracle.compare(z, diag.at(1.0 - s), x, y)

        s0, s1 = side(0.0), side(1.0)
        if s0 is not GREATER and s1 is not LESS:
            s = band_bisect(side, 0.0, 1.0, tol_t,
                            lo_state=s0, hi_state=s1, refine=False)
        elif s0 is not LESS and s1 is not GREATER:
            s = band_bisect(lambda t: side(t).flipped(), 0.0, 1.0, tol_t,
                            lo_state=s0.flipped(), hi_state=s1.flipped(),
                            refine=False)
        elif diag_monotone:
            s = None
        else:
            s = _scan_for_equal(side, s0, s1, tol_t)

        manufactured = False
        if s is not None:
            w = diag.at(1.0 - s)
            premise = oracle.compare(z, w, x, y)
            if premise is EQUAL:
                manufactured = True
                swapped = oracle.compare(x, z, y, w)
                if swapped is not EQUAL:
                    return Witness({"x": _pt(x), "y": _pt(y), "z": _pt(z), "w": _pt(w)},
                                   {"premise": premise.value, "swapped": swapped.value},
                                   note="rebracket")
        null = oracle.compare(x, x, y, y)
        if null is not EQUAL:
            return Witness({"x": _pt(x), "y": _pt(y)},
                           {"null_brackets": null.value}, note="null-brackets")
        return None if manufactured else "skip"

    results = run_indexed(trial, trials, workers)
    manufactured = sum(1 for r in results
                       if r is None or (isinstance(r, Witness) and r.note == "rebracket"))
    return _collect("crossover", trials, seed, results, witness_cap=witness_cap,
                    extras={"manufactured": manufactured})


def check_continuity_proxy(oracle: AltOracle, sampler: Sampler | None = None,
                           trials: int = 1000, seed: int = 0, delta: float = 1e-8,
                           probes: int = 8, workers: int = 1,
                           witness_cap: int = WITNESS_CAP) -> AxiomReport:
    """Necessary-condition proxy for closedness of the relation: a strictly
    GREATER outcome must not flip to LESS under coordinate perturbations of
    relative size ``delta``.  Perturbed points are clipped to the box.

    ``delta`` must be positive and small relative to the domain; it
    defaults to just above the equality dead band so that continuous
    systems keep comfortable margins while jump discontinuities still flip.
    """
    _validate_trials(trials)
    if not delta > 0:
        raise ValueError("delta must be positive")
    if delta > 0.1:
        raise ValueError("delta must be small relative to the domain (<= 0.1)")
    if probes < 1:
        raise ValueError("probes must be >= 1")
    sampler = sampler or box_sampler(oracle.domain)
    box = oracle.domain
    radius = delta * box.extent

    def trial(i: int):
        rng = subrng(seed, i)
        pts = [_checked_sample(oracle, sampler, rng) for _ in range(4)]
        base = oracle.compare(*pts)
        if base is not GREATER:
            return "skip"
        shifts = rng.uniform(-1.0, 1.0, (probes, 4, box.dim)) * radius
        batch = np.clip(np.asarray(pts) + shifts, box.lower, box.upper)
        for k in range(probes):
            moved = batch[k]
            flipped = oracle.compare(moved[0], moved[1], moved[2], moved[3])
            if flipped is LESS:
                names = ("x", "y", "z", "w")
                points = {n: _pt(p) for n, p in zip(names, pts)}
                points.update({n + "_moved": _pt(p) for n, p in zip(names, moved)})
                return Witness(points, {"base": base.value, "perturbed": flipped.value})
        return None

    return _collect("continuity-proxy", trials, seed,
                    run_indexed(trial, trials, workers), proxy=True,
                    witness_cap=witness_cap, extras={"delta": delta, "probes": probes})


def check_monotonicity(oracle: AltOracle, sampler: Sampler | None = None,
                       trials: int = 1000, seed: int = 0, workers: int = 1,
                       witness_cap: int = WITNESS_CAP) -> AxiomReport:
    """Coordinatewise strict dominance must imply strict preference."""
    _validate_trials(trials)
    sampler = sampler or box_sampler(oracle.domain)
    box = oracle.domain

    def trial(i: int):
        rng = subrng(seed, i)
        y = _checked_sample(oracle, sampler, rng)
        frac = 1e-6 + rng.random(box.dim) * (1.0 - 2e-6)
        x = y + frac * (box.upper - y)
        if not np.all(x > y):
            return "skip"
        p = oracle.preference(x, y)
        if p is not Preference.PREFER:
            return Witness({"x": _pt(x), "y": _pt(y)}, {"preference": p.value})
        return None

    return _collect("monotonicity", trials, seed,
                    run_indexed(trial, trials, workers), witness_cap=witness_cap)


ALL_AXIOMS = ("consistency", "crossover", "second-consistency",
              "continuity-proxy", "monotonicity")

_CHECKERS: dict[str, Callable] = {
    "consistency": check_consistency,
    "crossover": check_crossover,
    "second-consistency": check_second_consistency,
    "continuity-proxy": check_continuity_proxy,
    "monotonicity": check_monotonicity,
}


def run_axiom_suite(oracle: AltOracle, axioms=ALL_AXIOMS, trials: int = 1000,
                    seed: int = 0, workers: int = 1, **kwargs) -> dict[str, AxiomReport]:
    """Run several checkers with a shared master seed."""
    reports = {}
    for name in axioms:
        checker = _CHECKERS[name]
        reports[name] = checker(oracle, trials=trials, seed=seed, workers=workers,
                                **{k: v for k, v in kwargs.items()
                                   if k in checker.__code__.co_varnames})
    return reports


def replay_witness(oracle: AltOracle, axiom: str, witness: Witness) -> bool:
    """Re-evaluate a stored witness; True iff it still violates the axiom."""
    pts = {k: np.asarray(v, dtype=float) for k, v in witness.points.items()}
    if axiom == "consistency":
        p = oracle.compare(pts["x"], pts["y"], pts["y"], pts["y"])
        c = oracle.compare(pts["x"], pts["z"], pts["y"], pts["z"])
        return p.sign != c.sign
    if axiom == "second-consistency":
        p = oracle.compare(pts["x"], pts["y"], pts["y"], pts["y"])
        c = oracle.compare(pts["z"], pts["y"], pts["z"], pts["x"])
        return p.sign != c.sign
    if axiom == "crossover":
        if witness.note == "null-brackets":
            return oracle.compare(pts["x"], pts["x"], pts["y"], pts["y"]) is not EQUAL
        premise = oracle.compare(pts["z"], pts["w"], pts["x"], pts["y"])
        swapped = oracle.compare(pts["x"], pts["z"], pts["y"], pts["w"])
        return premise is EQUAL and swapped is not EQUAL
    if axiom == "continuity-proxy":
        base = oracle.compare(pts["x"], pts["y"], pts["z"], pts["w"])
        moved = oracle.compare(pts["x_moved"], pts["y_moved"], pts["z_moved"], pts["w_moved"])
        return base is GREATER and moved is LESS
    if axiom == "monotonicity":
        return oracle.preference(pts["x"], pts["y"]) is not Preference.PREFER
    raise ValueError(f"no replay rule for axiom {axiom!r}")
