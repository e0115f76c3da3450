"""Differentiability diagnostics along the main diagonal and across it.

Line smoothness looks at the diagonal restriction: the intensity
midpoint f(a,b) of the scales b-a and b+a must approach b faster than a,
so the quotient (b - f(a,b))/a vanishes.  A geometric step schedule plus
Richardson extrapolation turns that limit into a verdict with an honest
error bar.  Debreu-style smoothness of indifference sets is proxied by
numerically differentiating the calibration map a(x) -- the diagonal
scale whose multiple of (1,...,1) is indifferent to x -- and flagging
step-halving drift or one-sided disagreement (kinks).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .axioms import WITNESS_CAP, AxiomReport, Witness, _collect, _pt
from .domain import Segment
from .errors import BracketError, ConfigError, ConstructionError, DomainError, RangeError
from .oracle import AltOracle
from .sampling import Sampler, box_sampler, run_indexed, subrng
from .solvers import DEFAULT_TOL_T, indifference_param, solve_midpoint

LINE_SMOOTH = "line-smooth"
NOT_LINE_SMOOTH = "not-line-smooth"
INCONCLUSIVE = "inconclusive"

DEFAULT_QUOTIENT_FLOOR = 1e-3
SOLVE_F_SCALE_TOL = 1e-8
SOLVE_F_RELATIVE_TOL = 1e-4


def diagonal_point(box, b: float) -> np.ndarray:
    """The point b*(1,...,1), validated against the box."""
    p = np.full(box.dim, float(b))
    return box.require(p, f"diagonal point {b}*e")


def solve_f(oracle: AltOracle, a: float, b: float, tol: float | None = None) -> float:
    """Diagonal scale f with [f*e, (b-a)*e] = [(b+a)*e, f*e].

    The solution is the intensity midpoint of the scales b-a and b+a;
    concavity pins it to [b-a, b+a] but only 0 < a < b and domain
    membership are required.  ``tol`` is in scale units and defaults to
    min(1e-8, a*1e-4) so the quotient (b-f)/a stays resolvable as a
    shrinks.
    """
    if not 0 < a < b:
        raise ValueError(f"need 0 < a < b, got a={a}, b={b}")
    box = oracle.domain
    lo = diagonal_point(box, b - a)
    hi = diagonal_point(box, b + a)
    if tol is None:
        tol = min(SOLVE_F_SCALE_TOL, a * SOLVE_F_RELATIVE_TOL)
    if tol <= 0:
        raise ValueError("tol must be > 0")
    y = solve_midpoint(oracle, lo, hi, tol_t=tol / (2.0 * a))
    return float(y[0])


@dataclass
class SmoothnessReport:
    """Quotient table along the step schedule plus the extrapolated limit."""

    b: float
    rows: list[tuple[float, float, float]]  # (a, f(a,b), (b-f)/a)
    estimate: float | None
    uncertainty: float | None
    floor: float
    verdict: str
    oracle: str = ""
    oracle_calls: int = 0
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "rows": [{"a": a, "f": f, "quotient": q} for a, f, q in self.rows],
            "estimate": self.estimate,
            "uncertainty": self.uncertainty,
            "floor": self.floor,
            "verdict": self.verdict,
            "oracle": self.oracle,
            "oracle_calls": self.oracle_calls,
            "extras": self.extras,
        }

    def to_json(self, **kwargs) -> str:
        kwargs.setdefault("sort_keys", True)
        kwargs.setdefault("indent", 2)
        return json.dumps(self.to_dict(), **kwargs)

    def csv_rows(self) -> list[list]:
        return [["a", "f", "quotient"]] + [[a, f, q] for a, f, q in self.rows]


def default_schedule(b: float, k_lo: int = 4, k_hi: int = 16) -> list[float]:
    return [b * 2.0 ** (-k) for k in range(k_lo, k_hi + 1)]


def line_smoothness_limit(oracle: AltOracle, b: float,
                          schedule: list[float] | None = None,
                          floor: float = DEFAULT_QUOTIENT_FLOOR,
                          tail: int = 4) -> SmoothnessReport:
    """Estimate lim_{a->0} (b - f(a,b))/a along a geometric schedule.

    Richardson-extrapolates the last ``tail`` quotients (each halving of
    a cancels the first-order term); the spread of the extrapolants is
    the reported uncertainty.  Not-line-smooth requires the estimate to
    clear both the floor and three times its uncertainty; line-smooth
    requires estimate and uncertainty both under the floor; anything
    else is inconclusive.
    """
    if schedule is None:
        schedule = default_schedule(b)
    schedule = [float(a) for a in schedule]
    if len(schedule) < 2:
        raise ConfigError("schedule needs at least two step sizes")
    if any(a <= 0 for a in schedule) or any(
            a2 >= a1 for a1, a2 in zip(schedule, schedule[1:])):
        raise ConfigError("schedule must be positive and strictly decreasing")
    if floor <= 0:
        raise ConfigError("floor must be > 0")

    rows: list[tuple[float, float, float]] = []
    extras: dict = {}
    for a in schedule:
        try:
            f = solve_f(oracle, a, b)
        except (BracketError, ConstructionError, DomainError) as stop:
            extras["truncated_at"] = a
            extras["truncation_reason"] = str(stop)
            break
        rows.append((a, f, (b - f) / a))

    if len(rows) < 2:
        return SmoothnessReport(b, rows, None, None, floor, INCONCLUSIVE,
                                oracle.name, oracle.calls, extras)
    qs = [q for _, _, q in rows[-tail:]]
    extrapolants = [2.0 * q2 - q1 for q1, q2 in zip(qs, qs[1:])]
    estimate = float(np.mean(extrapolants))
    uncertainty = float((max(extrapolants) - min(extrapolants)) / 2.0)
    if abs(estimate) > 3.0 * uncertainty and abs(estimate) > floor:
        verdict = NOT_LINE_SMOOTH
    elif abs(estimate) <= floor and uncertainty <= floor:
        verdict = LINE_SMOOTH
    else:
        verdict = INCONCLUSIVE
    return SmoothnessReport(b, rows, estimate, uncertainty, floor, verdict,
                            oracle.name, oracle.calls, extras)


def calibrate(oracle: AltOracle, x, tol_t: float = DEFAULT_TOL_T) -> float:
    """Diagonal scale a(x) with x indifferent to a(x)*(1,...,1).

    Unique for monotone systems.  RangeError when no diagonal multiple
    inside the box matches x.
    """
    box = oracle.domain
    x = box.require(x)
    c_lo, c_hi = box.diagonal_scale_range()
    seg = Segment(np.full(box.dim, c_lo), np.full(box.dim, c_hi))
    t, clamp = indifference_param(oracle, seg, x, tol_t)
    if clamp != 0:
        side = "below" if clamp < 0 else "above"
        raise RangeError(f"point ranks {side} every diagonal multiple in the box")
    return c_lo + t * (c_hi - c_lo)


def debreu_smoothness_proxy(oracle: AltOracle, sampler: Sampler | None = None,
                            trials: int = 50, seed: int = 0, workers: int = 1,
                            h_fraction: float = 1e-3, rel_tol: float = 1e-2,
                            one_sided_tol: float = 5e-2,
                            tol_t: float = DEFAULT_TOL_T,
                            witness_cap: int = WITNESS_CAP) -> AxiomReport:
    """Numeric stand-in for smooth indifference sets: differentiate a(x).

    At each sampled point and axis, the calibration derivative is
    estimated by central differences at steps h and h/2; a violation is
    flagged when halving the step moves the estimate by more than
    ``rel_tol`` (relative), or when the left and right one-sided h/2
    differences disagree by more than ``one_sided_tol`` (a kink).  A
    sampled proxy only: kinks on sets the sampler misses go undetected.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if h_fraction <= 0 or rel_tol <= 0 or one_sided_tol <= 0:
        raise ValueError("h_fraction, rel_tol, and one_sided_tol must be > 0")
    box = oracle.domain
    h_vec = h_fraction * box.extent
    if sampler is None:
        sampler = box_sampler(box.shrunk(2.0 * h_vec))

    def cal(p) -> float:
        return calibrate(oracle, p, tol_t)

    def trial(i: int):
        rng = subrng(seed, i)
        x = sampler(rng)
        if not box.contains(x, margin=0.0):
            return "skip"
        try:
            a0 = cal(x)
        except (RangeError, DomainError):
            return "skip"
        for axis in range(box.dim):
            h = float(h_vec[axis])
            e = np.zeros(box.dim)
            e[axis] = 1.0
            try:
                a_p, a_m = cal(x + h * e), cal(x - h * e)
                a_ph, a_mh = cal(x + 0.5 * h * e), cal(x - 0.5 * h * e)
            except (RangeError, DomainError):
                return "skip"
            d1 = (a_p - a_m) / (2.0 * h)
            d2 = (a_ph - a_mh) / h
            left = (a0 - a_mh) / (0.5 * h)
            right = (a_ph - a0) / (0.5 * h)
            outputs = {"axis": str(axis), "central_h": f"{d1:.6g}",
                       "central_h2": f"{d2:.6g}", "left": f"{left:.6g}",
                       "right": f"{right:.6g}"}
            if abs(d2 - d1) > rel_tol * max(1.0, abs(d2)):
                return Witness({"x": _pt(x)}, outputs, note="step-halving drift")
            if abs(left - right) > one_sided_tol * max(1.0, abs(d2)):
                return Witness({"x": _pt(x)}, outputs, note="one-sided kink")
        return None

    results = run_indexed(trial, trials, workers)
    return _collect("debreu-smoothness-proxy", trials, seed, results, proxy=True,
                    witness_cap=witness_cap,
                    extras={"h_fraction": h_fraction, "rel_tol": rel_tol,
                            "one_sided_tol": one_sided_tol})
