"""Points, axis-aligned box domains, and straight segments.

Points are plain 1-D float ndarrays; :func:`as_point` normalizes and
validates them.  Boxes are products of intervals with a per-face openness
flag, so a strictly-positive truncation can be represented next to an
ordinary closed box.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def as_point(coords, dim: int | None = None) -> np.ndarray:
    """Return ``coords`` as a finite 1-D float array, validating shape."""
    if type(coords) is np.ndarray and coords.dtype == np.float64 and coords.ndim == 1:
        x = coords
    else:
        x = np.asarray(coords, dtype=float)
        if x.ndim == 0:
            x = x.reshape(1)
        if x.ndim != 1:
            raise ValueError(f"point must be one-dimensional, got shape {x.shape}")
    if dim is not None and x.size != dim:
        raise ValueError(f"point has dimension {x.size}, expected {dim}")
    for v in x:
        if not math.isfinite(v):
            raise ValueError(f"point has non-finite coordinates: {x!r}")
    return x


@dataclass(eq=False)
class BoxDomain:
    """Convex box ``prod_i <lower_i, upper_i>`` in R^n.

    ``lower_open[i]`` / ``upper_open[i]`` mark faces excluded from the box.
    All toolkit samplers and solvers work with the closure; openness only
    affects :meth:`contains`.
    """

    lower: np.ndarray
    upper: np.ndarray
    lower_open: np.ndarray | None = None
    upper_open: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.lower = as_point(self.lower)
        self.upper = as_point(self.upper, dim=self.lower.size)
        if np.any(self.upper <= self.lower):
            raise ValueError("box needs lower < upper on every axis")
        self.lower_open = self._faces(self.lower_open)
        self.upper_open = self._faces(self.upper_open)
        # Python-native mirrors for the membership and sampling hot paths.
        self._lo = tuple(float(v) for v in self.lower)
        self._hi = tuple(float(v) for v in self.upper)
        self._lo_open = tuple(bool(v) for v in self.lower_open)
        self._hi_open = tuple(bool(v) for v in self.upper_open)
        self._ext = tuple(hi - lo for lo, hi in zip(self._lo, self._hi))

    def _faces(self, flags) -> np.ndarray:
        if flags is None:
            flags = False
        return np.broadcast_to(np.asarray(flags, dtype=bool), (self.dim,)).copy()

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def extent(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.extent))

    def contains(self, x, margin: float = 0.0) -> bool:
        """Membership test; ``margin > 0`` shrinks the box on every face."""
        x = as_point(x, dim=self.dim)
        for j, v in enumerate(x):
            lo, hi = self._lo[j] + margin, self._hi[j] - margin
            if v < lo or (v == lo and self._lo_open[j]):
                return False
            if v > hi or (v == hi and self._hi_open[j]):
                return False
        return True

    def require(self, x, what: str = "point") -> np.ndarray:
        x = as_point(x, dim=self.dim)
        if not self.contains(x):
            raise DomainError(f"{what} {x.tolist()} is outside the domain "
                              f"[{self.lower.tolist()}, {self.upper.tolist()}]")
        return x

    def clip(self, x) -> np.ndarray:
        return np.clip(as_point(x, dim=self.dim), self.lower, self.upper)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        n = self.lower.size
        r = rng.random(n)
        out = np.empty(n)
        lo, ext = self._lo, self._ext
        for j in range(n):
            out[j] = lo[j] + r[j] * ext[j]
        return out

    def diagonal(self) -> "Segment":
        """Main diagonal, lower corner to upper corner."""
        return Segment(self.lower.copy(), self.upper.copy())

    def diagonal_scale_range(self) -> tuple[float, float]:
        """Range of scales c for which c*(1,...,1) stays inside the box."""
        c_lo = float(np.max(self.lower))
        c_hi = float(np.min(self.upper))
        if c_lo >= c_hi:
            raise DomainError("box does not contain a c*(1,...,1) ray segment")
        return c_lo, c_hi

    def shrunk(self, margin) -> "BoxDomain":
        """Closed box inset by ``margin`` (scalar or per-axis) on every face."""
        m = np.broadcast_to(np.asarray(margin, dtype=float), (self.dim,))
        return BoxDomain(self.lower + m, self.upper - m)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower.tolist(),
            "upper": self.upper.tolist(),
            "lower_open": self.lower_open.tolist(),
            "upper_open": self.upper_open.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BoxDomain":
        return cls(d["lower"], d["upper"], d.get("lower_open"), d.get("upper_open"))


@dataclass(eq=False)
class Segment:
    """Straight segment p -> q, parameterized by t in [0, 1]."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self) -> None:
        self.p = as_point(self.p)
        self.q = as_point(self.q, dim=self.p.size)
        self._dir = self.q - self.p
        if not np.any(self._dir):
            raise ValueError("segment endpoints coincide")
        # Python-native mirrors: at() sits inside every bisection loop.
        self._p_list = self.p.tolist()
        self._dir_list = self._dir.tolist()

    @property
    def dim(self) -> int:
        return self.p.size

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self._dir))

    def at(self, t: float) -> np.ndarray:
        p, d = self._p_list, self._dir_list
        out = np.empty(len(p))
        for j, (pj, dj) in enumerate(zip(p, d)):
            out[j] = pj + t * dj
        return out

    def param_of(self, x, atol: float | None = None) -> float:
        """Parameter of a point that must lie on the segment (orthogonal
        projection residual beyond ``atol`` raises ``DomainError``)."""
        x = as_point(x, dim=self.dim)
        d2 = float(self._dir @ self._dir)
        t = float((x - self.p) @ self._dir) / d2
        if atol is None:
            atol = 1e-9 * (1.0 + float(np.linalg.norm(x)))
        residual = float(np.linalg.norm(x - self.at(t)))
        if residual > atol:
            raise DomainError(f"point {x.tolist()} is off the segment (residual {residual:.3e})")
        if t < -atol or t > 1.0 + atol:
            raise DomainError(f"point {x.tolist()} projects outside the segment (t={t:.6f})")
        return min(max(t, 0.0), 1.0)

    def subsegment(self, t0: float, t1: float) -> "Segment":
        return Segment(self.at(t0), self.at(t1))
