import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altkit.domain import BoxDomain, Segment
from altkit.errors import BracketError, OrderingError
from altkit.fixtures import oracle_by_name
from altkit.oracle import AltOracle, IntensityOrder, classify
from altkit.solvers import (band_bisect, indifference_param, solve_crossing,
                            solve_midpoint)

G, E, L = IntensityOrder.GREATER, IntensityOrder.EQUAL, IntensityOrder.LESS


def _banded_side(center: float, band: float):
    """Trichotomy of t - center with a dead band of half-width ``band``."""
    return lambda t: classify(t - center, band)


class TestBandBisect:
    def test_locates_band_center(self):
        # EQUAL band is [0.4, 0.6]; the solver must return its center, not
        # merely any point inside it.
        t = band_bisect(_banded_side(0.5, 0.1), 0.0, 1.0, 1e-9)
        assert t == pytest.approx(0.5, abs=1e-6)

    def test_asymmetric_window_still_centers(self):
        t = band_bisect(_banded_side(0.3, 0.05), 0.0, 1.0, 1e-9)
        assert t == pytest.approx(0.3, abs=1e-6)

    def test_narrow_band_without_equal_hit(self):
        # Band thinner than the tolerance: bisection converges on the sign
        # change without ever observing EQUAL.
        t = band_bisect(_banded_side(0.7, 1e-15), 0.0, 1.0, 1e-6)
        assert t == pytest.approx(0.7, abs=1e-5)

    def test_refine_false_returns_any_band_point(self):
        calls = []

        def side(t):
            calls.append(t)
            return classify(t - 0.5, 0.1)

        t_fast = band_bisect(side, 0.0, 1.0, 1e-9, refine=False)
        fast_calls = len(calls)
        assert 0.4 <= t_fast <= 0.6
        calls.clear()
        band_bisect(side, 0.0, 1.0, 1e-9, refine=True)
        assert fast_calls < len(calls)

    def test_endpoint_states_trusted(self):
        evaluated = []

        def side(t):
            evaluated.append(t)
            return classify(t - 0.5, 1e-12)

        band_bisect(side, 0.0, 1.0, 1e-6, lo_state=L, hi_state=G)
        assert 0.0 not in evaluated and 1.0 not in evaluated

    def test_rejects_bad_bracket(self):
        with pytest.raises(BracketError, match="straddle"):
            band_bisect(_banded_side(-1.0, 1e-12), 0.0, 1.0, 1e-6)  # all GREATER
        with pytest.raises(BracketError, match="straddle"):
            band_bisect(_banded_side(2.0, 1e-12), 0.0, 1.0, 1e-6)   # all LESS

    def test_rejects_bad_interval_and_tolerance(self):
        side = _banded_side(0.5, 0.1)
        with pytest.raises(ValueError, match="tolerance"):
            band_bisect(side, 0.0, 1.0, 0.0)
        with pytest.raises(ValueError, match="lo < hi"):
            band_bisect(side, 1.0, 0.0, 1e-6)

    def test_equal_endpoint_short_circuits(self):
        assert band_bisect(_banded_side(0.0, 0.05), 0.0, 1.0, 1e-9,
                           refine=False) == 0.0

    @settings(max_examples=40, deadline=None)
    @given(st.floats(min_value=0.05, max_value=0.95),
           st.floats(min_value=1e-9, max_value=0.04))
    def test_center_recovery_property(self, center, band):
        t = band_bisect(_banded_side(center, band), 0.0, 1.0, 1e-10)
        assert t == pytest.approx(center, abs=1e-7)


def _quadratic_oracle():
    """Difference oracle of u(t) = t^2 on [0, 1]."""
    box = BoxDomain([0.0], [1.0])

    def cmp(x, y, z, w):
        return classify((x[0] ** 2 - y[0] ** 2) - (z[0] ** 2 - w[0] ** 2), 1e-12)

    return AltOracle(1, box, cmp, 1e-12)


class TestSolveMidpoint:
    def test_quadratic_midpoint_is_sqrt_half(self):
        # [y,x] = [z,y] with u=t^2, x=0, z=1 means 2 y^2 = 1.
        o = _quadratic_oracle()
        y = solve_midpoint(o, [0.0], [1.0])
        assert y[0] == pytest.approx(math.sqrt(0.5), abs=1e-9)

    def test_cobb_diagonal_midpoint(self):
        # u(c,c) = c along the diagonal, so the gain midpoint of
        # (1,1)->(9,9) sits at (5,5).
        o = oracle_by_name("cobb_douglas")
        y = solve_midpoint(o, [1.0, 1.0], [9.0, 9.0])
        assert y == pytest.approx([5.0, 5.0], abs=1e-7)

    def test_requires_strict_ordering(self):
        o = _quadratic_oracle()
        with pytest.raises(OrderingError, match="strictly preferred"):
            solve_midpoint(o, [1.0], [0.0])

    def test_result_is_oracle_equal(self):
        o = oracle_by_name("log_sum")
        x, z = np.array([0.5, 0.5]), np.array([8.0, 8.0])
        y = solve_midpoint(o, x, z)
        assert o.compare(y, x, z, y) is E


class TestSolveCrossing:
    def test_threshold_crossing(self):
        # Find where u(t)=t crosses 0.62 using membership predicates.
        o = _quadratic_oracle()
        seg = Segment([0.0], [1.0])
        target = 0.62

        def in_upper(p):
            return p[0] >= target - 1e-12

        def in_lower(p):
            return p[0] <= target + 1e-12

        p = solve_crossing(o, seg, in_upper, in_lower)
        assert p[0] == pytest.approx(target, abs=1e-8)

    def test_bad_bracket_raises(self):
        # Every point is strictly above the target: side(0) is GREATER.
        o = _quadratic_oracle()
        seg = Segment([0.0], [1.0])
        with pytest.raises(BracketError):
            solve_crossing(o, seg, lambda p: True, lambda p: False)

    def test_contradictory_predicates_raise(self):
        from altkit.errors import ConstructionError
        o = _quadratic_oracle()
        seg = Segment([0.0], [1.0])
        with pytest.raises(ConstructionError, match="exclude"):
            solve_crossing(o, seg, lambda p: False, lambda p: False)


class TestIndifferenceParam:
    def test_cobb_diagonal_indifference(self):
        # u(4,1) = 2 and u(c,c) = c: the diagonal hit is c=2,
        # i.e. t = (2 - 0.1) / 9.9.
        o = oracle_by_name("cobb_douglas")
        seg = o.domain.diagonal()
        t, clamp = indifference_param(o, seg, np.array([4.0, 1.0]))
        assert clamp == 0
        assert t == pytest.approx((2.0 - 0.1) / 9.9, abs=1e-8)

    def test_clamp_below_segment(self):
        o = oracle_by_name("cobb_douglas")
        seg = Segment([5.0, 5.0], [10.0, 10.0])
        t, clamp = indifference_param(o, seg, np.array([1.0, 1.0]))
        assert (t, clamp) == (0.0, -1)

    def test_clamp_above_segment(self):
        o = oracle_by_name("cobb_douglas")
        seg = Segment([0.1, 0.1], [1.0, 1.0])
        t, clamp = indifference_param(o, seg, np.array([9.0, 9.0]))
        assert (t, clamp) == (1.0, +1)

    def test_exact_bottom_hit_reports_no_clamp(self):
        o = oracle_by_name("cobb_douglas")
        seg = Segment([2.0, 2.0], [10.0, 10.0])
        t, clamp = indifference_param(o, seg, np.array([4.0, 1.0]))  # u=2
        assert (t, clamp) == (0.0, 0)
