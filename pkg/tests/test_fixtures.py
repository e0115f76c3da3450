import json
import math

import numpy as np
import pytest

from altkit.domain import BoxDomain
from altkit.errors import ConfigError
from altkit.fixtures import (CONCAVE, NON_CONCAVE, STRICTLY_CONCAVE,
                             catalog, estimate_value_range, intensity_by_name,
                             make_difference_oracle, make_intensity_oracle,
                             oracle_by_name, parse_expression,
                             utility_by_name, utility_from_json)
from altkit.oracle import IntensityOrder, classify

G, E, L = IntensityOrder.GREATER, IntensityOrder.EQUAL, IntensityOrder.LESS


class TestCatalogValues:
    """Spot values recomputed by hand arithmetic."""

    @pytest.mark.parametrize("name,point,value", [
        ("linear", [1.0, 2.0], 3.0),
        ("cobb_douglas", [4.0, 1.0], 2.0),
        ("ces", [1.0, 4.0], 9.0),               # (1 + 2)^2
        ("log_sum", [1.0, 1.0], 0.0),
        ("log_sum", [math.e, 1.0], 1.0),
        ("exp1d", [0.0], 1.0),
        ("exp1d", [1.0], math.e),
        ("min2", [3.0, 7.0], 3.0),
        ("step", [2.7], 2.0),
        ("neg_quadratic", [1.0], 0.0),
        ("neg_quadratic", [0.0], -1.0),
        ("kinked_composite", [1.0, 1.0], 0.0),   # at the kink: v=1
        ("kinked_composite", [0.25, 1.0], -0.5),  # below: v - 1
        ("kinked_composite", [4.0, 4.0], 1.5),   # above: (v - 1)/2
    ])
    def test_evaluator(self, name, point, value):
        spec = utility_by_name(name)
        assert spec(np.asarray(point)) == pytest.approx(value, abs=1e-12)

    def test_catalog_tags(self):
        tags = {s.name: s.concavity for s in catalog()}
        assert tags["linear"] == CONCAVE
        assert tags["cobb_douglas"] == CONCAVE      # flat along rays through 0
        assert tags["log_sum"] == STRICTLY_CONCAVE
        assert tags["neg_quadratic"] == STRICTLY_CONCAVE
        assert tags["exp1d"] == NON_CONCAVE
        assert tags["step"] == NON_CONCAVE
        non_monotone = {s.name for s in catalog() if not s.monotone}
        assert non_monotone == {"neg_quadratic", "step"}
        assert not utility_by_name("step").continuous

    def test_analytic_derivatives_match_finite_differences(self):
        h = 1e-5
        pts = {"linear": [2.0, 3.0], "cobb_douglas": [1.3, 0.7],
               "ces": [2.0, 0.5], "log_sum": [1.5, 2.5], "exp1d": [0.4]}
        for name, raw in pts.items():
            spec = utility_by_name(name)
            x = np.asarray(raw)
            for i in range(spec.dim):
                e = np.zeros(spec.dim)
                e[i] = h
                fd = (spec(x + e) - spec(x - e)) / (2 * h)
                assert spec.gradient(x)[i] == pytest.approx(fd, rel=1e-6, abs=1e-8), name
                fd2 = (spec(x + e) - 2 * spec(x) + spec(x - e)) / h**2
                assert spec.hessian(x)[i, i] == pytest.approx(fd2, rel=1e-4, abs=1e-5), name


class TestDifferenceOracle:
    def test_matches_direct_arithmetic(self):
        spec = utility_by_name("cobb_douglas")
        oracle = make_difference_oracle(spec)
        rng = np.random.default_rng(3)
        for _ in range(1000):
            x, y, z, w = (spec.domain.sample(rng) for _ in range(4))
            delta = (spec(x) - spec(y)) - (spec(z) - spec(w))
            assert oracle.compare(x, y, z, w) is classify(delta, oracle.eps_eq)

    def test_default_dead_band_scales_with_value_range(self):
        spec = utility_by_name("linear")
        oracle = make_difference_oracle(spec)
        # u = x0 + x1 spans [0.2, 20] on the box: range 19.8.
        assert oracle.eps_eq == pytest.approx(1e-9 * 19.8)
        assert estimate_value_range(spec.evaluator, spec.domain) == pytest.approx(19.8)

    def test_custom_eps_and_domain(self):
        spec = utility_by_name("linear")
        box = BoxDomain([0.0, 0.0], [1.0, 1.0])
        oracle = make_difference_oracle(spec, domain=box, eps_eq=1e-3)
        assert oracle.eps_eq == 1e-3
        # Differences inside the widened band collapse to EQUAL.
        assert oracle.compare([0.5, 0.5], [0.5, 0.5005], [0.5, 0.5], [0.5, 0.5]) is E

    def test_domain_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            make_difference_oracle(utility_by_name("linear"), domain=BoxDomain([0.0], [1.0]))

    def test_translation_invariance(self):
        """Oracles from u and u + c agree on all quadruples."""
        spec = utility_by_name("cobb_douglas")
        base = make_difference_oracle(spec)
        shifted_spec = utility_by_name("cobb_douglas")
        shifted_spec.evaluator = lambda x, _u=spec.evaluator: _u(x) + 17.5
        shifted = make_difference_oracle(shifted_spec)
        rng = np.random.default_rng(11)
        for _ in range(1000):
            q = [spec.domain.sample(rng) for _ in range(4)]
            assert base.compare(*q) is shifted.compare(*q)


class TestIntensityOracle:
    def test_broken_crossover_pattern(self):
        """The frozen counterexample: premise [4,1]=[2,0] holds yet the
        exchanged brackets disagree ([4,2] < [1,0])."""
        oracle = oracle_by_name("broken_crossover")
        p4, p1, p2, p0 = ([4.0], [1.0], [2.0], [0.0])
        assert oracle.compare(p4, p1, p2, p0) is E      # g=2 on both sides
        assert oracle.compare(p4, p2, p1, p0) is L      # g: 0 vs 1

    def test_broken_crossover_preserves_order(self):
        oracle = oracle_by_name("broken_crossover")
        assert oracle.prefers([4.0], [1.0])            # g(4,1)=2 > g(1,1)=-1

    def test_difference_intensity_reduction(self):
        """g(x,y) = u(x) - u(y) wrapped as a raw intensity oracle gives the
        same answers as the difference oracle."""
        spec = utility_by_name("cobb_douglas")
        diff = make_difference_oracle(spec)
        from altkit.fixtures import IntensitySpec
        ispec = IntensitySpec("reduced", 2,
                              lambda x, y: spec(x) - spec(y), spec.domain)
        reduced = make_intensity_oracle(ispec)
        rng = np.random.default_rng(7)
        for _ in range(1000):
            q = [spec.domain.sample(rng) for _ in range(4)]
            assert diff.compare(*q) is reduced.compare(*q)

    def test_constant_oracle_everything_equal(self):
        oracle = oracle_by_name("constant")
        rng = np.random.default_rng(0)
        for _ in range(50):
            q = [oracle.domain.sample(rng) for _ in range(4)]
            assert oracle.compare(*q) is E


class TestResolution:
    def test_by_name_finds_both_kinds(self):
        assert oracle_by_name("linear").name == "diff:linear"
        assert oracle_by_name("constant").name == "intensity:constant"

    def test_unknown_name_lists_catalog(self):
        with pytest.raises(ConfigError, match="known fixtures"):
            oracle_by_name("no_such_fixture")

    def test_intensity_by_name_missing(self):
        with pytest.raises(KeyError):
            intensity_by_name("linear")

    def test_resolves_json_file(self, tmp_path):
        doc = {"name": "quad", "dimension": 1, "expr": ["mul", ["x", 0], ["x", 0]],
               "domain": {"lower": [0.0], "upper": [2.0]}}
        path = tmp_path / "quad.json"
        path.write_text(json.dumps(doc))
        oracle = oracle_by_name(str(path))
        assert oracle.name == "diff:quad"
        assert oracle.dim == 1


class TestExpressionGrammar:
    def test_arithmetic_tree(self):
        # sqrt(x0 * x1) evaluated at (4, 1)
        f = parse_expression(["sqrt", ["mul", ["x", 0], ["x", 1]]], 2)
        assert f(np.array([4.0, 1.0])) == pytest.approx(2.0)

    def test_constants_and_binary_ops(self):
        f = parse_expression(["add", ["pow", ["x", 0], 2], 1.5], 1)
        assert f(np.array([3.0])) == pytest.approx(10.5)

    def test_variadic_min(self):
        f = parse_expression(["min", ["x", 0], ["x", 1], 5], 2)
        assert f(np.array([7.0, 6.0])) == 5.0

    def test_unary_neg_and_div(self):
        f = parse_expression(["neg", ["div", 1, ["x", 0]]], 1)
        assert f(np.array([4.0])) == pytest.approx(-0.25)

    @pytest.mark.parametrize("expr,msg", [
        (["x", 0, 1], "integer index"),
        (["x", 5], "out of range"),
        (["sqrt", 1, 2], "one argument"),
        (["add", 1], "two arguments"),
        (["min", 1], "at least two"),
        (["frobnicate", 1, 2], "unknown operator"),
        ([], "malformed"),
        ("nope", "malformed"),
    ])
    def test_malformed_expressions(self, expr, msg):
        with pytest.raises(ConfigError, match=msg):
            parse_expression(expr, 2)

    def test_utility_from_json_document(self):
        spec = utility_from_json({"name": "scaled", "dimension": 2,
                                  "expr": ["mul", 0.5, ["add", ["x", 0], ["x", 1]]],
                                  "monotone": True})
        assert spec(np.array([2.0, 4.0])) == pytest.approx(3.0)
        assert spec.monotone is True
        assert spec.domain.lower.tolist() == [0.1, 0.1]  # default box

    def test_utility_from_json_missing_key(self):
        with pytest.raises(ConfigError, match="missing key"):
            utility_from_json({"name": "x", "dimension": 1})

    def test_utility_from_json_bad_dimension(self):
        with pytest.raises(ConfigError, match="dimension"):
            utility_from_json({"name": "x", "dimension": 0, "expr": 1})
