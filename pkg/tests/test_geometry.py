import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperioso import BooleanFunction, ConfigError, DimensionError, EdgeColoring, FamilySpec, generate, spectrum
from hyperioso.geometry import (
    colored_counts,
    colored_sensitivities,
    derivative,
    edge_boundary_measure,
    gradient_norm,
    influence,
    influence_sq_sum,
    influence_vector,
    poincare_gap,
    sensitivity,
    sensitivity_moment,
    sensitivity_profile,
    talagrand_boundary,
    talagrand_colored,
    total_influence,
    vertex_boundary_measure,
)
from hyperioso.spectral import influence_from_coeffs, level_weights

tables = st.integers(1, 6).flatmap(
    lambda n: st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n).map(
        lambda bits: BooleanFunction(n, np.array(bits, dtype=np.uint8))
    )
)


def point(*bits):
    """Point mask from coordinates x_1, x_2, ... given in order."""
    return sum(b << i for i, b in enumerate(bits))


def slow_sensitivity(f, x):
    return sum(f(x) != f(x ^ (1 << i)) for i in range(f.n))


class TestDerivative:
    def test_dictator(self, dictator):
        assert np.all(derivative(dictator, 1).values == -1.0)

    def test_irrelevant(self):
        f = generate(FamilySpec("dictator", {"i": 1}), 2)
        assert np.all(derivative(f, 2).values == 0.0)

    def test_maj3(self, maj3):
        d = derivative(maj3, 1).values
        support = {x for x in range(8) if d[x] != 0}
        assert support == {x for x in range(8) if ((x >> 1) & 1) != ((x >> 2) & 1)}
        assert d.mean() == -0.5

    def test_fact_first_moment(self, maj3):
        s = spectrum(maj3)
        for i in (1, 2, 3):
            assert derivative(maj3, i).values.mean() == 2 * s[(i,)]

    def test_bad_coordinate(self, maj3):
        with pytest.raises(ConfigError):
            derivative(maj3, 4)


class TestSensitivity:
    def test_examples(self, parity2, maj3, and2):
        assert all(sensitivity(parity2, x) == 2 for x in range(4))
        assert sensitivity(maj3, point(1, 1, 1)) == 0 and sensitivity(maj3, point(1, 1, 0)) == 2
        assert sensitivity(and2, point(1, 1)) == 2
        assert sensitivity(and2, point(1, 0)) == 1
        assert sensitivity(and2, point(0, 0)) == 0

    def test_moments(self, dictator, maj3, and2):
        assert sensitivity_moment(dictator, 0.5) == 1.0
        assert sensitivity_moment(maj3, 0.5) == pytest.approx(3 * math.sqrt(2) / 4, abs=1e-15)
        assert sensitivity_moment(and2, 0.5) == pytest.approx((math.sqrt(2) + 2) / 4, abs=1e-15)
        assert talagrand_boundary(maj3) == sensitivity_moment(maj3, 0.5)
        with pytest.raises(ConfigError):
            talagrand_boundary(maj3, 0.3)

    @settings(max_examples=60, deadline=None)
    @given(tables)
    def test_profile_matches_pointwise_flips(self, f):
        prof = sensitivity_profile(f, (0.5, 1.0))
        slow = [slow_sensitivity(f, x) for x in range(1 << f.n)]
        assert prof.counts.tolist() == slow
        assert prof.moment(1.0) == pytest.approx(np.mean(slow), abs=1e-14)
        assert prof.sensitive_edges == sum(slow) // 2
        assert gradient_norm(f, 2) == pytest.approx(prof.moment(0.5), abs=1e-12)


class TestInfluence:
    def test_examples(self, dictator, maj3, and2):
        assert influence(dictator, 1) == 1.0 and influence_sq_sum(dictator) == 1.0
        assert influence_vector(maj3).tolist() == [0.5] * 3
        assert total_influence(maj3) == 1.5 and influence_sq_sum(maj3) == 0.75
        assert influence_vector(and2).tolist() == [0.5, 0.5] and influence_sq_sum(and2) == 0.5

    @settings(max_examples=60, deadline=None)
    @given(tables)
    def test_spectral_formula_and_total(self, f):
        inf = influence_vector(f)
        assert np.allclose(inf, influence_from_coeffs(spectrum(f).coeffs), atol=1e-14)
        assert total_influence(f) == pytest.approx(sensitivity_moment(f, 1.0), abs=1e-13)


class TestBoundary:
    def test_examples(self, maj3, parity2):
        assert (edge_boundary_measure(maj3), vertex_boundary_measure(maj3)) == (0.75, 0.75)
        const = BooleanFunction.constant(3, 1)
        assert (edge_boundary_measure(const), vertex_boundary_measure(const)) == (0.0, 0.0)
        # 4 sensitive edges on 4 points
        assert (edge_boundary_measure(parity2), vertex_boundary_measure(parity2)) == (1.0, 1.0)

    @settings(max_examples=60, deadline=None)
    @given(tables)
    def test_poincare(self, f):
        assert poincare_gap(f) >= -1e-15


class TestColorings:
    def test_endpoint_examples(self, dictator, maj3):
        red, blue = EdgeColoring.uniform(1, True), EdgeColoring.uniform(1, False)
        assert colored_sensitivities(dictator, red, 1) == (1, 0)
        assert colored_sensitivities(dictator, blue, 0) == (0, 1)
        col = EdgeColoring.by_direction(3, (1,))
        assert colored_sensitivities(maj3, col, point(1, 1, 0))[0] == 1

    def test_boundary_examples(self, dictator, maj3):
        rng = np.random.default_rng(0)
        assert talagrand_colored(BooleanFunction.constant(3, 0), EdgeColoring.random(3, rng)) == 0
        assert talagrand_colored(dictator, EdgeColoring.uniform(1, True)) == 0.5
        all_red = talagrand_colored(maj3, EdgeColoring.uniform(3, True))
        # f = 1 boundary points: three with s = 2
        assert all_red == pytest.approx(3 * math.sqrt(2) / 8, abs=1e-15)
        assert all_red >= 0.5 * math.sqrt(3 / 16)

    def test_serialization(self):
        col = EdgeColoring.random(3, np.random.default_rng(5))
        assert EdgeColoring.parse(col.serialize()).serialize() == col.serialize()
        assert EdgeColoring.uniform(2, True).serialize() == "col:2:f"
        with pytest.raises(ConfigError):
            EdgeColoring.parse("col:2:zz")

    def test_dimension_mismatch(self, maj3):
        with pytest.raises(DimensionError):
            talagrand_colored(maj3, EdgeColoring.uniform(2, True))

    @settings(max_examples=40, deadline=None)
    @given(tables, st.integers(0, 2**32 - 1))
    def test_vectorised_counts_match_pointwise(self, f, seed):
        col = EdgeColoring.random(f.n, np.random.default_rng(seed))
        s_red, s_blue = colored_counts(f.table, col.colors)
        for x in range(1 << f.n):
            assert (s_red[x], s_blue[x]) == colored_sensitivities(f, col, x)

    @settings(max_examples=40, deadline=None)
    @given(tables, st.integers(0, 2**32 - 1))
    def test_robust_level1_bound(self, f, seed):
        col = EdgeColoring.random(f.n, np.random.default_rng(seed))
        w1 = level_weights(f).at(1)
        assert talagrand_colored(f, col) >= 0.5 * math.sqrt(w1) - 1e-12
