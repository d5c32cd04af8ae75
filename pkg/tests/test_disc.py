"""Unit-disc geometry: distances, Blaschke products, weights."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import hardystab as hs
from conftest import random_config, random_interior

interior = st.complex_numbers(max_magnitude=0.97, allow_infinity=False, allow_nan=False)


class TestGleasonDistance:
    def test_distance_from_origin_is_modulus(self):
        assert hs.gleason_distance(0, 0.3) == pytest.approx(0.3, abs=1e-15)

    def test_identical_points(self):
        assert hs.gleason_distance(0.5, 0.5) == 0.0

    def test_hand_value(self):
        # (0.5 - (-0.5)) / (1 + 0.25) = 1/1.25
        assert hs.gleason_distance(0.5, -0.5) == pytest.approx(0.8, abs=1e-15)

    def test_rejects_boundary_and_exterior(self):
        with pytest.raises(hs.DomainError):
            hs.gleason_distance(1.0, 0.3)
        with pytest.raises(hs.DomainError):
            hs.gleason_distance(0.3, 1.2j)

    @given(interior, interior)
    def test_symmetry_and_range(self, z, w):
        d = hs.gleason_distance(z, w)
        assert d == hs.gleason_distance(w, z)
        assert 0.0 <= d < 1.0

    def test_mobius_invariance(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            a, z, w = random_interior(rng, 3, radius=0.97)
            fz = (z - a) / (1.0 - a.conjugate() * z)
            fw = (w - a) / (1.0 - a.conjugate() * w)
            assert hs.gleason_distance(fz, fw) == pytest.approx(
                hs.gleason_distance(z, w), abs=1e-12
            )


class TestConfiguration:
    def test_rejects_boundary_node(self):
        with pytest.raises(hs.DomainError):
            hs.Configuration([0.5, 1.0])

    def test_rejects_coalescent_nodes(self):
        with pytest.raises(hs.DomainError):
            hs.Configuration([0.5, 0.5 + 1e-12])

    def test_without(self):
        cfg = hs.Configuration([0.1, 0.2, 0.3])
        assert hs.Configuration([0.1, 0.3]) == cfg.without(1)

    def test_index_errors(self):
        cfg = hs.Configuration([0.1, 0.2])
        with pytest.raises(IndexError):
            cfg.without(2)
        with pytest.raises(IndexError):
            hs.blaschke_eval_excluding(cfg, -1, 0.0)


class TestBlaschkeEval:
    def test_empty_product_is_one(self):
        assert hs.blaschke_eval(hs.EMPTY_CONFIGURATION, 0.3 + 0.1j) == 1.0

    def test_single_node_hand_value(self):
        assert hs.blaschke_eval(hs.Configuration([0.5]), 0) == pytest.approx(-0.5)

    def test_vanishes_at_node(self):
        cfg = hs.Configuration([0.5, -0.5])
        assert hs.blaschke_eval(cfg, 0.5) == 0.0

    def test_strictly_contracting_inside(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            cfg = random_config(rng, int(rng.integers(1, 9)))
            (z,) = random_interior(rng, 1)
            assert abs(hs.blaschke_eval(cfg, z)) < 1.0

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            cfg = random_config(rng, 5)
            (z,) = random_interior(rng, 1)
            conj_cfg = hs.Configuration([w.conjugate() for w in cfg])
            lhs = hs.blaschke_eval(conj_cfg, z.conjugate())
            rhs = hs.blaschke_eval(cfg, z).conjugate()
            assert lhs == pytest.approx(rhs, abs=1e-15)

    def test_log_accessor_agrees_with_direct(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            cfg = random_config(rng, int(rng.integers(1, 51)))
            (z,) = random_interior(rng, 1)
            direct = abs(hs.blaschke_eval(cfg, z))
            if direct > 0.0:
                assert hs.blaschke_log_abs(cfg, z) == pytest.approx(
                    math.log(direct), abs=1e-10
                )

    def test_log_accessor_minus_inf_at_node(self):
        cfg = hs.Configuration([0.5])
        assert hs.blaschke_log_abs(cfg, 0.5) == -math.inf

    def test_large_product_switches_to_log_phase(self):
        # n > 64 goes through log-magnitude + phase; must match the direct product
        rng = np.random.default_rng(19)
        nodes = []
        while len(nodes) < 100:
            (z,) = random_interior(rng, 1, radius=0.8)
            if all(hs.gleason_distance(z, w) > 1e-3 for w in nodes):
                nodes.append(z)
        cfg = hs.Configuration(nodes)
        z = 0.31 + 0.17j
        direct = 1.0 + 0.0j
        for w in nodes:
            direct *= (z - w) / (1.0 - w.conjugate() * z)
        got = hs.blaschke_eval(cfg, z)
        assert got == pytest.approx(direct, rel=1e-10)

    def test_huge_configuration_log_abs(self):
        # construction and the log accessor stay usable at 10^5-10^6 nodes
        j = np.arange(1, 200_001)
        nodes = (1.0 - 1.0 / (j + 1)) * np.exp(1j * 0.37 * j)
        cfg = hs.Configuration(nodes)
        val = hs.blaschke_log_abs(cfg, 0.2)
        assert math.isfinite(val) and val < 0.0

    def test_huge_configuration_underflow_is_graceful(self):
        # 2*10^5 nodes at radius 0.5: the direct product would underflow, the
        # log accessor stays finite and the product evaluator returns 0
        j = np.arange(1, 200_001)
        nodes = 0.5 * np.exp(1j * 0.37 * j)
        cfg = hs.Configuration(nodes)
        val = hs.blaschke_log_abs(cfg, 0.2)
        assert math.isfinite(val) and val < -1e4
        assert hs.blaschke_eval(cfg, 0.2) == 0.0


class TestBlaschkeExcluding:
    def test_excluding_only_node_gives_empty_product(self):
        cfg = hs.Configuration([0.5])
        assert hs.blaschke_eval_excluding(cfg, 0, 0.9) == 1.0

    def test_reduces_to_single_factor(self):
        cfg = hs.Configuration([0.5, -0.5])
        assert hs.blaschke_eval_excluding(cfg, 1, 0) == pytest.approx(-0.5)

    def test_remaining_node_is_zero(self):
        cfg = hs.Configuration([0.5, -0.5])
        assert hs.blaschke_eval_excluding(cfg, 0, -0.5) == 0.0

    def test_matches_removed_configuration(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            cfg = random_config(rng, 6)
            (z,) = random_interior(rng, 1)
            k = int(rng.integers(0, 6))
            assert hs.blaschke_eval_excluding(cfg, k, z) == pytest.approx(
                hs.blaschke_eval(cfg.without(k), z), rel=1e-12
            )


class TestBlaschkeUpperBound:
    def test_hand_value_at_origin(self):
        cfg = hs.Configuration([0])
        assert hs.blaschke_upper_bound(cfg, 0) == pytest.approx(math.exp(-0.25), abs=1e-15)
        assert abs(hs.blaschke_eval(cfg, 0)) <= hs.blaschke_upper_bound(cfg, 0)

    def test_empty_sum_gives_one(self):
        assert hs.blaschke_upper_bound(hs.EMPTY_CONFIGURATION, 0.4 + 0.2j) == 1.0

    def test_excluded_doubles(self):
        cfg = hs.Configuration([0.5, -0.5])
        expected = 2.0 * math.exp(-0.25)  # total mass (1-0.5)+(1-0.5) = 1
        assert hs.blaschke_upper_bound(cfg, 0, excluded=0) == pytest.approx(expected, abs=1e-15)

    def test_dominates_modulus_in_bulk(self):
        rng = np.random.default_rng(29)
        for _ in range(2000):
            n = int(rng.integers(1, 51))
            cfg = random_config(rng, n, radius=0.99, min_sep=1e-4)
            (z,) = random_interior(rng, 1, radius=0.999)
            assert abs(hs.blaschke_eval(cfg, z)) <= hs.blaschke_upper_bound(cfg, z) + 1e-12
            k = int(rng.integers(0, n))
            assert abs(hs.blaschke_eval_excluding(cfg, k, z)) <= (
                hs.blaschke_upper_bound(cfg, z, excluded=k) + 1e-12
            )


class TestQWeight:
    def test_unit_weight_is_exactly_one(self):
        assert hs.UNIT_WEIGHT(0.99j) == 1.0
        assert hs.UNIT_WEIGHT.kind == "unit"
        assert hs.q_build_boundary_poly([]).is_unit

    def test_single_anchor_normalizer(self):
        # max |z-1| over the circle is 2, attained at z = -1
        q = hs.q_build_boundary_poly([1])
        assert q.normalizer == pytest.approx(2.0, abs=1e-10)
        assert abs(q(-1)) == pytest.approx(1.0, abs=1e-10)
        assert q(0.5) == pytest.approx((0.5 - 1.0) / 2.0, rel=1e-12)

    def test_two_anchor_normalizer(self):
        # max |z^2-1| over the circle is 2, attained at z = +-i
        q = hs.q_build_boundary_poly([1, -1])
        assert q.normalizer == pytest.approx(2.0, abs=1e-10)

    def test_rejects_interior_anchor(self):
        with pytest.raises(hs.DomainError):
            hs.q_build_boundary_poly([0.5])

    def test_sup_norm_one_on_boundary(self):
        rng = np.random.default_rng(31)
        thetas = np.linspace(0.0, 2.0 * math.pi, 5000, endpoint=False)
        for anchors in ([1], [1, -1], [1j], list(np.exp(1j * rng.uniform(0, 6.28, 4)))):
            q = hs.q_build_boundary_poly(anchors)
            vals = q.abs_batch(np.exp(1j * thetas))
            assert float(vals.max()) <= 1.0 + 1e-9
            assert float(vals.max()) == pytest.approx(1.0, abs=1e-6)


class TestBqEval:
    def test_empty_unit(self):
        assert hs.bq_eval(hs.EMPTY_CONFIGURATION, hs.UNIT_WEIGHT, 0.2) == 1.0

    def test_unit_weight_reduces_to_plain(self):
        cfg = hs.Configuration([0])
        assert hs.bq_eval(cfg, hs.UNIT_WEIGHT, 0.5) == pytest.approx(0.5)

    def test_hand_product_with_anchor(self):
        cfg = hs.Configuration([0])
        q = hs.q_build_boundary_poly([1])
        assert hs.bq_eval(cfg, q, 0.5) == pytest.approx(-0.125, rel=1e-9)

    def test_bounded_by_one_on_closed_disc(self):
        rng = np.random.default_rng(37)
        boundary = np.exp(1j * np.linspace(0.0, 2.0 * math.pi, 512, endpoint=False))
        for anchors in ([], [1], [1, -1], [1j, -1, 1]):
            q = hs.q_build_boundary_poly(anchors)
            cfg = random_config(rng, 4)
            vals = [abs(hs.bq_eval(cfg, q, z)) for z in boundary]
            assert max(vals) <= 1.0 + 1e-9
