"""Test-function oracles: evaluation and norm metadata."""

import math

import numpy as np
import pytest

import hardystab as hs
from hardystab.models import _norm_by_quadrature
from conftest import random_config, random_interior


def _all_variants() -> list[hs.HardyModel]:
    cfg = hs.Configuration([0.5, -0.3 + 0.2j])
    return [
        hs.Monomial(3),
        hs.FiniteBlaschke(cfg, rotation=1j),
        hs.ReproducingKernelPole(0.4 - 0.1j),
        hs.Polynomial([3, 4]),
        hs.SingularInner(1.0, 1.0),
        hs.Product([hs.FiniteBlaschke(cfg), hs.SingularInner(0.5, -1.0)]),
    ]


class TestEvaluation:
    def test_monomial_hand_value(self):
        assert hs.model_eval(hs.Monomial(2), 0.5) == 0.25

    def test_blaschke_matches_disc_module(self):
        m = hs.FiniteBlaschke(hs.Configuration([0.5]))
        assert hs.model_eval(m, 0) == pytest.approx(-0.5)

    def test_singular_inner_at_origin(self):
        m = hs.SingularInner(1.0, 1.0)
        assert hs.model_eval(m, 0) == pytest.approx(math.exp(-1.0))

    def test_kernel_pole(self):
        m = hs.ReproducingKernelPole(0.5)
        assert hs.model_eval(m, 0.5) == pytest.approx(1.0 / 0.75)

    def test_polynomial_horner(self):
        m = hs.Polynomial([1, 2, 3])  # 1 + 2z + 3z^2
        assert hs.model_eval(m, 0.5) == pytest.approx(1 + 1 + 0.75)

    def test_product(self):
        m = hs.Product([hs.Monomial(1), hs.Monomial(2)])
        assert hs.model_eval(m, 0.5) == pytest.approx(0.125)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(41)
        zs = np.asarray(random_interior(rng, 50, radius=0.9))
        for m in _all_variants():
            batch = m.evaluate_batch(zs)
            for z, v in zip(zs, batch):
                assert v == pytest.approx(m.evaluate(z), rel=1e-12, abs=1e-12)


class TestNorms:
    def test_polynomial_l2(self):
        assert hs.model_hp_norm(hs.Polynomial([3, 4]), 2) == 5.0

    def test_blaschke_sup(self):
        m = hs.FiniteBlaschke(hs.Configuration([0.5, -0.5]))
        assert hs.model_hp_norm(m, math.inf) == 1.0

    def test_monomial_all_p(self):
        for p in (1, 2, 7.3, math.inf):
            assert hs.model_hp_norm(hs.Monomial(4), p) == 1.0

    def test_kernel_closed_forms(self):
        m = hs.ReproducingKernelPole(0.4)
        assert hs.model_hp_norm(m, 2) == pytest.approx(1.0 / math.sqrt(1 - 0.16))
        assert hs.model_hp_norm(m, math.inf) == pytest.approx(1.0 / 0.6)

    def test_polynomial_sup_by_boundary_maximization(self):
        # |3 + 4z| on the circle peaks at z = 1
        assert hs.model_hp_norm(hs.Polynomial([3, 4]), math.inf) == pytest.approx(
            7.0, abs=1e-9
        )

    def test_quadrature_matches_parseval(self):
        m = hs.Polynomial([1, 0.5, -0.25j])
        exact = m.analytic_norm(2.0)
        estimate, uncertainty = _norm_by_quadrature(m, 2.0)
        assert abs(estimate - exact) <= max(uncertainty, 1e-9) + 1e-12

    def test_quadrature_kernel_p2(self):
        m = hs.ReproducingKernelPole(0.3)
        estimate, uncertainty = _norm_by_quadrature(m, 2.0)
        assert abs(estimate - m.analytic_norm(2.0)) <= max(uncertainty, 1e-7)

    def test_inner_quadrature_close_to_one(self):
        m = hs.FiniteBlaschke(hs.Configuration([0.3, -0.2j]))
        estimate, uncertainty = m.hp_norm_with_uncertainty(2.0)
        assert estimate == pytest.approx(1.0, abs=max(10 * uncertainty, 1e-4))

    def test_product_sup_metadata_multiplies(self):
        f = hs.ReproducingKernelPole(0.4)
        g = hs.FiniteBlaschke(hs.Configuration([0.5]))
        prod = hs.Product([f, g])
        meta = hs.model_hp_norm(prod, math.inf)
        assert meta == pytest.approx(
            hs.model_hp_norm(f, math.inf) * hs.model_hp_norm(g, math.inf)
        )
        # the metadata is an upper bound for the sampled sup
        rng = np.random.default_rng(43)
        zs = np.asarray(random_interior(rng, 2000, radius=0.999))
        assert float(np.abs(prod.evaluate_batch(zs)).max()) <= meta + 1e-12


class TestMaximumModulus:
    def test_unit_sup_variants_stay_in_disc(self):
        rng = np.random.default_rng(47)
        zs = np.asarray(random_interior(rng, 10_000, radius=0.9999))
        cfg = hs.Configuration([0.5, -0.3 + 0.2j])
        for m in [
            hs.Monomial(5),
            hs.FiniteBlaschke(cfg, rotation=-1.0),
            hs.SingularInner(2.0, 1j),
            hs.Product([hs.FiniteBlaschke(cfg), hs.Monomial(2)]),
        ]:
            assert hs.model_hp_norm(m, math.inf) == 1.0
            assert float(np.abs(m.evaluate_batch(zs)).max()) <= 1.0 + 1e-12


class TestValidation:
    def test_rejects_bad_parameters(self):
        with pytest.raises(hs.RangeError):
            hs.Monomial(-1)
        with pytest.raises(hs.RangeError):
            hs.SingularInner(0.0, 1.0)
        with pytest.raises(hs.DomainError):
            hs.SingularInner(1.0, 0.5)
        with pytest.raises(hs.DomainError):
            hs.FiniteBlaschke(hs.Configuration([0.1]), rotation=0.5)
        with pytest.raises(hs.RangeError):
            hs.model_hp_norm(hs.Monomial(1), 0.5)

    def test_interior_required(self):
        with pytest.raises(hs.DomainError):
            hs.model_eval(hs.Monomial(2), 1.0)


class TestSerialization:
    def test_round_trip(self):
        rng = np.random.default_rng(53)
        zs = random_interior(rng, 20, radius=0.9)
        for m in _all_variants():
            rebuilt = hs.model_from_dict(hs.model_to_dict(m))
            for z in zs:
                assert rebuilt.evaluate(z) == pytest.approx(m.evaluate(z), rel=1e-12)

    def test_input_nodes_hook(self):
        pts = [0.1, 0.2 + 0.1j]
        m = hs.model_from_dict({"variant": "finite_blaschke", "nodes": "input"},
                               input_points=pts)
        assert isinstance(m, hs.FiniteBlaschke)
        assert m.config.nodes == (0.1 + 0j, 0.2 + 0.1j)

    def test_unknown_variant(self):
        with pytest.raises(hs.RangeError):
            hs.model_from_dict({"variant": "nope"})
