"""Reconstruction operator: coefficients, interpolation, certified bound."""

import math

import numpy as np
import pytest

import hardystab as hs
from conftest import random_config, random_interior


def oracle_coefficients(nodes: list[complex], z: complex, p: float) -> list[complex]:
    """Independent route: the raw formula with the removable (z - z_k) division.

    Valid off the nodes only; cross-checks the cancellation-free production
    path.
    """

    def b_full(w):
        out = 1.0 + 0.0j
        for a in nodes:
            out *= (w - a) / (1.0 - a.conjugate() * w)
        return out

    def b_excl(k, w):
        out = 1.0 + 0.0j
        for j, a in enumerate(nodes):
            if j != k:
                out *= (w - a) / (1.0 - a.conjugate() * w)
        return out

    exponent = -1.0 if math.isinf(p) else (2.0 - p) / p
    out = []
    full = b_full(z)
    for k, a in enumerate(nodes):
        base = (1.0 - z.conjugate() * a) / (1.0 - abs(z) ** 2)
        out.append(
            (1.0 - abs(a) ** 2) / (z - a) * base ** exponent * full / b_excl(k, a)
        )
    return out


class TestCoefficients:
    def test_matches_raw_formula_off_nodes(self):
        rng = np.random.default_rng(61)
        for p in (1.0, 2.0, 3.7, 7.3, math.inf):
            for _ in range(40):
                n = int(rng.integers(1, 9))
                cfg = random_config(rng, n)
                while True:
                    (z,) = random_interior(rng, 1, radius=0.9)
                    if all(abs(z - w) > 1e-3 for w in cfg):
                        break
                got = hs.recovery_coefficients(cfg, z, p)
                want = oracle_coefficients(list(cfg), z, p)
                for g, w in zip(got, want):
                    assert g == pytest.approx(w, rel=1e-10, abs=1e-12)

    def test_cardinal_at_nodes(self):
        rng = np.random.default_rng(67)
        for _ in range(50):
            n = int(rng.integers(2, 13))
            cfg = random_config(rng, n)
            j = int(rng.integers(0, n))
            for p in (1.0, 2.0, 7.3, math.inf):
                coeffs = hs.recovery_coefficients(cfg, cfg[j], p)
                for k, c in enumerate(coeffs):
                    assert c == pytest.approx(1.0 if k == j else 0.0, abs=1e-10)

    def test_single_origin_node_p2_is_constant_one(self):
        cfg = hs.Configuration([0])
        for z in (0.5, -0.3 + 0.4j, 0.0, 0.9j):
            assert hs.recovery_coefficients(cfg, z, 2)[0] == pytest.approx(1.0, abs=1e-14)

    def test_single_origin_node_sup_exponent(self):
        cfg = hs.Configuration([0])
        assert hs.recovery_coefficients(cfg, 0.5, math.inf)[0] == pytest.approx(0.75)

    def test_p2_mid_factor_drops(self):
        # independent specialized route: with the exponent zero the middle
        # factor is identically 1
        rng = np.random.default_rng(71)
        cfg = random_config(rng, 5)
        (z,) = random_interior(rng, 1)
        denom = hs.blaschke_excluded_at_nodes(cfg)
        special = [
            (1.0 - abs(a) ** 2)
            * hs.blaschke_eval_excluding(cfg, k, z)
            / ((1.0 - a.conjugate() * z) * denom[k])
            for k, a in enumerate(cfg)
        ]
        got = hs.recovery_coefficients(cfg, z, 2)
        for g, s in zip(got, special):
            assert g == pytest.approx(s, rel=1e-12)

    def test_degenerate_cluster_raises(self):
        # forty nodes spaced ~2e-9 pass the distinctness floor but the
        # excluded products underflow
        nodes = [j * 2e-9 for j in range(40)]
        cfg = hs.Configuration(nodes)
        with pytest.raises(hs.DegenerateConfigurationError):
            hs.recovery_coefficients(cfg, 0.5, 2)

    def test_empty_configuration_rejected(self):
        with pytest.raises(hs.RangeError):
            hs.recovery_coefficients(hs.EMPTY_CONFIGURATION, 0.1, 2)


class TestRecover:
    def test_zero_samples(self):
        cfg = hs.Configuration([0.1, -0.2j, 0.5])
        assert hs.recover(cfg, [0, 0, 0], 0.3, 2) == 0.0

    def test_single_node_constant(self):
        cfg = hs.Configuration([0])
        for z in (0.1, 0.5 - 0.2j, 0.8j):
            assert hs.recover(cfg, [3 + 4j], z, 2) == pytest.approx(3 + 4j, abs=1e-13)

    def test_interpolates_samples(self):
        rng = np.random.default_rng(73)
        cfg = random_config(rng, 7)
        samples = [complex(a, b) for a, b in rng.normal(size=(7, 2))]
        for j in range(7):
            got = hs.recover(cfg, samples, cfg[j], math.inf)
            assert got == pytest.approx(samples[j], abs=1e-9)

    def test_length_mismatch(self):
        cfg = hs.Configuration([0.1, 0.2])
        with pytest.raises(ValueError):
            hs.recover(cfg, [1.0], 0.3, 2)

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(79)
        cfg = random_config(rng, 6)
        samples = [complex(a, b) for a, b in rng.normal(size=(6, 2))]
        (z,) = random_interior(rng, 1)
        base = hs.recover(cfg, samples, z, 2.5)
        for _ in range(10):
            perm = rng.permutation(6)
            cfg_p = hs.Configuration([cfg[i] for i in perm])
            samples_p = [samples[i] for i in perm]
            assert hs.recover(cfg_p, samples_p, z, 2.5) == pytest.approx(base, abs=1e-12)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(83)
        cfg = random_config(rng, 5)
        samples = [complex(a, b) for a, b in rng.normal(size=(5, 2))]
        zs = np.asarray(random_interior(rng, 64, radius=0.9))
        batch = hs.recover_batch(cfg, samples, zs, 2)
        for z, v in zip(zs, batch):
            assert v == pytest.approx(hs.recover(cfg, samples, z, 2), rel=1e-12, abs=1e-12)


class TestErrorBound:
    def test_vanishes_at_node(self):
        cfg = hs.Configuration([0.3])
        assert hs.recovery_error_bound(cfg, 0.3, 2, 1.0) == 0.0

    def test_sup_norm_hand_value(self):
        cfg = hs.Configuration([0])
        assert hs.recovery_error_bound(cfg, 0.5, math.inf, 1.0) == pytest.approx(0.5)

    def test_p2_hand_value(self):
        cfg = hs.Configuration([0])
        expected = 0.5 / math.sqrt(0.75)
        assert hs.recovery_error_bound(cfg, 0.5, 2, 1.0) == pytest.approx(expected)

    def test_rejects_negative_norm(self):
        with pytest.raises(hs.RangeError):
            hs.recovery_error_bound(hs.Configuration([0]), 0.5, 2, -1.0)

    def test_residual_within_bound_for_known_norm_models(self):
        rng = np.random.default_rng(89)
        cfg_small = hs.Configuration([0.5, -0.3 + 0.2j])
        oracles = [
            (hs.Monomial(3), 2.0),
            (hs.Monomial(5), math.inf),
            (hs.FiniteBlaschke(cfg_small), math.inf),
            (hs.ReproducingKernelPole(0.4), 2.0),
            (hs.Polynomial([3, 4, 1j]), 2.0),
            (hs.SingularInner(1.0, 1.0), math.inf),
            (hs.Product([hs.FiniteBlaschke(cfg_small), hs.Monomial(2)]), math.inf),
        ]
        for model, p in oracles:
            norm = hs.model_hp_norm(model, p)
            for _ in range(5):
                cfg = random_config(rng, int(rng.integers(1, 13)))
                samples = [model.evaluate(z) for z in cfg]
                zs = np.asarray(random_interior(rng, 200, radius=0.9))
                got = hs.recover_batch(cfg, samples, zs, p)
                truth = model.evaluate_batch(zs)
                bounds = hs.recovery_error_bound_batch(cfg, zs, p, norm)
                assert np.all(np.abs(truth - got) <= bounds + 1e-9)

    def test_exact_annihilation(self):
        # f = B * g with |g| <= 1 samples to zero and sits under the bound
        rng = np.random.default_rng(97)
        for _ in range(10):
            cfg = random_config(rng, int(rng.integers(1, 8)))
            g = hs.SingularInner(0.7, 1.0)
            f = hs.Product([hs.FiniteBlaschke(cfg), g])
            samples = [f.evaluate(z) for z in cfg]
            assert max(abs(s) for s in samples) == 0.0
            for z in random_interior(rng, 50, radius=0.9):
                assert hs.recover(cfg, samples, z, math.inf) == 0.0
                bound = hs.recovery_error_bound(cfg, z, math.inf, 1.0)
                assert abs(f.evaluate(z)) <= bound + 1e-12

    def test_recover_with_bound_bundle(self):
        cfg = hs.Configuration([0])
        res = hs.recover_with_bound(cfg, [1.0], 0.5, math.inf, 1.0)
        assert res.value == pytest.approx(0.75)  # coefficient (1-|z|^2) times 1
        assert res.error_bound == pytest.approx(0.5)
        assert res.coefficients[0] == pytest.approx(0.75)
