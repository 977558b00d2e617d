import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import spearmanr

from domtest import (
    BootstrapConfig,
    CopulaKind,
    CopulaSpec,
    FamilyKind,
    OdcFamily,
    Pairing,
    ScenarioSpec,
    gaussian_copula_pair,
    generate_dataset,
    normal_cdf,
    normal_quantile,
    odc_family_eval,
    rejection_rate,
)

from oracles import normal_cdf_ref, normal_quantile_ref


def _spec(family, n1=30, n2=30, pairing=Pairing.INDEPENDENT, rho=0.0, mc_reps=10, **boot):
    copula = (
        CopulaSpec(kind=CopulaKind.GAUSSIAN, rho=rho)
        if pairing is Pairing.MATCHED
        else CopulaSpec(kind=CopulaKind.PRODUCT)
    )
    return ScenarioSpec(
        family=family,
        n1=n1,
        n2=n2,
        copula=copula,
        pairing=pairing,
        mc_reps=mc_reps,
        bootstrap=BootstrapConfig(**{"num_reps": 50, "seed": 0, **boot}),
    )


class TestFamilyEval:
    @pytest.mark.parametrize("kind", list(FamilyKind))
    def test_gamma_zero_is_identity(self, kind):
        family = OdcFamily(kind=kind, gamma=0.0)
        for u in (0.1, 0.37, 0.5, 0.9):
            assert_allclose(odc_family_eval(family, u), u, rtol=1e-12)

    def test_power_null_square(self):
        family = OdcFamily(kind=FamilyKind.POWER_NULL, gamma=1.0)
        assert odc_family_eval(family, 0.5) == 0.25

    def test_partial_null_identity_above_half(self):
        family = OdcFamily(kind=FamilyKind.PARTIAL_CONTACT_NULL, gamma=2.0)
        assert odc_family_eval(family, 0.7) == 0.7
        assert odc_family_eval(family, 0.5) == 0.5

    def test_partial_null_below_diagonal(self):
        family = OdcFamily(kind=FamilyKind.PARTIAL_CONTACT_NULL, gamma=0.5)
        grid = np.linspace(0.001, 0.999, 499)
        values = odc_family_eval(family, grid)
        assert np.all(values <= grid)
        assert np.all(values[grid >= 0.5] == grid[grid >= 0.5])

    def test_power_alt_above_diagonal(self):
        family = OdcFamily(kind=FamilyKind.POWER_ALT, gamma=0.25)
        grid = np.linspace(0.001, 0.999, 499)
        values = odc_family_eval(family, grid)
        assert np.all(values > grid)

    def test_normal_alt_crosses_diagonal(self):
        family = OdcFamily(kind=FamilyKind.NORMAL_SHIFT_ALT, gamma=0.3)
        assert odc_family_eval(family, 0.25) < 0.25
        assert odc_family_eval(family, 0.75) > 0.75

    def test_domain_errors(self):
        family = OdcFamily(kind=FamilyKind.POWER_NULL, gamma=1.0)
        for u in (0.0, 1.0, -0.2, 1.3):
            with pytest.raises(ValueError):
                odc_family_eval(family, u)

    def test_negative_gamma_rejected_for_one_sided_families(self):
        for kind in (FamilyKind.POWER_NULL, FamilyKind.PARTIAL_CONTACT_NULL, FamilyKind.POWER_ALT):
            with pytest.raises(ValueError):
                OdcFamily(kind=kind, gamma=-0.1)
        OdcFamily(kind=FamilyKind.NORMAL_SHIFT_ALT, gamma=-0.1)


class TestGaussianCopula:
    def test_rho_validation(self):
        with pytest.raises(ValueError):
            gaussian_copula_pair(1.0, np.random.default_rng(0))
        with pytest.raises(ValueError):
            CopulaSpec(kind=CopulaKind.GAUSSIAN, rho=-1.0)

    def test_margins_uniform(self):
        rng = np.random.default_rng(61)
        draws = np.array([gaussian_copula_pair(0.6, rng) for _ in range(20_000)])
        for col in range(2):
            assert_allclose(draws[:, col].mean(), 0.5, atol=0.01)
            assert_allclose(draws[:, col].var(), 1.0 / 12.0, atol=0.005)

    def test_zero_rho_uncorrelated(self):
        rng = np.random.default_rng(62)
        draws = np.array([gaussian_copula_pair(0.0, rng) for _ in range(20_000)])
        corr = np.corrcoef(draws[:, 0], draws[:, 1])[0, 1]
        assert abs(corr) < 0.02

    def test_underlying_normal_correlation(self):
        rng = np.random.default_rng(63)
        rho = 0.75
        draws = np.array([gaussian_copula_pair(rho, rng) for _ in range(100_000)])
        z1 = normal_quantile(draws[:, 0])
        z2 = normal_quantile(draws[:, 1])
        corr = np.corrcoef(z1, z2)[0, 1]
        assert_allclose(corr, rho, atol=0.01)


class TestGenerateDataset:
    def test_lfc_independent_uniform(self):
        spec = _spec(OdcFamily(FamilyKind.POWER_NULL, 0.0), n1=50_000, n2=50_000)
        rng = np.random.default_rng(64)
        data = generate_dataset(spec, rng)
        assert data.pairing is Pairing.INDEPENDENT
        for sample in (data.x1, data.x2):
            assert np.all((sample > 0) & (sample < 1))
            assert_allclose(sample.mean(), 0.5, atol=0.01)
            assert_allclose(sample.var(), 1.0 / 12.0, atol=0.005)

    def test_power_null_second_sample_is_squared_uniform(self):
        spec = _spec(OdcFamily(FamilyKind.POWER_NULL, 1.0), n1=200_000, n2=200_000)
        data = generate_dataset(spec, np.random.default_rng(65))
        # CDF of U^2 is sqrt(x)
        for x in (0.1, 0.3, 0.6, 0.9):
            assert_allclose(np.mean(data.x2 <= x), math.sqrt(x), atol=0.01)

    def test_matched_positive_rank_correlation(self):
        spec = _spec(
            OdcFamily(FamilyKind.POWER_NULL, 0.0),
            n1=5000,
            n2=5000,
            pairing=Pairing.MATCHED,
            rho=0.75,
        )
        data = generate_dataset(spec, np.random.default_rng(66))
        rho_s = spearmanr(data.x1, data.x2).statistic
        assert rho_s > 0.5

    def test_population_curve_matches_family(self):
        # empirical ODC of a large draw should hug the family curve
        family = OdcFamily(FamilyKind.POWER_NULL, gamma=1.0)
        spec = _spec(family, n1=100_000, n2=100_000)
        data = generate_dataset(spec, np.random.default_rng(67))
        from domtest import empirical_odc

        curve = empirical_odc(data)
        grid_idx = [9_999, 49_999, 89_999]
        for idx in grid_idx:
            u = (idx + 1) / spec.n2
            assert_allclose(curve.values[idx], odc_family_eval(family, u), atol=0.01)

    def test_scenario_validation(self):
        with pytest.raises(ValueError):
            _spec(OdcFamily(FamilyKind.POWER_NULL, 0.0), n1=3, n2=4, pairing=Pairing.MATCHED)
        with pytest.raises(ValueError):
            ScenarioSpec(
                family=OdcFamily(FamilyKind.POWER_NULL, 0.0),
                n1=3,
                n2=3,
                copula=CopulaSpec(kind=CopulaKind.GAUSSIAN, rho=0.5),
                pairing=Pairing.INDEPENDENT,
                mc_reps=5,
                bootstrap=BootstrapConfig(),
            )


class TestRejectionRate:
    def test_bit_reproducible(self):
        spec = _spec(
            OdcFamily(FamilyKind.POWER_NULL, 0.0), n1=20, n2=20, mc_reps=40, seed=5
        )
        first = rejection_rate(spec)
        second = rejection_rate(spec)
        assert first == second

    def test_replication_streams_separate(self):
        from domtest.simulate import replication_streams

        spec5 = _spec(OdcFamily(FamilyKind.POWER_NULL, 0.0), n1=20, n2=20, mc_reps=60, seed=5)
        spec6 = _spec(OdcFamily(FamilyKind.POWER_NULL, 0.0), n1=20, n2=20, mc_reps=60, seed=6)
        base = generate_dataset(spec5, replication_streams(spec5, 0)[0])
        # a different replication index and a different master seed both move the data
        other_rep = generate_dataset(spec5, replication_streams(spec5, 1)[0])
        other_seed = generate_dataset(spec6, replication_streams(spec6, 0)[0])
        assert not np.array_equal(base.x1, other_rep.x1)
        assert not np.array_equal(base.x1, other_seed.x1)
        # same index reproduces the same data
        again = generate_dataset(spec5, replication_streams(spec5, 0)[0])
        assert np.array_equal(base.x1, again.x1) and np.array_equal(base.x2, again.x2)

    def test_strong_alternative_rejects_often(self):
        spec = _spec(
            OdcFamily(FamilyKind.POWER_ALT, 0.5),
            n1=100,
            n2=100,
            mc_reps=40,
            seed=1,
            tau=0.75,
            num_reps=199,
        )
        result = rejection_rate(spec)
        assert result.rate > 0.9
        assert result.reps == 40
        assert_allclose(
            result.std_error, math.sqrt(result.rate * (1 - result.rate) / 40), rtol=1e-12
        )

    def test_null_rarely_rejects(self):
        spec = _spec(
            OdcFamily(FamilyKind.POWER_NULL, 1.0),
            n1=50,
            n2=50,
            mc_reps=60,
            seed=2,
            num_reps=199,
        )
        assert rejection_rate(spec).rate <= 0.05


class TestNormalFunctions:
    def test_cdf_examples(self):
        assert normal_cdf(0.0) == 0.5
        assert normal_quantile(0.5) == 0.0
        assert_allclose(normal_cdf(1.959964), 0.975, atol=1e-6)

    def test_cdf_against_quadrature_reference(self):
        for x in (-3.2, -1.0, -0.1, 0.0, 0.7, 1.959964, 4.5):
            assert abs(normal_cdf(x) - normal_cdf_ref(x)) <= 1e-9

    def test_quantile_against_reference(self):
        for p in (0.001, 0.1, 0.5, 0.975, 0.999):
            assert abs(normal_quantile(p) - normal_quantile_ref(p)) <= 1e-8

    def test_inverse_composition(self):
        rng = np.random.default_rng(68)
        for p in rng.uniform(1e-6, 1 - 1e-6, size=200):
            assert abs(normal_cdf(normal_quantile(float(p))) - p) <= 1e-7

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            normal_quantile(0.0)
        with pytest.raises(ValueError):
            normal_quantile(1.0)
        with pytest.raises(ValueError):
            normal_cdf(np.nan)
