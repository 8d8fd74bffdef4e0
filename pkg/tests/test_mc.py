import math

import numpy as np
import pytest

from rfim1d import (DisorderField, RunConfig, SpinConfiguration, Volume,
                    disorder_sweep, exact_gibbs_marginal, hamiltonian,
                    local_field, metropolis_run, peierls_decomposition_check)
from rfim1d import mc as mc_module
from rfim1d.model import batch_h0, enumerate_spins


class TestRunConfig:
    def test_defaults_valid(self):
        cfg = RunConfig()
        assert cfg.volume().n_sites == cfg.size
        assert 0 in cfg.volume()

    @pytest.mark.parametrize("kwargs", [
        {"size": 0},
        {"sweeps": 10, "burnin": 10},
        {"realizations": 0},
        {"boundary": 2},
        {"occupancy_stride": 0},
    ])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            RunConfig(**kwargs)


class TestLocalField:
    def test_matches_hamiltonian_difference(self, spec):
        vol = Volume.centered(9)
        rng = np.random.default_rng(3)
        h = DisorderField.generate(vol, 0.3, seed=8)
        for _ in range(5):
            sigma = SpinConfiguration(vol, rng.choice([-1, 1], size=9).astype(np.int8))
            for i in (vol.lo, -1, 0, vol.hi):
                de = local_field(spec, sigma, h, 0.3, i)
                direct = (hamiltonian(spec, sigma.flipped(i), h, 0.3)
                          - hamiltonian(spec, sigma, h, 0.3))
                assert de == pytest.approx(direct, abs=1e-9)

    def test_flip_back_negates(self, spec):
        vol = Volume.centered(7)
        sigma = SpinConfiguration.from_minus_sites(vol, [0, 2])
        de = local_field(spec, sigma, None, 0.0, 2)
        back = local_field(spec, sigma.flipped(2), None, 0.0, 2)
        assert de == pytest.approx(-back, abs=1e-12)

    def test_all_plus_closed_form(self, spec):
        vol = Volume.centered(7)
        sigma = SpinConfiguration.homogeneous(vol, +1)
        expected = 2.0 * (sum(spec.coupling(abs(j)) for j in vol.sites() if j != 0)
                          + spec.boundary_field(0, vol))
        assert local_field(spec, sigma, None, 0.0, 0) == pytest.approx(expected, abs=1e-9)


def run_small(beta, theta, seed=11, sweeps=6000, **kwargs):
    cfg = RunConfig(alpha=0.55, beta=beta, theta=theta, size=10, sweeps=sweeps,
                    burnin=sweeps // 6, seed=seed, realizations=1, **kwargs)
    vol = cfg.volume()
    h = DisorderField.generate(vol, theta, seed=seed + 1)
    return cfg, h, metropolis_run(cfg, h, chain_seed=seed + 2)


class TestMetropolis:
    def test_infinite_temperature(self):
        _, _, res = run_small(0.0, 0.0)
        assert res.estimate == pytest.approx(0.5, abs=3.0 * max(res.stderr, 0.01))

    def test_matches_exact_marginal(self):
        for beta, theta in [(0.05, 0.2), (0.1, 0.4)]:
            cfg, h, res = run_small(beta, theta)
            exact = exact_gibbs_marginal(cfg.coupling_spec(), cfg.volume(), h,
                                         theta, beta, 0)
            assert abs(res.estimate - exact) <= 3.0 * max(res.stderr, 0.01)

    def test_strong_coupling_plus_boundary(self):
        _, _, res = run_small(5.0, 0.0, sweeps=600)
        assert res.estimate < 1e-3

    def test_reproducible(self):
        _, _, a = run_small(0.08, 0.3, sweeps=800)
        _, _, b = run_small(0.08, 0.3, sweeps=800)
        assert a == b

    def test_no_decomposition_violations(self):
        for beta in (0.0, 0.1):
            _, _, res = run_small(beta, 0.3, sweeps=2000)
            assert res.violations == 0
            assert res.estimate <= res.occupancy + 1e-12

    def test_volume_mismatch_rejected(self):
        cfg = RunConfig(size=10, sweeps=100, burnin=10)
        h = DisorderField.generate(Volume(0, 4), cfg.theta, seed=0)
        with pytest.raises(ValueError):
            metropolis_run(cfg, h)

    def test_lazy_coupling_path_matches_exact(self, monkeypatch):
        # force the on-the-fly coupling branch and compare to the oracle
        monkeypatch.setattr(mc_module, "DENSE_COUPLING_LIMIT", 4)
        cfg, h, res = run_small(0.05, 0.2)
        exact = exact_gibbs_marginal(cfg.coupling_spec(), cfg.volume(), h, 0.2, 0.05, 0)
        assert abs(res.estimate - exact) <= 3.0 * max(res.stderr, 0.01)


class TestStationaryDistribution:
    def test_empirical_state_frequencies(self):
        # chi-square sanity check on a 4-site chain against exact Gibbs weights
        n, beta, theta = 4, 0.2, 0.3
        cfg = RunConfig(size=n, beta=beta, theta=theta, sweeps=1, burnin=0, seed=0)
        vol = cfg.volume()
        spec = cfg.coupling_spec()
        h = DisorderField.generate(vol, theta, seed=4)
        jm = spec.coupling_matrix(vol)
        bv = spec.boundary_vector(vol)
        s = np.ones(n)
        m = jm @ s
        energy = 0.0
        rng = np.random.default_rng(123)
        sweeps, burnin = 40_000, 2_000
        counts = np.zeros(2 ** n)
        for sweep in range(sweeps):
            energy, _ = mc_module._sweep_dense(
                s, m, jm, bv, h.values, theta, beta, 1.0,
                rng.permutation(n), rng.random(n), energy)
            if sweep >= burnin:
                code = sum(1 << k for k in range(n) if s[k] > 0)
                counts[code] += 1
        energies = batch_h0(spec, vol, enumerate_spins(n))
        energies -= theta * (enumerate_spins(n).astype(float) @ h.values)
        log_w = -beta * energies
        probs = np.exp(log_w - log_w.max())
        probs /= probs.sum()
        expected = probs * counts.sum()
        # generous chi-square threshold; sweeps are correlated samples
        chi2 = float(np.sum((counts - expected) ** 2 / np.maximum(expected, 1.0)))
        assert chi2 < 40.0 * (2 ** n - 1)


class TestDisorderSweep:
    def test_report_fields(self):
        cfg = RunConfig(size=10, beta=0.1, theta=0.2, sweeps=400, burnin=100,
                        seed=5, realizations=3)
        rep = disorder_sweep(cfg)
        assert len(rep.chains) == 3
        assert 0.0 <= rep.estimate <= 1.0
        assert rep.stderr >= 0.0
        assert rep.reference_100 == pytest.approx(math.exp(-rep.b_bar / 100.0))
        assert rep.reference_200 == pytest.approx(math.exp(-rep.b_bar / 200.0))
        d = rep.to_dict()
        assert d["config"]["seed"] == 5
        assert len(rep.csv_rows()) == 3

    def test_reproducible(self):
        cfg = RunConfig(size=10, beta=0.1, theta=0.2, sweeps=300, burnin=50,
                        seed=5, realizations=2)
        assert disorder_sweep(cfg) == disorder_sweep(cfg)

    def test_jobs_do_not_change_result(self):
        cfg = RunConfig(size=10, beta=0.1, theta=0.2, sweeps=300, burnin=50,
                        seed=5, realizations=4)
        assert disorder_sweep(cfg, jobs=1) == disorder_sweep(cfg, jobs=4)

    def test_distinct_fields_per_realization(self):
        cfg = RunConfig(size=10, beta=0.1, theta=0.2, sweeps=300, burnin=50,
                        seed=5, realizations=4)
        rep = disorder_sweep(cfg)
        assert len({c.field_seed for c in rep.chains}) == 4


class TestDecompositionCheck:
    def test_all_plus_sample(self):
        vol = Volume.centered(8)
        check = peierls_decomposition_check([SpinConfiguration.homogeneous(vol, +1)])
        assert check.minus_frequency == 0.0
        assert check.contour_frequency == 0.0
        assert check.passed

    def test_minus_origin_is_covered(self):
        vol = Volume.centered(8)
        samples = [SpinConfiguration.from_minus_sites(vol, [0]),
                   SpinConfiguration.from_minus_sites(vol, [0, 1]),
                   SpinConfiguration.from_minus_sites(vol, [-2, 0, 3])]
        check = peierls_decomposition_check(samples)
        assert check.violations == 0
        assert check.minus_frequency <= check.contour_frequency
