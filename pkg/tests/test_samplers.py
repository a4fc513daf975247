import numpy as np
import pytest

from quantum_mlp.src.core import SamplerError, ShapeMismatchError
from quantum_mlp.src.ebm import EbmModel, exact_conditional
from quantum_mlp.src.sampling import (ExactSampler, GibbsSampler, IsingModel, SampleSet, Sampler, SamplerConfig,
                                      SimAnnealSampler, bqm_to_ising, build_conditional_bqm,
                                      estimate_effective_beta, get_sampler, gibbs_transition_matrix,
                                      ising_boltzmann)
from tests.conftest import random_parameters

READS = 100_000
ALL_SAMPLERS = [ExactSampler(), GibbsSampler(), SimAnnealSampler()]


def _config(**kwargs):
    defaults = {"reads": READS, "seed": 1234, "num_sweeps": 200, "burn_in": 100}
    defaults.update(kwargs)
    return SamplerConfig(**defaults)


@pytest.mark.parametrize("sampler", ALL_SAMPLERS, ids=lambda s: s.name)
def test_zero_model_is_uniform(sampler):
    model = EbmModel.zeros(3, 2, 1)
    samples = sampler.sample(model, np.ones(3), _config())
    assert samples.total_reads == READS
    assert samples.total_variation(np.full(8, 1.0 / 8)) < 0.02


def test_gibbs_matches_exact(small_ebm):
    x = np.array([0.3, 0.8, 0.5])
    target = exact_conditional(small_ebm, x).probabilities
    samples = GibbsSampler().sample(small_ebm, x, _config())
    assert samples.total_variation(target) < 0.02
    assert samples.metadata["sampler"] == "gibbs"
    assert samples.metadata["chains"] == READS


def test_sim_anneal_recovers_conditional(small_ebm):
    x = np.array([0.3, 0.8, 0.5])
    target = exact_conditional(small_ebm, x).probabilities
    samples = SimAnnealSampler().sample(small_ebm, x, _config(beta_eff=16.0))
    assert samples.metadata["clamped"] == 0
    assert samples.metadata["beta_sim"] == 16.0
    assert samples.total_variation(target) < 0.05


def _eight_unit_model():
    # K=6, M=2; độ lệch ±2.5 làm phân phối tập trung vào ít trạng thái
    base = random_parameters(EbmModel, 4, 6, 2, seed=21)
    signs = np.random.default_rng(22).choice([-1.0, 1.0], size=8)
    return EbmModel(W1=base.W1, W2=base.W2, b=base.b + 2.5 * signs[:6], c=base.c + 2.5 * signs[6:])


def test_gibbs_matches_exact_with_eight_units():
    model = _eight_unit_model()
    x = np.array([0.1, 0.9, 0.4, 0.6])
    target = exact_conditional(model, x).probabilities
    assert target.shape == (256,)
    samples = GibbsSampler().sample(model, x, _config())
    assert samples.total_reads == READS
    assert samples.total_variation(target) < 0.02


def test_sim_anneal_matches_exact_with_eight_units():
    model = _eight_unit_model()
    x = np.array([0.1, 0.9, 0.4, 0.6])
    target = exact_conditional(model, x).probabilities
    samples = SimAnnealSampler().sample(model, x, _config(beta_eff=16.0))
    assert samples.metadata["clamped"] == 0
    assert samples.total_variation(target) < 0.05


def test_gibbs_transition_preserves_exact_distribution(small_ebm):
    tol = 1e-10
    x = np.array([0.9, 0.1, 0.4])
    T = gibbs_transition_matrix(small_ebm, x)
    pi = exact_conditional(small_ebm, x).probabilities
    assert np.max(np.abs(T.sum(axis=1) - 1.0)) < tol
    assert np.max(np.abs(pi @ T - pi)) < tol


@pytest.mark.parametrize("sampler", ALL_SAMPLERS, ids=lambda s: s.name)
def test_seeded_sampling_is_deterministic(sampler, small_ebm):
    x = np.array([0.2, 0.4, 0.6])
    config = _config(reads=500, num_sweeps=50, burn_in=10)
    first = sampler.sample(small_ebm, x, config)
    second = sampler.sample(small_ebm, x, config)
    assert np.array_equal(first.assignments, second.assignments)
    assert np.array_equal(first.counts, second.counts)
    assert first.metadata["seed"] == 1234
    assert first.total_reads == 500
    assert len({tuple(row) for row in first.assignments}) == len(first.assignments)


def test_gibbs_thinning_and_chains(small_ebm):
    config = _config(reads=101, chains=10, thin=3, burn_in=5)
    samples = GibbsSampler().sample(small_ebm, np.zeros(3), config)
    assert samples.total_reads == 101
    assert samples.metadata["chains"] == 10
    assert samples.k.shape[1] == 2 and samples.y.shape[1] == 1


def test_sim_anneal_reports_clamping():
    model = EbmModel(W1=[[40.0]], W2=[[30.0]], b=[0.0], c=[-50.0])
    samples = SimAnnealSampler().sample(model, np.array([1.0]), _config(reads=20, beta_eff=1.0, num_sweeps=20))
    assert samples.metadata["clamped"] > 0


def test_sim_anneal_schedule():
    schedule = SimAnnealSampler().schedule(_config(beta_start=0.1, beta_eff=16.0, num_sweeps=5))
    assert schedule[0] == pytest.approx(0.1)
    assert schedule[-1] == pytest.approx(16.0)
    assert np.all(np.diff(schedule) > 0)


def test_sampler_validates_input(small_ebm):
    with pytest.raises(ShapeMismatchError):
        GibbsSampler().sample(small_ebm, np.zeros(4), _config(reads=10))


class _ShortSampler(Sampler):
    name = "short"

    def _draw(self, model, x, config, seed):
        return np.zeros((config.reads - 1, model.n_hidden + model.n_outputs)), {}


class _BrokenSampler(Sampler):
    name = "broken"

    def _draw(self, model, x, config, seed):
        raise RuntimeError("thiết bị không phản hồi")


def test_sampler_contract_errors(small_ebm):
    with pytest.raises(SamplerError):
        _ShortSampler().sample(small_ebm, np.zeros(3), _config(reads=10))
    with pytest.raises(SamplerError, match="không phản hồi"):
        _BrokenSampler().sample(small_ebm, np.zeros(3), _config(reads=10))
    with pytest.raises(SamplerError):
        SampleSet.from_samples(np.array([[0, 2]]), n_hidden=1)


def test_sampler_registry():
    assert isinstance(get_sampler("gibbs"), GibbsSampler)
    assert isinstance(get_sampler("sim-anneal"), SimAnnealSampler)
    with pytest.raises(ValueError):
        get_sampler("qpu")


def test_sampler_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(beta_eff=0.0)
    with pytest.raises(ValueError):
        SamplerConfig(beta_start=1.0, beta_sim=0.5)
    assert SamplerConfig(reads=10, chains=50).num_chains == 10
    assert SamplerConfig(beta_eff=8.0).final_beta == 8.0
    assert SamplerConfig().with_seed(3).seed == 3


def test_effective_beta_estimate():
    rng = np.random.default_rng(6)
    n = 6
    ising = IsingModel(h=rng.normal(0.0, 0.5, n), J=np.triu(rng.normal(0.0, 0.5, (n, n)), 1))
    states, probs = ising_boltzmann(ising, beta=2.0)
    spins = states[rng.choice(len(states), size=20_000, p=probs)]
    estimate = estimate_effective_beta(ising, spins)
    assert abs(estimate - 2.0) < 0.2


def test_effective_beta_from_sample_set():
    model = random_parameters(EbmModel, 2, 2, 1, seed=9)
    x = np.array([0.5, 0.5])
    ising = bqm_to_ising(build_conditional_bqm(model, x, beta_eff=1.0))
    samples = ExactSampler().sample(model, x, _config(reads=50_000))
    assert abs(estimate_effective_beta(ising, samples) - 1.0) < 0.1


def test_effective_beta_without_excitations():
    ising = IsingModel(h=[1.0, 1.0], J=np.zeros((2, 2)))
    assert estimate_effective_beta(ising, np.ones((10, 2))) == float("inf")
