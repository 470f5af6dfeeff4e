import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irep.errors import IrepError
from irep.groups import make_cyclic_group, trivial_action
from irep.hierarchy import (DistributionKernel, EmbeddedRep, SecondLayerTemplate, embed_layer1,
                            gram_matrix, kernel_eval, kernel_pseudometric, layer2_responses,
                            make_layer2_templates, min_gram_eigenvalue, second_layer_measurement)
from irep.pog import full_window, shift_window
from irep.pooling import BinGrid, Nonlinearity, cdf_vector
from irep.representations import normalize, sample_templates

# identity eta, tau = Q(I)/|Q(I)|, full second window; cross-checked with a loop oracle
GOLDEN_LAYER2_IDENTITY = 2.598407160448887


def random_histograms(rng, count, cells):
    return rng.dirichlet(np.ones(cells), size=count)


@pytest.fixture
def setup_z8():
    group, action = make_cyclic_group(8)
    bank = sample_templates(8, 4, 21, action)
    return group, action, bank, BinGrid.uniform(16), shift_window(group, 3)


def test_kernel_examples():
    hell = DistributionKernel.hellinger()
    p = np.array([0.2, 0.3, 0.5])
    assert kernel_eval(hell, p, p) == pytest.approx(1.0, abs=1e-15)
    gauss = DistributionKernel.mean_embedding(1.0)
    assert kernel_eval(gauss, np.zeros(1), np.zeros(1)) == 1.0
    assert kernel_eval(gauss, np.zeros(1), np.ones(1)) == pytest.approx(math.exp(-0.5), abs=1e-15)
    assert kernel_eval(gauss, np.zeros(1), np.ones(1)) == pytest.approx(0.6065, abs=1e-4)


def test_kernel_errors():
    with pytest.raises(IrepError):
        kernel_eval(DistributionKernel.hellinger(), np.ones(3) / 3, np.ones(4) / 4)
    with pytest.raises(ValueError):
        DistributionKernel.mean_embedding(0.0)
    with pytest.raises(ValueError):
        DistributionKernel("energy")


def test_pseudometric_examples():
    hell = DistributionKernel.hellinger()
    p = np.array([0.5, 0.5, 0.0, 0.0])
    q = np.array([0.0, 0.0, 0.25, 0.75])
    assert kernel_pseudometric(hell, p, p) == 0.0
    assert kernel_pseudometric(hell, p, q) == pytest.approx(math.sqrt(2), abs=1e-15)


def test_hellinger_on_projection_laws(rng):
    grid = BinGrid.uniform(8)
    kern = DistributionKernel.hellinger(grid)
    a, b = rng.uniform(-1, 1, (2, 16))
    assert kernel_eval(kern, a, a) == pytest.approx(1.0)
    assert kernel_eval(kern, a, b) == kernel_eval(kern, b, a)


def test_triangle_on_random_histograms(rng):
    hist = random_histograms(rng, 150, 12)
    kern = DistributionKernel.hellinger()
    for t in range(50):
        p, q, r = hist[3 * t: 3 * t + 3]
        assert kernel_pseudometric(kern, p, r) <= (kernel_pseudometric(kern, p, q)
                                                   + kernel_pseudometric(kern, q, r) + 1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), sigma=st.floats(0.05, 2.0))
def test_gram_psd_property(seed, sigma):
    rng = np.random.default_rng(seed)
    laws = [rng.uniform(-1, 1, 8) for _ in range(12)]
    gram = gram_matrix(DistributionKernel.mean_embedding(sigma), laws)
    assert np.array_equal(gram, gram.T)
    assert min_gram_eigenvalue(DistributionKernel.mean_embedding(sigma), laws) >= -1e-9
    hists = list(random_histograms(rng, 12, 9))
    assert min_gram_eigenvalue(DistributionKernel.hellinger(), hists) >= -1e-9


def test_full_window_rows_identical(setup_z8, rng):
    group, action, bank, grid, _ = setup_z8
    rep = embed_layer1(rng.standard_normal(8), bank, full_window(group), grid).values
    assert all(np.array_equal(rep[0], rep[g]) for g in range(8))


def test_layer1_covariance(setup_z8, rng):
    group, action, bank, grid, window = setup_z8
    signal = rng.standard_normal(8)
    base = embed_layer1(signal, bank, window, grid)
    for g in range(8):
        moved = embed_layer1(action.act(g, signal), bank, window, grid)
        assert np.array_equal(moved.values, base.values[group.cayley[group.inv(g)]])


def test_trivial_group_single_cdf(rng):
    group, action = trivial_action(4)
    bank = sample_templates(4, 1, 0, action)
    grid = BinGrid.uniform(10)
    signal = normalize(rng.standard_normal(4))
    rep = embed_layer1(signal, bank, full_window(group), grid).values
    assert rep.shape == (1, 1, 10)
    value = float(bank.templates[0] @ signal)
    assert np.array_equal(rep[0, 0], cdf_vector(np.array([value]), grid))


def test_embedded_inner_product_and_action(setup_z8, rng):
    group, action, bank, grid, window = setup_z8
    rep = embed_layer1(rng.standard_normal(8), bank, window, grid)
    assert rep.norm ** 2 == pytest.approx(np.sum(rep.values ** 2) / 32, rel=1e-14)
    assert np.array_equal(rep.act(3).values, rep.values[(np.arange(8) + 3) % 8])
    # the action is unitary for the layer-1 inner product
    assert rep.act(5).norm == rep.norm


def test_second_layer_invariance(setup_z8, rng):
    group, action, bank, grid, window = setup_z8
    samples = rng.standard_normal((6, 8))
    taus = make_layer2_templates(3, 4, bank, window, grid, samples)
    w2 = full_window(group)
    for eta in (Nonlinearity.threshold(0.5), Nonlinearity.sigmoid(0.5, 10.0),
                Nonlinearity.identity()):
        for signal in rng.standard_normal((4, 8)):
            ref = second_layer_measurement(signal, bank, window, w2, taus[0], eta, grid)
            for g in range(8):
                moved = second_layer_measurement(action.act(g, signal), bank, window, w2, taus[0],
                                                 eta, grid)
                assert abs(moved - ref) <= 1e-12


def test_second_layer_identity_fixture(setup_z8):
    group, action, bank, grid, window = setup_z8
    signal = np.random.default_rng(5).standard_normal(8)
    embedded = embed_layer1(signal, bank, window, grid)
    tau = SecondLayerTemplate(embedded.values / embedded.norm, group)
    w2 = full_window(group)
    eta = Nonlinearity.identity()
    value = second_layer_measurement(signal, bank, window, w2, tau, eta, grid)
    # loop oracle: (1/N) sum_h (1/(N k)) sum_{gbar, i, j} Q[gbar] tau[h + gbar]
    Q, T = embedded.values, tau.values
    oracle = np.mean([np.sum(Q * T[(np.arange(8) + h) % 8]) / 32 for h in range(8)])
    assert value == pytest.approx(oracle, abs=1e-12)
    assert value == pytest.approx(GOLDEN_LAYER2_IDENTITY, abs=1e-12)
    for g in range(8):
        moved = second_layer_measurement(action.act(g, signal), bank, window, w2, tau, eta, grid)
        assert moved == pytest.approx(GOLDEN_LAYER2_IDENTITY, abs=1e-12)


def test_trivial_group_second_layer(rng):
    group, action = trivial_action(5)
    bank = sample_templates(5, 3, 0, action)
    grid = BinGrid.uniform(8)
    window = full_window(group)
    signal = rng.standard_normal(5)
    raw = np.abs(rng.standard_normal((1, 3, 8)))
    tau = SecondLayerTemplate(raw / np.sqrt(np.sum(raw ** 2) / 3), group)
    eta = Nonlinearity.sigmoid(0.3, 4.0)
    embedded = embed_layer1(signal, bank, window, grid)
    value = second_layer_measurement(signal, bank, window, window, tau, eta, grid)
    assert value == eta(embedded.inner(tau.values))
    direct = eta(np.sum(embed_layer1(signal, bank, window, grid).values * tau.values) / 3)
    assert value == pytest.approx(direct, abs=1e-12)


def test_layer2_templates(setup_z8, rng):
    group, action, bank, grid, window = setup_z8
    samples = rng.standard_normal((5, 8))
    a = make_layer2_templates(7, 3, bank, window, grid, samples)
    b = make_layer2_templates(7, 3, bank, window, grid, samples)
    assert len(a) == 3
    for tau in a:
        embedded = EmbeddedRep(tau.values, group)
        assert abs(embedded.norm - 1) <= 1e-12
    assert all(np.array_equal(x.values, y.values) for x, y in zip(a, b))
    for i in range(3):
        for j in range(i + 1, 3):
            assert not np.array_equal(a[i].values, a[j].values)


def test_layer2_template_errors(setup_z8):
    group, action, bank, grid, window = setup_z8
    with pytest.raises(IrepError):
        make_layer2_templates(0, 1, bank, window, grid, np.zeros((0, 8)))
    with pytest.raises(IrepError):
        make_layer2_templates(0, 3, bank, window, grid, np.ones((2, 8)))
    with pytest.raises(IrepError):
        make_layer2_templates(0, 1, bank, window, BinGrid([-0.5]), np.zeros((1, 8)))
    with pytest.raises(IrepError):
        SecondLayerTemplate(np.ones((8, 4, 16)) * 2, group)


def test_layer2_responses_length(setup_z8, rng):
    group, action, bank, grid, window = setup_z8
    taus = make_layer2_templates(0, 1, bank, window, grid, rng.standard_normal((1, 8)))
    embedded = embed_layer1(rng.standard_normal(8), bank, window, grid)
    assert layer2_responses(embedded, taus[0], window).shape == (3,)
