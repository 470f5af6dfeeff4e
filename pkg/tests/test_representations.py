import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irep.errors import DimensionError
from irep.groups import make_cyclic_group, make_torus_group, trivial_action
from irep.pooling import BinGrid, cdf_vector, moment_vector, moments_from_cdf
from irep.representations import (PoolingConfig, RepMatrix, TemplateBank, normalize,
                                  orbit_equivalent, orbit_projections, project_orbit,
                                  projection_table, represent, represent_many, sample_templates)


def loop_projections(signal, template, action):
    """Oracle: sorted <I, g t> over the group, by explicit loops."""
    values = []
    for g in range(action.order):
        moved = action.act(g, template)
        values.append(sum(float(a) * float(b) for a, b in zip(signal, moved)))
    return np.sort(values)


def test_templates_unit_norm_and_deterministic():
    a = sample_templates(12, 40, seed=5)
    b = sample_templates(12, 40, seed=5)
    assert np.all(np.abs(np.linalg.norm(a.templates, axis=1) - 1) <= 1e-12)
    assert np.array_equal(a.templates, b.templates)
    assert not np.array_equal(a.templates, sample_templates(12, 40, seed=6).templates)


def test_templates_nearly_orthogonal_in_high_dimension():
    bank = sample_templates(256, 1000, seed=0)
    gram = bank.templates @ bank.templates.T
    off = np.abs(gram[np.triu_indices(1000, 1)])
    assert off.mean() < 0.1


@pytest.mark.parametrize("d,k", [(0, 3), (3, 0)])
def test_template_sampling_errors(d, k):
    with pytest.raises(ValueError):
        sample_templates(d, k, seed=0)


def test_bank_dimension_mismatch():
    _, action = make_cyclic_group(4)
    with pytest.raises(DimensionError):
        sample_templates(5, 2, 0, action)
    with pytest.raises(DimensionError):
        TemplateBank(np.ones((2, 3)), action)


def test_expanded_orbits(torus4):
    _, action = torus4
    bank = sample_templates(16, 3, 1, action)
    for i in range(3):
        for g in range(16):
            assert np.array_equal(bank.expanded[i, g], action.act(g, bank.templates[i]))


def test_project_orbit_examples():
    _, action = make_cyclic_group(4)
    bank = TemplateBank(np.array([[1.0, 0, 0, 0]]), action)
    assert np.array_equal(project_orbit(np.array([1.0, 0, 0, 0]), bank, 0).values, [0, 0, 0, 1])
    _, trivial = trivial_action(3)
    t = normalize(np.array([1.0, 2.0, 2.0]))
    assert np.allclose(project_orbit(t, TemplateBank(t[None], trivial), 0).values, [1.0])
    zeros = project_orbit(np.array([0.0, 0, 0, 0]), bank, 0).values
    assert np.array_equal(zeros, np.zeros(4))


def test_project_orbit_errors():
    _, action = make_cyclic_group(4)
    bank = sample_templates(4, 2, 0, action)
    with pytest.raises(DimensionError):
        project_orbit(np.zeros(5), bank, 0)
    with pytest.raises(IndexError):
        project_orbit(np.zeros(4), bank, 2)


def test_projections_match_loop_oracle(z8, rng):
    _, action = z8
    bank = sample_templates(8, 4, 3, action)
    signal = rng.standard_normal(8)
    for i in range(4):
        assert np.allclose(project_orbit(signal, bank, i).values,
                           loop_projections(signal, bank.templates[i], action), atol=1e-14)


def test_template_form_equals_signal_form(z16, rng):
    """Averaging over g of <g I, t> and of <I, g^-1 t> use the same multiset."""
    group, action = z16
    bank = sample_templates(16, 5, 2, action)
    signal = rng.standard_normal(16)
    moved_signals = action.orbit(signal)  # (N, d)
    for i in range(5):
        signal_form = np.sort(moved_signals @ bank.templates[i])
        table = projection_table(signal, bank)[i]
        template_form = np.sort(table[group.inverse])
        assert np.allclose(signal_form, template_form, atol=1e-14)


def test_fast_path_close_to_exact(torus4, rng):
    _, action = torus4
    bank = sample_templates(16, 6, 0, action)
    signals = rng.standard_normal((5, 16))
    assert np.allclose(projection_table(signals, bank, exact=False),
                       projection_table(signals, bank), atol=1e-12)


def test_normalize_zero_signal():
    assert np.array_equal(normalize(np.zeros(3)), np.zeros(3))
    assert np.isclose(np.linalg.norm(normalize(np.array([3.0, 4.0]))), 1.0)


@pytest.mark.parametrize("kind", ["cdf", "sigmoid", "moments"])
def test_exact_invariance(kind, torus4, rng):
    _, action = torus4
    bank = sample_templates(16, 8, 4, action)
    pooling = PoolingConfig(kind=kind, slope=50.0)
    signals = rng.standard_normal((10, 16))
    base = represent_many(signals, bank, pooling)
    for g in range(action.order):
        assert np.array_equal(represent_many(action.act(g, signals), bank, pooling), base)


def test_constant_signal_is_single_step(z8):
    _, action = z8
    bank = sample_templates(8, 4, 0, action)
    rep = represent(np.ones(8), bank, PoolingConfig(bins=64)).values
    for row in rep:
        assert set(np.unique(row)) <= {0.0, 1.0}
        assert np.all(np.diff(row) >= 0)


def test_distinct_orbits_give_distinct_reps(z8, rng):
    _, action = z8
    bank = sample_templates(8, 16, 0, action)
    a, b = rng.standard_normal((2, 8))
    assert not orbit_equivalent(normalize(a), normalize(b), action)
    assert not np.array_equal(represent(a, bank).values, represent(b, bank).values)


def test_trivial_group_rep_is_projection_summary(rng):
    _, action = trivial_action(6)
    bank = sample_templates(6, 5, 0, action)
    signal = normalize(rng.standard_normal(6))
    grid = BinGrid.uniform(32)
    expected = cdf_vector((bank.templates @ signal)[:, None], grid)
    assert np.array_equal(represent(signal, bank).values, expected)


def test_moments_rep_consistent_with_cdf_route(z16, rng):
    _, action = z16
    bank = sample_templates(16, 4, 0, action)
    signal = normalize(rng.standard_normal(16))
    proj = orbit_projections(signal, bank)
    assert np.allclose(moment_vector(proj, 6), moments_from_cdf(proj, 6), atol=1e-9)


def test_orbit_equivalent_examples(rng):
    _, action = make_cyclic_group(4)
    signal = np.array([1.0, 2, 3, 4])
    assert orbit_equivalent(signal, signal, action, tol=0)
    assert orbit_equivalent(signal, np.array([3.0, 4, 1, 2]), action)
    generic = rng.standard_normal(4)
    bumped = generic.copy()
    bumped[1] += 1e-6
    assert not orbit_equivalent(generic, bumped, action, tol=1e-9)
    with pytest.raises(DimensionError):
        orbit_equivalent(signal, np.zeros(3), action)


def test_rep_matrix_roundtrip(z8, rng):
    _, action = z8
    bank = sample_templates(8, 3, 0, action)
    rep = represent(rng.standard_normal(8), bank, PoolingConfig(bins=8))
    back = RepMatrix.from_json(rep.to_json())
    assert np.array_equal(back.values, rep.values)
    assert back.metadata == json.loads(json.dumps(rep.metadata))
    lines = rep.to_csv().split("\r\n")
    assert lines[0].startswith("template,c0") and len(lines) == 3 + 2


def test_pooling_config_validation():
    with pytest.raises(ValueError):
        PoolingConfig(kind="median")


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), g=st.integers(0, 15),
       kind=st.sampled_from(["cdf", "sigmoid", "moments"]))
def test_invariance_property(seed, g, kind):
    _, action = make_cyclic_group(16)
    rng = np.random.default_rng(seed)
    bank = sample_templates(16, 6, rng.integers(1 << 30), action)
    signal = rng.standard_normal(16)
    pooling = PoolingConfig(kind=kind)
    assert np.array_equal(represent(action.act(g, signal), bank, pooling).values,
                          represent(signal, bank, pooling).values)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), a=st.integers(0, 3), b=st.integers(0, 3))
def test_orbit_equivalence_property(seed, a, b):
    _, action = make_torus_group(4)
    signal = np.random.default_rng(seed).standard_normal(16)
    assert orbit_equivalent(signal, action.act(a * 4 + b, signal), action, tol=0)
