import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irep._numeric import canonical_dot, canonical_norm
from irep.errors import CapacityError, DimensionError, InvalidOrderError
from irep.groups import (act, make_cyclic_group, make_group, make_torus_group, orbit,
                         torus_element, trivial_action)


def brute_cyclic_action(p, s, signal):
    """Independent oracle: circular shift by s, written with a loop."""
    out = np.empty(p)
    for j in range(p):
        out[(j + s) % p] = signal[j]
    return out


def test_trivial_cyclic_group():
    group, action = make_cyclic_group(1)
    assert group.order == 1
    assert np.array_equal(action.act(0, np.array([3.5])), [3.5])


def test_inverse_pair_in_z4():
    group, _ = make_cyclic_group(4)
    assert group.compose(1, 3) == group.identity


def test_cayley_table_is_addition_mod_6():
    group, _ = make_cyclic_group(6)
    for a in range(6):
        for b in range(6):
            assert group.cayley[a, b] == (a + b) % 6


@pytest.mark.parametrize("p", [0, -2])
def test_invalid_order(p):
    with pytest.raises(InvalidOrderError):
        make_cyclic_group(p)
    with pytest.raises(InvalidOrderError):
        make_torus_group(p)


def test_capacity_error():
    with pytest.raises(CapacityError):
        make_torus_group(300)
    with pytest.raises(CapacityError):
        make_cyclic_group(20, max_order=16)


def test_unknown_group_kind():
    with pytest.raises(ValueError):
        make_group("dihedral", 4)


@pytest.mark.parametrize("builder,p", [(make_cyclic_group, 7), (make_torus_group, 3),
                                       (make_cyclic_group, 1)])
def test_axioms_hold(builder, p):
    group, action = builder(p)
    assert all(group.check_axioms().values())
    assert action.is_homomorphism()
    assert action.is_bijective()
    assert np.array_equal(action.perms[group.identity], np.arange(action.dim))
    assert np.allclose(group.haar_weights(), 1.0 / group.order)


def test_torus_order_two_element():
    group, action = make_torus_group(2)
    assert group.order == 4
    image = np.arange(4.0)
    g = torus_element(2, 1, 1)
    assert np.array_equal(action.act(g, action.act(g, image)), image)


def test_torus_one_hot_shift():
    _, action = make_torus_group(3)
    image = np.zeros((3, 3))
    image[0, 0] = 1.0
    moved = action.act(torus_element(3, 1, 0), image.ravel()).reshape(3, 3)
    expected = np.zeros((3, 3))
    expected[1, 0] = 1.0
    assert np.array_equal(moved, expected)


def test_torus_matches_numpy_roll(rng):
    _, action = make_torus_group(5)
    image = rng.standard_normal((5, 5))
    for a in range(5):
        for b in range(5):
            moved = action.act(torus_element(5, a, b), image.ravel()).reshape(5, 5)
            assert np.array_equal(moved, np.roll(image, (a, b), axis=(0, 1)))


def test_torus_homomorphism_over_all_pairs():
    group, action = make_torus_group(3)
    signal = np.arange(9.0)
    pairs = 0
    for g in range(9):
        for h in range(9):
            lhs = action.act(g, action.act(h, signal))
            assert np.array_equal(lhs, action.act(group.compose(g, h), signal))
            pairs += 1
    assert pairs == 81


def test_act_shift_example():
    _, action = make_cyclic_group(4)
    assert np.array_equal(act(action, 1, np.array([1.0, 2, 3, 4])), [4, 1, 2, 3])


def test_act_matches_loop_oracle(rng):
    _, action = make_cyclic_group(9)
    signal = rng.standard_normal(9)
    for s in range(9):
        assert np.array_equal(action.act(s, signal), brute_cyclic_action(9, s, signal))


def test_act_identity_and_norm(rng):
    group, action = make_cyclic_group(12)
    for _ in range(100):
        signal = rng.standard_normal(12)
        g = int(rng.integers(12))
        assert np.array_equal(action.act(group.identity, signal), signal)
        assert canonical_norm(action.act(g, signal)) == canonical_norm(signal)
        assert np.isclose(np.linalg.norm(action.act(g, signal)), np.linalg.norm(signal))


def test_act_errors():
    _, action = make_cyclic_group(4)
    with pytest.raises(IndexError):
        action.act(4, np.zeros(4))
    with pytest.raises(DimensionError):
        action.act(0, np.zeros(5))


def test_orbit_examples():
    _, action = make_cyclic_group(3)
    assert np.array_equal(orbit(action, np.array([1.0, 0, 0])), np.eye(3))
    const = np.full(3, 2.0)
    assert np.all(action.orbit(const) == const)


def test_trivial_action():
    group, action = trivial_action(5)
    assert group.order == 1 and action.dim == 5


@settings(max_examples=50, deadline=None)
@given(p=st.integers(1, 12), g=st.integers(0, 200), h=st.integers(0, 200),
       seed=st.integers(0, 2**32 - 1))
def test_composition_property(p, g, h, seed):
    group, action = make_cyclic_group(p)
    g, h = g % p, h % p
    signal = np.random.default_rng(seed).standard_normal(p)
    assert np.array_equal(action.act(g, action.act(h, signal)),
                          action.act(group.compose(g, h), signal))


@settings(max_examples=50, deadline=None)
@given(p=st.integers(1, 5), g=st.integers(0, 100), seed=st.integers(0, 2**32 - 1))
def test_orbit_multiset_property(p, g, seed):
    _, action = make_torus_group(p)
    g %= action.order
    signal = np.random.default_rng(seed).standard_normal(action.dim)
    a = np.sort(action.orbit(signal).view([("", float)] * action.dim), axis=0)
    b = np.sort(action.orbit(action.act(g, signal)).view([("", float)] * action.dim), axis=0)
    assert np.array_equal(a, b)


@settings(max_examples=50, deadline=None)
@given(p=st.integers(1, 10), g=st.integers(0, 100), seed=st.integers(0, 2**32 - 1))
def test_unitarity_property(p, g, seed):
    group, action = make_cyclic_group(p)
    g %= p
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal((2, p))
    assert canonical_dot(action.act(g, x), y) == canonical_dot(x, action.act(group.inv(g), y))
