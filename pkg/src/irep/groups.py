"""Finite Abelian groups acting on signals by coordinate permutations.

Elements are dense integer indices ``0..N-1``. Composition and inversion are
table lookups, and the Haar measure is the uniform weight ``1/N``. Only
permutation actions are supported: they are exactly unitary in floating
point, so invariance statements can be checked without tolerance.

>>> group, action = make_cyclic_group(4)
>>> action.act(1, [1.0, 2.0, 3.0, 4.0])
array([4., 1., 2., 3.])
>>> group.compose(1, 3) == group.identity
True
"""

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DimensionError, InvalidOrderError

DEFAULT_MAX_ORDER = 65536


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Group given by its Cayley table.

    Parameters
    ----------
    cayley : ndarray of int, shape (N, N)
        ``cayley[g, h]`` is the index of ``g∘h``.
    inverse : ndarray of int, shape (N,)
    identity : int
    name : str
    """

    cayley: np.ndarray
    inverse: np.ndarray
    identity: int
    name: str = ""

    def __post_init__(self):
        for arr in (self.cayley, self.inverse):
            arr.setflags(write=False)

    @property
    def order(self):
        return self.cayley.shape[0]

    def compose(self, g, h):
        return int(self.cayley[g, h])

    def inv(self, g):
        return int(self.inverse[g])

    def haar_weights(self):
        return np.full(self.order, 1.0 / self.order)

    def translate(self, base, members):
        """Left coset-like translate ``{base∘g : g in members}``."""
        return self.cayley[base, np.asarray(members, dtype=int)]

    def is_abelian(self):
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def check_axioms(self):
        """Exhaustively verify the group axioms on the tables.

        Returns a dict of booleans, one per axiom. Associativity is checked
        over all ``N**3`` triples, so keep ``N`` modest (a few hundred).
        """
        n = self.order
        c = self.cayley
        idx = np.arange(n)
        closure = bool(c.min() >= 0 and c.max() < n)
        identity = bool(np.array_equal(c[self.identity], idx)
                        and np.array_equal(c[:, self.identity], idx))
        inverses = bool(np.all(c[idx, self.inverse] == self.identity)
                        and np.all(c[self.inverse, idx] == self.identity))
        # c[c][g, h, k] = (g h) k and c[:, c][g, h, k] = g (h k)
        associative = bool(np.array_equal(c[c], c[:, c]))
        latin = bool(all(len(set(row)) == n for row in c))
        return {
            "closure": closure,
            "identity": identity,
            "inverses": inverses,
            "associative": associative,
            "latin_square": latin,
            "abelian": self.is_abelian(),
        }


@dataclass(frozen=True, eq=False)
class GroupAction:
    """Permutation action of a finite group on ``R^dim``.

    ``perms[g]`` is a gather index: ``act(g, I) == I[perms[g]]``.
    """

    group: FiniteGroup
    perms: np.ndarray

    def __post_init__(self):
        self.perms.setflags(write=False)

    @property
    def dim(self):
        return self.perms.shape[1]

    @property
    def order(self):
        return self.group.order

    def _check_signal(self, signal):
        signal = np.asarray(signal, dtype=float)
        if signal.shape[-1] != self.dim:
            raise DimensionError(
                f"signal has dimension {signal.shape[-1]}, action expects {self.dim}")
        return signal

    def _check_element(self, g):
        if not 0 <= int(g) < self.order:
            raise IndexError(f"group element {g} out of range for order {self.order}")
        return int(g)

    def act(self, g, signal):
        """Return ``g·signal``. Works on the last axis, so batches are fine."""
        signal = self._check_signal(signal)
        return signal[..., self.perms[self._check_element(g)]]

    def orbit(self, signal):
        """All transforms of ``signal``, shape ``(N, ..., dim)``, in element order."""
        signal = self._check_signal(signal)
        return np.stack([signal[..., p] for p in self.perms])

    def is_homomorphism(self):
        # act(g, act(h, x)) = x[perms[h]][perms[g]] = x[perms[h][perms[g]]]
        c = self.group.cayley
        n = self.order
        for g in range(n):
            composed = self.perms[:, self.perms[g]]  # row h -> perms[h][perms[g]]
            if not np.array_equal(composed, self.perms[c[g]]):
                return False
        return True

    def is_bijective(self):
        ref = np.arange(self.dim)
        return all(np.array_equal(np.sort(p), ref) for p in self.perms)


def act(action, g, signal):
    return action.act(g, signal)


def orbit(action, signal):
    return action.orbit(signal)


def _check_order(p):
    if int(p) != p or p < 1:
        raise InvalidOrderError(f"group parameter must be a positive integer, got {p!r}")
    return int(p)


def make_cyclic_group(p, max_order=DEFAULT_MAX_ORDER):
    """Z_p acting on R^p by circular shifts.

    Element ``s`` shifts a signal ``s`` places to the right:
    ``(s·I)[j] = I[(j - s) mod p]``.
    """
    p = _check_order(p)
    if p > max_order:
        raise CapacityError(f"order {p} exceeds maximum {max_order}")
    idx = np.arange(p)
    cayley = (idx[:, None] + idx[None, :]) % p
    inverse = (-idx) % p
    perms = (idx[None, :] - idx[:, None]) % p
    group = FiniteGroup(cayley, inverse, 0, name=f"Z{p}")
    return group, GroupAction(group, perms)


def make_torus_group(p, max_order=DEFAULT_MAX_ORDER):
    """Z_p × Z_p acting on p×p images (row-major) by 2D circular shifts.

    Element ``(a, b)`` has index ``a*p + b`` and moves pixel ``(r, c)`` to
    ``((r + a) mod p, (c + b) mod p)``.
    """
    p = _check_order(p)
    n = p * p
    if n > max_order:
        raise CapacityError(f"order {n} = {p}^2 exceeds maximum {max_order}")
    a, b = np.divmod(np.arange(n), p)
    cayley = ((a[:, None] + a[None, :]) % p) * p + (b[:, None] + b[None, :]) % p
    inverse = ((-a) % p) * p + (-b) % p
    r, c = np.divmod(np.arange(n), p)
    perms = ((r[None, :] - a[:, None]) % p) * p + (c[None, :] - b[:, None]) % p
    group = FiniteGroup(cayley, inverse, 0, name=f"Z{p}xZ{p}")
    return group, GroupAction(group, perms)


def torus_element(p, a, b):
    """Index of the shift ``(a, b)`` in :func:`make_torus_group`."""
    return (a % p) * p + (b % p)


def trivial_action(dim):
    """The one-element group acting on R^dim."""
    group = FiniteGroup(np.zeros((1, 1), dtype=int), np.zeros(1, dtype=int), 0, name="trivial")
    return group, GroupAction(group, np.arange(dim)[None, :])


def make_group(kind, p, max_order=DEFAULT_MAX_ORDER):
    """Build a group and action from config parameters."""
    if kind == "cyclic":
        return make_cyclic_group(p, max_order)
    if kind == "torus":
        return make_torus_group(p, max_order)
    raise ValueError(f"unknown group kind {kind!r}")
