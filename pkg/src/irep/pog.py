"""Local group averages over a window ``G0`` of the group.

A window is a set of group elements seen from one base point. Averaging
over ``gbar G0`` instead of the whole group gives measurements that are only
locally invariant, and the collection over all base points ``gbar`` is
covariant.

Conventions. The template is the transformed object, ``<I, g t>``. Then
``<g~ I, g t> = <I, g~^-1 g t>``, so transforming the input moves the
window from ``G0`` to ``g~^-1 G0`` and the tensor satisfies
``pog(g~ I)[gbar] == pog(I)[g~^-1 gbar]``. All local averages carry the
``1/V`` normalization, so every slice is a probability CDF and the full
window reduces to the global representation.
"""

from dataclasses import dataclass, field

import numpy as np

from ._numeric import canonical_dot, canonical_mean
from .errors import EmptyInputError
from .groups import make_cyclic_group
from .pooling import Nonlinearity, cdf_vector
from .representations import normalize, projection_table


@dataclass(frozen=True, eq=False)
class PogWindow:
    """A nonempty subset ``G0`` of group elements."""

    group: object = field(repr=False)
    members: np.ndarray
    descriptor: str = ""

    def __post_init__(self):
        members = np.unique(np.asarray(self.members, dtype=int))
        if members.size == 0:
            raise EmptyInputError("window has no elements")
        if members[0] < 0 or members[-1] >= self.group.order:
            raise IndexError("window element out of range")
        mask = np.zeros(self.group.order, dtype=bool)
        mask[members] = True
        members.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "_mask", mask)

    @property
    def size(self):
        return self.members.size

    def __contains__(self, g):
        return bool(self._mask[g])

    def translate(self, base):
        """Elements of ``base∘G0``."""
        return self.group.translate(base, self.members)

    def symmetric_difference(self, g_tilde):
        """``g~^-1 G0  Δ  G0``: where the two windows of a local average disagree."""
        moved = set(self.translate(self.group.inv(g_tilde)).tolist())
        return np.array(sorted(moved.symmetric_difference(self.members.tolist())), dtype=int)


def full_window(group):
    return PogWindow(group, np.arange(group.order), "full")


def shift_window(group, width, start=0):
    """Contiguous shifts ``[start, start + width)`` of a cyclic group."""
    members = (start + np.arange(width)) % group.order
    return PogWindow(group, members, f"shifts[{start},{start + width})")


def rect_window(group, p, rows, cols):
    """Shifts ``(a, b)`` with ``0 <= a < rows`` and ``0 <= b < cols`` on a p×p torus."""
    a, b = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
    members = ((a % p) * p + (b % p)).ravel()
    return PogWindow(group, members, f"rect[{rows}x{cols}]")


def _template_table(signal, template, action):
    """``<I, g t>`` for every group element, exact."""
    return canonical_dot(np.asarray(signal, dtype=float)[None, :], action.orbit(template))


def pog_measurement(signal, template, action, window, eta, base=None):
    """``(1/V) sum_{g in base∘G0} eta(<I, g t>)``."""
    base = action.group.identity if base is None else base
    values = _template_table(signal, template, action)[window.translate(base)]
    return float(canonical_mean(eta(values)))


@dataclass(frozen=True)
class LocalizationReport:
    satisfied: bool
    max_violation: float
    checked: np.ndarray = field(repr=False)


def localization_check(signal, template, action, window, g_tilde, eta, tol=0.0):
    """Check that ``eta(<I, g t>)`` vanishes where the windows differ.

    Only the symmetric difference of ``G0`` and the window seen by the
    transformed input is inspected (the weak form of the condition).
    """
    where = window.symmetric_difference(g_tilde)
    if where.size == 0:
        return LocalizationReport(True, 0.0, where)
    values = np.abs(eta(_template_table(signal, template, action)[where]))
    worst = float(np.max(values))
    return LocalizationReport(worst <= tol, worst, where)


def local_invariance_gap(signal, template, action, window, g_tilde, eta):
    """``|psi(I) - psi(g~ I)|`` for the window average at the identity."""
    before = pog_measurement(signal, template, action, window, eta)
    after = pog_measurement(action.act(g_tilde, signal), template, action, window, eta)
    return abs(before - after)


def local_invariance_theorem_check(signal, template, action, window, g_tilde, eta, tol=1e-12):
    """Localization implies ``psi(I) == psi(g~ I)``.

    Returns ``False`` only for a counterexample: the condition holds but the
    measurements differ by more than ``tol``. When the condition fails
    nothing is claimed and the result is ``True``.
    """
    report = localization_check(signal, template, action, window, g_tilde, eta)
    if not report.satisfied:
        return True
    return local_invariance_gap(signal, template, action, window, g_tilde, eta) <= tol


@dataclass(frozen=True)
class PogTensor:
    """Local CDFs, ``values[gbar, i, j]`` for base point, template and threshold."""

    values: np.ndarray
    window: PogWindow = field(repr=False)
    thresholds: np.ndarray = field(repr=False)

    def rows(self):
        n, k, b = self.values.shape
        for g in range(n):
            for i in range(k):
                for j in range(b):
                    yield g, i, j, float(self.values[g, i, j])


def pog_table(signal, bank, window, grid, normalized=True):
    """The ``(N, k, B)`` array of local CDFs; see :func:`pog_represent`."""
    signal = np.asarray(signal, dtype=float)
    if normalized:
        signal = normalize(signal)
    table = projection_table(signal, bank)  # (k, N), element order
    cosets = window.group.cayley[:, window.members]  # (N, V)
    local = np.moveaxis(table[:, cosets], 0, 1)  # (N, k, V)
    return cdf_vector(local, grid)


def pog_represent(signal, bank, window, grid, normalized=True):
    """CDF of ``<I, g t_i>`` over ``g in gbar G0``, for every ``gbar`` and ``i``."""
    return PogTensor(pog_table(signal, bank, window, grid, normalized), window, grid.thresholds)


def covariance_error(signal, g_tilde, bank, window, grid, normalized=True):
    """``max |pog(g~ I)[gbar] - pog(I)[g~^-1 gbar]|`` over all entries."""
    group = window.group
    moved = pog_table(bank.action.act(g_tilde, signal), bank, window, grid, normalized)
    base = pog_table(signal, bank, window, grid, normalized)
    shifted = base[group.cayley[group.inv(g_tilde)]]
    return float(np.max(np.abs(moved - shifted)))


def covariance_check(signal, g_tilde, bank, window, grid, normalized=True):
    return {"max_error": covariance_error(signal, g_tilde, bank, window, grid, normalized)}


def localized_triple(rng, order, max_support=4, min_width=6):
    """Draw ``(signal, template, action, window, g~, eta)`` on Z_order.

    Signal and template are positive on short contiguous supports. The
    result is not guaranteed to satisfy the localization condition; callers
    filter with :func:`localization_check`.
    """
    group, action = make_cyclic_group(order)
    a, c = rng.integers(1, max_support + 1, size=2)
    signal = np.zeros(order)
    template = np.zeros(order)
    start = rng.integers(0, order)
    signal[(start + np.arange(a)) % order] = rng.uniform(0.1, 1.0, a)
    template[np.arange(c)] = rng.uniform(0.1, 1.0, c)
    width = int(rng.integers(min_width, order // 2 + 1))
    window = shift_window(group, width)
    shift = int(rng.integers(1, width // 2 + 1)) * (1 if rng.random() < 0.5 else -1)
    choice = rng.integers(0, 3)
    if choice == 0:
        eta = Nonlinearity.identity()
    elif choice == 1:
        eta = Nonlinearity.abs_power(int(rng.integers(1, 4)))
    else:
        eta = Nonlinearity.exceed(float(rng.uniform(0.0, 0.3)))
    return signal, template, action, window, shift % order, eta


def localized_corpus(count, order, seed, max_attempts=100_000):
    """``count`` nontrivial instances that satisfy the localization condition."""
    rng = np.random.default_rng(seed)
    corpus = []
    for _ in range(max_attempts):
        signal, template, action, window, g_tilde, eta = localized_triple(rng, order)
        if not localization_check(signal, template, action, window, g_tilde, eta).satisfied:
            continue
        if pog_measurement(signal, template, action, window, eta) == 0.0:
            continue
        corpus.append((signal, template, action, window, g_tilde, eta))
        if len(corpus) == count:
            return corpus
    raise RuntimeError(f"found only {len(corpus)} localized instances in {max_attempts} draws")
