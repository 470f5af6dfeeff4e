"""Kernels on projection laws and a two-layer invariant architecture.

Layer 1 maps a signal to local CDFs indexed by base point and template
(:func:`irep.pog.pog_table`). Each CDF vector is the explicit feature map
``x -> (H(b_j - x))_j`` averaged over the local law, i.e. a mean embedding,
so the layer-1 output lives in a finite-dimensional Hilbert space with

    <h, h'> = 1/(N k) * sum_{g, i} <h[g, i], h'[g, i]>.

The group acts on that space by moving the base-point index,
``(g h)[gbar] = h[g∘gbar]``. A second layer correlates the layer-1 output
with transformed copies of a unit-norm template ``tau`` and pools, exactly
as the first layer does with signals.
"""

from dataclasses import dataclass, field

import numpy as np

from ._numeric import canonical_mean, canonical_sum
from .errors import IrepError
from .pog import pog_table
from .pooling import BinGrid, cdf_vector

NORM_TOL = 1e-12


@dataclass(frozen=True)
class DistributionKernel:
    """Positive definite kernel between probability laws on the line.

    ``"hellinger"`` compares cell masses on a shared grid with
    ``sum sqrt(p q)``. ``"mean_embedding"`` is
    ``mean_{a, b} exp(-(v_a - w_b)^2 / (2 sigma^2))``.
    """

    kind: str
    sigma: float = 0.2
    grid: BinGrid = None

    def __post_init__(self):
        if self.kind not in ("hellinger", "mean_embedding"):
            raise ValueError(f"unknown kernel {self.kind!r}")
        if self.kind == "mean_embedding" and not self.sigma > 0:
            raise ValueError("sigma must be positive")

    @classmethod
    def hellinger(cls, grid=None):
        return cls("hellinger", grid=grid)

    @classmethod
    def mean_embedding(cls, sigma=0.2):
        return cls("mean_embedding", sigma=float(sigma))


def as_histogram(law, grid):
    """Cell masses of a projection multiset on ``grid`` (``B + 1`` cells)."""
    return grid.histogram(cdf_vector(law, grid))


def _values(x):
    return np.asarray(getattr(x, "values", x), dtype=float)


def kernel_eval(kernel, p, q):
    """``K(p, q)`` for two laws.

    For the Hellinger kernel, ``p`` and ``q`` are histograms of equal length,
    or projection multisets when ``kernel.grid`` is set.
    """
    p, q = _values(p), _values(q)
    if kernel.kind == "hellinger":
        if kernel.grid is not None:
            p, q = as_histogram(p, kernel.grid), as_histogram(q, kernel.grid)
        if p.shape != q.shape:
            raise IrepError(f"histogram grids differ: {p.shape} vs {q.shape}")
        return float(np.sum(np.sqrt(p * q)))
    gauss = np.exp(-((p[:, None] - q[None, :]) ** 2) / (2 * kernel.sigma ** 2))
    return float(gauss.mean())


def kernel_pseudometric(kernel, p, q):
    """``sqrt(max(0, K(p,p) + K(q,q) - 2 K(p,q)))``."""
    sq = kernel_eval(kernel, p, p) + kernel_eval(kernel, q, q) - 2 * kernel_eval(kernel, p, q)
    return float(np.sqrt(max(0.0, sq)))


def gram_matrix(kernel, laws):
    n = len(laws)
    gram = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            gram[i, j] = gram[j, i] = kernel_eval(kernel, laws[i], laws[j])
    return gram


def min_gram_eigenvalue(kernel, laws):
    return float(np.linalg.eigvalsh(gram_matrix(kernel, laws)).min())


def inner(h, other):
    """Layer-1 inner product of two ``(N, k, B)`` arrays."""
    h = np.asarray(h, dtype=float)
    other = np.asarray(other, dtype=float)
    n, k = h.shape[:2]
    return float(canonical_sum((h * other).ravel())) / (n * k)


def norm(h):
    return float(np.sqrt(inner(h, h)))


@dataclass(frozen=True)
class EmbeddedRep:
    """Layer-1 output ``Q(I)``: one CDF vector per base point and template."""

    values: np.ndarray
    group: object = field(repr=False)

    def inner(self, other):
        return inner(self.values, getattr(other, "values", other))

    @property
    def norm(self):
        return norm(self.values)

    def act(self, g):
        """``(g Q)[gbar] = Q[g∘gbar]``."""
        return EmbeddedRep(self.values[self.group.cayley[g]], self.group)


@dataclass(frozen=True)
class SecondLayerTemplate:
    """Unit-norm element of the layer-1 space."""

    values: np.ndarray
    group: object = field(repr=False)

    def __post_init__(self):
        if abs(norm(self.values) - 1.0) > NORM_TOL:
            raise IrepError(f"second-layer template has norm {norm(self.values)!r}, expected 1")

    def act(self, g):
        return self.values[self.group.cayley[g]]


def embed_layer1(signal, bank, window, grid, normalized=True):
    return EmbeddedRep(pog_table(signal, bank, window, grid, normalized), window.group)


def layer2_responses(embedded, tau, window):
    """``<Q, g tau>`` for every ``g`` in the layer-2 window."""
    return np.array([embedded.inner(tau.act(g)) for g in window.members])


def second_layer_measurement(signal, bank, w1, w2, tau, eta, grid, normalized=True):
    """``(1/|w2|) sum_{g in w2} eta(<Q(I), g tau>)``."""
    embedded = embed_layer1(signal, bank, w1, grid, normalized)
    return float(canonical_mean(eta(layer2_responses(embedded, tau, w2))))


def make_layer2_templates(seed, count, bank, w1, grid, sample_signals, normalized=True):
    """Normalized layer-1 embeddings of ``count`` sample signals chosen by ``seed``."""
    sample_signals = np.asarray(sample_signals, dtype=float)
    if len(sample_signals) == 0:
        raise IrepError("no sample signals")
    if count > len(sample_signals):
        raise IrepError(f"asked for {count} templates from {len(sample_signals)} samples")
    chosen = np.random.default_rng(seed).choice(len(sample_signals), size=count, replace=False)
    out = []
    for idx in chosen:
        embedded = embed_layer1(sample_signals[idx], bank, w1, grid, normalized)
        size = embedded.norm
        if size == 0:
            raise IrepError("sample signal has a zero layer-1 embedding")
        out.append(SecondLayerTemplate(embedded.values / size, w1.group))
    return out
