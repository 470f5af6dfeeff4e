"""Pooling nonlinearities and summaries of one-dimensional projection laws.

A projection law is the multiset of values ``<I, g t>`` over the group. Every
summary here is a group average ``(1/N) sum_g eta(v_g)`` for some ``eta``:
the Heaviside step gives the CDF, absolute powers give moments.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from ._numeric import canonical_mean
from .errors import EmptyInputError

NONLINEARITY_KINDS = ("threshold", "exceed", "sigmoid", "abs_power", "identity")


@dataclass(frozen=True)
class Nonlinearity:
    """Pointwise nonlinearity ``eta``.

    ``threshold(b)`` is ``H(b - a)`` with ``H(0) = 1``, the CDF convention.
    ``exceed(b)`` is its complement ``[a > b]``; it vanishes at zero for
    ``b >= 0``, which the localization results need. ``sigmoid(b, slope)`` is
    the smooth surrogate of ``threshold(b)``.
    """

    kind: str
    b: float = 0.0
    slope: float = 1.0
    r: int = 1

    def __post_init__(self):
        if self.kind not in NONLINEARITY_KINDS:
            raise ValueError(f"unknown nonlinearity {self.kind!r}")
        if self.kind == "abs_power" and (int(self.r) != self.r or self.r < 1):
            raise ValueError("abs_power needs a positive integer exponent")

    @classmethod
    def threshold(cls, b):
        return cls("threshold", b=float(b))

    @classmethod
    def exceed(cls, b):
        return cls("exceed", b=float(b))

    @classmethod
    def sigmoid(cls, b, slope):
        return cls("sigmoid", b=float(b), slope=float(slope))

    @classmethod
    def abs_power(cls, r):
        return cls("abs_power", r=int(r))

    @classmethod
    def identity(cls):
        return cls("identity")

    def __call__(self, a):
        a = np.asarray(a, dtype=float)
        if self.kind == "threshold":
            out = (a <= self.b).astype(float)
        elif self.kind == "exceed":
            out = (a > self.b).astype(float)
        elif self.kind == "sigmoid":
            out = expit(self.slope * (self.b - a))
        elif self.kind == "abs_power":
            out = np.abs(a) ** self.r
        else:
            out = a.copy()
        return out if out.ndim else float(out)

    @property
    def vanishes_at_zero(self):
        return float(self(0.0)) == 0.0


def apply(eta, a):
    return eta(a)


@dataclass(frozen=True)
class BinGrid:
    """Strictly increasing thresholds ``b_1 < ... < b_B``."""

    thresholds: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.asarray(self.thresholds, dtype=float).ravel()
        if t.size == 0:
            raise EmptyInputError("bin grid needs at least one threshold")
        if np.any(np.diff(t) <= 0):
            raise ValueError("thresholds must be strictly increasing")
        t.setflags(write=False)
        object.__setattr__(self, "thresholds", t)

    @classmethod
    def uniform(cls, bins=32, range=1.0):
        return cls(np.linspace(-range, range, bins))

    def __len__(self):
        return self.thresholds.size

    def histogram(self, cdf):
        """Cell masses of ``(-inf, b_1], (b_1, b_2], ..., (b_B, inf)``."""
        cdf = np.asarray(cdf, dtype=float)
        zeros = np.zeros(cdf.shape[:-1] + (1,))
        ones = np.ones(cdf.shape[:-1] + (1,))
        return np.diff(np.concatenate([zeros, cdf, ones], axis=-1), axis=-1)


def _values(proj):
    values = getattr(proj, "values", proj)
    values = np.asarray(values, dtype=float)
    if values.shape[-1] == 0:
        raise EmptyInputError("projection multiset is empty")
    return values


def cdf_vector(proj, grid):
    """Empirical CDF of a projection multiset sampled on ``grid``.

    Accepts an :class:`~irep.representations.OrbitProjection` or an array
    whose last axis holds the ``N`` values; leading axes are batched.
    Counts are integers, so the result does not depend on value order.
    """
    values = _values(proj)
    counts = np.count_nonzero(values[..., None, :] <= grid.thresholds[:, None], axis=-1)
    return counts / values.shape[-1]


def pooled_average(proj, eta):
    """``(1/N) sum_g eta(v_g)``, summed in sorted order."""
    return canonical_mean(eta(_values(proj)), axis=-1)


def sigmoid_cdf_vector(proj, grid, slope):
    """Smooth surrogate of :func:`cdf_vector` with sigmoid steps."""
    values = _values(proj)
    steps = expit(slope * (grid.thresholds[:, None] - values[..., None, :]))
    return canonical_mean(steps, axis=-1)


def moment_vector(proj, R):
    """Truncated absolute moments ``m_r = mean |v|^r`` for ``r = 1..R``."""
    if int(R) != R or R < 1:
        raise ValueError(f"moment order must be a positive integer, got {R!r}")
    values = _values(proj)
    powers = np.abs(values)[..., None, :] ** np.arange(1, int(R) + 1)[:, None]
    return canonical_mean(powers, axis=-1)


def moments_from_cdf(proj, R):
    """Moments obtained by integrating against the step CDF.

    ``E|X|^r = sum over jumps of |x|^r * (F(x) - F(x-))``. Used as the
    independent route in consistency checks.
    """
    values = np.sort(_values(proj), axis=-1)
    out = np.empty(values.shape[:-1] + (int(R),))
    for idx in np.ndindex(values.shape[:-1]):
        row = values[idx]
        atoms, counts = np.unique(row, return_counts=True)
        cdf = np.cumsum(counts) / row.size
        jumps = np.diff(np.concatenate([[0.0], cdf]))
        for r in range(1, int(R) + 1):
            out[idx + (r - 1,)] = float(np.dot(np.abs(atoms) ** r, jumps))
    return out
