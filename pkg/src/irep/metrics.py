"""Kolmogorov-Smirnov orbit metrics and template-sampling concentration.

The sliced distance between two signals averages, over templates, the KS
distance between their projection laws. With finitely many random
templates the average is a Monte-Carlo estimate of the integral over the
sphere; Hoeffding's inequality plus a union bound over the ``n(n-1)/2``
pairs says ``k >= 2/(c eps^2) log(n/delta)`` templates keep every pair within
``eps`` of the truth.
"""

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import ConfigError, DimensionError, EmptyInputError
from .groups import make_cyclic_group
from .representations import TemplateBank, normalize, orbit_equivalent, orbit_projections

TRIANGLE_TOL = 1e-12


def _as_values(p):
    values = np.asarray(getattr(p, "values", p), dtype=float)
    if values.shape[-1] == 0:
        raise EmptyInputError("KS distance of an empty sample")
    return values


def ks_distance(p, q):
    """Exact sup-distance between two empirical CDFs.

    ``p`` and ``q`` are projection multisets (``OrbitProjection`` or arrays).
    Leading axes broadcast, so ``(k, N)`` inputs give ``k`` distances. The
    two samples are merged, CDF differences are accumulated in integer units
    of ``1/(Np*Nq)``, and only positions after the last of a run of tied
    values are compared. No binning is involved.
    """
    a = _as_values(p)
    b = _as_values(q)
    na, nb = a.shape[-1], b.shape[-1]
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    a = np.broadcast_to(a, shape + (na,))
    b = np.broadcast_to(b, shape + (nb,))
    merged = np.concatenate([a, b], axis=-1)
    steps = np.concatenate([np.full(na, nb, dtype=np.int64), np.full(nb, -na, dtype=np.int64)])
    order = np.argsort(merged, axis=-1, kind="stable")
    sorted_vals = np.take_along_axis(merged, order, axis=-1)
    walk = np.cumsum(steps[order], axis=-1)
    last_of_run = np.ones(sorted_vals.shape, dtype=bool)
    last_of_run[..., :-1] = sorted_vals[..., 1:] != sorted_vals[..., :-1]
    gap = np.max(np.where(last_of_run, np.abs(walk), 0), axis=-1)
    out = gap / (na * nb)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class SlicedDistanceReport:
    d_hat: float
    per_template: np.ndarray = field(repr=False)
    k: int
    reference: float = None


def _prepare(signal, other, bank, normalized):
    signal = np.asarray(signal, dtype=float)
    other = np.asarray(other, dtype=float)
    if signal.shape != other.shape or signal.shape[-1] != bank.dim:
        raise DimensionError("signals must share the bank dimension")
    if normalized:
        signal, other = normalize(signal), normalize(other)
    return signal, other


def sliced_distance(signal, other, bank, normalized=True, reference_bank=None):
    """Template-averaged KS distance ``d_hat(I, I')``.

    If ``reference_bank`` is given, the same quantity on that (larger) bank
    is reported as ``reference``.
    """
    signal, other = _prepare(signal, other, bank, normalized)
    proj = orbit_projections(np.stack([signal, other]), bank)
    per_template = ks_distance(proj[0], proj[1])
    reference = None
    if reference_bank is not None:
        reference = sliced_distance(signal, other, reference_bank, normalized=False).d_hat
    return SlicedDistanceReport(float(np.mean(per_template)), per_template, bank.k, reference)


def distance_matrix(signals, bank, normalized=True):
    """All pairwise sliced distances, shape ``(n, n)``."""
    signals = np.asarray(signals, dtype=float)
    if normalized:
        signals = normalize(signals)
    proj = orbit_projections(signals, bank)
    n = len(signals)
    out = np.zeros((n, n))
    for i, j in combinations(range(n), 2):
        out[i, j] = out[j, i] = np.mean(ks_distance(proj[i], proj[j]))
    return out


@dataclass(frozen=True)
class PseudoMetricReport:
    distances: np.ndarray = field(repr=False)
    n_pairs: int
    n_triples: int
    symmetry_violations: int
    triangle_violations: int
    max_triangle_excess: float
    zero_equivalence_mismatches: int
    mismatched_pairs: list = field(default_factory=list)


def pseudo_metric_check(signals, bank, normalized=True, tol=1e-9):
    """Audit the sliced distance on a set of signals.

    Symmetry is checked by evaluating both argument orders. The triangle
    inequality is checked for every unordered triple in all three roles.
    ``d_hat == 0`` is compared with the brute-force orbit oracle on every
    pair; with finitely many templates this can only be expected to agree
    when ``k`` is large.
    """
    signals = np.asarray(signals, dtype=float)
    if len(signals) < 3:
        raise ValueError("need at least 3 signals")
    prepared = normalize(signals) if normalized else signals
    proj = orbit_projections(prepared, bank)
    n = len(signals)
    dist = np.zeros((n, n))
    symmetry = 0
    for i, j in combinations(range(n), 2):
        forward = float(np.mean(ks_distance(proj[i], proj[j])))
        backward = float(np.mean(ks_distance(proj[j], proj[i])))
        symmetry += forward != backward
        dist[i, j], dist[j, i] = forward, backward
    triangle = 0
    excess = 0.0
    n_triples = 0
    for i, j, m in combinations(range(n), 3):
        n_triples += 1
        worst = max(dist[i, m] - dist[i, j] - dist[j, m],
                    dist[i, j] - dist[i, m] - dist[m, j],
                    dist[j, m] - dist[j, i] - dist[i, m])
        excess = max(excess, worst)
        triangle += worst > TRIANGLE_TOL
    mismatched = []
    for i, j in combinations(range(n), 2):
        zero = dist[i, j] == 0.0
        if zero != orbit_equivalent(prepared[i], prepared[j], bank.action, tol):
            mismatched.append((i, j))
    return PseudoMetricReport(dist, n * (n - 1) // 2, n_triples, int(symmetry), int(triangle),
                              float(excess), len(mismatched), mismatched)


def bound_k(n, epsilon, delta, c=1.0):
    """Smallest integer ``k >= 2/(c eps^2) log(n/delta)``, at least 1."""
    if epsilon <= 0 or delta <= 0 or c <= 0 or n < 1:
        raise ConfigError("need epsilon, delta, c > 0 and n >= 1")
    return max(1, math.ceil(2.0 / (c * epsilon ** 2) * math.log(n / delta)))


@dataclass(frozen=True)
class ConcentrationReport:
    n: int
    k: int
    epsilon: float
    delta: float
    c: float
    bound_k: int
    k_ref: int
    violation_fraction: float
    max_deviation: float
    rms_deviation: float
    pairs: list = field(repr=False, default_factory=list)

    @property
    def allowed_fraction(self):
        return self.delta ** 2 + 0.02

    @property
    def passed(self):
        """Contract: when ``k`` meets the bound, at most ``delta^2 + 0.02`` violate."""
        return self.k < self.bound_k or self.violation_fraction <= self.allowed_fraction


def _pairwise_template_sums(signals, action, k, seed, chunk):
    """Sum over ``k`` fresh templates of per-template KS, for every pair."""
    n = len(signals)
    iu, ju = np.triu_indices(n, 1)
    totals = np.zeros(len(iu))
    rng = np.random.default_rng(seed)
    d = action.dim
    for start in range(0, k, chunk):
        size = min(chunk, k - start)
        raw = rng.standard_normal((size, d))
        bank = TemplateBank(raw / np.linalg.norm(raw, axis=1, keepdims=True), action)
        proj = orbit_projections(signals, bank)
        totals += ks_distance(proj[iu], proj[ju]).sum(axis=-1)
    return iu, ju, totals


def concentration_experiment(n=20, k=None, epsilon=0.1, delta=0.1, k_ref=None, seed=0,
                             action=None, c=1.0, signals=None, chunk=2048):
    """Compare the ``k``-template estimate with a ``k_ref``-template reference.

    ``n`` random signals (or the given ``signals``) are drawn; every pair is
    scored with both banks, which are independent. ``k`` defaults to the
    bound and ``k_ref`` to ``50 k``.
    """
    if action is None:
        _, action = make_cyclic_group(16)
    required = bound_k(n, epsilon, delta, c)
    k = required if k is None else int(k)
    k_ref = 50 * k if k_ref is None else int(k_ref)
    if k < 1:
        raise ConfigError("k must be positive")
    if k_ref <= k:
        raise ConfigError(f"reference bank size {k_ref} must exceed k={k}")
    signal_seed, ref_seed, est_seed = np.random.SeedSequence(seed).spawn(3)
    if signals is None:
        signals = np.random.default_rng(signal_seed).standard_normal((n, action.dim))
    signals = normalize(np.asarray(signals, dtype=float))
    if len(signals) != n:
        raise ConfigError("number of signals does not match n")
    if n < 2:
        raise ConfigError("need n >= 2")
    iu, ju, ref_sum = _pairwise_template_sums(signals, action, k_ref, ref_seed, chunk)
    _, _, est_sum = _pairwise_template_sums(signals, action, k, est_seed, chunk)
    d_ref = ref_sum / k_ref
    d_hat = est_sum / k
    deviation = np.abs(d_ref - d_hat)
    pairs = [(int(i), int(j), float(a), float(b), float(e))
             for i, j, a, b, e in zip(iu, ju, d_ref, d_hat, deviation)]
    return ConcentrationReport(
        n=n, k=k, epsilon=epsilon, delta=delta, c=c, bound_k=required, k_ref=k_ref,
        violation_fraction=float(np.mean(deviation > epsilon)),
        max_deviation=float(deviation.max()),
        rms_deviation=float(np.sqrt(np.mean(deviation ** 2))),
        pairs=pairs,
    )

