"""Orbit projections and invariant CDF / moment representations.

The representation of a signal ``I`` against template ``t`` is computed from
the orbit of the template, ``{g t : g in G}``: project ``I`` on every
transformed copy and summarize the resulting multiset. Since
``<g I, t> = <I, g^-1 t>``, the multiset does not change when ``I`` is
transformed, which is the whole invariance argument.
"""

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from ._numeric import canonical_dot, canonical_norm
from .errors import DimensionError, EmptyInputError
from .groups import trivial_action
from .pooling import BinGrid, cdf_vector, moment_vector, sigmoid_cdf_vector

EXACT_TOL = 1e-9
SMOOTH_TOL = 1e-6

# signals per chunk on the exact path; bounds the (chunk, k, N, d) buffer
_EXACT_BUFFER = 2_000_000


@dataclass(frozen=True, eq=False)
class TemplateBank:
    """Unit-norm templates together with their full orbits.

    Attributes
    ----------
    templates : ndarray, shape (k, d)
    expanded : ndarray, shape (k, N, d)
        ``expanded[i, g] == action.act(g, templates[i])``.
    action : GroupAction
    """

    templates: np.ndarray = field(repr=False)
    action: object = field(repr=False)
    expanded: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        templates = np.atleast_2d(np.asarray(self.templates, dtype=float))
        if templates.shape[1] != self.action.dim:
            raise DimensionError(
                f"templates have dimension {templates.shape[1]}, action expects {self.action.dim}")
        expanded = templates[:, self.action.perms]
        templates.setflags(write=False)
        expanded.setflags(write=False)
        object.__setattr__(self, "templates", templates)
        object.__setattr__(self, "expanded", expanded)

    @property
    def k(self):
        return self.templates.shape[0]

    @property
    def dim(self):
        return self.templates.shape[1]

    @property
    def order(self):
        return self.action.order

    def subset(self, index):
        return TemplateBank(self.templates[index], self.action)


def sample_templates(d, k, seed, action=None):
    """Draw ``k`` i.i.d. uniform unit vectors in ``R^d``.

    Gaussian draws are normalized, which gives the uniform law on the sphere.
    The orbit of each template under ``action`` (trivial group if omitted)
    is precomputed.
    """
    if d < 1 or k < 1:
        raise ValueError(f"need d >= 1 and k >= 1, got d={d}, k={k}")
    if action is None:
        _, action = trivial_action(d)
    elif action.dim != d:
        raise DimensionError(f"action dimension {action.dim} != {d}")
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((k, d))
    templates = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    return TemplateBank(templates, action)


def normalize(signal):
    """Scale to unit norm. The zero signal is returned unchanged."""
    signal = np.asarray(signal, dtype=float)
    norm = canonical_norm(signal)[..., None]
    return np.divide(signal, norm, out=signal.copy(), where=norm > 0)


@dataclass(frozen=True)
class OrbitProjection:
    """Sorted projection values ``<I, g t_i>`` over the whole group."""

    template_index: int
    values: np.ndarray

    def __post_init__(self):
        values = np.sort(np.asarray(self.values, dtype=float))
        if values.size == 0:
            raise EmptyInputError("projection multiset is empty")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size


def _check_dim(signal, bank):
    signal = np.asarray(signal, dtype=float)
    if signal.shape[-1] != bank.dim:
        raise DimensionError(f"signal dimension {signal.shape[-1]} != bank dimension {bank.dim}")
    return signal


def projection_table(signal, bank, exact=True):
    """``<I, g t_i>`` in element order, shape ``(..., k, N)``.

    With ``exact=True`` every inner product is summed in sorted order, so the
    table of ``g·I`` is an exact column permutation of the table of ``I``.
    ``exact=False`` uses a BLAS product: much faster, equal up to round-off.
    """
    signal = _check_dim(signal, bank)
    batch_shape = signal.shape[:-1]
    flat = signal.reshape(-1, bank.dim)
    k, n, d = bank.expanded.shape
    if not exact:
        out = flat @ bank.expanded.reshape(k * n, d).T
        return out.reshape(batch_shape + (k, n))
    out = np.empty((flat.shape[0], k, n))
    step = max(1, _EXACT_BUFFER // (k * n * d))
    for start in range(0, flat.shape[0], step):
        chunk = flat[start:start + step]
        out[start:start + step] = canonical_dot(chunk[:, None, None, :], bank.expanded[None])
    return out.reshape(batch_shape + (k, n))


def orbit_projections(signal, bank, exact=True):
    """Sorted projection multisets, shape ``(..., k, N)``."""
    return np.sort(projection_table(signal, bank, exact=exact), axis=-1)


def project_orbit(signal, bank, i):
    """The projection law of ``signal`` on the orbit of template ``i``."""
    if not 0 <= i < bank.k:
        raise IndexError(f"template index {i} out of range for bank of size {bank.k}")
    signal = _check_dim(signal, bank)
    if signal.ndim != 1:
        raise DimensionError("project_orbit takes a single signal")
    values = canonical_dot(signal[None, :], bank.expanded[i])
    return OrbitProjection(i, values)


@dataclass(frozen=True)
class PoolingConfig:
    """How projection laws are summarized.

    ``kind`` is ``"cdf"`` (Heaviside steps on a uniform grid), ``"sigmoid"``
    (smooth steps of the given slope) or ``"moments"`` (truncated absolute
    moments up to order ``moments``).
    """

    kind: str = "cdf"
    bins: int = 32
    range: float = 1.0
    slope: float = 1e4
    moments: int = 6
    normalize: bool = True

    def __post_init__(self):
        if self.kind not in ("cdf", "sigmoid", "moments"):
            raise ValueError(f"unknown pooling kind {self.kind!r}")

    @property
    def grid(self):
        return BinGrid.uniform(self.bins, self.range)

    def summarize(self, projections):
        """Pool sorted projections ``(..., k, N)`` into ``(..., k, B or R)``."""
        if self.kind == "cdf":
            return cdf_vector(projections, self.grid)
        if self.kind == "sigmoid":
            return sigmoid_cdf_vector(projections, self.grid, self.slope)
        return moment_vector(projections, self.moments)

    def as_dict(self):
        return {"kind": self.kind, "bins": self.bins, "range": self.range,
                "slope": self.slope, "moments": self.moments, "normalize": self.normalize}


@dataclass(frozen=True)
class RepMatrix:
    """Representation of one signal: one row per template."""

    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def to_dict(self):
        return {"metadata": self.metadata, "shape": list(self.values.shape),
                "values": self.values.ravel().tolist()}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        values = np.asarray(data["values"], dtype=float).reshape(data["shape"])
        return cls(values, data["metadata"])

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(["template"] + [f"c{j}" for j in range(self.values.shape[1])])
        for i, row in enumerate(self.values):
            writer.writerow([i] + [repr(float(v)) for v in row])
        return buf.getvalue()


def represent_many(signals, bank, pooling=PoolingConfig(), exact=True):
    """Representation arrays for a batch of signals, shape ``(n, k, B or R)``."""
    signals = _check_dim(signals, bank)
    if pooling.normalize:
        signals = normalize(signals)
    return pooling.summarize(orbit_projections(signals, bank, exact=exact))


def represent(signal, bank, pooling=PoolingConfig()):
    """Invariant representation of a single signal."""
    signal = _check_dim(signal, bank)
    if signal.ndim != 1:
        raise DimensionError("represent takes a single signal; use represent_many")
    values = represent_many(signal[None], bank, pooling)[0]
    metadata = {"group": bank.action.group.name, "order": bank.order,
                "k": bank.k, "pooling": pooling.as_dict()}
    return RepMatrix(values, metadata)


def orbit_distance(signal, other, action):
    """``min_g ||g·I - I'||``, by enumeration over the group."""
    signal = action._check_signal(signal)
    other = action._check_signal(other)
    diffs = action.orbit(signal) - other
    return float(np.min(np.linalg.norm(diffs, axis=-1)))


def orbit_equivalent(signal, other, action, tol=EXACT_TOL):
    """Brute-force orbit membership test, the selectivity oracle."""
    return orbit_distance(signal, other, action) <= tol
