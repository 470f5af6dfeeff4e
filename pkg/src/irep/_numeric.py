"""Order-independent reductions.

Sums of floating point numbers depend on the order in which the terms are
added. Group actions only permute coordinates, so ``<g I, g t>`` and
``<I, t>`` are built from the same multiset of products but would be summed
in a different order by BLAS. Sorting the terms before summing makes the
result a function of the multiset alone, which is what lets invariance hold
bit-for-bit instead of up to round-off.
"""

import numpy as np


def canonical_sum(terms, axis=-1):
    """Sum ``terms`` along ``axis`` in sorted order."""
    terms = np.moveaxis(np.asarray(terms, dtype=float), axis, -1)
    return np.ascontiguousarray(np.sort(terms, axis=-1)).sum(axis=-1)


def canonical_dot(a, b):
    """Inner product along the last axis, broadcasting the leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return canonical_sum(a * b, axis=-1)


def canonical_mean(terms, axis=-1):
    terms = np.asarray(terms, dtype=float)
    return canonical_sum(terms, axis=axis) / terms.shape[axis]


def canonical_norm(x):
    x = np.asarray(x, dtype=float)
    return np.sqrt(canonical_sum(x * x, axis=-1))
