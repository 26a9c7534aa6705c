"""Bitmask subset lattice and fast signed subset-sum transforms.

Subsets of N = {1..n} are bitmasks: bit i-1 set <=> variable i in S, index 0
is the empty set. A lattice vector is a float64 array of length 2**n indexed
by bitmask. All transforms are pure: they copy their input and run the
in-place kernel on the copy.
"""

import numpy as np

from ._kernels import diff_transform, sum_transform

MAX_N = 24


class LatticeSizeError(ValueError):
    pass


def table_size(n: int) -> int:
    return 1 << n


def infer_n(values: np.ndarray) -> int:
    """Variable count of a lattice vector; rejects non-power-of-two lengths."""
    size = len(values)
    n = size.bit_length() - 1
    if size <= 0 or (1 << n) != size:
        raise LatticeSizeError(f"lattice vector length {size} is not a power of two")
    if n > MAX_N:
        raise LatticeSizeError(f"n={n} exceeds the hard cap {MAX_N}")
    return n


def as_lattice(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise LatticeSizeError("lattice vector must be one-dimensional")
    infer_n(arr)
    return arr


def order_counts(n: int) -> np.ndarray:
    """Population count (subset order) per bitmask index, as uint8."""
    idx = np.arange(1 << n, dtype=np.uint32)
    return np.bitwise_count(idx).astype(np.uint8)


def mobius_and(u) -> np.ndarray:
    """AND-interaction transform: I[T] = sum_{L subset T} (-1)^(|T|-|L|) u[L].

    O(n * 2**n) dimension-by-dimension difference transform.
    """
    out = as_lattice(u).copy()
    return diff_transform(out)


def mobius_or(u) -> np.ndarray:
    """OR-interaction transform: I[T] = -sum_{L subset T} (-1)^(|T|-|L|) u[N\\L].

    Complement reindexing is a reversal: (2**n - 1) ^ L == 2**n - 1 - L.
    """
    arr = as_lattice(u)
    out = arr[::-1].copy()
    diff_transform(out)
    np.negative(out, out=out)
    return out


def zeta_subsets(i) -> np.ndarray:
    """Subset aggregation: g[S] = sum_{T subset S} I[T]; inverse of mobius_and."""
    out = as_lattice(i).copy()
    return sum_transform(out)


def mobius_and_transpose(s) -> np.ndarray:
    """Adjoint of mobius_and: out[L] = sum_{T superset L} (-1)^(|T|-|L|) s[T].

    Realized as reverse -> difference transform -> reverse.
    """
    arr = as_lattice(s)
    out = arr[::-1].copy()
    diff_transform(out)
    return out[::-1].copy()


def permute_variables(values, perm) -> np.ndarray:
    """Relabel variables: perm[i] is the new position (0-based) of variable i+1."""
    arr = as_lattice(values)
    n = infer_n(arr)
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError("perm must be a permutation of 0..n-1")
    idx = np.arange(1 << n)
    new_idx = np.zeros_like(idx)
    for i, p in enumerate(perm):
        new_idx |= ((idx >> i) & 1) << p
    out = np.empty_like(arr)
    out[new_idx] = arr
    return out
