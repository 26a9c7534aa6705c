"""Brute-force reference implementations for differential testing.

Every function here evaluates its defining sum literally, by enumerating
submasks, and shares no code with the fast transforms in ``lattice``. These
paths are deliberately naive; they exist to certify the fast paths and to
compute expected values for fixtures. Size is capped at n <= 14.
"""

import numpy as np

from ._kernels import maybe_njit
from .lattice import LatticeSizeError, infer_n

ORACLE_MAX_N = 14


def _check_size(values: np.ndarray) -> int:
    n = infer_n(values)
    if n > ORACLE_MAX_N:
        raise LatticeSizeError(f"oracle paths are capped at n <= {ORACLE_MAX_N}, got {n}")
    return n


@maybe_njit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@maybe_njit
def _brute_and_loop(u, out):
    size = u.size
    for t in range(size):
        pt = _popcount(t)
        acc = 0.0
        l = t
        while True:
            sign = -1.0 if (pt - _popcount(l)) & 1 else 1.0
            acc += sign * u[l]
            if l == 0:
                break
            l = (l - 1) & t
        out[t] = acc
    return out


@maybe_njit
def _brute_or_loop(u, out):
    size = u.size
    full = size - 1
    for t in range(size):
        pt = _popcount(t)
        acc = 0.0
        l = t
        while True:
            sign = -1.0 if (pt - _popcount(l)) & 1 else 1.0
            acc += sign * u[full ^ l]
            if l == 0:
                break
            l = (l - 1) & t
        out[t] = -acc
    return out


@maybe_njit
def _reconstruct_loop(i_and, i_or, bias, out):
    # h(x_S) = b + sum_{0 != T subset S} I_and[T] + sum_{T & S != 0} I_or[T],
    # the OR sum evaluated as (total - sum over submasks of the complement).
    size = i_and.size
    full = size - 1
    or_total = 0.0
    for t in range(size):
        or_total += i_or[t]
    for s in range(size):
        acc = bias
        t = s
        while True:
            if t != 0:
                acc += i_and[t]
            if t == 0:
                break
            t = (t - 1) & s
        comp = full ^ s
        miss = 0.0
        t = comp
        while True:
            miss += i_or[t]
            if t == 0:
                break
            t = (t - 1) & comp
        out[s] = acc + or_total - miss
    return out


def brute_and(u) -> np.ndarray:
    """Literal evaluation of I[T] = sum_{L subset T} (-1)^(|T|-|L|) u[L]."""
    arr = np.asarray(u, dtype=np.float64)
    _check_size(arr)
    return _brute_and_loop(arr, np.empty_like(arr))


def brute_or(u) -> np.ndarray:
    """Literal evaluation of I[T] = -sum_{L subset T} (-1)^(|T|-|L|) u[N\\L]."""
    arr = np.asarray(u, dtype=np.float64)
    _check_size(arr)
    return _brute_or_loop(arr, np.empty_like(arr))


def reconstruct(i_and, i_or, bias: float) -> np.ndarray:
    """Literal evaluation of the AND-OR logical model on every mask."""
    ia = np.asarray(i_and, dtype=np.float64)
    io = np.asarray(i_or, dtype=np.float64)
    _check_size(ia)
    if ia.size != io.size:
        raise LatticeSizeError("AND and OR effect vectors must have equal length")
    return _reconstruct_loop(ia, io, float(bias), np.empty_like(ia))


def verify_matching(table, decomposition, interactions) -> float:
    """Max absolute error of the logical model against the denoised table.

    Exhaustive over all 2**n masks: checks h(x_S) = v(x_S) - delta_S by
    literal summation. Returns the error; never judges.
    """
    v = np.asarray(table.values, dtype=np.float64)
    _check_size(v)
    h = reconstruct(interactions.i_and, interactions.i_or, interactions.bias)
    target = v - np.asarray(decomposition.delta, dtype=np.float64)
    return float(np.max(np.abs(h - target)))


def conditioned_and(table, t_mask: int, i: int) -> float:
    """Effect of T with variable i held present:
    sum_{L subset T} (-1)^(|T|-|L|) v(x_{L union {i}}).
    """
    v = np.asarray(table.values, dtype=np.float64)
    _check_size(v)
    bit = 1 << (i - 1)
    if t_mask & bit:
        raise ValueError(f"variable {i} must not be a member of T")
    pt = int(t_mask).bit_count()
    acc = 0.0
    l = t_mask
    while True:
        sign = -1.0 if (pt - int(l).bit_count()) & 1 else 1.0
        acc += sign * v[l | bit]
        if l == 0:
            break
        l = (l - 1) & t_mask
    return acc
