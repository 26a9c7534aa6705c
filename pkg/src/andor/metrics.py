"""Complexity and generalization metrics over extracted interaction sets.

An order profile sums positive and negative effect strengths per interaction
order k; its strength-weighted mean is the average order eta_avg used to score
sample complexity. Populations of samples are compared by the Jaccard
similarity of their mean effect distributions, optionally restricted per order.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .extraction import InteractionSet, filter_salient
from .lattice import order_counts

# Marker for quantities whose defining ratio is 0/0 (all-zero profile or
# distributions); callers must test with is_undefined, not equality.
UNDEFINED = float("nan")


def is_undefined(x: float) -> bool:
    return math.isnan(x)


@dataclass
class OrderProfile:
    """Per-order strength sums; index k-1 holds order k, k = 1..n."""

    n: int
    j_pos: np.ndarray
    j_neg: np.ndarray
    salient_count: int = 0
    source_salient: bool = False

    def __post_init__(self):
        self.j_pos = np.asarray(self.j_pos, dtype=np.float64)
        self.j_neg = np.asarray(self.j_neg, dtype=np.float64)
        if self.j_pos.shape != (self.n,) or self.j_neg.shape != (self.n,):
            raise ValueError("profiles must have one entry per order 1..n")
        if np.any(self.j_pos < 0) or np.any(self.j_neg < 0):
            raise ValueError("order strengths are sums of magnitudes, >= 0")

    def total_strength(self) -> float:
        return float(self.j_pos.sum() + self.j_neg.sum())

    def offset_mass(self) -> np.ndarray:
        """Per-order min(j_pos, j_neg): strength that mutually cancels."""
        return np.minimum(self.j_pos, self.j_neg)


def order_profile(iset: InteractionSet, tau: float | None = None) -> OrderProfile:
    """Sum positive effects into j_pos[k] and |negative| into j_neg[k].

    With tau given, only salient effects (|effect| > tau, strict) are counted.
    The empty set is excluded throughout: the bias is not an interaction.
    """
    orders = order_counts(iset.n)
    j_pos = np.zeros(iset.n)
    j_neg = np.zeros(iset.n)
    count = 0
    for effects in (iset.i_and, iset.i_or):
        keep = np.abs(effects) > tau if tau is not None else effects != 0.0
        keep[0] = False
        count += int(keep.sum())
        k = orders[keep].astype(np.int64)
        vals = effects[keep]
        np.add.at(j_pos, k - 1, np.maximum(vals, 0.0))
        np.add.at(j_neg, k - 1, np.maximum(-vals, 0.0))
    return OrderProfile(n=iset.n, j_pos=j_pos, j_neg=j_neg, salient_count=count,
                        source_salient=tau is not None)


def average_order(p: OrderProfile) -> float:
    """Strength-weighted mean order; UNDEFINED on an all-zero profile."""
    weights = p.j_pos + p.j_neg
    total = weights.sum()
    if total <= 0.0:
        return UNDEFINED
    ks = np.arange(1, p.n + 1, dtype=np.float64)
    return float((ks * weights).sum() / total)


@dataclass
class InteractionDistribution:
    """Non-negative mean-effect mass per (kind, mask, sign) slot.

    pos[kind][mask] holds max(mean effect, 0), neg[kind][mask] holds
    max(-mean effect, 0); at most one of the two is nonzero per slot. Stored
    sparse as dicts keyed by bitmask.
    """

    n: int
    pos: dict = field(default_factory=lambda: {"and": {}, "or": {}})
    neg: dict = field(default_factory=lambda: {"and": {}, "or": {}})

    def l1(self) -> float:
        return sum(sum(d.values()) for part in (self.pos, self.neg)
                   for d in part.values())

    def slots(self) -> set:
        out = set()
        for part in (self.pos, self.neg):
            for kind, d in part.items():
                out |= {(kind, m) for m in d}
        return out


def mean_distribution(sets: list[InteractionSet]) -> InteractionDistribution:
    """Elementwise mean over samples, then positive/negative split."""
    if not sets:
        raise ValueError("mean_distribution needs at least one interaction set")
    n = sets[0].n
    if any(s.n != n for s in sets):
        raise ValueError("all interaction sets must share n")
    mean_and = np.mean([s.i_and for s in sets], axis=0)
    mean_or = np.mean([s.i_or for s in sets], axis=0)
    dist = InteractionDistribution(n=n)
    for kind, mean in (("and", mean_and), ("or", mean_or)):
        for m in np.flatnonzero(mean):
            v = float(mean[m])
            (dist.pos if v > 0 else dist.neg)[kind][int(m)] = abs(v)
    return dist


def _min_max_l1(d1: InteractionDistribution, d2: InteractionDistribution,
                slot_filter=None) -> tuple[float, float]:
    lo = hi = 0.0
    for part in ("pos", "neg"):
        for kind in ("and", "or"):
            a = getattr(d1, part)[kind]
            b = getattr(d2, part)[kind]
            for m in set(a) | set(b):
                if slot_filter is not None and not slot_filter(m):
                    continue
                x, y = a.get(m, 0.0), b.get(m, 0.0)
                lo += min(x, y)
                hi += max(x, y)
    return lo, hi


def jaccard(d1: InteractionDistribution, d2: InteractionDistribution) -> float:
    """||min(d1, d2)||_1 / ||max(d1, d2)||_1; UNDEFINED when both are zero."""
    if d1.n != d2.n:
        raise ValueError("distributions must share n")
    lo, hi = _min_max_l1(d1, d2)
    if hi == 0.0:
        return UNDEFINED
    return lo / hi


@dataclass
class SimilarityReport:
    """Global and per-order Jaccard similarities; index k-1 holds order k."""

    n: int
    sim_global: float
    sim_per_order: np.ndarray

    def defined_orders(self) -> list[int]:
        return [k for k in range(1, self.n + 1)
                if not is_undefined(self.sim_per_order[k - 1])]


def per_order_jaccard(sets_a: list[InteractionSet], sets_b: list[InteractionSet],
                      tau: float | None = None) -> SimilarityReport:
    """Jaccard of the two mean distributions, globally and per order |T| = k.

    With tau given, each sample is salience-filtered before averaging, so the
    distributions carry exactly the slots that survive in either collection.
    """
    if tau is not None:
        sets_a = [filter_salient(s, tau) for s in sets_a]
        sets_b = [filter_salient(s, tau) for s in sets_b]
    da = mean_distribution(sets_a)
    db = mean_distribution(sets_b)
    if da.n != db.n:
        raise ValueError("the two collections must share n")
    n = da.n
    sims = np.empty(n)
    for k in range(1, n + 1):
        lo, hi = _min_max_l1(da, db, slot_filter=lambda m: int(m).bit_count() == k)
        sims[k - 1] = lo / hi if hi > 0.0 else UNDEFINED
    return SimilarityReport(n=n, sim_global=jaccard(da, db), sim_per_order=sims)
