"""Search for definable near-homogeneous sets in a symmetric binary relation.

A witness is a set A with positive measure whose edge density over distinct
ordered pairs is strictly below eps or above 1 - eps, where A ranges over
Boolean combinations of at most m fibers R_b. Combinations are enumerated as
unions of trace atoms of the chosen parameter tuple, with per-atom mass and
edge aggregates so each candidate costs O(4^m) integer work. NOT-FOUND is a
legitimate outcome, not an error.

ball_family_search is the same predicate on the odd-split tree graph with
the family fixed to single balls, where the 1/3-2/3 parity law keeps every
density bounded away from both 0 and 1.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .core import Hypergraph, Measure, binary_view
from .dyadic import DyadicBall, odd_split_density
from .errors import InputError
from .jsonio import require

MAX_COMPLEXITY = 3
EXACT_TUPLE_BUDGET = 1_000_000


@dataclass
class SearchResult:
    found: bool
    epsilon: Fraction
    complexity: int
    params: tuple[int, ...] | None = None
    patterns: tuple[int, ...] | None = None
    vertices: tuple[int, ...] | None = None
    density: Fraction | None = None
    mass: Fraction | None = None
    examined: int = 0
    exhaustive: bool = True


def definable_homogeneous_search(H: Hypergraph, mu: Measure, eps: Fraction,
                                 m: int, budget: int = EXACT_TUPLE_BUDGET,
                                 seed: int = 0) -> SearchResult:
    """Largest-measure A, definable from at most m fibers, with edge density
    outside (eps, 1-eps). Exhaustive over parameter tuples when their count
    fits the budget, else seeded uniform sampling of that many tuples."""
    require(H.k == 2 and H.symmetric, "search expects a symmetric binary relation")
    require(isinstance(eps, Fraction) and 0 < eps < Fraction(1, 2),
            "eps must be in (0, 1/2)")
    require(1 <= m <= MAX_COMPLEXITY,
            f"complexity cap is {MAX_COMPLEXITY}; the atom count grows double-exponentially")
    n = H.part_sizes[0]
    m = min(m, n)
    nums, den = mu.numerators()
    w = np.asarray(nums, dtype=np.int64)
    # pair-product sums reach den^2; float64 bincount is exact below 2^53
    big = den * den >= (1 << 53)
    view = binary_view(H, (0,))
    fib = view.fibers  # row b = fiber of b as bool over vertices

    edges = [(x, y) for (x, y) in H.edges if x != y]
    ex = np.asarray([e[0] for e in edges], dtype=np.intp)
    ey = np.asarray([e[1] for e in edges], dtype=np.intp)
    diag_total = [int(x) * int(x) for x in nums]

    total_tuples = comb(n, m)
    exhaustive = total_tuples <= budget
    if exhaustive:
        tuples = itertools.combinations(range(n), m)
    else:
        rng = random.Random(seed)
        tuples = (tuple(sorted(rng.sample(range(n), m))) for _ in range(budget))

    en, ed = eps.numerator, eps.denominator
    best = SearchResult(False, eps, m, examined=0, exhaustive=exhaustive)
    best_mass_num = 0
    examined = 0
    npat = 1 << m
    for D in tuples:
        examined += 1
        pat = np.zeros(n, dtype=np.int64)
        for i, b in enumerate(D):
            pat += fib[b].astype(np.int64) << i
        if big:
            wa = [0] * npat
            dg = [0] * npat
            for x in range(n):
                wa[int(pat[x])] += nums[x]
                dg[int(pat[x])] += diag_total[x]
            mm = [[0] * npat for _ in range(npat)]
            for x, y in edges:
                mm[int(pat[x])][int(pat[y])] += nums[x] * nums[y]
        else:
            wa = np.bincount(pat, weights=w.astype(np.float64),
                             minlength=npat).astype(np.int64).tolist()
            dg = np.bincount(pat, weights=(w * w).astype(np.float64),
                             minlength=npat).astype(np.int64).tolist()
            keys = pat[ex] * npat + pat[ey]
            me = np.bincount(keys, weights=(w[ex] * w[ey]).astype(np.float64),
                             minlength=npat * npat).astype(np.int64).tolist()
            mm = [me[i * npat:(i + 1) * npat] for i in range(npat)]
        present = [p for p in range(npat) if wa[p] > 0]
        for size in range(1, len(present) + 1):
            for combo in itertools.combinations(present, size):
                w_a = sum(wa[p] for p in combo)
                if w_a <= best_mass_num:
                    continue
                tot = w_a * w_a - sum(dg[p] for p in combo)
                if tot == 0:
                    continue
                e_num = sum(mm[p][q] for p in combo for q in combo)
                if e_num * ed < en * tot or (tot - e_num) * ed < en * tot:
                    members = tuple(int(v) for v in np.flatnonzero(np.isin(pat, combo)))
                    best = SearchResult(True, eps, m, tuple(D), tuple(combo),
                                        members, Fraction(e_num, tot),
                                        Fraction(w_a, den), examined, exhaustive)
                    best_mass_num = w_a
    best.examined = examined
    return best


@dataclass
class BallSearchResult:
    found: bool
    epsilon: Fraction
    depth: int
    prefix_length: int | None = None
    density: Fraction | None = None
    mass: Fraction | None = None
    max_deviation: Fraction = Fraction(0)
    scanned: int = 0


def ball_family_search(L: int, eps: Fraction, parity: str = "odd",
                       min_co_depth: int = 2) -> BallSearchResult:
    """Single-ball homogeneous-set search on the depth-L odd-split graph.

    Density depends only on the prefix length, so lengths are scanned from 0
    (largest mass first). Balls with co-depth below min_co_depth are skipped:
    two-leaf balls are trivially homogeneous and carry no information about
    the family's limiting behavior. max_deviation reports how far from both
    0 and 1 every scanned density stays.
    """
    require(isinstance(eps, Fraction) and 0 < eps < Fraction(1, 2),
            "eps must be in (0, 1/2)")
    require(min_co_depth >= 1, "min_co_depth must be >= 1")
    require(L >= min_co_depth, "depth too small for the co-depth floor")
    en, ed = eps.numerator, eps.denominator
    out = BallSearchResult(False, eps, L)
    best_len = None
    dev = Fraction(0)
    scanned = 0
    for l in range(0, L - min_co_depth + 1):
        d = odd_split_density([DyadicBall("0" * l)], L, parity=parity)
        scanned += 1
        dev = max(dev, min(d, 1 - d))
        low = d.numerator * ed < en * d.denominator
        high = (d.denominator - d.numerator) * ed < en * d.denominator
        if (low or high) and best_len is None:
            best_len = l
            out = BallSearchResult(True, eps, L, l, d, Fraction(1, 1 << l))
    out.max_deviation = dev
    out.scanned = scanned
    if best_len is None:
        out.found = False
    return out
