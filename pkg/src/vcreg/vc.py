"""Set families, VC dimension, trace counting, and epsilon-nets.

The dimension search is exact: subsets are enumerated in size-then-lex order
with early exit, after collapsing ground elements that have identical
membership across all members (two such elements can never both sit inside a
shattered set, so the collapse preserves the answer). A work budget guards
degenerate inputs; when it trips, the result carries a flag and callers fall
back to the provable upper bound floor(log2(#members)).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import Hypergraph, Measure, binary_view
from .errors import InputError
from .jsonio import require


@dataclass(frozen=True)
class SetFamily:
    """A finite family of subsets of {0..ground_size-1}, deduplicated."""
    ground_size: int
    members: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_sets(ground_size: int, sets) -> "SetFamily":
        require(ground_size >= 0, "ground size must be nonnegative")
        dedup = {tuple(sorted(set(s))) for s in sets}
        for m in dedup:
            require(all(0 <= v < ground_size for v in m),
                    f"member {m!r} out of ground range")
        return SetFamily(ground_size, tuple(sorted(dedup)))

    @staticmethod
    def from_matrix(mat: np.ndarray) -> "SetFamily":
        # .tolist() matters: np.int64 members hash slowly and serialize badly
        return SetFamily.from_sets(mat.shape[1],
                                   [np.flatnonzero(row).tolist() for row in mat])

    def matrix(self) -> np.ndarray:
        mat = np.zeros((len(self.members), self.ground_size), dtype=bool)
        for i, m in enumerate(self.members):
            mat[i, list(m)] = True
        return mat

    def to_obj(self) -> dict:
        return {"ground_size": self.ground_size,
                "members": [list(m) for m in self.members]}

    @staticmethod
    def from_obj(obj) -> "SetFamily":
        require(isinstance(obj, dict) and "ground_size" in obj and "members" in obj,
                'set family JSON must be {"ground_size": int, "members": [[...]]}')
        return SetFamily.from_sets(int(obj["ground_size"]), obj["members"])


@dataclass(frozen=True)
class VCDimension:
    value: int
    capped: bool = False          # every cap-size subset check succeeded; true dim may exceed
    budget_exhausted: bool = False
    witness: tuple[int, ...] = ()

    def display(self) -> str:
        return f">={self.value}" if (self.capped or self.budget_exhausted) else str(self.value)


def _collapsed_columns(mat: np.ndarray) -> list[int]:
    """Representative ground indices, one per distinct membership column."""
    if mat.shape[0] == 0:
        return [0] if mat.shape[1] else []
    seen = {}
    for g in range(mat.shape[1]):
        key = mat[:, g].tobytes()
        if key not in seen:
            seen[key] = g
    return sorted(seen.values())


def _shattered(mat: np.ndarray, cols) -> bool:
    t = len(cols)
    codes = mat[:, list(cols)].astype(np.int64) @ (np.int64(1) << np.arange(t, dtype=np.int64))
    return len(np.unique(codes)) == (1 << t)


def vc_dimension(family: SetFamily, cap: int = 8, budget: int | None = None) -> VCDimension:
    """Largest d <= cap with some shattered d-subset of the ground set."""
    require(cap >= 1, "cap must be >= 1")
    mat = family.matrix()
    m = len(family.members)
    if m == 0:
        return VCDimension(0)
    log_bound = 0 if m == 1 else int(math.floor(math.log2(m)))
    limit = min(cap, log_bound) if log_bound else 0
    if limit == 0:
        return VCDimension(0)
    reps = _collapsed_columns(mat)
    matr = mat[:, reps].astype(np.int64)
    spent = 0
    best = VCDimension(0)
    for t in range(1, limit + 1):
        # one vectorized shatter test per block of candidate subsets
        found = None
        shifts = np.int64(1) << np.arange(t, dtype=np.int64)
        combos = itertools.combinations(range(len(reps)), t)
        while found is None:
            block = list(itertools.islice(combos, 2048))
            if not block:
                break
            take = len(block)
            if budget is not None:
                take = min(take, budget - spent)
            spent += take
            if take:
                idx = np.asarray(block[:take], dtype=np.intp)
                codes = (matr[:, idx] * shifts).sum(axis=2)
                codes.sort(axis=0)
                distinct = 1 + np.count_nonzero(np.diff(codes, axis=0), axis=0)
                hits = np.flatnonzero(distinct == (1 << t))
                if hits.size:
                    found = tuple(reps[i] for i in block[int(hits[0])])
            if found is None and take < len(block):
                return VCDimension(best.value, budget_exhausted=True,
                                   witness=best.witness)
        if found is None:
            return best
        best = VCDimension(t, witness=found)
    if best.value == cap:
        return VCDimension(cap, capped=True, witness=best.witness)
    # stopped at the log2(#members) ceiling, which is exact, not a cap
    return best


def shatter_function(family: SetFamily, n: int) -> int:
    """pi_F(n): the largest number of traces the family cuts on an n-subset."""
    require(0 <= n <= family.ground_size, "n out of range for the ground set")
    if n == 0:
        return 1
    mat = family.matrix()
    if len(family.members) == 0:
        return 0
    reps = _collapsed_columns(mat)
    t = min(n, len(reps))
    best = 0
    ceiling = min(1 << t, len(family.members))
    for cols in itertools.combinations(reps, t):
        codes = mat[:, list(cols)].astype(np.int64) @ (
            np.int64(1) << np.arange(t, dtype=np.int64))
        best = max(best, len(np.unique(codes)))
        if best == ceiling:
            break
    return best


def sauer_bound(d: int, n: int) -> int:
    return sum(math.comb(n, i) for i in range(0, min(d, n) + 1))


def sauer_check(family: SetFamily, d: int, n: int) -> dict:
    """pi_F(n) against the binomial-sum bound for the given dimension."""
    value = shatter_function(family, n)
    bound = sauer_bound(d, n)
    return {"shatter": value, "bound": bound, "ok": value <= bound}


def fiber_family(H: Hypergraph, parts) -> SetFamily:
    """Fibers over V_I (= parts) indexed by the complementary side, deduplicated."""
    view = binary_view(H, tuple(parts))
    return SetFamily.from_matrix(view.fibers)


@dataclass(frozen=True)
class DefinableCount:
    count: int
    bound: int
    dimension: VCDimension
    params: tuple[tuple[int, ...], ...]

    @property
    def within_bound(self) -> bool:
        return self.count <= self.bound


def definable_count_bound(H: Hypergraph, parts, params) -> DefinableCount:
    """Number of nonempty atoms over the given parameters versus the
    Sauer-type bound.

    Atoms of V_I over D are the classes of equal fingerprint {b in D : a in R_b};
    their number is the trace count on D of the family of opposite-side fibers
    of left elements, so the binomial-sum bound uses that family's dimension.
    """
    parts = tuple(sorted(parts))
    comp = tuple(i for i in range(H.k) if i not in parts)
    params = [tuple(b) for b in params]
    view = binary_view(H, parts)
    for b in params:
        require(len(b) == len(comp), f"parameter {b!r} has wrong arity")
        view.right_pos(b)
    cols = [view.right_pos(b) for b in params]
    if cols:
        fingerprints = {view.fibers[cols, g].tobytes() for g in range(view.left_size)}
        count = len(fingerprints)
    else:
        count = 1 if view.left_size else 0
    if count > (1 << len(params)):
        raise InputError("atom count exceeds 2^|D|; fingerprinting is broken")
    dual = SetFamily.from_matrix(view.fibers.T)
    dim = vc_dimension(dual, cap=8, budget=500_000)
    d_for_bound = dim.value if not dim.budget_exhausted else max(
        dim.value, int(math.floor(math.log2(max(1, len(dual.members))))))
    return DefinableCount(count, sauer_bound(d_for_bound, len(params)), dim,
                          tuple(params))


@dataclass
class EpsNet:
    points: tuple[int, ...]
    epsilon: Fraction
    verified: bool
    strategy: str
    meta: dict = field(default_factory=dict)


def _heavy_members(family: SetFamily, weights, den: int, eps: Fraction):
    heavy = []
    for m in family.members:
        num = sum(weights[v] for v in m)
        if Fraction(num, den) >= eps:
            heavy.append(m)
    return heavy


def _verify_net(heavy, points) -> bool:
    pts = set(points)
    return all(pts.intersection(m) for m in heavy)


def _greedy_net(heavy) -> list[int]:
    """Deterministic greedy: take the lex-least unhit heavy member, add the
    point of it hitting the most currently-unhit heavy members (ties by
    largest index, the classic right-endpoint rule on interval families)."""
    points: list[int] = []
    unhit = sorted(heavy)
    unhit_sets = [frozenset(m) for m in unhit]
    while unhit:
        target = unhit[0]
        best_pt, best_hits = None, -1
        for v in target:
            hits = sum(1 for ms in unhit_sets if v in ms)
            if hits >= best_hits:
                best_pt, best_hits = v, hits
        points.append(best_pt)
        keep = [i for i, ms in enumerate(unhit_sets) if best_pt not in ms]
        unhit = [unhit[i] for i in keep]
        unhit_sets = [unhit_sets[i] for i in keep]
    return points


def net_size_formula(d: int, eps: Fraction) -> dict:
    """Sample sizes 8*d*(1/eps)*log(1/eps) under both log readings, with the
    max(1, .) guard; the natural-log size is the one actually sampled."""
    inv = 1 / float(eps)
    d_eff = max(1, d)
    return {
        "size_ln": math.ceil(8 * d_eff * inv * max(1.0, math.log(inv))),
        "size_log2": math.ceil(8 * d_eff * inv * max(1.0, math.log2(inv))),
        "d_used": d_eff,
    }


@lru_cache(maxsize=32)
def _net_dimension(family: SetFamily) -> VCDimension:
    # the sampling size depends only on the family; repeated seeded draws on
    # the same family should not pay for the dimension search each time
    return vc_dimension(family, cap=8, budget=500_000)


def epsilon_net(family: SetFamily, mu: Measure, eps: Fraction,
                strategy: str = "greedy", seed: int | None = None,
                max_retries: int = 10) -> EpsNet:
    """A point set meeting every family member of measure >= eps, verified
    exhaustively and exactly."""
    require(isinstance(eps, Fraction), "eps must be a Fraction")
    require(eps > 0, "eps must be positive")
    require(len(mu.weights) == family.ground_size,
            "measure length does not match the ground set")
    weights, den = mu.numerators()
    heavy = _heavy_members(family, weights, den, eps)
    meta: dict = {"heavy_members": len(heavy)}
    if strategy == "greedy":
        pts = _greedy_net(heavy)
        ok = _verify_net(heavy, pts)
        return EpsNet(tuple(pts), eps, ok, "greedy", meta)
    if strategy != "random":
        raise InputError(f"unknown net strategy {strategy!r}")
    dim = _net_dimension(family)
    sizes = net_size_formula(dim.value, eps)
    meta.update(sizes)
    meta["dimension"] = dim.display()
    rng = random.Random(seed)
    cum = list(itertools.accumulate(weights))
    attempts = 0
    for attempt in range(max_retries):
        attempts += 1
        pts = []
        for _ in range(sizes["size_ln"]):
            x = rng.randrange(den)
            lo, hi = 0, len(cum) - 1
            while lo < hi:
                mid = (lo + hi) // 2
                if x < cum[mid]:
                    hi = mid
                else:
                    lo = mid + 1
            pts.append(lo)
        if _verify_net(heavy, pts):
            meta["attempts"] = attempts
            return EpsNet(tuple(pts), eps, True, "random", meta)
    meta["attempts"] = attempts
    meta["fallback"] = "greedy"
    pts = _greedy_net(heavy)
    return EpsNet(tuple(pts), eps, _verify_net(heavy, pts), "random", meta)
