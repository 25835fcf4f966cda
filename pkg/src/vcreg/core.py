"""Finite k-partite hypergraphs with exact weighted counting measures.

Vertices of part i are the integers 0..part_sizes[i]-1 and relations live in
V_0 x ... x V_{k-1}. All measure arithmetic is exact: weights are nonnegative
Fractions summing to 1 per part, and internally everything runs on integer
numerators over a per-part common denominator. numpy is used for boolean mask
and integer accumulation kernels, guarded so int64 can never overflow; inputs
that exceed the guard fall back to arbitrary-precision Python integers.

Coordinate splits: for an index set I of parts, V_I is the product of those
parts in increasing part order, enumerated row-major. A BinaryView presents
the relation as left side V_I versus right side V_{I complement}, with the
fiber of each right element cached as a boolean row.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm, prod

import numpy as np

from .errors import InputError, ZeroMeasureBox
from .jsonio import format_rational, parse_rational, require

# Largest product space the dense-array kernels will materialize.
MAX_DENSE_SPACE = 1 << 22
# int64 dot products stay exact while the total numerator mass is below this.
INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class Hypergraph:
    part_sizes: tuple[int, ...]
    edges: frozenset[tuple[int, ...]]
    symmetric: bool = False

    def __post_init__(self):
        require(len(self.part_sizes) >= 1, "hypergraph needs at least one part")
        require(all(isinstance(n, int) and n >= 1 for n in self.part_sizes),
                "part sizes must be positive integers")
        k = len(self.part_sizes)
        for e in self.edges:
            require(isinstance(e, tuple) and len(e) == k,
                    f"edge {e!r} does not have arity {k}")
            for i, v in enumerate(e):
                require(isinstance(v, int) and 0 <= v < self.part_sizes[i],
                        f"edge {e!r} out of range in coordinate {i}")
        if self.symmetric:
            require(len(set(self.part_sizes)) == 1,
                    "symmetric flag requires equal part sizes")
            for e in self.edges:
                for p in itertools.permutations(e):
                    require(p in self.edges,
                            f"symmetric flag set but permutation {p} of edge {e} is absent")

    @property
    def k(self) -> int:
        return len(self.part_sizes)

    def complement_parts(self, parts: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(i for i in range(self.k) if i not in parts)

    def to_obj(self) -> dict:
        return {
            "k": self.k,
            "part_sizes": list(self.part_sizes),
            "edges": sorted(list(e) for e in self.edges),
            "symmetric": self.symmetric,
        }

    @staticmethod
    def from_obj(obj) -> "Hypergraph":
        require(isinstance(obj, dict), "hypergraph JSON must be an object")
        for key in ("k", "part_sizes", "edges"):
            require(key in obj, f"hypergraph JSON missing key {key!r}")
        sizes = tuple(obj["part_sizes"])
        require(obj["k"] == len(sizes), "k does not match part_sizes length")
        edges = frozenset(tuple(e) for e in obj["edges"])
        return Hypergraph(sizes, edges, bool(obj.get("symmetric", False)))


@dataclass(frozen=True)
class Fiber:
    """The fiber R_b = {a in V_I : (a, b) in R} for a parameter b in V_{I comp}."""
    parts: tuple[int, ...]
    parameter: tuple[int, ...]
    members: frozenset[tuple[int, ...]]


@dataclass(frozen=True)
class Measure:
    """Exact weighted counting measure on one part: weights sum to 1."""
    part: int
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        require(all(isinstance(w, Fraction) for w in self.weights),
                "measure weights must be Fractions")
        require(all(w >= 0 for w in self.weights), "measure weights must be nonnegative")
        require(sum(self.weights, Fraction(0)) == 1,
                f"measure weights on part {self.part} must sum to exactly 1")

    @staticmethod
    def uniform(part: int, n: int) -> "Measure":
        require(n >= 1, "uniform measure needs a nonempty part")
        return Measure(part, tuple(Fraction(1, n) for _ in range(n)))

    def numerators(self) -> tuple[tuple[int, ...], int]:
        """Weights as integer numerators over a single common denominator."""
        den = lcm(*(w.denominator for w in self.weights)) if self.weights else 1
        return tuple(int(w * den) for w in self.weights), den

    def mass(self, subset) -> Fraction:
        nums, den = self.numerators()
        return Fraction(sum(nums[v] for v in subset), den)

    def to_obj(self) -> dict:
        return {"part": self.part, "weights": [format_rational(w) for w in self.weights]}

    @staticmethod
    def from_obj(obj) -> "Measure":
        require(isinstance(obj, dict) and "part" in obj and "weights" in obj,
                'measure JSON must be {"part": int, "weights": [...]}')
        return Measure(int(obj["part"]), tuple(parse_rational(w) for w in obj["weights"]))


def uniform_measures(H: Hypergraph) -> tuple[Measure, ...]:
    return tuple(Measure.uniform(i, n) for i, n in enumerate(H.part_sizes))


def check_measures(H: Hypergraph, measures) -> tuple[Measure, ...]:
    measures = tuple(measures)
    require(len(measures) == H.k, f"need {H.k} measures, got {len(measures)}")
    for i, m in enumerate(measures):
        require(m.part == i, f"measure at position {i} is labeled part {m.part}")
        require(len(m.weights) == H.part_sizes[i],
                f"measure on part {i} has {len(m.weights)} weights, part has {H.part_sizes[i]}")
    return measures


@dataclass(frozen=True)
class Box:
    """A combinatorial box: one vertex subset per part, stored sorted."""
    sides: tuple[tuple[int, ...], ...]

    @staticmethod
    def of(sides) -> "Box":
        return Box(tuple(tuple(sorted(set(s))) for s in sides))

    def contains(self, t: tuple[int, ...]) -> bool:
        return all(t[i] in side for i, side in enumerate(self._side_sets()))

    def _side_sets(self):
        return tuple(frozenset(s) for s in self.sides)

    def tuples(self):
        return itertools.product(*self.sides)

    def to_obj(self) -> dict:
        return {"sides": [list(s) for s in self.sides]}

    @staticmethod
    def from_obj(obj) -> "Box":
        require(isinstance(obj, dict) and "sides" in obj, 'box JSON must be {"sides": [...]}')
        return Box.of(obj["sides"])


def full_box(H: Hypergraph) -> Box:
    return Box(tuple(tuple(range(n)) for n in H.part_sizes))


class SpaceWeights:
    """Integer weight numerators over the product of a subset of parts.

    Position p enumerates V_I row-major; nums[p] is the product of per-part
    numerators and den is the product of per-part denominators, so that
    mass(S) = sum(nums[p] for p in S) / den exactly.
    """

    def __init__(self, measures, parts: tuple[int, ...], sizes: tuple[int, ...]):
        self.parts = parts
        self.sizes = tuple(sizes[i] for i in parts)
        self.size = prod(self.sizes) if parts else 1
        per_nums, per_dens = [], []
        for i in parts:
            nums, den = measures[i].numerators()
            per_nums.append(nums)
            per_dens.append(den)
        self.den = prod(per_dens) if per_dens else 1
        if parts:
            flat = per_nums[0]
            for nxt in per_nums[1:]:
                flat = [a * b for a in flat for b in nxt]
            self.nums = flat
        else:
            self.nums = [1]
        self._np = None
        if self.den < INT64_SAFE and self.size <= MAX_DENSE_SPACE:
            self._np = np.asarray(self.nums, dtype=np.int64)

    def np_nums(self):
        return self._np

    def mass_of_positions(self, positions) -> Fraction:
        return Fraction(sum(self.nums[p] for p in positions), self.den)

    def mass_of_bool(self, mask: np.ndarray) -> Fraction:
        if self._np is not None:
            return Fraction(int(self._np[mask].sum()), self.den)
        return Fraction(sum(self.nums[p] for p in np.flatnonzero(mask)), self.den)

    def nums_of_bool(self, mask: np.ndarray) -> int:
        if self._np is not None:
            return int(self._np[mask].sum())
        return sum(self.nums[p] for p in np.flatnonzero(mask))


class BinaryView:
    """The relation reindexed as left side V_I versus right side V_{I comp}.

    fibers[r] is the boolean row over left positions of the fiber of the
    right element at position r. Rows double as the bit-packed fiber cache
    used by the partition engines.
    """

    def __init__(self, H: Hypergraph, left: tuple[int, ...]):
        left = tuple(sorted(left))
        require(left and all(0 <= i < H.k for i in left) and len(set(left)) == len(left),
                f"bad index set {left!r}")
        self.H = H
        self.left = left
        self.right = H.complement_parts(left)
        self.left_sizes = tuple(H.part_sizes[i] for i in self.left)
        self.right_sizes = tuple(H.part_sizes[i] for i in self.right)
        self.left_size = prod(self.left_sizes)
        self.right_size = prod(self.right_sizes) if self.right else 1
        require(self.left_size <= MAX_DENSE_SPACE and self.right_size <= MAX_DENSE_SPACE,
                "binary view too large for dense fiber cache")
        fib = np.zeros((self.right_size, self.left_size), dtype=bool)
        lpos, rpos = self.left_pos, self.right_pos
        for e in H.edges:
            fib[rpos(tuple(e[i] for i in self.right)), lpos(tuple(e[i] for i in left))] = True
        self.fibers = fib

    def left_pos(self, t: tuple[int, ...]) -> int:
        p = 0
        for v, n in zip(t, self.left_sizes):
            p = p * n + v
        return p

    def right_pos(self, t: tuple[int, ...]) -> int:
        p = 0
        for v, n in zip(t, self.right_sizes):
            p = p * n + v
        return p

    def left_tuple(self, p: int) -> tuple[int, ...]:
        out = []
        for n in reversed(self.left_sizes):
            out.append(p % n)
            p //= n
        return tuple(reversed(out))

    def right_tuple(self, p: int) -> tuple[int, ...]:
        out = []
        for n in reversed(self.right_sizes):
            out.append(p % n)
            p //= n
        return tuple(reversed(out))


@lru_cache(maxsize=32)
def _cached_view(H: Hypergraph, left: tuple[int, ...]) -> BinaryView:
    return BinaryView(H, left)


def binary_view(H: Hypergraph, left) -> BinaryView:
    return _cached_view(H, tuple(sorted(left)))


def fiber(H: Hypergraph, parts, b) -> Fiber:
    """R_b over V_I for I = parts and b a tuple over the complementary parts."""
    parts = tuple(sorted(parts))
    comp = H.complement_parts(parts)
    b = tuple(b)
    require(len(b) == len(comp), f"parameter arity {len(b)} != {len(comp)}")
    for v, i in zip(b, comp):
        require(0 <= v < H.part_sizes[i], f"parameter {b!r} out of range on part {i}")
    members = frozenset(
        tuple(e[i] for i in parts)
        for e in H.edges
        if tuple(e[i] for i in comp) == b
    )
    return Fiber(parts, b, members)


class ProductMeasure:
    """Product of per-part measures; evaluates boxes and tuple sets exactly."""

    def __init__(self, measures):
        self.measures = tuple(measures)
        for i, m in enumerate(self.measures):
            require(m.part == i, "measures must be ordered part 0..k-1")
        self._num_den = [m.numerators() for m in self.measures]
        self.den = prod(d for _, d in self._num_den) if self.measures else 1

    @property
    def k(self) -> int:
        return len(self.measures)

    def __call__(self, box: Box) -> Fraction:
        return self.box_mass(box)

    def box_mass(self, box: Box) -> Fraction:
        require(len(box.sides) == self.k, "box arity mismatch")
        out = Fraction(1)
        for m, side in zip(self.measures, box.sides):
            out *= m.mass(side)
        return out

    def tuple_weight(self, t) -> Fraction:
        num = 1
        for (nums, _), v in zip(self._num_den, t):
            num *= nums[v]
        return Fraction(num, self.den)

    def tuple_num(self, t) -> int:
        num = 1
        for (nums, _), v in zip(self._num_den, t):
            num *= nums[v]
        return num

    def set_mass(self, tuples) -> Fraction:
        return Fraction(sum(self.tuple_num(t) for t in tuples), self.den)


def product_measure(measures) -> ProductMeasure:
    return ProductMeasure(measures)


class ProductSpace:
    """Dense per-tuple arrays for one hypergraph under one measure vector.

    Flattened row-major over all k parts: edge mask, integer weight
    numerators (int64 when exact, else Python ints on demand).
    """

    def __init__(self, H: Hypergraph, measures):
        self.H = H
        self.measures = check_measures(H, measures)
        self.sizes = H.part_sizes
        self.size = prod(self.sizes)
        require(self.size <= MAX_DENSE_SPACE,
                f"product space of size {self.size} exceeds the dense-array guard")
        self.weights = SpaceWeights(self.measures, tuple(range(H.k)), self.sizes)
        mask = np.zeros(self.size, dtype=bool)
        for e in H.edges:
            mask[self.pos(e)] = True
        self.edge_mask = mask

    def pos(self, t) -> int:
        p = 0
        for v, n in zip(t, self.sizes):
            p = p * n + v
        return p

    def tuple_of(self, p: int) -> tuple[int, ...]:
        out = []
        for n in reversed(self.sizes):
            out.append(p % n)
            p //= n
        return tuple(reversed(out))

    def box_mask(self, box: Box) -> np.ndarray:
        m = np.zeros(self.sizes, dtype=bool)
        idx = np.ix_(*[np.asarray(s, dtype=np.intp) for s in box.sides]) if all(
            len(s) for s in box.sides) else None
        if idx is not None:
            m[idx] = True
        return m.reshape(-1)

    def boxes_mask(self, boxes) -> np.ndarray:
        m = np.zeros(self.size, dtype=bool)
        for b in boxes:
            m |= self.box_mask(b)
        return m

    def mass_of(self, mask: np.ndarray) -> Fraction:
        return self.weights.mass_of_bool(mask)


def edge_mass(H: Hypergraph, measures) -> Fraction:
    return ProductMeasure(check_measures(H, measures)).set_mass(H.edges)


def density(H: Hypergraph, measures, box: Box, distinct: bool = False) -> Fraction:
    """Exact relative measure of the edge set inside a box.

    distinct=True restricts both numerator and denominator to tuples with
    pairwise distinct coordinate values (the diagonal-free variant reported
    for symmetric relations).
    """
    measures = check_measures(H, measures)
    pm = ProductMeasure(measures)
    sides = [frozenset(s) for s in box.sides]
    require(len(sides) == H.k, "box arity mismatch")
    if not distinct:
        total = pm.box_mass(box)
        if total == 0:
            raise ZeroMeasureBox("box has measure zero")
        hit = sum(pm.tuple_num(e) for e in H.edges
                  if all(e[i] in sides[i] for i in range(H.k)))
        return Fraction(hit, pm.den) / total
    total_num = 0
    for t in itertools.product(*box.sides):
        if len(set(t)) == H.k:
            total_num += pm.tuple_num(t)
    if total_num == 0:
        raise ZeroMeasureBox("box has no off-diagonal mass")
    hit = sum(pm.tuple_num(e) for e in H.edges
              if len(set(e)) == H.k and all(e[i] in sides[i] for i in range(H.k)))
    return Fraction(hit, total_num)


def weak_fubini_check(H: Hypergraph, measures, eps: Fraction) -> dict:
    """If every fiber over the second part has mass < eps, the product mass
    of the relation is < eps. Returns the exact quantities and the verdict
    of that implication (k = 2 views only)."""
    require(H.k == 2, "weak Fubini check needs a binary view")
    measures = check_measures(H, measures)
    view = binary_view(H, (0,))
    lw = SpaceWeights(measures, (0,), H.part_sizes)
    rnums, rden = measures[1].numerators()
    fiber_masses = [lw.mass_of_bool(view.fibers[r]) for r in range(view.right_size)]
    max_fiber = max(fiber_masses, default=Fraction(0))
    total = sum((Fraction(rnums[r], rden) * fm for r, fm in enumerate(fiber_masses)),
                Fraction(0))
    premise = max_fiber < eps
    holds = (not premise) or (total < eps)
    return {"max_fiber_mass": max_fiber, "product_mass": total,
            "premise": premise, "holds": holds}


def fubini_mass(H: Hypergraph, measures, left_parts) -> Fraction:
    """Edge mass computed by integrating fibers over one side; equals
    edge_mass for every split (exact Fubini)."""
    measures = check_measures(H, measures)
    view = binary_view(H, tuple(left_parts))
    lw = SpaceWeights(measures, view.left, H.part_sizes)
    rw = SpaceWeights(measures, view.right, H.part_sizes)
    total = 0
    for r in range(view.right_size):
        total += rw.nums[r] * lw.nums_of_bool(view.fibers[r])
    return Fraction(total, rw.den * lw.den)
