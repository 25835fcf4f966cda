"""Brute-force reference implementations.

Deliberately naive and independent of the production code paths: plain
enumeration over tuples, subsets, leaves, and triples. The test suite and
the CLI selftest compare engine outputs against these, exactly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .core import Box, Hypergraph, ProductMeasure, check_measures


def brute_fiber(H: Hypergraph, parts, b) -> frozenset:
    """Fiber membership by enumerating all of V_I and testing reassembled tuples."""
    parts = tuple(sorted(parts))
    comp = tuple(i for i in range(H.k) if i not in parts)
    members = []
    for a in itertools.product(*[range(H.part_sizes[i]) for i in parts]):
        t = [None] * H.k
        for i, v in zip(parts, a):
            t[i] = v
        for i, v in zip(comp, b):
            t[i] = v
        if tuple(t) in H.edges:
            members.append(a)
    return frozenset(members)


def brute_set_mass(H: Hypergraph, measures, tuples) -> Fraction:
    pm = ProductMeasure(check_measures(H, measures))
    return sum((pm.tuple_weight(t) for t in tuples), Fraction(0))


def brute_symdiff_mass(H: Hypergraph, measures, other_edges) -> Fraction:
    sym = H.edges.symmetric_difference(frozenset(other_edges))
    return brute_set_mass(H, measures, sym)


def brute_density(H: Hypergraph, measures, box: Box, distinct: bool = False) -> Fraction:
    pm = ProductMeasure(check_measures(H, measures))
    hit = Fraction(0)
    total = Fraction(0)
    for t in itertools.product(*box.sides):
        if distinct and len(set(t)) != H.k:
            continue
        w = pm.tuple_weight(t)
        total += w
        if t in H.edges:
            hit += w
    if total == 0:
        raise ZeroDivisionError("box has measure zero")
    return hit / total


def brute_boxes_membership(boxes, t) -> bool:
    return any(all(t[i] in set(side) for i, side in enumerate(b.sides)) for b in boxes)


def brute_union_mass_error(H: Hypergraph, measures, boxes) -> Fraction:
    """Exact mass of the symmetric difference between the relation and a
    union of boxes, by enumerating the whole product space."""
    pm = ProductMeasure(check_measures(H, measures))
    err = 0
    for t in itertools.product(*[range(n) for n in H.part_sizes]):
        if (t in H.edges) != brute_boxes_membership(boxes, t):
            err += pm.tuple_num(t)
    return Fraction(err, pm.den)


def brute_atoms_by_combinations(H: Hypergraph, parts, params) -> list[frozenset]:
    """Nonempty atoms of the Boolean algebra generated by the fibers of the
    given parameters, built by explicit set intersection per sign pattern."""
    parts = tuple(sorted(parts))
    ground = set(itertools.product(*[range(H.part_sizes[i]) for i in parts]))
    fibers = [set(brute_fiber(H, parts, b)) for b in params]
    atoms = []
    for signs in itertools.product((True, False), repeat=len(fibers)):
        cell = set(ground)
        for s, f in zip(signs, fibers):
            cell &= f if s else (ground - f)
            if not cell:
                break
        if cell:
            atoms.append(frozenset(cell))
    if not fibers and ground:
        atoms = [frozenset(ground)]
    return atoms


def brute_shatters(members, subset) -> bool:
    subset = tuple(subset)
    traces = {tuple(v in m for v in subset) for m in members}
    return len(traces) == 2 ** len(subset)


def brute_vc_dimension(members, ground_size: int, cap: int = 8) -> int:
    """VC dimension by raw subset enumeration. Exponential; small inputs only."""
    members = [set(m) for m in members]
    d = 0
    for t in range(1, cap + 1):
        found = False
        for sub in itertools.combinations(range(ground_size), t):
            if brute_shatters(members, sub):
                found = True
                break
        if not found:
            return d
        d = t
    return d


def dyadic_leaves(balls, depth: int) -> list[int]:
    """All depth-L leaves under a union of prefix balls, as integers whose
    binary expansion (MSB first, width L) is the leaf word."""
    leaves = []
    for prefix in balls:
        ell = len(prefix)
        base = 0
        for c in prefix:
            base = (base << 1) | (1 if c == "1" else 0)
        lo = base << (depth - ell)
        leaves.extend(range(lo, lo + (1 << (depth - ell))))
    return sorted(leaves)


def split_level(x: int, y: int, depth: int) -> int:
    """0-indexed length of the common prefix of two distinct depth-L leaves."""
    diff = x ^ y
    return depth - diff.bit_length()


def brute_dyadic_pair_count(balls, depth: int, parity: int = 1) -> tuple[int, int]:
    """(#ordered distinct leaf pairs whose split level has the given parity,
    #ordered distinct leaf pairs), by full enumeration."""
    leaves = dyadic_leaves(balls, depth)
    hit = 0
    total = 0
    for x in leaves:
        for y in leaves:
            if x == y:
                continue
            total += 1
            if split_level(x, y, depth) % 2 == parity:
                hit += 1
    return hit, total


def brute_convexity_edges(points) -> tuple[int, int]:
    """(#strict midpoint-convex triples, #all increasing triples) over a
    strictly increasing point sequence."""
    pts = sorted(points)
    edges = 0
    total = 0
    for p, q, r in itertools.combinations(pts, 3):
        total += 1
        if p + r - 2 * q >= 0:
            edges += 1
    return edges, total


def brute_ap_count(points) -> int:
    pts = sorted(points)
    return sum(1 for p, q, r in itertools.combinations(pts, 3) if p + r == 2 * q)


def brute_ladder_check(H: Hypergraph, parts, a_seq, b_seq) -> bool:
    """Direct membership check of the ladder pattern a_i in R_{b_j} iff i <= j."""
    parts = tuple(sorted(parts))
    comp = tuple(i for i in range(H.k) if i not in parts)
    if len(a_seq) != len(b_seq):
        return False
    for i, a in enumerate(a_seq):
        for j, b in enumerate(b_seq):
            t = [None] * H.k
            for idx, v in zip(parts, a):
                t[idx] = v
            for idx, v in zip(comp, b):
                t[idx] = v
            if (tuple(t) in H.edges) != (i <= j):
                return False
    return True
