"""Seeded generators for instances with known structure.

Each kind fixes the structural parameters that matter downstream: interval
graphs have fiber VC dimension exactly 2 (four forced intervals pin the
lower bound), half-graphs have VC dimension 1 and ladder index min(n0, n1),
block unions have ladder index 1, staircases are the monotone-tuple
relations. Randomness comes from random.Random(seed), i.e. MT19937 with
integer draws only, which is deterministic across platforms; generate() is
a pure function of its spec.

Measured parameters (VC dimension of the part-0 fiber family and the ladder
index, both under caps) are recorded alongside every generated instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import random

from .core import Hypergraph, Measure, uniform_measures
from .dyadic import dyadic_hypergraph
from .errors import InputError
from .jsonio import load_json, require
from .stable import ladder_index
from .vc import fiber_family, vc_dimension

KINDS = ("interval-graph", "half-graph", "block-union", "staircase",
         "random-vc-capped", "dyadic-export")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    sizes: tuple[int, ...]
    k: int
    seed: int = 0
    params: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        require(self.kind in KINDS, f"unknown generator kind {self.kind!r}")
        require(self.k == len(self.sizes), "k must match the number of part sizes")
        require(all(isinstance(s, int) and s >= 1 for s in self.sizes),
                "part sizes must be positive integers")
        object.__setattr__(self, "sizes", tuple(self.sizes))
        object.__setattr__(self, "params", tuple(sorted(dict(self.params).items())))

    def param(self, name: str, default: int) -> int:
        return dict(self.params).get(name, default)

    def to_obj(self) -> dict:
        return {"kind": self.kind, "sizes": list(self.sizes), "k": self.k,
                "seed": self.seed, "params": dict(self.params)}

    @classmethod
    def from_obj(cls, obj: dict) -> "GeneratorSpec":
        require(isinstance(obj, dict), "spec object must be a JSON object")
        try:
            return cls(obj["kind"], tuple(obj["sizes"]), obj["k"],
                       obj.get("seed", 0),
                       tuple((str(k), int(v)) for k, v in obj.get("params", {}).items()))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad generator spec: {exc}") from exc


@dataclass
class Generated:
    spec: GeneratorSpec
    hypergraph: Hypergraph
    measures: tuple[Measure, ...]
    measured: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {"spec": self.spec.to_obj(),
                "hypergraph": self.hypergraph.to_obj(),
                "measures": [m.to_obj() for m in self.measures],
                "measured": self.measured}


def _interval_graph(spec: GeneratorSpec) -> Hypergraph:
    n0, n1 = spec.sizes
    require(n0 >= 3 and n1 >= 4, "interval-graph needs >= 3 points and >= 4 intervals")
    rng = random.Random(spec.seed)
    # forced intervals give traces {0..n0-1}, {0}, {n0-1}, {} on {0, n0-1},
    # so the fiber family shatters a pair; intervals never shatter a triple
    ivals = [(0, n0 - 1), (0, 0), (n0 - 1, n0 - 1), (1, 1)]
    while len(ivals) < n1:
        lo = rng.randrange(n0)
        hi = rng.randrange(lo, n0)
        ivals.append((lo, hi))
    edges = frozenset((p, j) for j, (lo, hi) in enumerate(ivals)
                     for p in range(lo, hi + 1))
    return Hypergraph((n0, n1), edges)


def _half_graph(spec: GeneratorSpec) -> Hypergraph:
    n0, n1 = spec.sizes
    edges = frozenset((i, j) for i in range(n0) for j in range(n1) if i <= j)
    return Hypergraph((n0, n1), edges)


def _block_union(spec: GeneratorSpec) -> Hypergraph:
    blocks = spec.param("blocks", 3)
    require(blocks >= 1, "block count must be positive")
    require(all(s >= blocks for s in spec.sizes),
            "every part needs at least one vertex per block")
    rng = random.Random(spec.seed)
    assign = []
    for size in spec.sizes:
        cuts = sorted(rng.sample(range(1, size), blocks - 1))
        bounds = [0] + cuts + [size]
        lab = [0] * size
        for b in range(blocks):
            for v in range(bounds[b], bounds[b + 1]):
                lab[v] = b
        assign.append(lab)

    edges = []

    def rec(prefix, b):
        if len(prefix) == spec.k:
            edges.append(tuple(prefix))
            return
        part = len(prefix)
        for v in range(spec.sizes[part]):
            if assign[part][v] == b:
                rec(prefix + [v], b)

    for b in range(blocks):
        rec([], b)
    return Hypergraph(spec.sizes, frozenset(edges))


def _staircase(spec: GeneratorSpec) -> Hypergraph:
    def rec(prefix):
        if len(prefix) == spec.k:
            yield tuple(prefix)
            return
        lo = prefix[-1] if prefix else 0
        for v in range(lo, spec.sizes[len(prefix)]):
            yield from rec(prefix + [v])

    return Hypergraph(spec.sizes, frozenset(rec([])))


def _random_capped(spec: GeneratorSpec) -> Hypergraph:
    require(spec.k == 2, "random-vc-capped is a binary generator")
    n0, n1 = spec.sizes
    rng = random.Random(spec.seed)
    edges = frozenset((i, j) for i in range(n0) for j in range(n1)
                      if rng.getrandbits(1))
    return Hypergraph((n0, n1), edges)


def generate(spec: GeneratorSpec) -> Generated:
    """Build the instance for spec with uniform default measures and the
    measured VC dimension / ladder index (capped) attached."""
    if spec.kind == "interval-graph":
        H = _interval_graph(spec)
    elif spec.kind == "half-graph":
        H = _half_graph(spec)
    elif spec.kind == "block-union":
        require(spec.k >= 2, "block-union needs at least two parts")
        H = _block_union(spec)
    elif spec.kind == "staircase":
        require(spec.k >= 2, "staircase needs at least two parts")
        H = _staircase(spec)
    elif spec.kind == "random-vc-capped":
        H = _random_capped(spec)
    else:
        depth = spec.param("depth", 4)
        require(spec.k == 2 and spec.sizes == (1 << depth, 1 << depth),
                "dyadic-export sizes must be (2^depth, 2^depth)")
        parity = "even" if spec.param("even", 0) else "odd"
        H = dyadic_hypergraph(depth, parity=parity)

    # the cap on random-vc-capped bounds measurement effort, not the instance
    cap = spec.param("cap", 4) if spec.kind == "random-vc-capped" else 4
    vc = vc_dimension(fiber_family(H, (0,)), cap=cap, budget=200_000)
    lad = ladder_index(H, (0,), cap=8, budget=100_000)
    measured = {
        "vc_dimension": {"value": vc.value, "capped": vc.capped,
                         "budget_exhausted": vc.budget_exhausted,
                         "display": vc.display()},
        "ladder_index": {"value": lad.length, "capped": lad.capped,
                         "budget_exhausted": lad.budget_exhausted,
                         "display": lad.display()},
    }
    return Generated(spec, H, uniform_measures(H), measured)


def roundtrip(path: str) -> Hypergraph:
    """Read a hypergraph back from a JSON file written by the CLI: either a
    bare hypergraph object or a full generated-instance file."""
    obj = load_json(path)
    require(isinstance(obj, dict), "instance file must hold a JSON object")
    if "hypergraph" in obj:
        obj = obj["hypergraph"]
    return Hypergraph.from_obj(obj)
