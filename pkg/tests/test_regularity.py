"""Delta approximations, box unions, 0-1 partitions, and the dense box."""

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vcreg import (Box, Hypergraph, InputError, RegularPartition,
                   delta_approx_partition, density, find_dense_box,
                   rectangular_approximation, regular_partition,
                   uniform_regular_partition, uniform_measures,
                   verify_regular_partition)
from vcreg.oracles import brute_fiber, brute_union_mass_error
from vcreg.selftest import block_pair_graph, half_graph, same_block_equivalence


def test_delta_partition_pairwise_distance():
    H = half_graph(4)
    mu = uniform_measures(H)
    eps = Fraction(3, 10)
    dp = delta_approx_partition(H, mu, eps, (0,))
    assert dp.max_pair_distance is not None and dp.max_pair_distance < eps
    w0 = mu[0]
    for cls in dp.classes:
        for b in cls:
            for c in cls:
                fb = {t[0] for t in brute_fiber(H, (0,), b)}
                fc = {t[0] for t in brute_fiber(H, (0,), c)}
                assert w0.mass(fb ^ fc) < eps


def _random_graph(seed, n0, n1):
    rng = random.Random(seed)
    edges = frozenset((i, j) for i in range(n0) for j in range(n1)
                      if rng.getrandbits(1))
    return Hypergraph((n0, n1), edges)


@pytest.mark.parametrize("eps", [Fraction(1, 2), Fraction(1, 4), Fraction(3, 10)])
def test_rect_error_equals_brute_on_half_graph(eps):
    H = half_graph(4)
    mu = uniform_measures(H)
    ra = rectangular_approximation(H, mu, eps)
    assert ra.error < eps
    assert brute_union_mass_error(H, mu, ra.boxes) == ra.error


@settings(max_examples=40, deadline=None, derandomize=True)
@given(seed=st.integers(0, 10 ** 6), n0=st.integers(2, 6), n1=st.integers(2, 6))
def test_rect_error_equals_brute_on_random_graphs(seed, n0, n1):
    H = _random_graph(seed, n0, n1)
    mu = uniform_measures(H)
    ra = rectangular_approximation(H, mu, Fraction(1, 3))
    assert ra.error < Fraction(1, 3)
    assert brute_union_mass_error(H, mu, ra.boxes) == ra.error


def test_rect_threeway_against_brute():
    rng = random.Random(5)
    edges = frozenset((x, y, z) for x in range(4) for y in range(4)
                      for z in range(4) if rng.getrandbits(1))
    H = Hypergraph((4, 4, 4), edges)
    mu = uniform_measures(H)
    ra = rectangular_approximation(H, mu, Fraction(1, 2))
    assert ra.error < Fraction(1, 2)
    assert brute_union_mass_error(H, mu, ra.boxes) == ra.error
    assert ra.levels  # the per-level bound table is filled in


def test_regular_partition_blocks_is_exact():
    H = block_pair_graph(8, 2)
    mu = uniform_measures(H)
    rp = regular_partition(H, mu, Fraction(1, 10))
    rep = verify_regular_partition(H, mu, rp)
    assert rep["ok"], rep["violations"]
    assert rp.sigma == ()
    for key in rp.labels:
        sides = [rp.classes[i][key[i]] for i in range(2)]
        assert density(H, mu, Box.of(sides)) in (Fraction(0), Fraction(1))


def test_regular_partition_half16_verifies():
    H = half_graph(16)
    mu = uniform_measures(H)
    rp = regular_partition(H, mu, Fraction(1, 4))
    rep = verify_regular_partition(H, mu, rp)
    assert rep["ok"], rep["violations"]
    assert Fraction(*map(int, rep["sigma_mass"].split("/"))) <= Fraction(1, 4)


def test_partition_survives_json_roundtrip():
    # the verifier must accept its own serialized output
    H = half_graph(16)
    mu = uniform_measures(H)
    rp = regular_partition(H, mu, Fraction(1, 4))
    back = RegularPartition.from_obj(json.loads(json.dumps(rp.to_obj())))
    assert back.classes == rp.classes
    assert back.provenance == rp.provenance
    assert back.labels == rp.labels
    assert verify_regular_partition(H, mu, back)["ok"]


def test_uniform_partition_shares_classes_across_parts():
    H = same_block_equivalence(12, 3)
    from vcreg import Measure
    rp = uniform_regular_partition(H, Measure.uniform(0, 12), Fraction(1, 8))
    assert rp.classes[0] == rp.classes[1]
    rep = verify_regular_partition(H, uniform_measures(H), rp)
    assert rep["ok"], rep["violations"]


def test_verifier_rejects_single_class_partition():
    H = half_graph(4)
    mu = uniform_measures(H)
    bad = RegularPartition(classes=(((0, 1, 2, 3),), ((0, 1, 2, 3),)),
                           epsilon=Fraction(1, 10), sigma=(), labels={},
                           provenance=((), ()))
    rep = verify_regular_partition(H, mu, bad)
    assert not rep["ok"]
    v = next(v for v in rep["violations"] if v["kind"] == "box_not_01_dense")
    assert v["edge_mass"] == "5/8"


def test_verifier_rejects_non_partition():
    H = half_graph(4)
    mu = uniform_measures(H)
    bad = RegularPartition(classes=(((0, 1),), ((0, 1, 2, 3),)),
                           epsilon=Fraction(1, 2), sigma=(), labels={},
                           provenance=((), ()))
    rep = verify_regular_partition(H, mu, bad)
    assert not rep["ok"]
    assert any(v["kind"] == "not_a_partition" for v in rep["violations"])


def test_verifier_rejects_undeclared_class():
    # classes must be unions of fingerprint atoms over the recorded params
    H = half_graph(4)
    mu = uniform_measures(H)
    bad = RegularPartition(
        classes=((tuple(range(4)),), ((0, 2), (1, 3))),
        epsilon=Fraction(1, 1), sigma=(), labels={},
        provenance=((), ((0,), (1,), (2,))))
    rep = verify_regular_partition(H, mu, bad)
    assert any(v["kind"] == "class_not_definable" for v in rep["violations"])


def test_regular_partition_eps_validation():
    H = half_graph(4)
    mu = uniform_measures(H)
    with pytest.raises(InputError):
        regular_partition(H, mu, Fraction(0))
    with pytest.raises(InputError):
        regular_partition(H, mu, 0.25)


def test_dense_box_on_two_blocks():
    H = block_pair_graph(8, 2)
    mu = uniform_measures(H)
    db = find_dense_box(H, mu, Fraction(2, 5), Fraction(1, 10))
    assert db.density == 1
    assert db.delta_guarantee > 0
    assert all(m >= db.delta_guarantee for m in db.side_masses)
    assert density(H, mu, db.box) == db.density


def test_dense_box_premise_checked():
    H = Hypergraph((4, 4), frozenset({(0, 0)}))
    mu = uniform_measures(H)
    with pytest.raises(InputError):
        find_dense_box(H, mu, Fraction(1, 2), Fraction(1, 10))
