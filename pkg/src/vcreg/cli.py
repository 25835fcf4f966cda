"""Command-line entry point wiring every module together.

Each computing subcommand emits one RunReport JSON object: the subcommand,
input hashes and flag values, the outputs, a non-empty verification section,
and timing. Reports are deterministic for fixed flags and seed except the
"timing" block. Rationals on the command line are "num/den" strings; decimal
epsilons are rejected.

Exit codes: 0 all verifications pass; 1 a verification failed (e.g. the
stable surrogate was insufficient); 2 input error (unknown flags, malformed
files, bad rationals).

VCREG_THREADS is parsed and recorded; the exact integer kernels run
sequentially, so its effective value is always 1.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import time
from fractions import Fraction
from math import comb

from .convexity import (IntegerInterval, ap_count, convexity_density,
                        reflection_involution_check)
from .core import Box, Hypergraph, Measure, density, uniform_measures
from .dyadic import (DyadicBall, anti_homogeneity_bound_check,
                     ball_parity_report, level_pair_counts, odd_split_density,
                     parse_balls)
from .errors import InputError, VerificationError
from .homog import ball_family_search, definable_homogeneous_search
from .instances import KINDS, GeneratorSpec, generate
from .jsonio import (canonical_dumps, dump_json, format_rational, load_json,
                     parse_rational, require, sha256_of)
from .oracles import (brute_convexity_edges, brute_dyadic_pair_count,
                      brute_shatters, brute_union_mass_error)
from .regularity import (RegularPartition, find_dense_box,
                         rectangular_approximation, regular_partition,
                         uniform_regular_partition, verify_regular_partition)
from .selftest import run_selftest
from .stable import ladder_index, stable_regular_partition
from .vc import SetFamily, epsilon_net, fiber_family, shatter_function, \
    vc_dimension


def jsonable(x):
    """Exact JSON image: Fractions as "num/den", tuples as lists."""
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, float, str)):
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    if hasattr(x, "to_obj"):
        return jsonable(x.to_obj())
    if hasattr(x, "__index__"):
        return int(x)
    return str(x)


def _parse_parts(s: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in s.split(","))
    except ValueError:
        raise InputError(f"cannot parse parts list {s!r}") from None
    require(len(set(parts)) == len(parts), "repeated part index")
    return parts


def _parse_sizes(s: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in s.split(","))
    except ValueError:
        raise InputError(f"cannot parse sizes {s!r}") from None


def _parse_interval(s: str) -> IntegerInterval:
    for sep in ("..", ":"):
        if sep in s:
            lo, hi = s.split(sep, 1)
            try:
                return IntegerInterval(int(lo), int(hi))
            except ValueError:
                break
    raise InputError(f"interval must look like 'lo..hi', got {s!r}")


def _load_instance(path: str, files: dict):
    """Hypergraph plus measures from a bare hypergraph file or a generated
    instance file; measures default to uniform when the file has none."""
    obj = load_json(path)
    require(isinstance(obj, dict), f"{path} must hold a JSON object")
    files["in"] = sha256_of(obj)
    hobj = obj["hypergraph"] if "hypergraph" in obj else obj
    H = Hypergraph.from_obj(hobj)
    if "measures" in obj:
        measures = tuple(Measure.from_obj(m) for m in obj["measures"])
    else:
        measures = uniform_measures(H)
    return H, measures


def _load_family(path: str, parts: tuple[int, ...], files: dict) -> SetFamily:
    obj = load_json(path)
    require(isinstance(obj, dict), f"{path} must hold a JSON object")
    files["in"] = sha256_of(obj)
    if "members" in obj and "ground_size" in obj:
        return SetFamily.from_obj(obj)
    hobj = obj["hypergraph"] if "hypergraph" in obj else obj
    return fiber_family(Hypergraph.from_obj(hobj), parts)


# ---------------------------------------------------------------- handlers

def _cmd_vc_dim(args, files):
    fam = _load_family(args.infile, _parse_parts(args.parts), files)
    d = vc_dimension(fam, cap=args.cap, budget=args.budget)
    outputs = {"value": d.value, "capped": d.capped,
               "budget_exhausted": d.budget_exhausted,
               "display": d.display(), "witness": list(d.witness)}
    witness_ok = d.value == 0 or brute_shatters(fam.members, d.witness)
    size_ok = d.value == 0 or len(d.witness) == d.value
    verification = {"witness_shattered": witness_ok,
                    "witness_size_matches": size_ok}
    return outputs, verification, witness_ok and size_ok


def _cmd_vc_shatter(args, files):
    fam = _load_family(args.infile, _parse_parts(args.parts), files)
    require(args.n is not None and args.n >= 0, "--n is required and nonnegative")
    vals = [shatter_function(fam, n) for n in range(args.n + 1)]
    outputs = {"n": args.n, "value": vals[-1],
               "table": {str(n): v for n, v in enumerate(vals)}}
    ok = all(v <= (1 << n) for n, v in enumerate(vals)) and \
        all(vals[n] <= vals[n + 1] for n in range(args.n))
    verification = {"within_power_bound": ok, "monotone": ok}
    return outputs, verification, ok


def _cmd_vc_net(args, files):
    fam = _load_family(args.infile, _parse_parts(args.parts), files)
    require(args.epsilon is not None, "--epsilon is required")
    if args.weights is None:
        mu = Measure.uniform(0, fam.ground_size)
    else:
        wobj = load_json(args.weights)
        files["weights"] = sha256_of(wobj)
        mu = Measure.from_obj(wobj)
    net = epsilon_net(fam, mu, args.epsilon, strategy=args.strategy,
                      seed=args.seed if args.seed is not None else 0)
    outputs = {"points": list(net.points), "size": len(net.points),
               "strategy": net.strategy, "meta": jsonable(net.meta)}
    verification = {"verified_exhaustively": net.verified}
    return outputs, verification, net.verified


def _cmd_reg_partition(args, files):
    H, measures = _load_instance(args.infile, files)
    require(args.epsilon is not None, "--epsilon is required")
    if args.uniform:
        rp = uniform_regular_partition(H, measures[0], args.epsilon,
                                       strategy=args.strategy, seed=args.seed or 0)
        # the symmetric variant runs on part 0's measure replicated everywhere
        measures = tuple(Measure(i, measures[0].weights) for i in range(H.k))
    else:
        rp = regular_partition(H, measures, args.epsilon,
                               strategy=args.strategy, seed=args.seed or 0)
    rep = verify_regular_partition(H, measures, rp)
    outputs = {"partition": rp.to_obj(), "meta": jsonable(rp.meta),
               "class_counts": list(rp.class_counts())}
    return outputs, jsonable(rep), rep["ok"]


def _cmd_reg_verify(args, files):
    H, measures = _load_instance(args.infile, files)
    require(args.partition is not None, "--partition is required")
    pobj = load_json(args.partition)
    files["partition"] = sha256_of(pobj)
    if isinstance(pobj, dict) and "outputs" in pobj:
        pobj = pobj["outputs"].get("partition", pobj)
    rp = RegularPartition.from_obj(pobj)
    if args.epsilon is not None and args.epsilon != rp.epsilon:
        rp = dataclasses.replace(rp, epsilon=args.epsilon)
    rep = verify_regular_partition(H, measures, rp)
    outputs = {"epsilon": format_rational(rp.epsilon),
               "class_counts": list(rp.class_counts())}
    return outputs, jsonable(rep), rep["ok"]


def _cmd_reg_rect(args, files):
    H, measures = _load_instance(args.infile, files)
    require(args.epsilon is not None, "--epsilon is required")
    ra = rectangular_approximation(H, measures, args.epsilon,
                                   strategy=args.strategy, seed=args.seed or 0)
    outputs = {
        "boxes": [b.to_obj() for b in ra.boxes],
        "params": jsonable(ra.params),
        "error": format_rational(ra.error),
        "param_width": ra.param_width(),
        "bound_table": jsonable(ra.levels),
    }
    verification = {"error_below_eps": ra.error < args.epsilon}
    space = 1
    for n in H.part_sizes:
        space *= n
    if space <= 1 << 16:
        brute = brute_union_mass_error(H, measures, ra.boxes)
        verification["brute_recount_equal"] = brute == ra.error
    else:
        verification["brute_recount_equal"] = "skipped-large"
    ok = verification["error_below_eps"] and \
        verification["brute_recount_equal"] in (True, "skipped-large")
    return outputs, verification, ok


def _cmd_reg_ehbox(args, files):
    H, measures = _load_instance(args.infile, files)
    require(args.alpha is not None, "--alpha is required")
    require(args.epsilon is not None, "--epsilon is required")
    db = find_dense_box(H, measures, args.alpha, args.epsilon,
                        strategy=args.strategy, seed=args.seed or 0)
    outputs = {"box": db.box.to_obj(),
               "density": format_rational(db.density),
               "side_masses": [format_rational(m) for m in db.side_masses],
               "delta_guarantee": format_rational(db.delta_guarantee),
               "eps_used": format_rational(db.eps_used),
               "partition_meta": jsonable(db.partition_meta)}
    dens = density(H, measures, db.box)
    verification = {
        "density_recomputed_equal": dens == db.density,
        "density_above_threshold": dens > 1 - db.eps_used,
        "sides_above_guarantee": all(m >= db.delta_guarantee > 0
                                     for m in db.side_masses),
    }
    return outputs, verification, all(v is True for v in verification.values())


def _cmd_stable_ladder(args, files):
    H, measures = _load_instance(args.infile, files)
    cert = ladder_index(H, _parse_parts(args.parts), cap=args.cap,
                        budget=args.budget)
    outputs = {"length": cert.length, "display": cert.display(),
               "capped": cert.capped, "budget_exhausted": cert.budget_exhausted,
               "left": jsonable(cert.left), "right": jsonable(cert.right)}
    verification = {"certificate_checks": cert.verify(H)}
    return outputs, verification, cert.verify(H)


def _cmd_stable_partition(args, files):
    H, measures = _load_instance(args.infile, files)
    require(args.epsilon is not None, "--epsilon is required")
    sp = stable_regular_partition(H, measures, args.epsilon,
                                  depth_cap=args.depth_cap, rounds=args.rounds)
    rep = verify_regular_partition(H, measures, sp)
    homogeneous = True
    for key in sorted(sp.labels):
        sides = [sp.classes[i][key[i]] for i in range(H.k)]
        d = density(H, measures, Box.of(sides))
        if d not in (Fraction(0), Fraction(1)):
            homogeneous = False
    outputs = {"partition": sp.to_obj(), "meta": jsonable(sp.meta),
               "class_counts": list(sp.class_counts())}
    verification = dict(jsonable(rep))
    verification["sigma_empty"] = sp.sigma == ()
    verification["all_boxes_exactly_homogeneous"] = homogeneous
    ok = rep["ok"] and sp.sigma == () and homogeneous
    return outputs, verification, ok


def _balls_from_args(args):
    prefixes = args.prefix if args.prefix else [""]
    return parse_balls(prefixes)


def _cmd_dyadic_density(args, files):
    require(args.depth is not None, "--depth is required")
    balls = _balls_from_args(args)
    d = odd_split_density(balls, args.depth, parity=args.parity)
    counts = level_pair_counts(balls, args.depth)
    leaves = sum(b.leaf_count(args.depth) for b in balls)
    outputs = {"density": format_rational(d), "level_pair_counts": counts,
               "leaf_count": leaves, "parity": args.parity}
    verification = {"levels_sum_to_all_pairs":
                    sum(counts) == leaves * leaves - leaves}
    if args.depth <= 8:
        want = 1 if args.parity == "odd" else 0
        hit, total = brute_dyadic_pair_count([b.prefix for b in balls],
                                             args.depth, parity=want)
        verification["brute_recount_equal"] = Fraction(hit, total) == d
    ok = all(v is True for v in verification.values())
    return outputs, verification, ok


def _cmd_dyadic_report(args, files):
    require(args.depth is not None, "--depth is required")
    rows = ball_parity_report(args.depth, parity=args.parity)
    outputs = {"rows": jsonable(rows), "parity": args.parity}
    verification = {"all_rows_within_bound": all(r["ok"] for r in rows)}
    return outputs, verification, verification["all_rows_within_bound"]


def _cmd_dyadic_bound(args, files):
    require(args.depth is not None, "--depth is required")
    balls = _balls_from_args(args)
    rep = anti_homogeneity_bound_check(balls, balls[0], args.depth,
                                       parity=args.parity)
    outputs = {"pair_mass": format_rational(rep.pair_mass),
               "bound": format_rational(rep.bound),
               "gamma": format_rational(rep.gamma),
               "slack": format_rational(rep.slack),
               "mu_union": format_rational(rep.mu_union),
               "density": format_rational(rep.density),
               "ball": balls[0].prefix or "(root)"}
    verification = {"pair_mass_within_bound": rep.verdict}
    if args.depth <= 8:
        want = 1 if args.parity == "odd" else 0
        hit, _ = brute_dyadic_pair_count([b.prefix for b in balls],
                                         args.depth, parity=want)
        verification["brute_recount_equal"] = \
            rep.pair_mass == Fraction(hit, 1 << (2 * args.depth))
    ok = all(v is True for v in verification.values())
    return outputs, verification, ok


def _cmd_convexity_density(args, files):
    require(args.n is not None, "--n is required")
    iv = args.interval if args.interval else IntegerInterval(1, args.n)
    d = convexity_density(args.n, iv)
    n = len(iv)
    outputs = {"density": format_rational(d), "interval": [iv.lo, iv.hi],
               "ap_count": ap_count(n), "triples": comb(n, 3),
               "distance_to_half": format_rational(abs(d - Fraction(1, 2)))}
    verification = {}
    if n <= 200:
        edges, total = brute_convexity_edges(iv.points())
        verification["brute_recount_equal"] = Fraction(edges, total) == d
    else:
        verification["brute_recount_equal"] = "skipped-large"
    ok = verification["brute_recount_equal"] in (True, "skipped-large")
    return outputs, verification, ok


def _cmd_convexity_involution(args, files):
    require(args.interval is not None, "--interval is required")
    holds = reflection_involution_check(args.interval)
    outputs = {"interval": [args.interval.lo, args.interval.hi], "holds": holds}
    return outputs, {"involution_holds": holds}, holds


def _cmd_rodl_search(args, files):
    require(args.epsilon is not None, "--eps is required")
    if args.infile is None:
        require(args.depth is not None, "--depth (ball mode) or --in (graph mode)")
        rep = ball_family_search(args.depth, args.epsilon, parity=args.parity)
        outputs = {"mode": "ball-family", "found": rep.found,
                   "prefix_length": rep.prefix_length,
                   "density": None if rep.density is None else format_rational(rep.density),
                   "mass": None if rep.mass is None else format_rational(rep.mass),
                   "max_deviation": format_rational(rep.max_deviation),
                   "scanned": rep.scanned}
        dev = Fraction(0)
        for l in range(rep.scanned):
            d = odd_split_density([DyadicBall("0" * l)], args.depth,
                                  parity=args.parity)
            dev = max(dev, min(d, 1 - d))
        verification = {"deviation_recomputed_equal": dev == rep.max_deviation}
        if rep.found:
            d = odd_split_density([DyadicBall("0" * rep.prefix_length)],
                                  args.depth, parity=args.parity)
            verification["density_recomputed_equal"] = d == rep.density
        ok = all(v is True for v in verification.values())
        return outputs, verification, ok

    H, measures = _load_instance(args.infile, files)
    require(args.m is not None, "--m is required in graph mode")
    res = definable_homogeneous_search(H, measures[0], args.epsilon, args.m,
                                       budget=args.budget or 1_000_000,
                                       seed=args.seed or 0)
    outputs = {"mode": "boolean-combinations", "found": res.found,
               "examined": res.examined, "exhaustive": res.exhaustive}
    if res.found:
        outputs.update({
            "params": list(res.params), "patterns": list(res.patterns),
            "vertices": list(res.vertices),
            "density": format_rational(res.density),
            "mass": format_rational(res.mass)})
        nums, den = measures[0].numerators()
        aset = set(res.vertices)
        e_num = sum(nums[x] * nums[y] for (x, y) in H.edges
                    if x != y and x in aset and y in aset)
        w = sum(nums[v] for v in aset)
        tot = w * w - sum(nums[v] * nums[v] for v in aset)
        en, ed = args.epsilon.numerator, args.epsilon.denominator
        verification = {
            "density_recomputed_equal": Fraction(e_num, tot) == res.density,
            "mass_recomputed_equal": Fraction(w, den) == res.mass,
            "strictly_outside_band": e_num * ed < en * tot
            or (tot - e_num) * ed < en * tot,
        }
        ok = all(v is True for v in verification.values())
    else:
        n = H.part_sizes[0]
        covered = res.examined == comb(n, min(args.m, n)) if res.exhaustive \
            else res.examined == (args.budget or 1_000_000)
        verification = {"scan_covered_claim": covered,
                        "note": "absence of a witness is a valid outcome"}
        ok = covered
    return outputs, verification, ok


def _cmd_gen(args, files):
    kind = args.kind
    params = []
    if args.blocks is not None:
        params.append(("blocks", args.blocks))
    if args.vc_cap is not None:
        params.append(("cap", args.vc_cap))
    if kind == "dyadic-export":
        require(args.depth is not None, "--depth is required for dyadic-export")
        params.append(("depth", args.depth))
        sizes = (1 << args.depth, 1 << args.depth)
    else:
        require(args.sizes is not None, "--sizes is required")
        sizes = _parse_sizes(args.sizes)
    spec = GeneratorSpec(kind, sizes, len(sizes), args.seed or 0, tuple(params))
    g = generate(spec)
    outputs = g.to_obj()
    back = Hypergraph.from_obj(outputs["hypergraph"])
    verification = {"roundtrip_equal": back == g.hypergraph,
                    "edge_count": len(g.hypergraph.edges),
                    "measured": jsonable(g.measured)}
    if args.out:
        # --out names the instance file; the report still goes to stdout
        dump_json(jsonable(outputs), args.out)
        files["out"] = sha256_of(jsonable(outputs))
        args.out = None
    return outputs, verification, verification["roundtrip_equal"]


def _cmd_selftest(args, files):
    rep = run_selftest(args.names or None)
    for r in rep.results:
        tag = "PASS" if r["ok"] else "FAIL"
        print(f"{tag} {r['name']}: {r['detail']}", file=sys.stderr)
    outputs = {"passed": rep.passed, "failed": rep.failed}
    verification = {"results": rep.results, "all_passed": rep.ok}
    return outputs, verification, rep.ok


# ------------------------------------------------------------ arg plumbing

def _rational(s: str) -> Fraction:
    return parse_rational(s)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="vcreg", description=__doc__)
    sub = top.add_subparsers(dest="cmd", required=True)

    def common(p, *, infile=False, epsilon=False, out=True):
        if infile:
            p.add_argument("--in", dest="infile", help="instance or family JSON")
        if epsilon:
            p.add_argument("--epsilon", type=_rational,
                           help="exact rational like 1/4")
        if out:
            p.add_argument("--out", help="write the report here (atomic)")

    vc = sub.add_parser("vc").add_subparsers(dest="sub", required=True)
    p = vc.add_parser("dim")
    common(p, infile=True)
    p.add_argument("--parts", default="0")
    p.add_argument("--cap", type=int, default=8)
    p.add_argument("--budget", type=int, default=None)
    p = vc.add_parser("shatter")
    common(p, infile=True)
    p.add_argument("--parts", default="0")
    p.add_argument("--n", type=int)
    p = vc.add_parser("net")
    common(p, infile=True, epsilon=True)
    p.add_argument("--parts", default="0")
    p.add_argument("--strategy", choices=("greedy", "random"), default="greedy")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--weights", help="Measure JSON for the ground set")

    reg = sub.add_parser("reg").add_subparsers(dest="sub", required=True)
    for name in ("partition", "verify", "rect", "eh-box"):
        p = reg.add_parser(name)
        common(p, infile=True, epsilon=True)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--strategy", choices=("greedy", "random"), default="greedy")
        if name == "partition":
            p.add_argument("--uniform", action="store_true",
                           help="symmetric single-partition variant")
        if name == "verify":
            p.add_argument("--partition", help="partition JSON or a prior report")
        if name == "eh-box":
            p.add_argument("--alpha", type=_rational)

    st = sub.add_parser("stable").add_subparsers(dest="sub", required=True)
    p = st.add_parser("ladder")
    common(p, infile=True)
    p.add_argument("--parts", default="0")
    p.add_argument("--cap", type=int, default=8)
    p.add_argument("--budget", type=int, default=None)
    p = st.add_parser("partition")
    common(p, infile=True, epsilon=True)
    p.add_argument("--depth-cap", dest="depth_cap", type=int, default=None)
    p.add_argument("--rounds", type=int, default=None)

    dy = sub.add_parser("dyadic").add_subparsers(dest="sub", required=True)
    for name in ("density", "report", "bound"):
        p = dy.add_parser(name)
        common(p)
        p.add_argument("--depth", type=int)
        p.add_argument("--parity", choices=("odd", "even"), default="odd")
        if name != "report":
            p.add_argument("--prefix", action="append",
                           help="ball prefix; repeat for a union; first is B for `bound`")

    cv = sub.add_parser("convexity").add_subparsers(dest="sub", required=True)
    p = cv.add_parser("density")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--interval", type=_parse_interval)
    p = cv.add_parser("involution")
    common(p)
    p.add_argument("--interval", type=_parse_interval)

    ro = sub.add_parser("rodl").add_subparsers(dest="sub", required=True)
    p = ro.add_parser("search")
    common(p, infile=True)
    p.add_argument("--eps", dest="epsilon", type=_rational)
    p.add_argument("--depth", type=int, help="ball-family mode on the split graph")
    p.add_argument("--parity", choices=("odd", "even"), default="odd")
    p.add_argument("--m", type=int, help="fiber-combination complexity (graph mode)")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--prefix", action="append", help=argparse.SUPPRESS)

    p = sub.add_parser("gen")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--sizes", help="comma-separated part sizes, e.g. 16,16")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--blocks", type=int, default=None)
    p.add_argument("--cap", dest="vc_cap", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--out", help="write the instance here (atomic)")

    p = sub.add_parser("selftest")
    p.add_argument("names", nargs="*", help="substring filters on check names")
    p.add_argument("--out", help="write the report here (atomic)")
    return top


_HANDLERS = {
    ("vc", "dim"): _cmd_vc_dim,
    ("vc", "shatter"): _cmd_vc_shatter,
    ("vc", "net"): _cmd_vc_net,
    ("reg", "partition"): _cmd_reg_partition,
    ("reg", "verify"): _cmd_reg_verify,
    ("reg", "rect"): _cmd_reg_rect,
    ("reg", "eh-box"): _cmd_reg_ehbox,
    ("stable", "ladder"): _cmd_stable_ladder,
    ("stable", "partition"): _cmd_stable_partition,
    ("dyadic", "density"): _cmd_dyadic_density,
    ("dyadic", "report"): _cmd_dyadic_report,
    ("dyadic", "bound"): _cmd_dyadic_bound,
    ("convexity", "density"): _cmd_convexity_density,
    ("convexity", "involution"): _cmd_convexity_involution,
    ("rodl", "search"): _cmd_rodl_search,
    ("gen", None): _cmd_gen,
    ("selftest", None): _cmd_selftest,
}

_FLAG_SKIP = {"cmd", "sub", "out"}


def _threads_env() -> dict:
    raw = os.environ.get("VCREG_THREADS")
    if raw is None:
        return {"requested": None, "effective": 1}
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"VCREG_THREADS must be an integer, got {raw!r}") from None
    require(n >= 1, "VCREG_THREADS must be >= 1")
    # exact integer kernels are sequential; the bound is recorded, not used
    return {"requested": n, "effective": 1}


def _emit(report: dict, out_path: str | None):
    if out_path:
        dump_json(report, out_path)
    else:
        print(canonical_dumps(report))


def main(argv=None) -> int:
    t0 = time.perf_counter()
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2

    name = args.cmd if args.__dict__.get("sub") is None else f"{args.cmd} {args.sub}"
    flags = {k: jsonable(v) for k, v in sorted(vars(args).items())
             if k not in _FLAG_SKIP and v is not None}
    report = {"subcommand": name, "inputs": {"flags": flags, "files": {}}}
    try:
        report["env"] = {"vcreg_threads": _threads_env()}
        handler = _HANDLERS[(args.cmd, getattr(args, "sub", None))]
        outputs, verification, ok = handler(args, report["inputs"]["files"])
        require(bool(verification), "internal: empty verification section")
        report.update({"outputs": jsonable(outputs),
                       "verification": jsonable(verification), "ok": ok})
        code = 0 if ok else 1
    except InputError as exc:
        report.update({"error": {"kind": "input", "message": str(exc)}, "ok": False})
        code = 2
    except VerificationError as exc:
        detail = {"kind": "verification", "message": str(exc)}
        if getattr(exc, "box", None) is not None:
            detail["box"] = jsonable(exc.box)
        if getattr(exc, "tree", None) is not None:
            detail["tree"] = jsonable(exc.tree)
        report.update({"error": detail, "ok": False})
        code = 1
    report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    _emit(report, getattr(args, "out", None))
    return code


if __name__ == "__main__":
    sys.exit(main())
