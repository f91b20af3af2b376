"""Command-line workbench: construct matroids, check properties, run censuses,
dump polynomials, and replay the bundled verification fixtures.

Exit codes for `check`: 0 = Holds, 1 = Fails, 2 = Inconclusive, >2 = error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import io as wio
from .analysis import (
    c_rayleigh_verdict,
    hpp_verdict,
    is_balanced,
    neg_corr,
    neg_corr_all_pairs,
    nice_extension_report,
    rayleigh_verdict,
    strong_rayleigh_verdict,
    wagner_pair,
)
from .census import CensusJob, run_census
from .classifiers import is_paving, is_sparse_paving, positroid_verdict
from .constructions import (
    MultiGraph,
    bicircular,
    graphic,
    lattice_path,
    lattice_path_pair_from_endpoints,
    named_atlas,
    principal_extension,
    principal_truncation,
    transversal,
    uniform,
    whirl,
)
from .core import contract, delete, dual, from_bases, relax, relabel_map, two_sum
from .errors import MatroidError
from .poly import basis_poly, rayleigh_diff
from .verdicts import FAILS, HOLDS, INCONCLUSIVE


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _load_matroid(path: str):
    return wio.parse_matroid(_read(path))


def _int_list(s: str) -> list[int]:
    return [int(tok) for tok in s.replace(",", " ").split()]


def _emit_matroid(M, out: str | None, comments=None) -> None:
    text = wio.format_matroid(M, comments=comments)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"n={M.n} r={M.r} bases={len(M.basis_masks)}", file=sys.stderr)


# ---------------------------------------------------------------------------
# construct


def cmd_construct(args) -> int:
    kind = args.kind
    comments = None
    if kind == "uniform":
        M = uniform(args.k, args.n)
    elif kind == "lpm":
        if args.infile:
            M = lattice_path(wio.parse_lpm(_read(args.infile)))
        else:
            L = lattice_path_pair_from_endpoints(
                _int_list(args.lower), _int_list(args.upper)
            )
            M = lattice_path(L)
    elif kind == "graphic":
        M = graphic(wio.parse_graph(_read(args.infile)))
    elif kind == "bicircular":
        M = bicircular(wio.parse_graph(_read(args.infile)))
    elif kind == "transversal":
        M = transversal(wio.parse_setsystem(_read(args.infile)))
    elif kind == "whirl":
        M = whirl(args.r)
    elif kind == "atlas":
        M = named_atlas(args.name)
    elif kind == "dual":
        M = dual(_load_matroid(args.infile))
    elif kind == "2sum":
        M = two_sum(
            _load_matroid(args.infile), args.p, _load_matroid(args.infile2), args.q
        )
    elif kind == "minor":
        M = _load_matroid(args.infile)
        comments = []
        if args.contract:
            S = _int_list(args.contract)
            mapping = relabel_map(M.n, S)
            comments.append(f"contracted {sorted(S)}; old->new {mapping}")
            M = contract(M, S)
        if args.delete:
            S = _int_list(args.delete)
            mapping = relabel_map(M.n, S)
            comments.append(f"deleted {sorted(S)}; old->new {mapping}")
            M = delete(M, S)
    elif kind == "extension":
        M = principal_extension(_load_matroid(args.infile), _int_list(args.set))
    elif kind == "truncation":
        M = principal_truncation(_load_matroid(args.infile), _int_list(args.set))
    elif kind == "relax":
        M = relax(_load_matroid(args.infile), _int_list(args.set))
    else:  # pragma: no cover
        raise ValueError(kind)
    _emit_matroid(M, args.out, comments)
    return 0


# ---------------------------------------------------------------------------
# check


def cmd_check(args) -> int:
    M = _load_matroid(args.matroid)
    pair = tuple(_int_list(args.pair)) if args.pair else None
    f = basis_poly(M)
    start = time.perf_counter()
    prop = args.prop
    if prop == "negcorr":
        v = neg_corr(M, *pair) if pair else neg_corr_all_pairs(M)
    elif prop == "balanced":
        v = is_balanced(M)
    elif prop == "rayleigh":
        v = rayleigh_verdict(f, pair, budget=args.budget, seed=args.seed)
    elif prop == "strong_rayleigh":
        p = pair or wagner_pair(M)
        v = strong_rayleigh_verdict(f, p, budget=args.budget, seed=args.seed)
    elif prop == "hpp":
        v = hpp_verdict(M, budget=args.budget, seed=args.seed)
    elif prop == "c_rayleigh":
        v = c_rayleigh_verdict(
            f, Fraction(args.c), pair, budget=args.budget, seed=args.seed
        )
    elif prop == "positroid":
        order = positroid_verdict(M)
        payload = {
            "property": "positroid",
            "matroid_id": args.matroid,
            "outcome": HOLDS if order else FAILS,
            "order": list(order) if order else None,
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0 if order else 1
    elif prop == "paving":
        ok = is_paving(M)
        print(json.dumps({"property": "paving", "outcome": HOLDS if ok else FAILS}))
        return 0 if ok else 1
    elif prop == "sparse_paving":
        ok = is_sparse_paving(M)
        print(
            json.dumps({"property": "sparse_paving", "outcome": HOLDS if ok else FAILS})
        )
        return 0 if ok else 1
    else:  # pragma: no cover
        raise ValueError(prop)
    wall_ms = int((time.perf_counter() - start) * 1000)
    payload = wio.verdict_to_json(
        v, prop, args.matroid, pair=pair, seed=args.seed, wall_ms=wall_ms
    )
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.out:
        wio.dump_verdict_json(args.out, payload)
    return {HOLDS: 0, FAILS: 1, INCONCLUSIVE: 2}[v.outcome]


# ---------------------------------------------------------------------------
# poly


def cmd_poly(args) -> int:
    M = _load_matroid(args.matroid)
    f = basis_poly(M)
    if args.rayleigh:
        i, j = args.rayleigh
        f = rayleigh_diff(f, i, j)
    sys.stdout.write(wio.format_poly(f))
    return 0


# ---------------------------------------------------------------------------
# census


def cmd_census(args) -> int:
    params = {}
    for kv in (args.params or "").split(";"):
        if kv.strip():
            key, _, val = kv.partition("=")
            params[key.strip()] = val.strip()
    job = CensusJob(
        family=args.family,
        params=params,
        checks=[c.strip() for c in args.checks.split(",") if c.strip()],
        seed=args.seed,
        budget=args.budget,
        workers=args.workers,
        out_csv=args.out,
        witness_dir=args.witness_dir,
        limit=args.limit,
    )
    rows = run_census(job)
    fails = sum(1 for r in rows if "Fails" in (r["hpp_outcome"], r["rayleigh_outcome"], r["neg_corr_all_pairs"]))
    print(f"census: {len(rows)} instances, {fails} with Fails outcomes -> {args.out}")
    return 0


# ---------------------------------------------------------------------------
# verify-paper: one-shot reproduction of the anchored fixtures


EXAMPLE_BASES = [
    "125", "126", "135", "136", "145", "146", "156",
    "235", "236", "245", "246", "256", "345", "346", "356",
]
EXAMPLE_TRUNCATION = ["12", "13", "14", "15", "23", "24", "25", "34", "35"]
EXAMPLE_EXTENSION = EXAMPLE_BASES + [
    "127", "137", "147", "157", "237", "247", "257", "347", "357",
]


def _as_strings(M) -> list[str]:
    return sorted("".join(str(e) for e in sorted(b)) for b in M.bases)


def cmd_verify_paper(args) -> int:
    import random

    from .analysis import rayleigh_diff as _rd  # noqa: F401
    from .core import direct_sum, is_isomorphic
    from .poly import BoundedPoly

    failures = 0

    def report(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        if detail:
            line += f"  ({detail})"
        print(line)
        if not ok:
            failures += 1

    L = lattice_path_pair_from_endpoints([1, 2, 5], [3, 5, 6])
    M = lattice_path(L)
    report("example-bases", _as_strings(M) == sorted(EXAMPLE_BASES))

    tr = principal_truncation(M, [6])
    report("example-truncation", _as_strings(tr) == sorted(EXAMPLE_TRUNCATION))

    ext = principal_extension(M, [6])
    report("example-extension", _as_strings(ext) == sorted(EXAMPLE_EXTENSION))

    # loop invariance / coloop identities on seeded random matroids
    rng = random.Random(7)
    ok_loop = ok_coloop = True
    for _ in range(20):
        Mr = _random_matroid(rng, max_n=6)
        f = basis_poly(Mr)
        with_loop = direct_sum(Mr, uniform(0, 1))
        if basis_poly(with_loop).terms != f.terms:
            ok_loop = False
        with_coloop = direct_sum(Mr, uniform(1, 1))
        g = basis_poly(with_coloop)
        e = Mr.n + 1
        xe2 = BoundedPoly(with_coloop.n, {(0, 1 << (e - 1)): 1})
        pairs = [(i, j) for i in range(1, Mr.n + 1) for j in range(i + 1, Mr.n + 1)]
        for (i, j) in pairs[:3]:
            lhs = rayleigh_diff(g, i, j)
            rhs = xe2 * _embed(rayleigh_diff(f, i, j), with_coloop.n)
            if lhs != rhs:
                ok_coloop = False
        if Mr.n >= 1 and not rayleigh_diff(g, e, 1).is_zero():
            ok_coloop = False
    report("loop-invariance", ok_loop)
    report("coloop-identities", ok_coloop)

    report("mk4-not-positroid", positroid_verdict(named_atlas("MK4")) is None)

    ok_lpm = True
    from .classifiers import lpm_family

    for _, Mi in lpm_family(5):
        if positroid_verdict(Mi) is None:
            ok_lpm = False
            break
    report("lpm-positroid-orders", ok_lpm)

    from .classifiers import sparse_paving_family

    ok_sp = True
    for n, r in ((5, 2), (6, 3), (7, 3)):
        for Mi in sparse_paving_family(n, r, limit=50):
            if not neg_corr_all_pairs(Mi).holds:
                ok_sp = False
    report("sparse-paving-negative-correlation", ok_sp)

    rep = nice_extension_report(M, range(1, 7))
    report(
        "nice-extension-system-F-full",
        rep["uniform_satisfies"] is False and rep["feasible"] is False,
        f"uniform 1/6 satisfies: {rep['uniform_satisfies']}, feasible: {rep['feasible']}",
    )
    rep6 = nice_extension_report(M, [6])
    report(
        "nice-extension-system-F-last",
        rep6["feasible"] and rep6["solution_verified"],
        f"solution: {rep6['solution']}",
    )

    T = named_atlas("TicTacToe")
    report("tictactoe-shape", (T.n, T.r) == (9, 3))

    print(f"{'ALL FIXTURES PASS' if failures == 0 else f'{failures} FIXTURES FAILED'}")
    return 0 if failures == 0 else 3


def _embed(f, n: int):
    from .poly import BoundedPoly

    return BoundedPoly(n, f.terms)


def _random_matroid(rng, max_n: int = 7):
    """Small random matroid from a random family (used by fixtures)."""
    from .classifiers import sparse_paving_family

    kind = rng.randrange(3)
    if kind == 0:
        n = rng.randint(1, max_n)
        k = rng.randint(0, n)
        return uniform(k, n)
    if kind == 1:
        v = rng.randint(2, 4)
        edges = []
        for _ in range(rng.randint(1, min(6, max_n))):
            a, b = rng.randint(1, v), rng.randint(1, v)
            edges.append((a, b))
        G = MultiGraph(v=v, edges=tuple(edges))
        return graphic(G) if rng.random() < 0.5 else bicircular(G)
    n = rng.randint(4, max_n)
    r = rng.randint(2, n - 1)
    members = list(sparse_paving_family(n, r, limit=8))
    return members[rng.randrange(len(members))]


# ---------------------------------------------------------------------------
# argument plumbing


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """`--config file` holds key=value defaults; explicit flags override."""
    if "--config" in argv:
        idx = argv.index("--config")
        path = argv[idx + 1]
        argv = argv[:idx] + argv[idx + 2 :]
        conf = {}
        for lineno, raw in enumerate(_read(path).splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise wio.ParseError(lineno, f"expected key=value, got {line!r}")
            conf[key.strip()] = val.strip()
        ints = {"seed", "budget", "workers", "limit"}
        parser.set_defaults(
            **{k: int(v) if k in ints else v for k, v in conf.items()}
        )
    return argv


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="matroidwb")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a matroid and write its file")
    csub = c.add_subparsers(dest="kind", required=True)

    def with_out(p):
        p.add_argument("--out", help="output file (stdout when omitted)")
        return p

    p = with_out(csub.add_parser("uniform"))
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)
    p = with_out(csub.add_parser("lpm"))
    p.add_argument("--lower", help="comma-separated l_1<..<l_r")
    p.add_argument("--upper", help="comma-separated u_1<..<u_r")
    p.add_argument("--in", dest="infile", help="file with `lpm <P> <Q>`")
    for kind in ("graphic", "bicircular", "transversal", "dual"):
        p = with_out(csub.add_parser(kind))
        p.add_argument("--in", dest="infile", required=True)
    p = with_out(csub.add_parser("whirl"))
    p.add_argument("r", type=int)
    p = with_out(csub.add_parser("atlas"))
    p.add_argument("name")
    p = with_out(csub.add_parser("2sum"))
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--in2", dest="infile2", required=True)
    p.add_argument("--q", type=int, required=True)
    p = with_out(csub.add_parser("minor"))
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--delete", help="comma-separated elements")
    p.add_argument("--contract", help="comma-separated elements")
    for kind in ("extension", "truncation", "relax"):
        p = with_out(csub.add_parser(kind))
        p.add_argument("--in", dest="infile", required=True)
        p.add_argument("--set", required=True, help="comma-separated elements")

    k = sub.add_parser("check", help="run a property check; exit 0/1/2")
    k.add_argument("matroid")
    k.add_argument(
        "--prop",
        required=True,
        choices=[
            "negcorr", "balanced", "rayleigh", "strong_rayleigh", "hpp",
            "c_rayleigh", "positroid", "paving", "sparse_paving",
        ],
    )
    k.add_argument("--pair", help="comma-separated pair, e.g. 1,2")
    k.add_argument("--c", default="8/7", help="constant for c_rayleigh")
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--budget", type=int, default=100_000)
    k.add_argument("--out", help="also write the verdict JSON here")

    q = sub.add_parser("poly", help="dump the basis polynomial or a Rayleigh difference")
    q.add_argument("matroid")
    q.add_argument("--rayleigh", nargs=2, type=int, metavar=("I", "J"))

    s = sub.add_parser("census", help="run a family census to CSV + witnesses")
    s.add_argument("--family", required=True, choices=["lpm", "sparse_paving", "bicircular", "atlas"])
    s.add_argument("--params", default="", help="semicolon-separated key=value")
    s.add_argument("--checks", required=True, help="comma-separated checks")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=100_000)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--limit", type=int, default=1000)
    s.add_argument("--out", default="census.csv")
    s.add_argument("--witness-dir", dest="witness_dir", default="witnesses")

    sub.add_parser("verify-paper", help="replay the bundled verification fixtures")
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        argv = _apply_config(ap, argv)
        args = ap.parse_args(argv)
        if args.command == "construct":
            return cmd_construct(args)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "poly":
            return cmd_poly(args)
        if args.command == "census":
            return cmd_census(args)
        if args.command == "verify-paper":
            return cmd_verify_paper(args)
        raise ValueError(args.command)  # pragma: no cover
    except (MatroidError, wio.ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
