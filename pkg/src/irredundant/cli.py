"""Command-line front end: ``irredundant <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 search
budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bounds, codes, constructions, cube, search

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
BOUNDS_CAP = 64
THREADS_ENV = "IRREDUNDANT_THREADS"

CONSTRUCT_KINDS = ("principal", "translates", "from-code", "b-family", "e-extension",
                   "exceptional-5-3", "product-k1", "random")


class UsageError(Exception):
    pass


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _rational(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator),
            "decimal": float(f"{float(q):.6g}")}


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _threads(args) -> int:
    if getattr(args, "threads", None) is not None:
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        return args.threads
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
        return max(1, value)
    return 1


def _need(args, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"{args.command} needs {', '.join(missing)}")


# -- bounds ------------------------------------------------------------------------

def cmd_bounds(args) -> int:
    _need(args, "n", "k")
    n, k = args.n, args.k
    if not 0 <= k <= n or n > BOUNDS_CAP:
        raise UsageError(f"need 0 <= k <= n <= {BOUNDS_CAP}, got n={n}, k={k}")
    if args.grid is not None and args.grid < 2:
        raise UsageError("--grid needs m >= 2")
    report = bounds.bounds_report(n, k, args.grid)
    if args.json:
        _emit_json(report.to_dict())
        return EXIT_OK
    rows = [
        ("n, k", f"{n}, {k}"),
        ("dimension bound", str(report.ah_bound)),
        ("packing bound", f"{_frac(report.meshulam)} ~ {float(report.meshulam):.6g}"),
        ("packing bound floor", str(report.meshulam_floor)),
        ("beta", f"{_frac(report.beta)} ~ {float(report.beta):.6g}"),
        ("eta", f"{_frac(report.eta)} ~ {float(report.eta):.6g}"),
        ("random lower bound", f"{report.random_lower:.6g}"),
        ("optimal t", f"{report.t_opt:.6g}"),
        ("g(beta)", f"{report.ratio_g:.6g}"),
    ]
    if report.grid_m is not None:
        rows.append((f"grid bound (m={report.grid_m})",
                     f"{_frac(report.grid_bound)} ~ {float(report.grid_bound):.6g}"))
    for case in report.equality:
        rows.append(("equality", case))
    width = max(len(r[0]) for r in rows)
    for name, value in rows:
        print(f"{name:<{width}}  {value}")
    return EXIT_OK


# -- construct ---------------------------------------------------------------------

def _load_code(text: str) -> codes.Code:
    if text == "golay":
        return codes.golay_code()
    name, _, arg = text.partition(":")
    if name in ("hamming", "trivial") and arg:
        try:
            value = int(arg)
        except ValueError:
            raise UsageError(f"bad code parameter in {text!r}") from None
        return codes.hamming_code(value) if name == "hamming" else codes.trivial_code(value)
    if os.path.exists(text):
        return codes.load_code(text)
    raise UsageError(f"unknown code {text!r}: use hamming:S, golay, trivial:N or a file")


def _moving_mask(pattern: str) -> int:
    return sum(1 << i for i, ch in enumerate(pattern) if ch == "*")


def _resolve_p(args) -> float:
    if args.p is None or args.p == "optimal":
        return constructions.optimal_p(args.n, args.k)
    try:
        return float(args.p)
    except ValueError:
        raise UsageError(f"--p must be a number or 'optimal', got {args.p!r}") from None


def _build(args) -> tuple[cube.Family, dict | None]:
    kind = args.kind
    if kind == "principal":
        _need(args, "n", "k")
        anchor = cube.Vertex.parse(args.anchor) if args.anchor else None
        return constructions.principal(args.n, args.k, anchor), None
    if kind == "translates":
        if args.moving:
            n = len(args.moving)
            return constructions.translates(n, _moving_mask(args.moving)), None
        _need(args, "n", "k")
        return constructions.translates(args.n, (1 << args.k) - 1), None
    if kind == "from-code":
        _need(args, "k", "code")
        code = _load_code(args.code)
        return constructions.from_code(code.n, args.k, code), None
    if kind == "b-family":
        _need(args, "k")
        return constructions.b_family(args.k), None
    if kind == "e-extension":
        _need(args, "k")
        return constructions.e_extension(args.k), None
    if kind == "exceptional-5-3":
        return constructions.exceptional_5_3(), None
    if kind == "product-k1":
        _need(args, "n")
        return constructions.product_k1(args.n), None
    _need(args, "n", "k")
    p = _resolve_p(args)
    sample = constructions.sample_random_family(args.n, args.k, p, args.seed)
    return sample.family, sample.sidecar()


def cmd_construct(args) -> int:
    family, sidecar = _build(args)
    verdict = cube.is_irredundant(family)
    text = cube.format_cubes(family)
    summary = {"kind": args.kind, "n": family.n, "k": family.k, "size": len(family),
               "irredundant": verdict}
    if sidecar is not None:
        summary["random"] = sidecar
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if sidecar is not None:
            with open(args.out + ".json", "w", encoding="utf-8") as fh:
                fh.write(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
        if args.json:
            _emit_json(summary)
        else:
            print(f"{args.kind}: n={family.n} k={family.k} size={len(family)} "
                  f"{'irredundant' if verdict else 'NOT irredundant'} -> {args.out}")
    else:
        if args.json:
            summary["members"] = family.words()
            _emit_json(summary)
        else:
            sys.stdout.write(text)
            print(f"# size={len(family)} {'irredundant' if verdict else 'NOT irredundant'}",
                  file=sys.stderr)
            if sidecar is not None:
                print("# " + json.dumps(sidecar, sort_keys=True), file=sys.stderr)
    return EXIT_OK if verdict else EXIT_FAIL


# -- verify ------------------------------------------------------------------------

def cmd_verify(args) -> int:
    family = cube.load_cubes(args.file)
    counts = cube.private_counts(family)
    verdict = cube.is_irredundant(family)
    bad = cube.redundant_members(family)
    report = {
        "n": family.n, "k": family.k, "size": len(family),
        "irredundant": verdict,
        "private_counts": counts,
        "redundant_members": bad,
        "union_size": cube.union_size(family),
    }
    if args.maximal and verdict and family.n >= 1:
        report["maximal"] = cube.is_maximal_irredundant(family)
    if args.json:
        _emit_json(report)
    else:
        print(f"n={family.n} k={family.k} size={len(family)} union={report['union_size']}")
        for i, (c, m) in enumerate(zip(family.members, counts)):
            flag = "" if m else "  <- no private vertex"
            print(f"{i:4d}  {c.word}  private={m}{flag}")
        print("verdict: " + ("irredundant" if verdict else
                             f"NOT irredundant (members {', '.join(map(str, bad))})"))
        if "maximal" in report:
            print("maximal: " + ("yes" if report["maximal"] else "no"))
    return EXIT_OK if verdict else EXIT_FAIL


# -- certify -----------------------------------------------------------------------

def _load_assignment(path: str, family: cube.Family) -> bounds.PrivateAssignment:
    words = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                words.append(cube.Vertex.parse(line))
    if len(words) != len(family):
        raise UsageError(f"assignment has {len(words)} vertices, family has {len(family)} members")
    return bounds.PrivateAssignment(dict(enumerate(words)))


def cmd_certify(args) -> int:
    family = cube.load_cubes(args.file)
    if not cube.is_irredundant(family):
        print("family is not irredundant", file=sys.stderr)
        return EXIT_FAIL
    center = cube.Vertex.parse(args.center) if args.center else None
    if center is not None and center.n != family.n:
        raise UsageError("--center has the wrong length")
    try:
        if args.assignment:
            assignment = _load_assignment(args.assignment, family)
            assignment.validate(family)
        elif args.ball:
            assignment = bounds.smallest_private_assignment(family, radius=family.k,
                                                            center=center)
        else:
            assignment = bounds.smallest_private_assignment(family)
        if args.ball:
            value, x = bounds.ball_sweep(family, assignment, center)
            total = None
        else:
            value, x, total = bounds.bollobas_sweep(family, assignment)
    except cube.CubeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    ok = value <= 1
    report = {
        "mode": "ball" if args.ball else "pointwise",
        "n": family.n, "k": family.k, "size": len(family),
        "max_value": _rational(value),
        "argmax": None if x is None else str(x),
        "pass": ok,
        "assignment": [str(assignment[i]) for i in range(len(family))],
    }
    if total is not None:
        report["total"] = _rational(total)
    if args.json:
        _emit_json(report)
    else:
        where = "" if x is None else f" at x={x}"
        print(f"max certificate value {_frac(value)}{where}: {'pass' if ok else 'FAIL'}")
        if total is not None:
            print(f"sum over all vertices {_frac(total)}")
    return EXIT_OK if ok else EXIT_FAIL


# -- search ------------------------------------------------------------------------

def cmd_search(args) -> int:
    _need(args, "n", "k")
    center = cube.Vertex.parse(args.center) if args.center else None
    problem = search.SearchProblem(
        args.n, args.k, args.universe, radius=args.radius, center=center,
        enumerate=args.enumerate, budget=args.budget, time_limit=args.time_limit,
        symmetry_depth=args.symmetry_depth)
    result = search.max_irredundant(problem)
    if args.out:
        cube.save_cubes(args.out, result.witness)
    if args.json:
        _emit_json(result.to_dict())
    else:
        status = "complete" if result.complete else "INCOMPLETE (budget exhausted)"
        print(f"n={args.n} k={args.k} universe={args.universe}: optimum {result.optimum} "
              f"[{status}, {result.node_count} nodes]")
        for w in result.witness.words():
            print(f"  {w}")
        if result.extremal_classes is not None:
            print(f"extremal classes: {len(result.extremal_classes)}")
            for i, f in enumerate(result.extremal_classes):
                print(f"  class {i}: {' '.join(f.words())}")
    return EXIT_OK if result.complete else EXIT_BUDGET


# -- experiment --------------------------------------------------------------------

def cmd_experiment(args) -> int:
    _need(args, "n", "k")
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    if args.n > constructions.RANDOM_CAP:
        raise UsageError(f"--n must be at most {constructions.RANDOM_CAP}")
    p = _resolve_p(args)
    stats = constructions.random_experiment(args.n, args.k, p, args.trials, args.seed,
                                            verify=not args.no_verify,
                                            threads=_threads(args))
    if args.json:
        _emit_json(stats.to_dict())
    else:
        print(f"n={args.n} k={args.k} p={p:.6g} trials={args.trials} seed={args.seed}")
        print(f"mean size     {stats.mean:.6g}")
        print(f"std dev       {stats.std:.6g}")
        print(f"std error     {stats.stderr:.6g}")
        print(f"expected size {stats.expected:.6g}")
        print(f"z-score       {stats.z:.3f}")
        print(f"all irredundant: {'yes' if stats.all_irredundant else 'NO'}")
    return EXIT_OK if stats.all_irredundant else EXIT_FAIL


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irredundant",
        description="Irredundant families of subcubes of the discrete cube.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, nk=True):
        if nk:
            p.add_argument("--n", type=int)
            p.add_argument("--k", type=int)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = common(sub.add_parser("bounds", help="upper and lower bounds for (n, k)"))
    p.add_argument("--grid", type=int, metavar="M", help="also the bound for Z_M^n")
    p.set_defaults(func=cmd_bounds)

    p = common(sub.add_parser("construct", help="build a family and write it as .cubes"))
    p.add_argument("kind", choices=CONSTRUCT_KINDS)
    p.add_argument("--anchor", help="vertex word for principal families")
    p.add_argument("--moving", help="pattern with * on the moving coordinates (translates)")
    p.add_argument("--code", help="hamming:S, golay, trivial:N or a file of codewords")
    p.add_argument("--p", help="sampling density or 'optimal' (random)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the family here (random also writes OUT.json)")
    p.set_defaults(func=cmd_construct)

    p = common(sub.add_parser("verify", help="check irredundance of a .cubes file"), nk=False)
    p.add_argument("file")
    p.add_argument("--maximal", action="store_true", help="also test maximality")
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("certify", help="evaluate the packing certificate"), nk=False)
    p.add_argument("file")
    p.add_argument("--assignment", help="file with one private vertex per member")
    p.add_argument("--ball", action="store_true",
                   help="private vertices inside the radius-k ball, x of weight k")
    p.add_argument("--center", help="ball centre (default 0...0)")
    p.set_defaults(func=cmd_certify)

    p = common(sub.add_parser("search", help="exact maximum by branch and bound"))
    p.add_argument("--universe", choices=search.UNIVERSES, default="all")
    p.add_argument("--radius", type=int, help="ball radius (default k)")
    p.add_argument("--center", help="ball centre (default 0...0)")
    p.add_argument("--enumerate", action="store_true", help="list extremal classes")
    p.add_argument("--budget", type=int, default=search.DEFAULT_BUDGET, help="node budget")
    p.add_argument("--time-limit", type=float, help="seconds")
    p.add_argument("--symmetry-depth", type=int, default=5)
    p.add_argument("--threads", type=int, help="accepted for compatibility; search is serial")
    p.add_argument("--out", help="write the witness as .cubes")
    p.set_defaults(func=cmd_search)

    p = common(sub.add_parser("experiment", help="Monte-Carlo run of the random construction"))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--p", help="sampling density or 'optimal' (default)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, help=f"worker threads (default ${THREADS_ENV} or 1)")
    p.add_argument("--no-verify", action="store_true", help="skip irredundance checks")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except cube.CubesFormatError as exc:
        print(f"{getattr(args, 'file', '')}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
