"""Command-line front end.

Polynomials print in descending powers in text mode (``λ^4 + 8λ^3 + ...``)
and as ascending arrays of decimal strings in JSON mode, so ``coeffs[i]``
multiplies ``λ^i``. Verification "fail" verdicts exit with status 0; only
usage and input errors are nonzero.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import TextIO

from .complex import (BUILTIN_NAMES, ComplexError, SimplicialComplex, builtin,
                      euler_characteristic, is_orientable, is_pseudomanifold, load_complex)
from .forests import ForestError, collapses_to_root, defects, enumerate_rooted_forests
from .linalg import IntegerPolynomial, betti_numbers, char_poly_shifted, laplacian
from .morse import (InstanceTooLarge, MatchingError, census_polynomial, enumerate_gradients,
                    gradient_census)
from .verify import (conjecture_scan, verify_graph_theorem, verify_kirchhoff_gradients,
                     verify_main_theorem, verify_matching_adjacency)

EPILOG = """\
polynomials: text output is descending ("λ^4 + 8λ^3 + 20λ^2 + 16λ"); JSON output
is an ascending array of decimal strings, coeffs[i] being the coefficient of λ^i.
The default enumeration guard (cells in the top two levels) is 40, or the value
of MORSEFOREST_GUARD; --guard overrides it only together with --force.
"""


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--builtin", metavar="NAME", help=f"one of: {', '.join(BUILTIN_NAMES)}")
    src.add_argument("--file", metavar="PATH", help="complex JSON file")
    p.add_argument("--n", type=int, help="size parameter of a builtin family")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--guard", type=int, help="enumeration guard override (needs --force)")
    p.add_argument("--force", action="store_true", help="acknowledge a guard override")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the census")
    p.add_argument("--seed", type=int, default=0, help="seed for random complexes")
    p.add_argument("--no-timing", action="store_true", help="omit elapsed time from reports")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="morseforest", epilog=EPILOG,
                                     formatter_class=argparse.RawDescriptionHelpFormatter,
                                     description="Laplacians, gradient census and rooted forests")
    sub = parser.add_subparsers(dest="command", required=True)
    kw = dict(parents=[common], epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)

    sub.add_parser("info", help="cell counts, Euler characteristic, manifold checks", **kw)
    for name, what in (("laplacian", "matrix"), ("charpoly", "det(Δ + λI)")):
        p = sub.add_parser(name, help=f"{what} of the d-th Laplacian", **kw)
        p.add_argument("--dim", type=int, help="defaults to the dimension of the complex")
    sub.add_parser("census", help="acyclic top-level matchings by critical top cells", **kw)
    p = sub.add_parser("gradients", help="count or list the gradients", **kw)
    p.add_argument("--enumerate", action="store_true", help="list every gradient")
    p = sub.add_parser("forests", help="rooted forests of the top dimension", **kw)
    p.add_argument("--root-size", type=int)
    p.add_argument("--only-defects", action="store_true", help="only forests that do not collapse")
    sub.add_parser("epsilon", help="summed weights of non-collapsing forests per root size", **kw)
    p = sub.add_parser("verify", help="run a verification harness", **kw)
    p.add_argument("theorem", choices=("graph", "main", "kirchhoff", "matching-adjacency"))
    p = sub.add_parser("scan-conjecture", help="report orientability against the identity", **kw)
    p.add_argument("--family", choices=("builtins", "random"), default="builtins")
    p.add_argument("--count", type=int, default=10, help="random pseudomanifolds to scan")
    return parser


def _load(args) -> SimplicialComplex:
    if args.file:
        return load_complex(args.file)
    if args.builtin:
        return builtin(args.builtin, args.n)
    raise UsageError("an input is required: --builtin NAME [--n N] or --file PATH")


def _poly_json(p: IntegerPolynomial, length: int | None = None) -> list[str]:
    return [str(c) for c in p.padded(length or 0)] if (length or p.coeffs) else ["0"]


def _emit(out: TextIO, args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        out.write(json.dumps(payload, ensure_ascii=False, separators=(",", ":")) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


def _yes(flag) -> str:
    return "n/a" if flag is None else ("yes" if flag else "no")


def cmd_info(K, args, out):
    pm, reason = is_pseudomanifold(K) if K.dim >= 1 else (False, "dimension 0")
    orient = is_orientable(K) if pm else None
    fv, chi, betti = K.f_vector(), euler_characteristic(K), betti_numbers(K)
    payload = {"complex": K.to_json(), "dim": K.dim, "f_vector": fv, "euler_characteristic": chi,
               "betti": betti, "pseudomanifold": pm, "orientable": orient}
    lines = [f"complex: {K.name or 'complex'}", f"dimension: {K.dim}",
             "f-vector: " + " ".join(map(str, fv)), f"euler characteristic: {chi}",
             "betti numbers: " + " ".join(map(str, betti)),
             f"pseudomanifold: {_yes(pm)}" + ("" if pm else f" ({reason})"),
             f"orientable: {_yes(orient)}"]
    _emit(out, args, payload, lines)


def _dim(K, args) -> int:
    d = K.dim if args.dim is None else args.dim
    if not 1 <= d <= K.dim:
        raise UsageError(f"--dim must lie in 1..{K.dim}")
    return d


def cmd_laplacian(K, args, out):
    d = _dim(K, args)
    L = laplacian(K, d)
    rows = L.tolist()
    width = max((len(str(x)) for r in rows for x in r), default=1)
    payload = {"dim": d, "labels": [list(c) for c in K.cells(d - 1)],
               "rows": [[str(x) for x in r] for r in rows]}
    _emit(out, args, payload, [" ".join(str(x).rjust(width) for x in r) for r in rows])


def cmd_charpoly(K, args, out):
    d = _dim(K, args)
    p = char_poly_shifted(laplacian(K, d))
    _emit(out, args, {"coeffs": _poly_json(p)}, [str(p)])


def cmd_census(K, args, out):
    c = gradient_census(K, guard=args.guard, jobs=args.jobs)
    poly = census_polynomial(c)
    counts = {str(k): str(v) for k, v in sorted(c.counts.items()) if v}
    payload = {"counts": counts, "total": str(c.total), "polynomial": _poly_json(poly)}
    lines = [f"{k} critical top cells: {v}" for k, v in counts.items()]
    lines += [f"total: {c.total}", f"polynomial: {poly}"]
    _emit(out, args, payload, lines)


def cmd_gradients(K, args, out):
    if not args.enumerate:
        total = gradient_census(K, guard=args.guard, jobs=args.jobs).total
        _emit(out, args, {"count": str(total)}, [f"gradients: {total}"])
        return
    grads = [M.to_json() for M in enumerate_gradients(K, guard=args.guard)]
    lines = [" ".join(f"{s}->{t}".replace(" ", "") for s, t in g) or "(empty)" for g in grads]
    _emit(out, args, {"count": str(len(grads)), "gradients": grads}, lines + [f"gradients: {len(grads)}"])


def cmd_forests(K, args, out):
    found = []
    for rf in enumerate_rooted_forests(K, by_root_size=args.root_size, guard=args.guard):
        ok = collapses_to_root(rf)
        if args.only_defects and ok:
            continue
        found.append(rf.to_json(collapses=ok))
    lines = [f"F={f['forest']} R={f['root']} weight={f['weight']} collapses={_yes(f['collapses'])}"
             for f in found]
    payload = {"count": len(found),
               "forests": [dict(f, weight=str(f["weight"])) for f in found]}
    _emit(out, args, payload, lines + [f"forests: {len(found)}"])


def cmd_epsilon(K, args, out):
    ds = defects(K, guard=args.guard)
    payload = {"epsilon": [str(d.epsilon) for d in ds],
               "defective_forests": [len(d.forests) for d in ds]}
    lines = [f"ε_{d.root_size} = {d.epsilon} ({len(d.forests)} non-collapsing forests)" for d in ds]
    _emit(out, args, payload, lines)


_HARNESS = {
    "graph": lambda K, a: verify_graph_theorem(K, guard=a.guard, jobs=a.jobs),
    "main": lambda K, a: verify_main_theorem(K, guard=a.guard, jobs=a.jobs),
    "kirchhoff": lambda K, a: verify_kirchhoff_gradients(K, guard=a.guard),
    "matching-adjacency": lambda K, a: verify_matching_adjacency(K),
}


def cmd_verify(K, args, out):
    report = _HARNESS[args.theorem](K, args)
    payload = report.to_json(timing=not args.no_timing)
    if args.theorem == "kirchhoff":
        lhs = " ".join(map(str, report.lhs))
        rhs = " ".join(map(str, report.rhs))
    else:
        lhs = str(IntegerPolynomial(tuple(report.lhs)))
        rhs = str(IntegerPolynomial(tuple(report.rhs)))
    nonzero = [f"λ^{i}: {d}" for i, d in enumerate(report.delta) if d]
    lines = [f"theorem: {report.theorem}", f"complex: {report.complex}", f"lhs: {lhs}",
             f"rhs: {rhs}", "delta: " + (", ".join(nonzero) or "none")]
    for w in report.witnesses:
        if "root_size" in w:
            lines.append(f"witness: ε_{w['root_size']} = {w['epsilon']} over {len(w['forests'])} forests")
    lines.append(f"verdict: {report.verdict}")
    if not args.no_timing:
        lines.append(f"ms: {report.ms}")
    _emit(out, args, payload, lines)


def cmd_scan(args, out):
    rows = conjecture_scan(args.family, guard=args.guard, count=args.count, seed=args.seed)
    payload = {"family": args.family, "rows": [r.to_json() for r in rows]}
    lines = ["complex | pseudomanifold | orientable | identity holds | agrees"]
    for r in rows:
        lines.append(" | ".join([r.complex, _yes(r.pseudomanifold), _yes(r.orientable),
                                 "skipped" if r.identity_holds is None else _yes(r.identity_holds),
                                 _yes(r.agrees)]))
    _emit(out, args, payload, lines)


_COMMANDS = {
    "info": cmd_info, "laplacian": cmd_laplacian, "charpoly": cmd_charpoly,
    "census": cmd_census, "gradients": cmd_gradients, "forests": cmd_forests,
    "epsilon": cmd_epsilon, "verify": cmd_verify,
}


def run(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.guard is not None and not args.force:
        err.write("error: --guard overrides the enumeration guard and requires --force\n")
        return 2
    try:
        if args.command == "scan-conjecture":
            cmd_scan(args, out)
        else:
            _COMMANDS[args.command](_load(args), args, out)
    except (UsageError, ComplexError, InstanceTooLarge, MatchingError, ForestError,
            ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    return 0


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
