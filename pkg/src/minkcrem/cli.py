"""Command-line entry point: ``minkcrem <subcommand> [options]``.

Exit codes: 0 success, 1 internal invariant failure (or a failing check),
2 domain error, 3 resource limit.  Output is deterministic; ``--json``
switches every subcommand to JSON and sweeps emit one JSON object per line.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from . import acceptance
from .arith import FactoredNat, factor, get_budget, is_prime, iter_prime_powers, primes_up_to, set_budget
from .audit import CaseId, audit_all, run_grid
from .bounds import NOT_SMALL, bound_report, closed_form_finite, closed_form_padic, global_bound, local_bound, range_bound
from .constructions import TorusSpec, attainment_row, build_group, torus_image_oracle, torus_point_order
from .errors import DomainError, InvariantViolation, MinkcremError, PreconditionError, ResourceLimit
from .fields import (
    CyclotomicInvariants,
    Finite,
    FormalExtension,
    PAdic,
    finite_invariants,
    invariant_range,
    invariants,
    normalize,
    parse_field,
)
from .groups import STRUCTURE_LIMIT, analyze_structure
from .higher import p_r
from .report import SCHEMA_VERSION, bound_dict, dumps, ext, factored, prime_bound_dict

EXIT_OK, EXIT_INTERNAL, EXIT_DOMAIN, EXIT_RESOURCE = 0, 1, 2, 3


class Output:
    """Collects the lines of one command; sweeps stream instead of buffering."""

    def __init__(self, path: str | None):
        self.path = path
        self.lines: list[str] = []
        self._stream = None

    def add(self, line: str) -> None:
        self.lines.append(line)

    def stream(self, line: str) -> None:
        if self._stream is None:
            self._stream = open(self.path, "w", encoding="utf-8") if self.path else sys.stdout
        self._stream.write(line + "\n")
        self._stream.flush()

    def close(self, flush: bool) -> None:
        if flush and self.lines:
            text = "\n".join(self.lines) + "\n"
            if self.path:
                with open(self.path, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
        if self._stream is not None and self._stream is not sys.stdout:
            self._stream.close()


def _envelope(command: str, body: dict) -> str:
    return dumps({"schemaVersion": SCHEMA_VERSION, "command": command, **body})


def _render(value: FactoredNat) -> str:
    text = str(value)
    if text != str(value.value()):
        text += f" = {value.value()}"
    return text if value.certified else text + " (uncertified)"


# ---------------------------------------------------------------------------
# argument types


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _nonnegative(text: str) -> int:
    if text == "0":
        return 0
    return _positive(text)


def _prime(text: str) -> int:
    value = _positive(text)
    if not is_prime(value):
        raise argparse.ArgumentTypeError(f"{value} is not prime")
    return value


# ---------------------------------------------------------------------------
# subcommands


def cmd_invariants(args, out: Output) -> int:
    field = normalize(parse_field(args.field))
    if isinstance(field, FormalExtension):
        rng = invariant_range(field, args.ell)
        cands = sorted(rng.t_candidates)
        if args.json:
            out.add(_envelope("invariants", {"field": str(field), "ell": args.ell,
                                             "tCandidates": cands, "mUpper": ext(rng.m_upper)}))
        else:
            out.add(f"field: {field}")
            out.add(f"l={args.ell} t in {{{', '.join(map(str, cands))}}} m <= {rng.m_upper}")
        return EXIT_OK
    inv = invariants(field, args.ell)
    if args.json:
        out.add(_envelope("invariants", {"field": str(field), "ell": inv.ell, "t": inv.t, "m": ext(inv.m)}))
    else:
        out.add(f"field: {field}")
        out.add(f"l={inv.ell} t={inv.t} m={inv.m}")
    return EXIT_OK


def _prime_line(entry: dict) -> str:
    t = "?" if entry["t"] is None else entry["t"]
    m = "?" if entry["m"] is None else entry["m"]
    return f"l={entry['ell']} t={t} m={m} M={entry['M']} ({entry['branch']})"


def cmd_bound(args, out: Output) -> int:
    field = normalize(parse_field(args.field))
    if args.ell is not None and isinstance(field, FormalExtension):
        rng = invariant_range(field, args.ell)
        M = range_bound(field, args.ell)
        cands = sorted(rng.t_candidates)
        if args.json:
            out.add(_envelope("bound-range", {"field": str(field), "ell": args.ell, "tCandidates": cands,
                                              "mUpper": ext(rng.m_upper), "M": ext(M)}))
        else:
            out.add(f"field: {field}")
            out.add(f"l={args.ell} t in {{{', '.join(map(str, cands))}}} m <= {rng.m_upper}")
            out.add(f"M(k', {args.ell}) <= {M}")
        return EXIT_OK
    if args.ell is not None:
        pb = local_bound(field, args.ell)
        entry = prime_bound_dict(pb, args.ell)
        M = entry["M"]
        part = FactoredNat({args.ell: M}) if isinstance(M, int) and M else FactoredNat.one()
        body = {"field": str(field), "perPrime": [entry],
                "global": factored(part) if isinstance(M, int) else NOT_SMALL}
        if args.json:
            out.add(_envelope("bound", body))
        else:
            out.add(f"field: {field}")
            out.add(_prime_line(entry))
            out.add(f"M(k, {args.ell}) = {M}")
        return EXIT_OK
    body = bound_dict(bound_report(field))
    if args.json:
        out.add(_envelope("bound", body))
        return EXIT_OK
    out.add(f"field: {field}")
    for entry in body["perPrime"]:
        out.add(_prime_line(entry))
    glob = body["global"]
    if glob == NOT_SMALL:
        out.add(f"M(k) = {NOT_SMALL}")
    else:
        suffix = "" if glob.get("certified", True) else " (uncertified)"
        out.add(f"M(k) = {glob['factored']} = {glob['decimal']}{suffix}")
    return EXIT_OK


# sweep workers: top level so they pickle


def _sweep_finite(q: int):
    value = global_bound(Finite.of_order(q)).global_
    ok = value == closed_form_finite(q)
    return f"{q} {value} {value.value()} {'ok' if ok else 'FAIL'}", {"q": q, "global": factored(value), "ok": ok}, ok


def _sweep_padic(p: int):
    value = global_bound(PAdic(p)).global_
    ok = value == closed_form_padic(p)
    return f"{p} {value} {value.value()} {'ok' if ok else 'FAIL'}", {"p": p, "global": factored(value), "ok": ok}, ok


def _sweep_attain(pair):
    row = attainment_row(*pair)
    return str(row), _row_dict(row), row.ok


def _row_dict(row) -> dict:
    return {"q": row.q, "ell": row.ell, "t": row.t, "m": row.m, "M": row.M,
            "constructedMax": row.constructed_max, "ok": row.ok}


def _sweep_items(args):
    if args.family == "finite":
        return _sweep_finite, list(iter_prime_powers(args.stop, start=args.start))
    if args.family == "padic":
        return _sweep_padic, [p for p in primes_up_to(args.stop) if p >= args.start]
    pairs = [(q, ell) for q in iter_prime_powers(args.stop, start=args.start)
             for ell in primes_up_to(args.max_ell) if q % ell]
    return _sweep_attain, pairs


def cmd_sweep(args, out: Output) -> int:
    fn, items = _sweep_items(args)
    failures = 0
    if args.workers > 1:
        pool = ProcessPoolExecutor(args.workers, initializer=set_budget, initargs=(get_budget(),))
        results = pool.map(fn, items, chunksize=8)
    else:
        pool = None
        results = map(fn, items)
    try:
        for text, obj, ok in results:
            failures += not ok
            out.stream(_envelope("sweep", {"family": args.family, **obj}) if args.json else text)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return EXIT_INTERNAL if failures else EXIT_OK


def cmd_audit(args, out: Output) -> int:
    if args.grid:
        summary = run_grid(args.max_ell, args.max_t, args.max_m, sharp=args.sharp)
        body = {"points": summary.points, "violations": len(summary.violations),
                "notTight": len(summary.not_tight), "passed": summary.passed}
        if args.json:
            out.add(_envelope("audit-grid", body))
        else:
            out.add(f"grid l <= {args.max_ell}, t <= {args.max_t}, m <= {args.max_m}"
                    f"{' (sharp)' if args.sharp else ''}: {summary.points} points")
            out.add(f"violations: {len(summary.violations)}")
            for rep in summary.violations:
                out.add(f"  {rep.inv}: {', '.join(c.value for c in rep.violations)}")
            out.add(f"not tight: {len(summary.not_tight)}")
            out.add("PASS" if summary.passed else "FAIL")
        return EXIT_OK if summary.passed else EXIT_INTERNAL
    missing = [name for name in ("ell", "t", "m") if getattr(args, name) is None]
    if missing:
        raise PreconditionError(f"audit needs --ell, --t and --m (or --grid); missing {missing}")
    rep = audit_all(CyclotomicInvariants(args.ell, args.t, args.m), sharp=args.sharp)
    argmax = sorted(c.value for c in rep.argmax)
    if args.json:
        out.add(_envelope("audit", {
            "ell": args.ell, "t": args.t, "m": args.m, "sharp": args.sharp, "M": rep.M,
            "cases": {c.value: b for c, b in rep.bounds.items()},
            "maximum": rep.maximum, "argmax": argmax,
            "violations": [c.value for c in rep.violations],
            "passed": rep.passed, "tight": rep.tight,
        }))
    else:
        out.add(f"{rep.inv}{' sharp' if args.sharp else ''}: M(k,l) = {rep.M}")
        for case in CaseId:
            mark = "  VIOLATION" if case in rep.violations else ""
            out.add(f"  {case.value:<12}{rep.bounds[case]}{mark}")
        out.add(f"max = {rep.maximum} at {', '.join(argmax)}")
        out.add(("PASS" if rep.passed else "FAIL") + (" (tight)" if rep.tight else " (not tight)"))
    return EXIT_OK if rep.passed else EXIT_INTERNAL


def cmd_torus(args, out: Output) -> int:
    inv = finite_invariants(args.q, args.ell)
    spec = TorusSpec.make(args.q, inv.t)
    n = inv.m if args.n is None else args.n
    if args.ell == 2 and n < 2:
        raise PreconditionError("l = 2 constructions need n >= 2")
    points = torus_point_order(args.q, inv.t)
    image = torus_image_oracle(args.q, inv.t, args.ell, n) if inv.t in (3, 4, 6) else None
    group = build_group(args.q, args.ell, n)
    order = group.order
    structure = analyze_structure(group) if order <= STRUCTURE_LIMIT else None
    body = {
        "q": args.q, "ell": args.ell, "t": inv.t, "m": inv.m, "n": n, "kind": spec.kind,
        "F": None if spec.F is None else str(spec.F), "G": None if spec.G is None else str(spec.G),
        "points": factored(points), "imageValuation": image,
        "group": {
            "name": group.name, "order": factored(factor(order)),
            "isAbelian": None if structure is None else structure.is_abelian,
            "abelianRank": None if structure is None else structure.abelian_rank,
            "exponent": None if structure is None else structure.exponent,
            "minIndexAbelianNormalRank2": None if structure is None else structure.min_index_abelian_normal_rank2,
        },
    }
    if args.json:
        out.add(_envelope("torus", body))
        return EXIT_OK
    out.add(f"F_{args.q}, l={args.ell}: t={inv.t} m={inv.m}, torus {spec.kind}")
    if spec.F is not None:
        out.add(f"  F = {spec.F}, G = {spec.G}")
    out.add(f"  |T(F_{args.q})| = {_render(points)}")
    if image is not None:
        out.add(f"  v_{args.ell}(image of G) = {image}")
    g = body["group"]
    out.add(f"  group n={n}: {group.name}, order {g['order']['factored']} = {order}")
    if structure is not None:
        rank = "-" if structure.abelian_rank is None else structure.abelian_rank
        out.add(f"  abelian={structure.is_abelian} rank={rank} exponent={structure.exponent} "
                f"min index of abelian normal rank<=2 subgroup={structure.min_index_abelian_normal_rank2}")
    return EXIT_OK


def cmd_attain(args, out: Output) -> int:
    row = attainment_row(args.q, args.ell)
    out.add(_envelope("attain", _row_dict(row)) if args.json else str(row))
    return EXIT_OK if row.ok else EXIT_INTERNAL


def cmd_poly(args, out: Output) -> int:
    rp = p_r(args.rank)
    value = None if args.eval is None else rp.evaluate(args.eval)
    if args.json:
        body = {"rank": rp.r, "productForm": rp.product_form(), "expanded": str(rp.poly),
                "degree": rp.poly.degree, "factors": [[d, e] for d, e in rp.factor_list],
                "eval": None if value is None else {"q": args.eval, "value": factored(value)}}
        out.add(_envelope("poly", body))
        return EXIT_OK
    out.add(f"P_{rp.r} = {rp.product_form()}")
    out.add(f"P_{rp.r} = {rp.poly}")
    if value is not None:
        out.add(f"P_{rp.r}({args.eval}) = {_render(value)}")
    return EXIT_OK


def _suite(text: str) -> list:
    if text == "all":
        return list(acceptance.CRITERIA)
    by_id = {c.id: c for c in acceptance.CRITERIA}
    chosen = []
    for part in text.split(","):
        try:
            chosen.append(by_id[int(part)])
        except (ValueError, KeyError):
            raise argparse.ArgumentTypeError(f"unknown criterion {part!r}; ids are 1..{len(by_id)}") from None
    return chosen


def cmd_verify(args, out: Output) -> int:
    outcomes = [acceptance.run(c) for c in args.suite]
    passed = sum(o.ok for o in outcomes)
    if args.json:
        rows = []
        for o in outcomes:
            row = {"id": o.criterion.id, "name": o.criterion.name, "passed": o.ok, "detail": o.detail}
            if args.timings:
                row["seconds"] = round(o.elapsed, 3)
            rows.append(row)
        out.add(_envelope("verify", {"criteria": rows, "passed": passed == len(outcomes)}))
    else:
        out.lines.extend(o.line(timings=args.timings) for o in outcomes)
        out.add(f"{passed}/{len(outcomes)} criteria passed")
    return EXIT_OK if passed == len(outcomes) else EXIT_INTERNAL


# ---------------------------------------------------------------------------
# parser


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands get their own copies with suppressed defaults, so a flag
    # given before the subcommand is not reset by the subparser
    flags = argparse.ArgumentParser(add_help=False)
    unset = argparse.SUPPRESS if suppress else None
    flags.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
                       help="emit JSON")
    flags.add_argument("--budget", type=_positive, default=unset,
                       help="factorization effort cap (rho iterations); env MINKCREM_BUDGET")
    flags.add_argument("--out", default=unset, help="write output to this file")
    return flags


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    parser = argparse.ArgumentParser(prog="minkcrem", parents=[_global_flags(suppress=False)],
                                     description="Orders of finite subgroups of the plane Cremona group.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("invariants", parents=[common], help="cyclotomic invariants t and m")
    p.add_argument("--field", required=True)
    p.add_argument("--ell", type=_prime, required=True)
    p.set_defaults(run=cmd_invariants)

    p = sub.add_parser("bound", parents=[common], help="M(k, l) per prime and the global M(k)")
    p.add_argument("--field", required=True)
    p.add_argument("--ell", type=_prime)
    p.set_defaults(run=cmd_bound)

    p = sub.add_parser("sweep", parents=[common], help="line-per-item sweeps over a family of fields")
    p.add_argument("--family", choices=("finite", "padic", "attain"), required=True)
    p.add_argument("--start", type=_positive, default=2)
    p.add_argument("--stop", type=_positive, default=100)
    p.add_argument("--max-ell", type=_positive, default=100, help="largest l (attain family)")
    p.add_argument("--workers", type=_positive, default=1)
    p.set_defaults(run=cmd_sweep)

    p = sub.add_parser("audit", parents=[common], help="check every surface case against M(k, l)")
    p.add_argument("--ell", type=_prime)
    p.add_argument("--t", type=_positive)
    p.add_argument("--m", type=_positive)
    p.add_argument("--sharp", action="store_true")
    p.add_argument("--grid", action="store_true")
    p.add_argument("--max-ell", type=_positive, default=100)
    p.add_argument("--max-t", type=_positive, default=30)
    p.add_argument("--max-m", type=_positive, default=8)
    p.set_defaults(run=cmd_audit)

    p = sub.add_parser("torus", parents=[common], help="torus over F_q and the group built from it")
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--ell", type=_prime, required=True)
    p.add_argument("--n", type=_nonnegative)
    p.set_defaults(run=cmd_torus)

    p = sub.add_parser("attain", parents=[common], help="attainment row for (q, l)")
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--ell", type=_prime, required=True)
    p.set_defaults(run=cmd_attain)

    p = sub.add_parser("poly", parents=[common], help="the rank-r polynomial P_r")
    p.add_argument("--rank", type=_positive, required=True)
    p.add_argument("--eval", type=_positive)
    p.set_defaults(run=cmd_poly)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance criteria")
    p.add_argument("--suite", type=_suite, default="all", help="'all' or comma-separated ids")
    p.add_argument("--timings", action="store_true", help="include elapsed times (non-deterministic)")
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    previous = get_budget()
    if args.budget is not None:
        set_budget(args.budget)
    out = Output(args.out)
    code = EXIT_INTERNAL
    try:
        code = args.run(args, out)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_DOMAIN
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        code = EXIT_RESOURCE
    except (InvariantViolation, MinkcremError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        code = EXIT_INTERNAL
    finally:
        # nothing partial on error, except the streamed prefix of a sweep
        out.close(flush=code in (EXIT_OK, EXIT_INTERNAL))
        set_budget(previous)
    return code


if __name__ == "__main__":
    sys.exit(main())
