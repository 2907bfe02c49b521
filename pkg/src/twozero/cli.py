"""Command-line interface.

Subcommands: analyze, weights, sums, verify, census.  Exit codes: 0 on
success, 1 on a check failure or engine disagreement, 2 on invalid
parameters, 3 on a refusal (enumeration over budget, or no closed form for
the parameter case).  Output is deterministic: sorted rows, fixed key
order, no timestamps, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys

from .codes import ENGINES, build_code, run_engine
from .errors import InternalInconsistency, ParameterError, Refusal
from .expsums import (
    IdentityCheck,
    count_e1,
    count_e2,
    s_census_direct,
    s_census_fast,
    s_distribution_closed,
    t_census_direct,
    t_census_fast,
    t_distribution_closed,
    verify_power_identities,
)
from .quadforms import classify_parameters, closed_rank_census, rank_census

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_REFUSED = 3


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _distribution_document(params, code, engine: str, dist) -> dict:
    return {
        "p": params.p,
        "m": params.m,
        "k": params.k,
        "d": params.d,
        "s": params.s,
        "case": params.case.value,
        "n": code.n,
        "dimension": code.dimension,
        "engine": engine,
        "rows": [{"weight": w, "frequency": f} for w, f in dist.rows],
    }


def _format_weights(documents, agreement, fmt: str) -> str:
    if fmt == "json":
        return _json_dumps({"documents": documents, "agreement": agreement})
    if fmt == "csv":
        lines = ["weight,frequency"]
        lines += [f"{row['weight']},{row['frequency']}" for row in documents[0]["rows"]]
        return "\n".join(lines) + "\n"
    out = []
    for doc in documents:
        out.append(f"### engine: {doc['engine']} (case {doc['case']}, n={doc['n']})")
        out.append("")
        out.append("| Weight | Frequency |")
        out.append("| --- | --- |")
        out += [f"| {row['weight']} | {row['frequency']} |" for row in doc["rows"]]
        out.append("")
    return "\n".join(out)


def cmd_analyze(args) -> int:
    params = classify_parameters(args.p, args.m, args.k)
    code = build_code(args.p, args.m, args.k, modulus_index=args.modulus_index)
    doc = {
        "p": params.p,
        "m": params.m,
        "k": params.k,
        "d": params.d,
        "s": params.s,
        "q": params.q,
        "q_star": params.q_star,
        "case": params.case.value,
        "n": code.n,
        "dimension": code.dimension,
        "h1": list(code.h1.coeffs),
        "h2": list(code.h2.coeffs),
        "generator": list(code.generator.coeffs),
    }
    if args.format == "json":
        _emit(_json_dumps(doc), args.output)
        return EXIT_OK
    lines = [
        f"parameters      p={params.p} m={params.m} k={params.k}",
        f"derived         d={params.d} s={params.s} q={params.q} q*={params.q_star}",
        f"case            {params.case.value}",
        f"code            [{code.n}, {code.dimension}] over GF({params.p})",
        f"h1              {code.h1}",
        f"h2              {code.h2}",
        f"generator       degree {code.generator.degree}, coefficients "
        + "".join(str(c) for c in code.generator.coeffs),
    ]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_weights(args) -> int:
    engines = [e.strip() for e in args.engines.split(",") if e.strip()]
    if not engines:
        raise ParameterError("at least one engine must be selected")
    for engine in engines:
        if engine not in ENGINES:
            raise ParameterError(f"unknown engine {engine!r}; choose from {ENGINES}")
    params = classify_parameters(args.p, args.m, args.k)
    code = build_code(args.p, args.m, args.k, modulus_index=args.modulus_index)
    dists = {}
    for engine in engines:
        dists[engine] = run_engine(code, engine, budget=args.budget, workers=args.workers)
    documents = [_distribution_document(params, code, e, dists[e]) for e in engines]
    names = sorted(dists)
    disagreements = []
    for i, e1 in enumerate(names):
        for e2 in names[i + 1 :]:
            if not dists[e1].same_rows(dists[e2]):
                disagreements.append((e1, e2))
    agreement = {
        "engines": engines,
        "all_equal": not disagreements,
    }
    text = _format_weights(documents, agreement, args.format)
    if disagreements:
        for e1, e2 in disagreements:
            d1, d2 = dists[e1].as_dict(), dists[e2].as_dict()
            keys = sorted(set(d1) | set(d2))
            diff = [
                f"  weight {w}: {e1}={d1.get(w, 0)} {e2}={d2.get(w, 0)}"
                for w in keys
                if d1.get(w, 0) != d2.get(w, 0)
            ]
            print(f"engines {e1} and {e2} disagree:", file=sys.stderr)
            print("\n".join(diff), file=sys.stderr)
        return EXIT_MISMATCH
    _emit(text, args.output)
    return EXIT_OK


def _embedding_str(value) -> str:
    """Decimal embedding to 12 significant digits (display only)."""
    z = value.embedding()
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _sum_rows_symbolic(dist) -> list[dict]:
    rows = []
    for value, freq in dist.rows:
        a, b = value.expanded()
        rows.append(
            {
                "value": {
                    "display": str(value),
                    "rational": a,
                    "irrational": b,
                    "sqrt_arg": value.q_star,
                    "embedding": _embedding_str(value),
                },
                "frequency": freq,
            }
        )
    return rows


def _sum_rows_cyclotomic(census: dict) -> list[dict]:
    items = sorted(census.items(), key=lambda kv: kv[0].coeffs)
    return [
        {"value": {"zeta_coefficients": list(v.coeffs)}, "frequency": f}
        for v, f in items
    ]


def cmd_sums(args) -> int:
    from .gf import build_field

    params = classify_parameters(args.p, args.m, args.k)
    field = build_field(args.p, args.m, modulus_index=args.modulus_index)
    which, engine = args.sum, args.engine
    kwargs = {"budget": args.budget} if args.budget is not None else {}
    if engine == "closed":
        dist = t_distribution_closed(params) if which == "T" else s_distribution_closed(params)
        rows = _sum_rows_symbolic(dist)
    elif engine == "fast":
        fn = t_census_fast if which == "T" else s_census_fast
        rows = _sum_rows_symbolic(fn(field, params, workers=args.workers, **kwargs))
    else:
        fn = t_census_direct if which == "T" else s_census_direct
        rows = _sum_rows_cyclotomic(fn(field, params, **kwargs))
    doc = {
        "p": params.p,
        "m": params.m,
        "k": params.k,
        "d": params.d,
        "s": params.s,
        "case": params.case.value,
        "sum": which,
        "engine": engine,
        "rows": rows,
    }
    if args.format == "json":
        _emit(_json_dumps(doc), args.output)
    elif args.format == "csv":
        lines = ["value,frequency"]
        for row in rows:
            val = row["value"].get("display") or str(row["value"]["zeta_coefficients"])
            lines.append(f"\"{val}\",{row['frequency']}")
        _emit("\n".join(lines) + "\n", args.output)
    else:
        lines = ["| value | frequency |", "| --- | --- |"]
        for row in rows:
            val = row["value"].get("display") or str(row["value"]["zeta_coefficients"])
            lines.append(f"| {val} | {row['frequency']} |")
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_census(args) -> int:
    params = classify_parameters(args.p, args.m, args.k)
    code = build_code(args.p, args.m, args.k, modulus_index=args.modulus_index)
    kwargs = {"budget": args.budget} if args.budget is not None else {}
    census = rank_census(code.field, params, workers=args.workers, **kwargs)
    closed = closed_rank_census(params)
    doc = {
        "p": params.p,
        "m": params.m,
        "k": params.k,
        "d": params.d,
        "s": params.s,
        "case": params.case.value,
        "pairs": params.pairs - 1,
        "census": {"n0": census.n0, "n1": census.n1, "n2": census.n2},
        "closed": {"n0": closed.n0, "n1": closed.n1, "n2": closed.n2},
        "match": census == closed,
    }
    if args.format == "json":
        _emit(_json_dumps(doc), args.output)
    else:
        lines = [
            f"rank census for (p, m, k) = ({params.p}, {params.m}, {params.k})",
            f"  rank s   (n0): counted {census.n0}, closed {closed.n0}",
            f"  rank s-1 (n1): counted {census.n1}, closed {closed.n1}",
            f"  rank s-2 (n2): counted {census.n2}, closed {closed.n2}",
            f"  match: {doc['match']}",
        ]
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if doc["match"] else EXIT_MISMATCH


# -- verify ------------------------------------------------------------------

CHECK_NAMES = (
    "rank-census",
    "t-census",
    "s-census",
    "e1",
    "e2",
    "identities",
    "max-rank",
    "example",
)


def _budget_kwargs(args) -> dict:
    return {"budget": args.budget} if args.budget is not None else {}


def _check_rank_census(code, args) -> list[tuple[str, bool, str]]:
    census = rank_census(code.field, code.params, workers=args.workers, **_budget_kwargs(args))
    closed = closed_rank_census(code.params)
    ok = census == closed
    return [
        (
            "rank-census",
            ok,
            f"counted (n0, n1, n2) = ({census.n0}, {census.n1}, {census.n2}), "
            f"closed ({closed.n0}, {closed.n1}, {closed.n2})",
        )
    ]


def _check_t_census(code, args) -> list[tuple[str, bool, str]]:
    dist = t_census_fast(code.field, code.params, workers=args.workers, **_budget_kwargs(args))
    closed = t_distribution_closed(code.params)
    ok = dist == closed
    return [("t-census", ok, f"{len(dist.rows)} distinct values over {dist.total} pairs")]


def _check_s_census(code, args) -> list[tuple[str, bool, str]]:
    dist = s_census_fast(code.field, code.params, workers=args.workers, **_budget_kwargs(args))
    closed = s_distribution_closed(code.params)
    ok = dist == closed
    return [("s-census", ok, f"{len(dist.rows)} distinct values over {dist.total} pairs")]


def _check_e1(code, args) -> list[tuple[str, bool, str]]:
    brute = count_e1(code.field, code.params, "brute", **_budget_kwargs(args))
    closed = count_e1(code.field, code.params, "closed")
    return [("e1", brute == closed, f"brute {brute}, closed {closed}")]


def _check_e2(code, args) -> list[tuple[str, bool, str]]:
    brute = count_e2(code.field, code.params, "brute", **_budget_kwargs(args))
    closed = count_e2(code.field, code.params, "closed")
    return [("e2", brute == closed, f"brute {brute}, closed {closed}")]


def _check_identities(code, args) -> list[tuple[str, bool, str]]:
    checks: list[IdentityCheck] = verify_power_identities(
        code.field, code.params, workers=args.workers, **_budget_kwargs(args)
    )
    return [
        (f"identity: {c.name}", c.passed, f"lhs = {c.lhs}, rhs = {c.rhs}") for c in checks
    ]


def _check_max_rank(code, args) -> list[tuple[str, bool, str]]:
    from .expsums import joint_class_census
    from .quadforms import Case

    if code.params.case is Case.ODD_S_OUT_OF_SCOPE:
        raise Refusal("the max-rank property applies to CaseA/CaseB only")
    joint = joint_class_census(code.field, code.params, workers=args.workers)
    bad = sum(
        count
        for (cf, cg), count in joint.items()
        if cf != 6 and cg != 6 and cf >= 2 and cg >= 2
    )
    return [("max-rank", bad == 0, f"{bad} pairs have both ranks below s")]


def _check_example(code, args) -> list[tuple[str, bool, str]]:
    dists = {}
    for engine in ENGINES:
        try:
            dists[engine] = run_engine(code, engine, budget=args.budget, workers=args.workers)
        except Refusal:
            continue
    if len(dists) < 2:
        raise Refusal("fewer than two weight engines within budget")
    names = sorted(dists)
    ok = all(dists[names[0]].same_rows(dists[e]) for e in names[1:])
    head = dists[names[0]]
    return [
        (
            "example",
            ok,
            f"engines {'+'.join(names)} on [{code.n}, {code.dimension}, "
            f"{head.min_distance}]: {len(head.rows)} weight rows",
        )
    ]


CHECKS = {
    "rank-census": _check_rank_census,
    "t-census": _check_t_census,
    "s-census": _check_s_census,
    "e1": _check_e1,
    "e2": _check_e2,
    "identities": _check_identities,
    "max-rank": _check_max_rank,
    "example": _check_example,
}


def cmd_verify(args) -> int:
    code = build_code(args.p, args.m, args.k, modulus_index=args.modulus_index)
    if args.checks:
        selected = [c.strip() for c in args.checks.split(",") if c.strip()]
        for name in selected:
            if name not in CHECKS:
                raise ParameterError(f"unknown check {name!r}; choose from {CHECK_NAMES}")
        explicit = True
    else:
        selected = list(CHECK_NAMES)
        explicit = False

    lines = []
    all_ok = True
    for name in selected:
        try:
            results = CHECKS[name](code, args)
        except Refusal as exc:
            if explicit:
                raise
            lines.append(f"SKIP {name}: {exc}")
            continue
        for label, ok, detail in results:
            all_ok &= ok
            lines.append(f"{'PASS' if ok else 'FAIL'} {label}: {detail}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if all_ok else EXIT_MISMATCH


# -- entry point ---------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("p", type=int, help="odd prime")
    parser.add_argument("m", type=int, help="extension degree")
    parser.add_argument("k", type=int, help="exponent parameter")
    parser.add_argument(
        "--format", choices=("json", "csv", "markdown"), default="json",
        help="output format (default json)",
    )
    parser.add_argument("--output", "-o", default=None, help="write to a file instead of stdout")
    parser.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    parser.add_argument(
        "--budget", type=int, default=None,
        help="enumeration budget override (engine-specific units)",
    )
    parser.add_argument(
        "--modulus-index", type=int, default=0,
        help="use the i-th smallest irreducible modulus (test hook)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twozero",
        description="Two-zero p-ary cyclic codes: construction, exponential sums, "
        "weight distributions by three independent engines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="derived parameters and code polynomials")
    _add_common(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)
    p_analyze.set_defaults(format="markdown")

    p_weights = sub.add_parser("weights", help="weight distribution by chosen engines")
    _add_common(p_weights)
    p_weights.add_argument(
        "--engines", default="closed",
        help="comma-separated subset of brute,sums,closed (default closed)",
    )
    p_weights.set_defaults(func=cmd_weights)

    p_sums = sub.add_parser("sums", help="value census of T or S")
    _add_common(p_sums)
    p_sums.add_argument("--sum", choices=("T", "S"), default="S", help="which sum (default S)")
    p_sums.add_argument(
        "--engine", choices=("direct", "fast", "closed"), default="fast",
        help="census engine (default fast)",
    )
    p_sums.set_defaults(func=cmd_sums)

    p_verify = sub.add_parser("verify", help="consistency checks: censuses vs closed forms, counts, identities")
    _add_common(p_verify)
    p_verify.add_argument(
        "--checks", default=None,
        help=f"comma-separated subset of {','.join(CHECK_NAMES)} (default: all in budget)",
    )
    p_verify.set_defaults(func=cmd_verify)

    p_census = sub.add_parser("census", help="exhaustive rank census vs closed forms")
    _add_common(p_census)
    p_census.set_defaults(func=cmd_census)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "workers", 1) < 1:
            raise ParameterError("worker count must be at least 1")
        return args.func(args)
    except ParameterError as exc:
        print(f"error: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Refusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except InternalInconsistency as exc:
        raise SystemExit(f"internal inconsistency (this is a bug): {exc}")


if __name__ == "__main__":
    sys.exit(main())
