"""Command-line front end.

Subcommands: influence, verify, sweep, monotonize, discretize, lift,
dual, junta.  The CLI performs no arithmetic of its own; every number it
emits comes from a library call.  Exit codes: 0 ok, 1 usage/error, 2
degenerate instance.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import theorems
from .cube import CubeFunction, parse_measure
from .discretize import default_bits, discretize, dual, lift_biased
from .families import FamilyInstance, parse_family
from .grid import GridFunction, fiber_profile, grid_h_influence
from .kernels import parse_kernel
from .monotone import monotonize, shift_trace
from .theorems import DegenerateInstance, InequalityReport

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DEGENERATE = 2


def _fmt_exact(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return ""


def _write_out(text: str, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _default_measure(source, arg_measure):
    if arg_measure:
        return arg_measure
    if isinstance(source, FamilyInstance) and "q" in source.parameters:
        return f"q={source.parameters['q']}"
    return "q=1/2"


def _as_grid(source, measure_designator=None) -> GridFunction:
    """Resolve a designated source to a grid function."""
    if isinstance(source, GridFunction):
        return source
    if isinstance(source, FamilyInstance):
        if isinstance(source.realized, GridFunction):
            return source.realized
        if source.lifted is not None:
            return source.lifted
        raise ValueError(f"family {source.family} instance has no realizable grid")
    if isinstance(source, CubeFunction):
        q = Fraction(1, 2)
        if measure_designator:
            mu = parse_measure(measure_designator, source.arity)
            qs = set(mu.biases)
            if len(qs) != 1:
                raise ValueError("lifting a cube source requires a uniform bias")
            q = qs.pop()
        return lift_biased(source, q)
    raise ValueError(f"cannot interpret source {source!r} as a grid function")


def _as_cube(source) -> CubeFunction:
    if isinstance(source, CubeFunction):
        return source
    if isinstance(source, FamilyInstance) and isinstance(source.realized, CubeFunction):
        return source.realized
    raise ValueError("source is not a cube function")


# ---------------------------------------------------------------------------
# influence
# ---------------------------------------------------------------------------

def cmd_influence(args) -> int:
    source = parse_family(args.source)
    kernel = parse_kernel(args.kernel)
    rows = []
    if isinstance(source, FamilyInstance) and isinstance(source.realized, CubeFunction):
        f = source.realized
        mu = parse_measure(_default_measure(source, args.measure), f.arity)
        from .cube import cube_h_influence

        for k in range(1, f.arity + 1):
            val = cube_h_influence(f, mu, k, kernel)
            rows.append([str(k), "", "", _fmt_exact(val), repr(float(val))])
    elif isinstance(source, CubeFunction):
        mu = parse_measure(args.measure or "q=1/2", source.arity)
        from .cube import cube_h_influence

        for k in range(1, source.arity + 1):
            val = cube_h_influence(source, mu, k, kernel)
            rows.append([str(k), "", "", _fmt_exact(val), repr(float(val))])
    else:
        g = _as_grid(source, args.measure)
        for k in range(1, g.arity + 1):
            prof = fiber_profile(g, k)
            nonconst = sum((w for w, t in prof.entries if 0 < t < 1), Fraction(0))
            distinct = len({t for _, t in prof.entries})
            val = grid_h_influence(g, k, kernel)
            rows.append([str(k), _fmt_exact(nonconst), str(distinct),
                         _fmt_exact(val), repr(float(val))])
    header = ["coordinate", "nonconstant_weight", "distinct_means", "influence", "influence_float"]
    _write_out(_render_table(header, rows, args.format), args.out)
    return EXIT_OK


def _render_table(header, rows, fmt) -> str:
    if fmt == "json":
        import json

        return "\n".join(json.dumps(dict(zip(header, r))) for r in rows) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

REPORT_KINDS = ("bkkkl", "kklsum", "talagrand", "boundary", "correlation", "avgcorr", "hk")


def _evaluate_report(kind, source_designator, kernel_designator, alpha=None,
                     measure_designator=None) -> InequalityReport:
    source = parse_family(source_designator)
    params = {"family": source_designator}
    if kind in ("bkkkl", "kklsum", "talagrand"):
        kernel = parse_kernel(kernel_designator)
        params["kernel"] = kernel.name
        fn = {
            "bkkkl": (theorems.bkkkl_from_values, theorems.bkkkl_report),
            "kklsum": (theorems.kkl_sum_from_values, theorems.kkl_sum_report),
            "talagrand": (theorems.talagrand_from_values, theorems.talagrand_report),
        }[kind]
        if isinstance(source, FamilyInstance):
            influences = source.analytic_influences(kernel)
            return fn[0](source.arity, source.expectation, influences, params)
        return fn[1](_as_grid(source, measure_designator), kernel)
    if kind == "boundary":
        kernel = parse_kernel(kernel_designator)
        params["kernel"] = kernel.name
        if isinstance(source, FamilyInstance) and "boundary" in source.analytic:
            return theorems.boundary_from_values(
                source.arity,
                source.expectation,
                source.analytic["boundary"],
                sum(source.analytic_influences(kernel)),
                params,
            )
        return theorems.boundary_report(_as_grid(source, measure_designator), kernel)
    if kind == "correlation":
        if alpha is None:
            raise ValueError("correlation requires --alpha")
        if isinstance(source, FamilyInstance):
            e = source.expectation
            kernel = parse_kernel(f"alpha:{alpha}")
            infl = source.analytic_influences(kernel)
            gap = e - e * e
            product_sum = sum(float(v) ** 2 for v in infl)
            params["family_size"] = 1
            params["n"] = source.arity
            return theorems.correlation_from_components(gap, product_sum, alpha, params)
        return theorems.correlation_report([_as_grid(source, measure_designator)], alpha, params)
    raise ValueError(f"unknown report kind {kind!r}")


def cmd_verify(args) -> int:
    if args.kind == "hk":
        if not args.pair or len(args.pair) != 2:
            raise ValueError("verify hk requires --pair SOURCE SOURCE")
        A = _as_cube(parse_family(args.pair[0]))
        B = _as_cube(parse_family(args.pair[1]))
        mu = parse_measure(args.measure or "q=1/2", A.arity)
        ok = theorems.harris_kleitman_check(A, B, mu)
        _write_out(f"{str(ok).lower()}\n", args.out)
        return EXIT_OK
    if args.kind == "avgcorr":
        members = [_as_cube(parse_family(s)) for s in [args.source] + (args.pair or [])]
        report = theorems.averaged_correlation_check(members)
    else:
        report = _evaluate_report(args.kind, args.source, args.kernel,
                                  alpha=args.alpha, measure_designator=args.measure)
    if args.format == "json":
        _write_out(report.to_json_line() + "\n", args.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(InequalityReport.csv_header())
        writer.writerow(report.csv_row())
        _write_out(buf.getvalue(), args.out)
    return EXIT_DEGENERATE if report.degenerate else EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _parse_var(spec: str):
    name, body = spec.split("=", 1)
    if ":" in body:
        parts = [int(x) for x in body.split(":")]
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        values = list(range(start, stop + 1, step))
    else:
        values = body.split(",")
    return name.strip(), values


def _sweep_point(args, name, value):
    subs = {name: value, "seed": args.seed}
    fam = args.family.format(**subs)
    kernel = args.kernel.format(**subs) if args.kernel else args.kernel
    alpha = None
    if args.alpha is not None:
        alpha = float(str(args.alpha).format(**subs))
    try:
        report = _evaluate_report(args.kind, fam, kernel, alpha=alpha,
                                  measure_designator=args.measure)
        report.parameters.setdefault(name, value)
        return value, report, None
    except (DegenerateInstance, ValueError) as exc:
        return value, None, str(exc)


def cmd_sweep(args) -> int:
    name, values = _parse_var(args.var)
    if not values:
        raise ValueError("empty sweep range")
    workers = max(1, args.threads)
    if workers == 1:
        results = [_sweep_point(args, name, v) for v in values]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda v: _sweep_point(args, name, v), values))
    rows = []
    points = []
    for value, report, reason in results:
        if report is None:
            print(f"skip {name}={value}: {reason}", file=sys.stderr)
            continue
        points.append((value, report))
        rows.append(report)
    if args.format == "json":
        text = "".join(r.to_json_line() + "\n" for r in rows)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(InequalityReport.csv_header())
        for r in rows:
            writer.writerow(r.csv_row())
        text = buf.getvalue()
    _write_out(text, args.out)
    if args.plot:
        from .plots import render_sweep

        render_sweep(points, name, args.kind, args.plot)
    return EXIT_OK


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def cmd_monotonize(args) -> int:
    g = _as_grid(parse_family(args.source), args.measure)
    out = monotonize(g)
    _write_out(out.to_text(), args.out)
    if args.trace:
        if g.arity != 2 or g.resolutions[0] != g.resolutions[1]:
            raise ValueError("--trace requires a square 2-D grid")
        trace = shift_trace(g.cells)
        with open(args.trace, "w") as fh:
            fh.write(trace.to_text())
    return EXIT_OK


def cmd_discretize(args) -> int:
    g = _as_grid(parse_family(args.source), args.measure)
    l = args.bits if args.bits else default_bits(g.arity)
    cube_fn, grouping = discretize(g, l)
    _write_out(cube_fn.to_text() + grouping.to_text(), args.out)
    return EXIT_OK


def cmd_lift(args) -> int:
    f = _as_cube(parse_family(args.source))
    g = lift_biased(f, Fraction(args.q))
    _write_out(g.to_text(), args.out)
    return EXIT_OK


def cmd_dual(args) -> int:
    f = _as_cube(parse_family(args.source))
    _write_out(dual(f).to_text(), args.out)
    return EXIT_OK


def cmd_junta(args) -> int:
    f = _as_cube(parse_family(args.source))
    mu = parse_measure(args.measure or "q=1/2", f.arity)
    size, witness = theorems.min_junta_size(f, mu, Fraction(args.eps))
    _write_out(f"size={size}\nwitness={','.join(str(j) for j in witness)}\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--kernel", default="ent", help="kernel designator (ent|var|ind|alpha:<a>|t0|t1|table:<path>)")
    p.add_argument("--measure", default=None, help="measure designator q=<rational> or q=<r1,...>")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hinfluence")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("influence", help="per-coordinate h-influences")
    p.add_argument("source")
    _add_common(p)
    p.set_defaults(fn=cmd_influence)

    p = sub.add_parser("verify", help="evaluate one inequality instance")
    p.add_argument("kind", choices=REPORT_KINDS)
    p.add_argument("source", nargs="?", default=None)
    p.add_argument("--pair", nargs="+", default=None)
    p.add_argument("--alpha", type=float, default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("sweep", help="evaluate a report over a parameter range")
    p.add_argument("kind", choices=("bkkkl", "kklsum", "talagrand", "boundary", "correlation"))
    p.add_argument("--family", required=True, help="family designator template, e.g. corner:n={n},r={n}")
    p.add_argument("--var", required=True, help="varying parameter, e.g. n=2:12 or a=0.6,0.8,1.0")
    p.add_argument("--alpha", default=None, help="alpha for correlation (may reference the sweep var)")
    p.add_argument("--plot", default=None, help="optional path for a ratio-vs-parameter figure")
    _add_common(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("monotonize", help="sequentially monotonize a grid function")
    p.add_argument("source")
    p.add_argument("--trace", default=None, help="write a shift trace (square 2-D grids)")
    _add_common(p)
    p.set_defaults(fn=cmd_monotonize)

    p = sub.add_parser("discretize", help="bit-expand a monotone grid function")
    p.add_argument("source")
    p.add_argument("--bits", type=int, default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_discretize)

    p = sub.add_parser("lift", help="lift a cube function to [0,1]^n via the bias threshold")
    p.add_argument("source")
    p.add_argument("--q", required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_lift)

    p = sub.add_parser("dual", help="pointwise dual of a cube function")
    p.add_argument("source")
    _add_common(p)
    p.set_defaults(fn=cmd_dual)

    p = sub.add_parser("junta", help="smallest junta within an error budget")
    p.add_argument("source")
    p.add_argument("--eps", required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_junta)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except DegenerateInstance as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
