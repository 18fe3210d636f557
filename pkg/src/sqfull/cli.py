"""Command line entry point: one subcommand per operation, CSV or JSON out.

Exit status: 0 on success, 1 on a mathematical domain error, 2 on usage
errors (argparse).  Identical arguments give byte-identical output whatever
the thread count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction

from . import curves, detmethod, experiments, gaussian, quadratic, squarefull
from ._parallel import default_workers
from .errors import DomainError

SCHEMA = 1


def _fmt(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool):
        return str(v).lower()
    return v


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


class Output:
    """Rows plus a summary; CSV writes the rows, JSON writes both."""

    def __init__(self, command: str, params: dict, columns: list[str]):
        self.command = command
        self.params = params
        self.columns = columns
        self.rows: list[list] = []
        self.summary: dict = {}

    def add(self, *values) -> None:
        self.rows.append(list(values))

    def render(self, fmt: str) -> str:
        if fmt == "json":
            doc = {
                "schema": SCHEMA,
                "command": self.command,
                "params": _jsonable(self.params),
                **_jsonable(self.summary),
                "columns": self.columns,
                "rows": _jsonable(self.rows),
            }
            return json.dumps(doc, indent=2) + "\n"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# argument types


def _int_at_least(lo: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v

    return parse


def _nonzero_int(text: str) -> int:
    v = _int_at_least(-(10**100))(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be nonzero")
    return v


def _rational(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _poly(text: str) -> quadratic.QuadraticPoly:
    try:
        return quadratic.QuadraticPoly.parse(text)
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


positive = _int_at_least(1)
nonneg = _int_at_least(0)


# ---------------------------------------------------------------------------
# commands


def cmd_sieve(a) -> Output:
    out = Output("sieve", {"limit": a.limit}, ["n", "e", "d"])
    for n in squarefull.sieve_squarefull(a.limit, a.threads):
        dec = squarefull.decompose_e2d3(n)
        out.add(n, dec.e, dec.d)
    out.summary = {"count": len(out.rows)}
    return out


def cmd_count(a) -> Output:
    out = Output("count", {"limit": a.limit}, ["N", "S", "P", "deviation", "normalized_deviation"])
    for N in a.limit:
        r = squarefull.count_with_prediction(N, a.threads)
        out.add(r.N, r.S, r.P, r.deviation, r.normalized_deviation)
    return out


def cmd_decompose(a) -> Output:
    out = Output("decompose", {"n": a.n}, ["n", "e", "d"])
    for n in a.n:
        dec = squarefull.decompose_e2d3(n)
        out.add(dec.n, dec.e, dec.d)
    return out


def cmd_poly_count(a) -> Output:
    f = a.poly
    out = Output("poly-count", {"poly": str(f), "limit": a.limit}, ["n", "e", "d"])
    scan = quadratic.scan_values(f, 1, a.limit, a.threads)
    for t in quadratic._triples(f, scan.hits):
        out.add(t.n, t.e, t.d)
    out.summary = {"count": scan.count, "skipped": scan.skipped}
    if a.majorant:
        g = quadratic.majorant(f)
        bound = abs(2 * f.a) * a.limit
        out.summary["majorant"] = {"p": g.p, "q": g.q, "limit": bound}
        out.summary["majorant_count"] = quadratic.count_squarefull_values(g.as_quadratic(), bound, a.threads)
    return out


def cmd_mcell(a) -> Output:
    params = {"poly": str(a.poly), "N": a.N, "E": a.E, "D": a.D, "method": a.method}
    out = Output("mcell", params, ["E", "D", "count"])
    cell = quadratic.m_cell_count(a.poly, a.N, a.E, a.D, a.method)
    out.add(cell.E, cell.D, cell.count)
    return out


def cmd_dyadic_check(a) -> Output:
    out = Output("dyadic-check", {"poly": str(a.poly), "N": a.N, "slack": a.slack}, ["E", "D", "count"])
    chk = quadratic.dyadic_decomposition_check(a.poly, a.N, a.slack, a.threads)
    for c in chk.cells:
        out.add(c.E, c.D, c.count)
    out.summary = {"lhs": chk.lhs, "rhs": chk.rhs, "equal": chk.equal}
    return out


def cmd_mordell(a) -> Output:
    if a.D is not None:
        res = curves.mordell_points(a.D, a.box, a.threads)
        out = Output("mordell", {"D": a.D, "box": a.box}, ["x", "y"])
        for x, y in res.points:
            out.add(x, y)
        out.summary = {"count": res.count}
        return out
    out = Output("mordell", {"dmax": a.dmax, "box": a.box}, ["D", "count"])
    for k in range(1, a.dmax + 1):
        for D in (k, -k):
            out.add(D, curves.mordell_points(D, a.box, a.threads).count)
    return out


def cmd_pell(a) -> Output:
    out = Output("pell", {"limit": a.limit}, ["d", "k", "n"])
    for sol in curves.pell_family(a.limit):
        out.add(sol.d, sol.k, sol.n)
    return out


def cmd_thue(a) -> Output:
    params = {"c": a.c, "d": a.d, "alpha": a.alpha, "box": a.box}
    out = Output("thue", params, ["y1", "y2"])
    res = curves.thue_count(a.c, a.d, a.alpha, a.box)
    for y1, y2 in res.solutions:
        out.add(y1, y2)
    cls = curves.classify_cubic_form(a.c, a.d)
    out.summary = {
        "count": res.count,
        "primitive_count": res.primitive_count,
        "reference": res.reference,
        "irreducible": cls.irreducible,
    }
    if not cls.irreducible:
        out.summary["linear_factor"] = {"p": cls.p, "q": cls.q}
        out.summary["cofactor"] = list(cls.cofactor)
        out.summary["cofactor_discriminant"] = cls.cofactor_discriminant
    return out


def cmd_gaussian_check(a) -> Output:
    cols = ["n", "e", "d", "x1", "x2", "y1", "y2", "branch", "s", "t", "w", "folded", "residual"]
    out = Output("gaussian-check", {"alpha": a.alpha, "limit": a.limit}, cols)
    f = quadratic.QuadraticPoly(1, 0, a.alpha * a.alpha)
    unextracted, degenerate = [], 0
    for tr in quadratic.enumerate_triples(f, a.limit, a.threads):
        sols = gaussian.extract_solutions(tr, a.alpha)
        if not sols:
            unextracted.append(tr.n)
        for sol in sols:
            pt = gaussian.curve_point(sol)
            head = [tr.n, tr.e, tr.d, sol.x1, sol.x2, sol.y1, sol.y2]
            if pt is None:
                degenerate += 1
                out.add(*head, str(sol.branch), "", "", "", "", "")
            else:
                res = gaussian.tau_residual(pt, tr.n)
                out.add(*head, str(pt.branch), pt.s, pt.t, pt.w, pt.folded, res)
    out.summary = {"degenerate": degenerate, "unextracted": unextracted}
    return out


def cmd_detmethod(a) -> Output:
    params = {"alpha": a.alpha, "nwindow": a.nwindow, "eta": a.eta, "K": a.K, "L": a.L}
    cols = ["E", "D", "M", "interval_index", "J", "H", "rank", "coefficients", "vanishes", "l1", "l2"]
    out = Output("detmethod", params, cols)
    rep = detmethod.interval_pipeline(a.alpha, a.nwindow, float(a.eta), a.K, a.L, a.threads)
    for r in rep.intervals:
        coeffs = " ".join(map(str, r.coefficients)) if r.coefficients is not None else ""
        out.add(r.E, r.D, r.M, r.interval_index, r.J, r.H, r.rank, coeffs, r.vanishes, r.l1, r.l2)
    out.summary = {
        "triples": rep.triples,
        "points": rep.points,
        "degenerate": rep.degenerate,
        "unextracted": rep.unextracted,
        "infeasible_cells": rep.infeasible_cells,
        "l1_histogram": rep.l1_histogram(),
    }
    if a.probe_samples:
        M = max(2, min(a.nwindow, 10**3))
        probe = detmethod.l1_upper_probe(a.nwindow, M, a.probe_samples, a.seed)
        out.summary["l1_probe"] = {"D": probe.D, "M": probe.M, "max_l1": probe.max_l1, "soft_ok": probe.soft_ok}
    return out


def cmd_exponents(a) -> Output:
    ex = experiments.exponents()
    out = Output("exponents", {}, ["name", "value"])
    for k, v in ex.as_json().items():
        out.add(k, v)
    out.summary = ex.as_json()
    t = experiments.cell_tradeoff(0.0)
    out.summary["conjectural_varpi"] = t.value
    return out


def cmd_abc_chain(a) -> Output:
    ch = experiments.abc_chain(a.c, a.b, a.e, a.d, a.n)
    params = {"c": a.c, "b": a.b, "e": a.e, "d": a.d, "n": a.n}
    cols = ["l", "b1", "n1", "l1", "b2", "l_prime", "lhs", "rhs", "quality"]
    out = Output("abc-chain", params, cols)
    out.add(ch.l, ch.b1, ch.n1, ch.l1, ch.b2, ch.l_prime, ch.lhs, ch.rhs, "" if ch.quality is None else ch.quality)
    return out


def cmd_randpoly(a) -> Output:
    out = Output("randpoly", {"H": a.H, "N": a.N, "method": a.method}, ["H", "N", "total", "family_size", "average", "ratio"])
    r = experiments.random_family_average(a.H, a.N, a.method, a.threads)
    out.add(r.H, r.N, r.total, r.family_size, r.average, r.ratio)
    return out


def cmd_fit(a) -> Output:
    with open(a.infile, newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or not {"x", "y"} <= set(reader.fieldnames):
            raise DomainError("fit input needs a CSV header with columns x and y")
        series = [(float(r["x"]), float(r["y"])) for r in reader]
    fit = experiments.fit_exponent(series)
    out = Output("fit", {"in": a.infile}, ["slope", "intercept", "residual", "count", "log_constant"])
    out.add(fit.slope, fit.intercept, fit.residual, fit.count, experiments.fit_log_constant(series))
    return out


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--threads", type=positive, default=None, help="worker threads (default $SQFULL_THREADS or 1)")
    common.add_argument("--seed", type=nonneg, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="sqfull", description="Square-full values of quadratics: desk-scale experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, fmt="csv"):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn, default_format=fmt)
        return p

    p = add("sieve", cmd_sieve, "list square-full n <= limit with n = e^2 d^3")
    p.add_argument("--limit", type=positive, required=True)

    p = add("count", cmd_count, "S(N) against the two-term prediction")
    p.add_argument("--limit", type=positive, required=True, nargs="+")

    p = add("decompose", cmd_decompose, "write square-full n as e^2 d^3")
    p.add_argument("--n", type=positive, required=True, nargs="+")

    p = add("poly-count", cmd_poly_count, "n <= limit with f(n) square-full")
    p.add_argument("--poly", type=_poly, required=True, help="coefficients a,b,c of a x^2 + b x + c")
    p.add_argument("--limit", type=positive, required=True)
    p.add_argument("--majorant", action="store_true", help="also count the majorant up to 2|a| limit")

    p = add("mcell", cmd_mcell, "one dyadic cell count M(E, D)")
    p.add_argument("--poly", type=_poly, required=True)
    p.add_argument("--N", type=positive, required=True)
    p.add_argument("--E", type=_rational, required=True)
    p.add_argument("--D", type=_rational, required=True)
    p.add_argument("--method", choices=("n", "d"), default="n")

    p = add("dyadic-check", cmd_dyadic_check, "S(2N) - S(N) against the dyadic cell sum")
    p.add_argument("--poly", type=_poly, required=True)
    p.add_argument("--N", type=positive, required=True)
    p.add_argument("--slack", type=positive, default=16)

    p = add("mordell", cmd_mordell, "integer points on y^2 = x^3 + D in a box")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--dmax", type=positive)
    g.add_argument("--D", type=_nonzero_int)
    p.add_argument("--box", type=positive, required=True)

    p = add("pell", cmd_pell, "n = 2d with d^2 - 2k^2 = -1, so n^2 + 4 is square-full")
    p.add_argument("--limit", type=_int_at_least(2), required=True)

    p = add("thue", cmd_thue, "solutions of P_{c,d}(y1, y2) = alpha in a box")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha", type=_nonzero_int, required=True)
    p.add_argument("--box", type=nonneg, required=True)

    p = add("gaussian-check", cmd_gaussian_check, "Gaussian coordinates of solutions for x^2 + alpha^2")
    p.add_argument("--alpha", type=positive, required=True)
    p.add_argument("--limit", type=positive, required=True)

    p = add("detmethod", cmd_detmethod, "per-interval kernels and lattice data", fmt="json")
    p.add_argument("--alpha", type=positive, required=True)
    p.add_argument("--nwindow", type=_int_at_least(2), required=True, help="window (N, 2N]")
    p.add_argument("--eta", type=Fraction, default=Fraction(0))
    p.add_argument("--K", type=nonneg, default=3, help="s degree; omit with --auto-k")
    p.add_argument("--auto-k", dest="K", action="store_const", const=None, help="K = ceil(L log E / log D)")
    p.add_argument("--L", type=nonneg, default=3)
    p.add_argument("--probe-samples", type=nonneg, default=0, help="also run the L1 probe with this many samples")

    add("exponents", cmd_exponents, "exponent constants", fmt="json")

    p = add("abc-chain", cmd_abc_chain, "gcd reduction of c e^2 d^3 = n^2 + b")
    for name in ("c", "e", "d", "n"):
        p.add_argument(f"--{name}", type=positive, required=True)
    p.add_argument("--b", type=_nonzero_int, required=True)

    p = add("randpoly", cmd_randpoly, "sum of S_f(N) over all quadratics with |a_i| <= H")
    p.add_argument("--H", type=nonneg, required=True)
    p.add_argument("--N", type=positive, required=True)
    p.add_argument("--method", choices=("fast", "naive"), default="fast")

    p = add("fit", cmd_fit, "log-log least squares on a CSV with columns x,y")
    p.add_argument("--in", dest="infile", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "detmethod" and args.eta < 0:
        parser.error("--eta must be >= 0")
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    if args.threads is None:
        args.threads = default_workers()
    try:
        out = args.func(args)
    except DomainError as exc:
        print(f"sqfull {args.command}: {exc}", file=sys.stderr)
        return 1
    text = out.render(args.format or args.default_format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
