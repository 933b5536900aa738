"""Command-line interface.

Subcommands:
  counterexample build     write interval levels and curve samples
  counterexample verify    run every exact check on the construction
  counterexample straddle  area/velocity ratio across a straddled component
  jets check               extendability report for a jet triple JSON
  curve lift               lift the horizontal components of a curve CSV
  diff lp                  L^p remainder ladder for a curve component
  diff density             approximate-differentiability density
  sieve                    Whitney sieve over a curve component

Outputs are deterministic for fixed flags: data files carry no
timestamps, rationals print as "p/q" (or fixed-precision decimals with
--decimal), CSV uses LF endings. Exit status: 0 success, 1 failed
check, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .counterexample import (
    build_curve,
    check_params,
    component_increments,
    default_params,
    measure_report,
    straddle_ratio,
)
from .curves import PiecewisePolynomial, extendability_report, lift
from .diffanalysis import approx_density, lp_remainder_ladder, whitney_sieve
from .intervalsets import IntervalSet, rational_to_str
from .jets import DEFAULT_LADDER, JetTriple
from .polynomials import Polynomial


class _Fmt:
    def __init__(self, decimal_digits=None):
        self.decimal_digits = decimal_digits

    def __call__(self, x) -> str:
        if isinstance(x, float):
            return repr(x)
        x = Fraction(x)
        if self.decimal_digits is None:
            return rational_to_str(x)
        q = round(x * 10**self.decimal_digits)
        s = "%0*d" % (self.decimal_digits + 1, abs(q))
        sign = "-" if q < 0 else ""
        return "%s%s.%s" % (
            sign, s[: -self.decimal_digits] or "0", s[-self.decimal_digits:]
        )


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _write_meta(outdir, args):
    if outdir is None:
        return
    meta = {"command": args._command, "flags": {
        k: (str(v) if isinstance(v, Fraction) else v)
        for k, v in sorted(vars(args).items())
        if not k.startswith("_") and not callable(v)
    }}
    with open(os.path.join(outdir, "run_meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _rat(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError("bad rational %r" % s) from exc


# ---------------------------------------------------------------------------
# curve CSV I/O (piecewise-linear interpretation)
# ---------------------------------------------------------------------------


def read_curve_csv(path):
    """Rows t,f,g,h with strictly increasing t; values "p/q" or decimal.

    Returns the three components as piecewise-linear PiecewisePolynomial
    objects through the sample points.
    """
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header.split(",")[:1] != ["t"]:
            raise ValueError("curve CSV must start with header t,f,g,h")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            t, f, g, h = (Fraction(c) for c in line.split(","))
            rows.append((t, f, g, h))
    if len(rows) < 2:
        raise ValueError("need at least two sample rows")
    ts = [r[0] for r in rows]
    comps = []
    for idx in (1, 2, 3):
        pieces = []
        for (t0, *v0), (t1, *v1) in zip(rows, rows[1:]):
            s = (v1[idx - 1] - v0[idx - 1]) / (t1 - t0)
            pieces.append(Polynomial((v0[idx - 1] - s * t0, s)))
        comps.append(PiecewisePolynomial(ts, pieces))
    return tuple(comps)


def curve_to_csv(ts, f, g, h, fmt) -> str:
    lines = ["t,f,g,h"]
    for t in ts:
        lines.append(
            "%s,%s,%s,%s" % (fmt(t), fmt(f(t)), fmt(g(t)), fmt(h(t)))
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommand handlers: return process exit status
# ---------------------------------------------------------------------------


def _cmd_ce_build(args, fmt) -> int:
    C = build_curve(default_params(args.depth))
    outdir = args.out
    os.makedirs(outdir, exist_ok=True)
    levels = {
        "depth": args.depth,
        "levels": [lev.to_json_obj() for lev in C.I_levels],
    }
    with open(os.path.join(outdir, "intervals.json"), "w") as fh:
        json.dump(levels, fh, indent=2)
        fh.write("\n")
    ts = C.curve.breakpoints
    if args.samples:
        ts = [Fraction(i, args.samples) for i in range(args.samples + 1)]
    _write(
        os.path.join(outdir, "curve.csv"),
        curve_to_csv(ts, C.curve.f, C.curve.g, C.curve.h, fmt),
    )
    _write_meta(outdir, args)
    print("wrote intervals.json and curve.csv to %s" % outdir)
    return 0


def _cmd_ce_verify(args, fmt) -> int:
    params = default_params(args.depth)
    C = build_curve(params)
    failures = 0

    def check(label, ok):
        nonlocal failures
        print("%s %s" % ("PASS" if ok else "FAIL", label))
        if not ok:
            failures += 1

    incs = component_increments(C)
    check(
        "component increments equal 4 h_n^2 (%d components)" % len(incs),
        all(v == 4 * params.h(n) ** 2 for n, _, v in incs),
    )
    mrep = measure_report(C)
    check(
        "sum 2^n w_n = %s <= 1/31" % fmt(mrep["sum_2n_wn"]),
        mrep["sum_2n_wn_le_1_31"],
    )
    check("measure(I) <= sum 2^n w_n", mrep["measure_le_sum"])
    check(
        "dilation shells within 2 lambda_n (2^n - 1)",
        all(s["within_bound"] for s in mrep["shells"]),
    )
    prep = check_params(params, p_max=args.p_max)
    check("sum 2^k lambda_k <= 4", prep["lambda_partial_sums"]["bounded_by_4"])
    check(
        "h_n / lambda_n decreasing", prep["h_over_lambda"]["decreasing_from"] == 0
    )
    check(
        "4^n h_n increasing", prep["four_pow_times_h"]["increasing_from"] == 0
    )
    check(
        "tail ratio sum 2^(k-n) h_k^2 / lambda_(n+1)^2 decreasing",
        prep["h_tail_ratio"]["decreasing_from"] == 0,
    )
    for p, entry in sorted(prep["w_tail_ratios"].items()):
        d = entry["decreasing_from"]
        check("w tail ratio (p=%d) eventually decreasing" % p, d is not None)
    return 1 if failures else 0


def _cmd_ce_straddle(args, fmt) -> int:
    params = default_params(args.depth)
    if args.n + 1 > args.depth:
        print("error: need n + 1 <= depth", file=sys.stderr)
        return 2
    C = build_curve(params)
    ratio = straddle_ratio(C, args.n)
    growth = Fraction(4) ** args.n * params.h(args.n + 1)
    closed_form = 4 * growth**2
    print("n: %d" % args.n)
    print("ratio: %s" % fmt(ratio))
    print("closed form 4(4^n h_(n+1))^2: %s" % fmt(closed_form))
    print("4^n h_(n+1): %s" % fmt(growth))
    print("exceeds 2: %s" % ("true" if growth >= 2 else "false"))
    return 0 if ratio == closed_form else 1


def _cmd_jets_check(args, fmt) -> int:
    with open(args.input) as fh:
        triple = JetTriple.from_json_obj(json.load(fh))
    if args.m is not None and triple.m != args.m:
        print(
            "error: jet order %d does not match --m %d" % (triple.m, args.m),
            file=sys.stderr,
        )
        return 2
    ladder = DEFAULT_LADDER
    if args.ladder:
        ladder = tuple(_rat(s) for s in args.ladder.split(","))
    rep = extendability_report(triple, ladder, tolerance=args.tolerance)
    obj = rep.to_json_obj()
    text = json.dumps(obj, indent=2) + "\n"
    _write(args.out, text)
    return 0 if rep.verdict else 1


def _cmd_curve_lift(args, fmt) -> int:
    f, g, _h = read_curve_csv(args.input)
    curve = lift(f, g, args.h0)
    ts = curve.breakpoints
    _write(args.out, curve_to_csv(ts, curve.f, curve.g, curve.h, fmt))
    return 0


def _component(args):
    comps = dict(zip("fgh", read_curve_csv(args.input)))
    return comps[args.component]


def _cmd_diff_lp(args, fmt) -> int:
    u = _component(args)
    ladder = None
    if args.scales:
        ladder = tuple(_rat(s) for s in args.scales.split(","))
    P = Polynomial(tuple(_rat(c) for c in args.poly.split(",")))
    rep = lp_remainder_ladder(u, P, args.x, args.m, args.p, ladder)
    _write(args.out, rep.to_csv())
    return 0


def _cmd_diff_density(args, fmt) -> int:
    u = _component(args)
    P = Polynomial(tuple(_rat(c) for c in args.poly.split(",")))
    d = approx_density(u, P, args.x, args.m, args.eps, args.radius)
    print("density: %s" % fmt(d))
    return 0


def _cmd_sieve(args, fmt) -> int:
    u = _component(args)
    res = whitney_sieve(u, args.m, args.eps, grid=args.grid, n_max=args.nmax)
    text = json.dumps(res.to_json_obj(), indent=2) + "\n"
    _write(args.out, text)
    return 0


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="heislusin",
        description="Exact tools for horizontal curves in the Heisenberg group",
    )
    ap.add_argument(
        "--decimal", type=int, default=None, metavar="K",
        help="print rationals as K-digit decimals instead of p/q",
    )
    sub = ap.add_subparsers(dest="cmd")

    ce = sub.add_parser("counterexample").add_subparsers(dest="sub")
    b = ce.add_parser("build")
    b.add_argument("--depth", type=int, default=10)
    b.add_argument("--out", required=True)
    b.add_argument("--samples", type=int, default=0,
                   help="uniform sample count instead of breakpoints")
    b.set_defaults(_run=_cmd_ce_build, _command="counterexample build")
    v = ce.add_parser("verify")
    v.add_argument("--depth", type=int, default=10)
    v.add_argument("--p-max", dest="p_max", type=int, default=4)
    v.set_defaults(_run=_cmd_ce_verify, _command="counterexample verify")
    s = ce.add_parser("straddle")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--depth", type=int, default=10)
    s.set_defaults(_run=_cmd_ce_straddle, _command="counterexample straddle")

    jets = sub.add_parser("jets").add_subparsers(dest="sub")
    jc = jets.add_parser("check")
    jc.add_argument("--input", required=True)
    jc.add_argument("--m", type=int, default=None, help="expected jet order")
    jc.add_argument("--ladder", default=None)
    jc.add_argument("--tolerance", type=_rat, default=Fraction(1, 10**6))
    jc.add_argument("--out", default="-")
    jc.set_defaults(_run=_cmd_jets_check, _command="jets check")

    curve = sub.add_parser("curve").add_subparsers(dest="sub")
    cl = curve.add_parser("lift")
    cl.add_argument("--input", required=True)
    cl.add_argument("--h0", type=_rat, default=Fraction(0))
    cl.add_argument("--out", default="-")
    cl.set_defaults(_run=_cmd_curve_lift, _command="curve lift")

    diff = sub.add_parser("diff").add_subparsers(dest="sub")
    lp = diff.add_parser("lp")
    lp.add_argument("--input", required=True)
    lp.add_argument("--component", choices="fgh", default="f")
    lp.add_argument("--poly", default="0", help="comma-separated coefficients")
    lp.add_argument("--x", type=_rat, required=True)
    lp.add_argument("--m", type=int, required=True)
    lp.add_argument("--p", type=int, default=1)
    lp.add_argument("--scales", default=None)
    lp.add_argument("--out", default="-")
    lp.set_defaults(_run=_cmd_diff_lp, _command="diff lp")
    dd = diff.add_parser("density")
    dd.add_argument("--input", required=True)
    dd.add_argument("--component", choices="fgh", default="f")
    dd.add_argument("--poly", default="0")
    dd.add_argument("--x", type=_rat, required=True)
    dd.add_argument("--m", type=int, required=True)
    dd.add_argument("--eps", type=_rat, required=True)
    dd.add_argument("--radius", type=_rat, required=True)
    dd.set_defaults(_run=_cmd_diff_density, _command="diff density")

    sv = sub.add_parser("sieve")
    sv.add_argument("--input", required=True)
    sv.add_argument("--component", choices="fgh", default="f")
    sv.add_argument("--m", type=int, required=True)
    sv.add_argument("--eps", type=_rat, default=Fraction(5, 100))
    sv.add_argument("--grid", type=int, default=2**14)
    sv.add_argument("--nmax", type=int, default=6)
    sv.add_argument("--out", default="-")
    sv.set_defaults(_run=_cmd_sieve, _command="sieve")
    return ap


def run(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if not hasattr(args, "_run"):
        ap.print_usage(sys.stderr)
        return 2
    fmt = _Fmt(args.decimal)
    try:
        status = args._run(args, fmt)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    return status


def main():  # console_scripts entry point
    sys.exit(run())


if __name__ == "__main__":
    main()
