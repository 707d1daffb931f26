"""Command-line front end: one experiment per invocation, CSV on stdout.

Exit status is 0 on success, 2 for malformed specs or parameters and 3 for
numerical failures (divergent integrals, violated construction
preconditions).
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import lab, scoring
from .distributions import probe_m_index
from .errors import InvalidParameterError, NumericalError, SpecParseError
from .functionals import FUNCTIONAL_TAGS
from .specs import format_distribution, parse_distribution, parse_function, parse_rule
from .tail_analysis import tail_compare

DEFAULT_SEED = 0
DEFAULT_GRID = "0,0.01,0.1,0.25,0.5"


def fmt(v) -> str:
    """17 significant digits; booleans and missing values spelled out."""
    if v is None:
        return "undefined"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def parse_grid(text: str, closed_right: bool = False) -> list:
    """``0.5,0.1``, ``lin:START:STOP:COUNT`` or ``geom:START:STOP:COUNT``."""
    text = text.strip()
    if text.startswith(("lin:", "geom:")):
        kind, _, rest = text.partition(":")
        fields = rest.split(":")
        if len(fields) != 3:
            raise SpecParseError(f"{kind} grid needs START:STOP:COUNT", text, len(kind) + 1)
        try:
            start, stop = float(fields[0]), float(fields[1])
            count = int(fields[2])
        except ValueError:
            raise SpecParseError(f"malformed {kind} grid", text, len(kind) + 1) from None
        if count < 1:
            raise SpecParseError("grid count must be positive", text, len(text) - len(fields[2]))
        if kind == "geom":
            if not (start > 0 and stop > 0):
                raise SpecParseError("geometric grid needs positive ends", text, len(kind) + 1)
            values = np.geomspace(start, stop, count)
        else:
            values = np.linspace(start, stop, count)
        values = [float(v) for v in values]
    else:
        values, pos = [], 0
        for item in text.split(","):
            try:
                values.append(float(item))
            except ValueError:
                raise SpecParseError(f"grid entry {item.strip()!r} is not a number", text, pos) from None
            pos += len(item) + 1
    for v in values:
        inside = 0.0 <= v <= 1.0 if closed_right else 0.0 <= v < 1.0
        if not inside:
            interval = "[0, 1]" if closed_right else "[0, 1)"
            raise InvalidParameterError(f"grid value {v!r} outside {interval}")
    return values


def parse_counts(text: str) -> list:
    out = []
    for item in text.split(","):
        try:
            v = float(item)
        except ValueError:
            raise SpecParseError(f"count {item.strip()!r} is not a number", text, text.find(item)) from None
        if v != int(v) or v < 2:
            raise InvalidParameterError(f"counts must be integers >= 2, got {item.strip()!r}")
        out.append(int(v))
    return out


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_profile(args):
    F = parse_distribution(args.spec)
    probe = probe_m_index(F)
    rows = [
        ("spec", format_distribution(F)),
        ("upper_endpoint", F.upper),
        ("evi", F.evi),
        ("rv_index", F.rv_index),
        ("m_index", probe.value),
        ("m_index_status", probe.status),
    ]
    return ["field", "value"], rows


def cmd_crossing(args):
    s = parse_function(args.score)
    F0, F1 = parse_distribution(args.f0), parse_distribution(args.f1)
    r = lab.crossing_lambda(s, args.x0, args.x1, F0, F1, atol=args.tol_quad,
                            slack_factor=args.tol_slack)
    return ["a", "b", "lambda_star", "residual"], [(r.a, r.b, r.lambda_star, r.residual)]


def _bound_inputs(args):
    return parse_rule(args.score), parse_distribution(args.truth), parse_distribution(args.alt)


def cmd_bound(args):
    S, G, F = _bound_inputs(args)
    report = lab.diagonal_bound_check(S, F, G, parse_grid(args.grid), atol=args.tol_quad,
                                      slack_factor=args.tol_slack)
    return (["lambda", "gap", "bound", "satisfied"],
            [(r.lam, r.gap, r.bound, r.satisfied) for r in report.rows])


cmd_curve = cmd_bound


def cmd_epsilon(args):
    S, G, F = _bound_inputs(args)
    rows = []
    for eps in args.eps:
        c = lab.epsilon_mixture(S, F, G, eps, args.functional, atol=args.tol_quad,
                                slack_factor=args.tol_slack)
        rows.append((c.epsilon, c.D, c.lambda_eps, c.measured_gap, c.t_truth, c.t_construct,
                     c.tail_verdict.verdict))
    return ["epsilon", "D", "lambda_eps", "measured_gap", "t_truth", "t_construct", "tail_verdict"], rows


def cmd_tailcmp(args):
    F, G = parse_distribution(args.first), parse_distribution(args.second)
    res = tail_compare(F, G)
    head = (res.verdict, res.ratio)
    rows = [head + (x, r) for x, r in res.evidence] or [head + ("", "")]
    return ["verdict", "ratio", "probe_x", "probe_ratio"], rows


def cmd_power(args):
    S, G, F = _bound_inputs(args)
    table = lab.mc_power_study(S, G, F, parse_counts(args.n), args.reps, args.seed,
                               atol=args.tol_quad)
    return (["n", "mean_diff", "stderr", "detect_frac"],
            [(r.n, r.mean_diff, r.stderr, r.detect_frac) for r in table])


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _finite(text):
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"{text!r} is not finite")
    return v


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"{text!r} is not positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailscore",
        description="Proper scores versus tail functionals: experiments emitting CSV.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write CSV here instead of stdout")
    common.add_argument("--tol-quad", type=_positive, default=scoring.DEFAULT_ATOL,
                        help="absolute quadrature tolerance per integral (default %(default)g)")
    common.add_argument("--tol-slack", type=_positive, default=lab.SLACK_FACTOR,
                        help="numerical slack as a multiple of summed abs_error (default %(default)g)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", parents=[common], help="tail profile of a distribution")
    p.add_argument("spec")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("crossing", parents=[common], help="expected-score crossing weight")
    p.add_argument("--score", required=True, help="scoring function, e.g. se(k=1)")
    p.add_argument("--x0", type=_finite, required=True)
    p.add_argument("--x1", type=_finite, required=True)
    p.add_argument("--f0", required=True)
    p.add_argument("--f1", required=True)
    p.set_defaults(func=cmd_crossing)

    for name, func, helptext in (("bound", cmd_bound, "diagonal-continuity bound check"),
                                 ("curve", cmd_curve, "score-gap curve for plotting")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--score", required=True, help="scoring rule, e.g. crps")
        p.add_argument("--truth", required=True)
        p.add_argument("--alt", required=True)
        p.add_argument("--grid", default=DEFAULT_GRID,
                       help="lambdas: list, lin:A:B:N or geom:A:B:N (default %(default)s)")
        p.set_defaults(func=func)

    p = sub.add_parser("epsilon", parents=[common], help="epsilon-close mixture construction")
    p.add_argument("--score", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--alt", required=True)
    p.add_argument("--eps", type=_positive, nargs="+", required=True)
    p.add_argument("--functional", choices=FUNCTIONAL_TAGS, required=True)
    p.set_defaults(func=cmd_epsilon)

    p = sub.add_parser("tailcmp", parents=[common], help="tail order of two distributions")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_tailcmp)

    p = sub.add_parser("power", parents=[common], help="Monte-Carlo detection power")
    p.add_argument("--score", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--alt", required=True)
    p.add_argument("--n", required=True, help="comma-separated sample sizes")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_power)
    return parser


def render(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        header, rows = args.func(args)
    except InvalidParameterError as exc:
        print(f"tailscore: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"tailscore: numerical failure: {exc}", file=sys.stderr)
        return 3
    text = render(header, rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
