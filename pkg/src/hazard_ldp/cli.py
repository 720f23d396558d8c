"""Command-line interface: ``hazard-ldp <command> [options]``.

Every command writes CSV (default) or JSON to ``--out`` or standard output.
Exit status is 0 on success, 2 on usage or domain errors and 1 otherwise.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path


from . import distributions as dist
from . import estimator, oracle, ratefn
from .errors import DomainError, InputError
from .ratefn import Probability
from .tables import Table, to_csv, to_json

FIG1_HAZARDS = (0.5, 1.0, 1.5, 2.0)
FIG2_LEVEL_EXPONENTS = tuple(range(2, -9, -1))


class UsageError(Exception):
    pass


def parse_grid(text):
    """``START:STOP:STEP`` -> ``START + i*STEP`` for ``i = 0..round((STOP-START)/STEP)``."""
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like START:STOP:STEP, got {text!r}") from None
    if not (math.isfinite(start) and math.isfinite(stop) and math.isfinite(step)) or step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"grid needs finite START <= STOP and STEP > 0, got {text!r}")
    count = int(round((stop - start) / step))
    if count > 10**6:
        raise argparse.ArgumentTypeError(f"grid {text!r} has too many points")
    return [start + i * step for i in range(count + 1)]


def _as_list(v):
    return v if isinstance(v, list) else [v]


def _probabilities(args, default_hazards=None):
    if args.p is not None:
        return [Probability(p) for p in _as_list(args.p)]
    hazards = _as_list(args.ch) if args.ch is not None else default_hazards
    if not hazards:
        raise UsageError("give tail probabilities with --p or cumulative hazards with --ch")
    for h in hazards:
        if not (math.isfinite(h) and h > 0):
            raise DomainError(f"cumulative hazard must be positive and finite, got {h!r}")
    return [Probability.from_hazard(h) for h in hazards]


def _single_probability(args):
    ps = _probabilities(args)
    if len(ps) != 1:
        raise UsageError("this command takes exactly one --p or --ch value")
    return ps[0]


def _spec(args, required=True):
    if getattr(args, "family", None) == "exponential":
        if args.rate is None:
            raise UsageError("--family exponential needs --rate")
        return dist.Exponential(args.rate)
    if getattr(args, "family", None) == "weibull":
        if args.shape is None or args.scale is None:
            raise UsageError("--family weibull needs --shape and --scale")
        return dist.Weibull(args.shape, args.scale)
    if required:
        raise UsageError("a distribution is required (--family ...)")
    return None


def _emit(args, text):
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _emit_table(args, table):
    _emit(args, to_json(table) if args.format == "json" else to_csv(table))


def cmd_rate_curve(args):
    ps = _probabilities(args, FIG1_HAZARDS)
    ys = args.y_grid
    if ys[0] < 0:
        raise DomainError("y-grid must start at a nonnegative value")
    table = Table(["p", "y", "rate"])
    for p in ps:
        curve = ratefn.rate_curve(p, ys)
        for y, r in zip(curve.abscissas, curve.ordinates):
            table.append(float(p), y, r)
    _emit_table(args, table)


def _contours(grid, levels):
    import contourpy

    gen = contourpy.contour_generator(grid.t, grid.y, grid.values.T, line_type="Separate")
    table = Table(["level", "line", "t", "y"])
    for level in levels:
        for j, line in enumerate(gen.lines(level)):
            for t, y in line:
                table.append(float(level), j, float(t), float(y))
    return table


def cmd_surface(args):
    if args.data:
        spec = dist.EmpiricalStep.from_sample(estimator.read_waiting_times(args.data).values)
    else:
        spec = _spec(args)
    grid = dist.rate_surface(spec, args.t_grid, args.y_grid)
    if args.levels:
        levels = args.levels
    else:
        levels = [2.0**i for i in (args.level_exponents or FIG2_LEVEL_EXPONENTS)]
    if any(not (math.isfinite(v) and v > 0) for v in levels):
        raise DomainError("contour levels must be positive and finite")
    surface = Table(["t", "y", "ch", "rate"])
    for i, t in enumerate(grid.t):
        for j, y in enumerate(grid.y):
            surface.append(float(t), float(y), float(grid.ch[i]), float(grid.values[i, j]))
    contours = _contours(grid, levels)
    if args.format == "json":
        _emit(args, to_json({"levels": [float(v) for v in levels], "surface": surface, "contours": contours}))
        return
    if args.out:
        _emit(args, to_csv(surface))
        target = args.contours_out or _sibling(args.out, ".contours")
        Path(target).write_text(to_csv(contours), encoding="utf-8", newline="\n")
    else:
        _emit(args, to_csv(surface) + "\n" + to_csv(contours))


def _sibling(path, tag):
    path = Path(path)
    return path.with_name(path.stem + tag + (path.suffix or ".csv"))


def cmd_ldp_check(args):
    p = _single_probability(args)
    event = oracle.parse_event(args.event)
    rows = oracle.ldp_convergence(p, event, args.n)
    table = Table(["n", "log_prob", "empirical_rate", "limit_rate", "gap"])
    for r in rows:
        table.append(r.n, r.exact_log_prob, r.empirical_rate, r.limit_rate, r.gap)
    _emit_table(args, table)


OVER_UNDER_COLUMNS = ["n", "p", "delta", "prob_over", "prob_under", "log_ratio_rate", "limit"]


def cmd_over_under(args):
    p = _single_probability(args)
    table = Table(OVER_UNDER_COLUMNS)
    for n in args.n:
        r = oracle.over_under_report(n, p, args.delta)
        table.append(r.n, r.p, r.delta, r.prob_over, r.prob_under, r.log_ratio_rate, r.limit)
    _emit_table(args, table)


def cmd_symmetry(args):
    ps = _probabilities(args)
    zs = args.z if args.z else args.z_grid
    if not zs:
        raise UsageError("give --z values or a --z-grid")
    for p in ps:
        bad = [z for z in zs if not 0.0 < z < p.hazard]
        if bad:
            raise DomainError(f"z = {bad[0]!r} lies outside (0, -ln p) = (0, {p.hazard!r}) for p = {float(p)!r}")
    table = Table(["p", "z", "defect_exact", "defect_approx", "abs_error"])
    for p in ps:
        for z in zs:
            exact = ratefn.symmetry_defect_exact(p, z)
            approx = ratefn.symmetry_defect_approx(p, z)
            table.append(float(p), z, exact, approx, abs(approx - exact))
    _emit_table(args, table)


def cmd_estimate(args):
    spec = _spec(args, required=False)
    if args.data:
        batch = estimator.read_waiting_times(args.data)
    else:
        if spec is None or args.n is None or args.seed is None:
            raise UsageError("without --data, give --family (with parameters), --n and --seed")
        batch = estimator.sample(spec, args.n, args.seed)
    diagnostics = args.diagnostics or args.delta is not None
    if diagnostics and spec is None:
        raise UsageError("diagnostics need the true distribution (--family ...); the empirical p is never substituted")
    records = []
    for threshold in args.threshold:
        s = estimator.summarize(batch, threshold)
        rec = {
            "threshold": s.threshold,
            "n": s.n,
            "successes": s.successes,
            "survival": estimator.empirical_survival(s),
            "cumhaz": estimator.empirical_cumhaz(s),
        }
        if diagnostics:
            p = Probability(spec.survival(threshold))
            rec["true_p"] = float(p)
            rec["true_cumhaz"] = float(spec.cumhaz(threshold))
            rec["rate"] = ratefn.ch_rate(p, rec["cumhaz"])
            if args.delta is not None:
                r = oracle.over_under_report(s.n, p, args.delta)
                rec.update(delta=r.delta, prob_over=r.prob_over, prob_under=r.prob_under,
                           log_ratio_rate=r.log_ratio_rate, limit=r.limit)
        records.append(rec)
    if args.format == "json":
        payload = {"seed": batch.seed, "n": len(batch), "estimates": records}
        _emit(args, to_json(payload))
    else:
        table = Table(list(records[0]))
        for rec in records:
            table.append(*rec.values())
        _emit(args, to_csv(table))


def _add_output(sp, default_format="csv"):
    sp.add_argument("--format", choices=("csv", "json"), default=default_format)
    sp.add_argument("--out", metavar="PATH", help="write here instead of standard output")


def _add_probability(sp, many=True):
    nargs = "+" if many else None
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--p", type=float, nargs=nargs, help="tail probabilities in (0, 1)")
    g.add_argument("--ch", type=float, nargs=nargs, help="cumulative hazards h; p = exp(-h)")


def _add_family(sp):
    sp.add_argument("--family", choices=("exponential", "weibull"))
    sp.add_argument("--rate", type=float, help="exponential hazard rate (mean 1/rate)")
    sp.add_argument("--shape", type=float, help="Weibull shape")
    sp.add_argument("--scale", type=float, help="Weibull scale")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hazard-ldp",
        description="Rate functions and exact finite-sample laws of the empirical cumulative hazard.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("rate-curve", help="sample ch_rate(p, y) over a y-grid")
    _add_probability(sp)
    sp.add_argument("--y-grid", type=parse_grid, default=parse_grid("0:4:0.01"), metavar="START:STOP:STEP")
    _add_output(sp)
    sp.set_defaults(func=cmd_rate_curve)

    sp = sub.add_parser("surface", help="rate surface I(y, t) and its contour lines")
    _add_family(sp)
    sp.add_argument("--data", metavar="CSV", help="use the empirical step distribution of this sample")
    sp.add_argument("--t-grid", type=parse_grid, default=parse_grid("0.02:8:0.02"), metavar="START:STOP:STEP")
    sp.add_argument("--y-grid", type=parse_grid, default=parse_grid("0:6:0.02"), metavar="START:STOP:STEP")
    lv = sp.add_mutually_exclusive_group()
    lv.add_argument("--levels", type=float, nargs="+", help="contour levels")
    lv.add_argument("--level-exponents", type=int, nargs="+", help="contour levels 2**i (default 2..-8)")
    sp.add_argument("--contours-out", metavar="PATH", help="CSV path for contour points (default: OUT.contours.csv)")
    _add_output(sp)
    sp.set_defaults(func=cmd_surface)

    sp = sub.add_parser("ldp-check", help="exact empirical rates against the limit rate")
    _add_probability(sp, many=False)
    sp.add_argument("--event", required=True, help="atleast:Y, atmost:Y or outside:LO,HI")
    sp.add_argument("--n", type=int, nargs="+", required=True)
    _add_output(sp)
    sp.set_defaults(func=cmd_ldp_check)

    sp = sub.add_parser("over-under", help="exact over/underestimation probabilities")
    _add_probability(sp, many=False)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--n", type=int, nargs="+", required=True)
    _add_output(sp)
    sp.set_defaults(func=cmd_over_under)

    sp = sub.add_parser("symmetry", help="exact and approximate symmetry defect")
    _add_probability(sp)
    zg = sp.add_mutually_exclusive_group(required=True)
    zg.add_argument("--z", type=float, nargs="+")
    zg.add_argument("--z-grid", type=parse_grid, metavar="START:STOP:STEP")
    _add_output(sp)
    sp.set_defaults(func=cmd_symmetry)

    sp = sub.add_parser("estimate", help="empirical survival and cumulative hazard at thresholds")
    sp.add_argument("--data", metavar="CSV", help="waiting times, header 'waiting_time'")
    _add_family(sp)
    sp.add_argument("--n", type=int, help="sample size when generating")
    sp.add_argument("--seed", type=int, help="unsigned 64-bit seed when generating")
    sp.add_argument("--threshold", type=float, nargs="+", required=True)
    sp.add_argument("--delta", type=float, help="also report exact over/under probabilities")
    sp.add_argument("--diagnostics", action="store_true", help="report true p, H and the rate of the estimate")
    _add_output(sp, default_format="json")
    sp.set_defaults(func=cmd_estimate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, DomainError, InputError) as exc:
        parser.exit(2, f"{parser.prog} {args.command}: error: {exc}\n")
    except Exception as exc:  # noqa: BLE001
        parser.exit(1, f"{parser.prog} {args.command}: internal error: {exc!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
