"""Command-line interface: ``debtflow metrics|simulate|frontier|optimize|history|scenario``.

Results go to stdout or ``--output``; every output file gets a
``<output>.manifest.json`` sidecar recording the command, inputs and
assumptions.  Exit codes: 0 success, 2 input error, 3 model condition
(infeasible program, or ``g <= WAC*`` under ``--strict``).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import datetime as dt
import io as _io
import json
import os
import sys
from pathlib import Path

from . import __version__
from . import io as dio
from .asymptotics import (
    check_growth_dominance,
    equilibrium_distribution,
    equilibrium_wam,
    metrics,
    rollover_kernel,
)
from .core import Assumptions, GrowthAssumption, Strategy
from .errors import DebtflowError, ModelConditionError
from .frontier import (
    dominant_directions,
    frontier_sweep,
    optimize_constrained,
    write_frontier_csv,
)
from .ingestion import (
    AuctionPattern,
    fiscal_year_fractions,
    read_records,
    scenario_path,
    spot_fractions,
    us_fiscal_year,
)
from .simulator import run, write_csv

EXIT_INPUT = 2
EXIT_MODEL = 3


class GrowthDominanceViolation(ModelConditionError):
    pass


def sig6(x: float) -> float:
    return float(f"{x:.6g}")


def _parse_rates(text: str) -> dict[int, float]:
    try:
        pairs = (item.split(":") for item in text.split(",") if item.strip())
        return {int(t): float(r) for t, r in pairs}
    except ValueError:
        raise argparse.ArgumentTypeError("expected tenor:rate pairs, e.g. 1:0.0324,10:0.0479")


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


class Run:
    """Per-invocation context: resolved assumptions, warnings, manifest."""

    def __init__(self, args):
        self.args = args
        self.inputs: list[str] = []
        base = dio.load_assumptions(args.assumptions)
        self.assumptions: Assumptions = base.with_overrides(args.g, args.rates)
        self.source = str(args.assumptions or os.environ.get(dio.ENV_ASSUMPTIONS) or "default")

    def check_dominance(self, label: str, f: Strategy) -> None:
        m = metrics(f, self.assumptions.g, self.assumptions.curve)
        if not check_growth_dominance(m, self.assumptions.g):
            msg = (
                f"{label}: g = {self.assumptions.g:g} does not exceed WAC* = {m.wac_star:.6g}; "
                "closed-form metrics are outside their range of validity"
            )
            if self.args.strict:
                raise GrowthDominanceViolation(msg)
            print(f"warning: {msg}", file=sys.stderr)

    def manifest(self) -> dict:
        a = self.assumptions
        return {
            "command": self.args.command,
            "argv": sys.argv[1:],
            "inputs": self.inputs,
            "assumptions": {
                "source": self.source,
                "g": a.g,
                "rates": [{"tenor": t, "rate": r} for t, r in a.curve.knots],
                "tenors": list(a.grid.tenors),
                "max_tenor": a.grid.max_tenor,
            },
            "outputs": [self.args.output] if self.args.output else [],
            "tool_version": __version__,
            "created": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        }

    def emit(self, text: str) -> None:
        if self.args.output:
            out = Path(self.args.output)
            out.write_text(text)
            Path(str(out) + ".manifest.json").write_text(
                json.dumps(self.manifest(), indent=2) + "\n"
            )
        else:
            sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _metrics_dict(f: Strategy, a: Assumptions) -> dict:
    m = metrics(f, a.g, a.curve)
    return {k: sig6(v) for k, v in m.as_dict().items()}


def cmd_metrics(ctx: Run) -> None:
    a = ctx.assumptions
    ctx.inputs.append(ctx.args.strategy)
    f = dio.load_strategy(ctx.args.strategy, a.grid)
    ctx.check_dominance("strategy", f)
    theta = equilibrium_distribution(f, a.g)
    out = {
        "strategy": {k: sig6(v) for k, v in dio.strategy_to_dict(f).items()},
        "g": a.g,
        **_metrics_dict(f, a),
        "growth_dominance": check_growth_dominance(metrics(f, a.g, a.curve), a.g),
        "theta_star": {str(i + 1): sig6(v) for i, v in enumerate(theta) if v > 0},
        "equilibrium_wam": sig6(equilibrium_wam(theta)),
    }
    ctx.emit(_json(out))


def cmd_simulate(ctx: Run) -> None:
    args = ctx.args
    ctx.inputs.append(args.config)
    base = dio.load_assumptions(args.assumptions) if args.assumptions else None
    config = dio.load_simulation_config(args.config, base=base)
    # Command-line overrides beat the config file, which beats the assumptions file.
    a = Assumptions(GrowthAssumption(config.g), config.curve, config.strategy.grid).with_overrides(args.g, args.rates)
    config = dataclasses.replace(config, g=a.g, curve=a.curve)
    ctx.assumptions = a
    state = run(config)
    buf = _io.StringIO()
    write_csv(state, buf)
    ctx.emit(buf.getvalue())


def cmd_frontier(ctx: Run) -> None:
    a = ctx.assumptions
    args = ctx.args
    if args.R_grid:
        budgets = args.R_grid
    else:
        budgets = [float(t) for t in rollover_kernel(a.grid, a.g)]
    points = frontier_sweep(budgets, a.g, a.curve, a.grid)
    buf = _io.StringIO()
    write_frontier_csv(points, buf, g=a.g)
    ctx.emit(buf.getvalue())


def _result_dict(res, a: Assumptions) -> dict:
    return {
        "status": res.status,
        "objective": sig6(res.objective),
        "optimal_f": {k: sig6(v) for k, v in dio.strategy_to_dict(res.optimal_f).items()},
        "optimal_w": {str(t): sig6(v) for t, v in zip(a.grid.tenors, res.optimal_w)},
        "metrics": {k: sig6(v) for k, v in res.metrics.as_dict().items()},
        "binding_constraints": res.binding_constraints,
    }


def cmd_optimize(ctx: Run) -> None:
    a = ctx.assumptions
    args = ctx.args
    ctx.inputs.append(args.window)
    window = dio.load_window(args.window, a.grid)
    res = optimize_constrained(window, args.R, a.g, a.curve)
    out = {"R": args.R, "g": a.g, "optimum": _result_dict(res, a)}
    ctx.check_dominance("optimum", res.optimal_f)
    if args.current:
        ctx.inputs.append(args.current)
        f_curr = dio.load_strategy(args.current, a.grid)
        cost_dom, risk_dom = dominant_directions(f_curr, window, a.g, a.curve)
        out["current"] = _metrics_dict(f_curr, a)
        out["cost_dominant"] = {
            "strategy": {k: sig6(v) for k, v in dio.strategy_to_dict(cost_dom).items()},
            "metrics": _metrics_dict(cost_dom, a),
        }
        out["risk_dominant"] = {
            "strategy": {k: sig6(v) for k, v in dio.strategy_to_dict(risk_dom).items()},
            "metrics": _metrics_dict(risk_dom, a),
        }
    ctx.emit(_json(out))


def _fy_windows(args) -> list[tuple[str, dt.date, dt.date]]:
    out = []
    for year in args.fy or []:
        start, end = us_fiscal_year(year)
        out.append((f"FY{year}", start, end))
    for text in args.range or []:
        try:
            a, b = text.split(":")
            out.append((text, dt.date.fromisoformat(a), dt.date.fromisoformat(b)))
        except ValueError:
            raise dio.InputError(f"bad --range {text!r}; expected YYYY-MM-DD:YYYY-MM-DD") from None
    if not out:
        raise dio.InputError("history needs at least one --fy or --range")
    return out


def _trajectory_csv(rows: list[tuple[str, Strategy]], a: Assumptions, key: str) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    T = a.grid.max_tenor
    w.writerow([key, "rr_star", "wac_star", "t_wac", "nwam"] + [f"f_{j}" for j in range(1, T + 1)])
    for label, f in rows:
        m = metrics(f, a.g, a.curve)
        w.writerow(
            [label] + [f"{v:.6g}" for v in (m.rr_star, m.wac_star, m.t_wac, m.nwam)]
            + [f"{v:.6g}" for v in f.dense()]
        )
    return buf.getvalue()


def cmd_history(ctx: Run) -> None:
    a = ctx.assumptions
    args = ctx.args
    ctx.inputs.append(args.records)
    records = read_records(args.records)
    rows = []
    for label, start, end in _fy_windows(args):
        f = fiscal_year_fractions(records, start, end, a.grid, args.exclude_class or ())
        ctx.check_dominance(label, f)
        rows.append((label, f))
    ctx.emit(_trajectory_csv(rows, a, "period"))


def _read_gaps(path: str) -> list[float]:
    text = Path(path).read_text()
    if path.endswith(".json"):
        data = dio.read_json(path)
        if not isinstance(data, list):
            raise dio.InputError(f"{path}: expected a JSON list of yearly gaps")
        return [float(x) for x in data]
    gaps = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#")[0].strip()
        if not line:
            continue
        try:
            gaps.append(float(line.split(",")[-1]))
        except ValueError:
            if lineno == 1:
                continue  # header
            raise dio.InputError(f"{path}: line {lineno}: not a number: {line!r}") from None
    return gaps


def cmd_scenario(ctx: Run) -> None:
    a = ctx.assumptions
    args = ctx.args
    ctx.inputs += [args.pattern, args.gaps]
    pattern = AuctionPattern.load(args.pattern)
    gaps = _read_gaps(args.gaps)
    rows = [("0", spot_fractions(pattern, a.grid))]
    path = scenario_path(pattern, args.policy, gaps, len(gaps), a.grid)
    rows += [(str(t), f) for t, f in enumerate(path, start=1)]
    for label, f in rows:
        ctx.check_dominance(f"year {label}", f)
    ctx.emit(_trajectory_csv(rows, a, "year"))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--assumptions", help="assumptions JSON (default: $DEBTFLOW_ASSUMPTIONS or built-in)")
    common.add_argument("--g", type=float, help="override deficit growth rate")
    common.add_argument("--rates", type=_parse_rates, help="override curve, e.g. 1:0.03,10:0.045")
    common.add_argument("--output", "-o", help="write result here (plus a .manifest.json sidecar)")
    common.add_argument("--strict", action="store_true", help="treat g <= WAC* as an error (exit 3)")

    p = argparse.ArgumentParser(prog="debtflow", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("metrics", parents=[common], help="map a strategy to (RR*, WAC*, t_WAC, NWAM)")
    s.add_argument("strategy", help="strategy JSON {tenor: fraction}")
    s.set_defaults(func=cmd_metrics)

    s = sub.add_parser("simulate", parents=[common], help="run the debt-rolling recursion")
    s.add_argument("config", help="simulation config JSON")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("frontier", parents=[common], help="sweet-spot frontier over risk budgets")
    s.add_argument("--R-grid", dest="R_grid", type=_parse_floats,
                   help="comma-separated risk budgets (default: kernel value of every grid tenor)")
    s.set_defaults(func=cmd_frontier)

    s = sub.add_parser("optimize", parents=[common], help="policy-window constrained optimum")
    s.add_argument("window", help="window JSON {lower: {...}, upper: {...}}")
    s.add_argument("--R", type=float, required=True, help="rollover budget")
    s.add_argument("--current", help="current strategy JSON; adds dominant directions")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("history", parents=[common], help="per-fiscal-year (R, C) from auction records")
    s.add_argument("records", help="issuance CSV")
    s.add_argument("--fy", type=int, action="append", help="US fiscal year (Oct 1 - Sep 30); repeatable")
    s.add_argument("--range", action="append", help="explicit window YYYY-MM-DD:YYYY-MM-DD; repeatable")
    s.add_argument("--exclude-class", action="append", choices=["bill", "note_bond", "tips", "frn"])
    s.set_defaults(func=cmd_history)

    s = sub.add_parser("scenario", parents=[common], help="forward (R, C) trajectory of a funding policy")
    s.add_argument("pattern", help="auction pattern JSON")
    s.add_argument("--policy", required=True, choices=["bills_only", "twist_short", "coupons_pro_rata"])
    s.add_argument("--gaps", required=True, help="yearly incremental funding gaps (JSON list or one per line)")
    s.set_defaults(func=cmd_scenario)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ctx = Run(args)
        args.func(ctx)
    except ModelConditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (DebtflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
