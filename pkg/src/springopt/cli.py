"""Command-line front end: ``springopt <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 constraint-infeasible, 3 verification
violation.  Settings resolve as command-line flags, then a JSON config file
(``--config`` or ``$SPRINGOPT_CONFIG``), then the built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .bounds import certify, check_dominance, lookup, registry, registry_table, subcases_of
from .evaluators import ConstraintParams, DomainError, evaluate, response_force
from .loading import SimulationError, simulate_loading
from .network import (
    CASE_IDS,
    canonical_case,
    case_resistance_formula,
    parse_topology,
    print_topology,
)
from .solvers import DEFAULT_LOWER, DEFAULT_UPPER, GridSpec, brute_force, solve_all

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_VIOLATION = 3

RECOMMENDED_SAMPLES = 10_000
CONFIG_ENV = "SPRINGOPT_CONFIG"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: ConstraintParams = field(default_factory=ConstraintParams)
    tol: float = 1e-6
    grid: GridSpec = field(default_factory=GridSpec)
    box: float = DEFAULT_UPPER
    seed: int = 0
    samples: int = 100_000
    out: Optional[str] = None
    format: str = "text"


_FORMATS = ("text", "csv", "json")


def _config_from_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    known = {f for f in RunConfig.__dataclass_fields__}
    unknown = set(data) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key, fields in (("params", ConstraintParams.__dataclass_fields__), ("grid", GridSpec.__dataclass_fields__)):
        if key in data:
            if not isinstance(data[key], dict) or set(data[key]) - set(fields):
                raise UsageError(f"config '{key}' must be an object with keys from {sorted(fields)}")
    return data


def resolve_config(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    """Merge defaults, the optional config file and the command-line flags."""
    path = args.config or environ.get(CONFIG_ENV)
    data = _config_from_file(path) if path else {}

    params = asdict(ConstraintParams())
    params.update(data.get("params", {}))
    for flag, key in (("alpha", "alpha"), ("beta", "beta"), ("fmin", "f_min"), ("frmin", "fr_min")):
        if getattr(args, flag) is not None:
            params[key] = getattr(args, flag)

    grid = dict(data.get("grid", {}))
    if args.grid_step is not None:
        grid["step"] = args.grid_step
    if args.grid_max is not None:
        grid["upper"] = args.grid_max
    grid.setdefault("step", GridSpec.step)
    grid.setdefault("upper", GridSpec.upper)
    grid.setdefault("lower", grid["step"])  # the grid starts one step above zero

    settings = {k: data[k] for k in ("tol", "box", "seed", "samples", "out", "format") if k in data}
    for flag in ("tol", "seed", "samples", "out", "format"):
        if getattr(args, flag, None) is not None:
            settings[flag] = getattr(args, flag)
    if args.grid_max is not None:
        settings["box"] = args.grid_max

    try:
        cfg = RunConfig(params=ConstraintParams(**params), grid=GridSpec(**grid), **settings)
    except (TypeError, DomainError) as exc:
        raise UsageError(str(exc)) from None
    if cfg.format not in _FORMATS:
        raise UsageError(f"format must be one of {', '.join(_FORMATS)}")
    if not cfg.tol > 0:
        raise UsageError("tol must be positive")
    if not cfg.box > DEFAULT_LOWER:
        raise UsageError(f"search box upper bound must exceed {DEFAULT_LOWER:g}")
    if int(cfg.samples) != cfg.samples or cfg.samples < 1:
        raise UsageError("samples must be a positive integer")
    return cfg


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _g(v) -> str:
    return f"{v:.17g}"


def _vec(values, spec=".6f", sep=", ") -> str:
    return sep.join(format(float(v), spec) for v in values)


def _slack(v) -> str:
    # no sample landed in the regime
    return f"{v:.6f}" if np.isfinite(v) else "-"


def _parse_floats(text: str, name: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")], dtype=float)
    except ValueError:
        raise UsageError(f"{name} must be a comma-separated list of numbers, got {text!r}") from None


def _tree_from_args(args):
    if args.case is not None and args.topology is not None:
        raise UsageError("give either --case or --topology, not both")
    if args.case is not None:
        if args.case not in CASE_IDS:
            raise UsageError(f"--case must be in 1..{CASE_IDS[-1]}")
        return canonical_case(args.case)
    if args.topology is not None:
        return parse_topology(args.topology)
    raise UsageError("one of --case or --topology is required")


# -- commands -----------------------------------------------------------------


def cmd_list_cases(args, cfg: RunConfig) -> int:
    if args.subcases:
        _emit(registry_table("csv" if cfg.format == "csv" else "text"), cfg)
        return EXIT_OK
    rows = [(i, print_topology(canonical_case(i)), case_resistance_formula(i)) for i in CASE_IDS]
    if cfg.format == "csv":
        text = _csv(["case", "topology", "resistance"], rows)
    elif cfg.format == "json":
        text = json.dumps([dict(case=i, topology=t, resistance=r) for i, t, r in rows], indent=2) + "\n"
    else:
        text = "".join(f"{i}  {t}  R = {r}\n" for i, t, r in rows)
    _emit(text, cfg)
    return EXIT_OK


def cmd_eval(args, cfg: RunConfig) -> int:
    tree = _tree_from_args(args)
    c = _parse_floats(args.c, "--c")
    ev = evaluate(tree, c, cfg.params, tol=cfg.tol)
    topo = print_topology(tree)
    if cfg.format == "csv":
        text = _csv(
            ["topology", "c", "F", "R", "FR", "C", "feasible_F", "feasible_FR"],
            [[topo, _vec(c, ".17g", ";"), _g(ev.F), _g(ev.R), _g(ev.FR), _g(ev.C), int(ev.feasible_F), int(ev.feasible_FR)]],
        )
    elif cfg.format == "json":
        text = json.dumps(dict(topology=topo, c=c.tolist(), **asdict(ev), feasible=ev.feasible), indent=2) + "\n"
    else:
        p = cfg.params
        text = (
            f"topology {topo}\n"
            f"c=({_vec(c)})\n"
            f"F={ev.F:.6f} R={ev.R:.6f} FR={ev.FR:.6f} C={ev.C:.6f}\n"
            f"F >= {p.f_min:g}: {'yes' if ev.feasible_F else 'no'}\n"
            f"FR >= {p.fr_min:g}: {'yes' if ev.feasible_FR else 'no'}\n"
            f"{'feasible' if ev.feasible else 'infeasible'} (tol {cfg.tol:g})\n"
        )
    _emit(text, cfg)
    return EXIT_OK if ev.feasible else EXIT_INFEASIBLE


def _bounds_from_args(args):
    """Subcases selected by --subcase, --case or --all (default: all)."""
    chosen = [x for x in ("subcase", "case") if getattr(args, x, None) is not None]
    if getattr(args, "all", False):
        chosen.append("all")
    if len(chosen) > 1:
        raise UsageError(f"options {', '.join('--' + x for x in chosen)} are mutually exclusive")
    if getattr(args, "subcase", None) is not None:
        try:
            return [lookup(args.subcase)]
        except KeyError:
            raise UsageError(f"unknown subcase {args.subcase!r}") from None
    if args.case is not None:
        if args.case not in CASE_IDS:
            raise UsageError(f"--case must be in 1..{CASE_IDS[-1]}")
        return subcases_of(args.case)
    return registry()


def cmd_solve(args, cfg: RunConfig) -> int:
    if args.case is None and not args.all:
        raise UsageError("solve needs --all or --case N")
    bounds = _bounds_from_args(args)
    report = solve_all(cfg.params, tol=cfg.tol, upper=cfg.box, bounds=bounds)
    text = {"text": report.to_text, "csv": report.to_csv, "json": report.to_json}[cfg.format]()
    _emit(text, cfg)
    return EXIT_OK if report.best_label is not None else EXIT_INFEASIBLE


def cmd_verify(args, cfg: RunConfig) -> int:
    bounds = _bounds_from_args(args)
    if cfg.samples < RECOMMENDED_SAMPLES:
        print(
            f"warning: {cfg.samples} samples is below the recommended {RECOMMENDED_SAMPLES}; "
            "a pass is weak evidence",
            file=sys.stderr,
        )
    c_star = args.cstar
    if c_star is None:
        best = solve_all(cfg.params, tol=cfg.tol, upper=cfg.box)
        if best.best_label is None:
            print("no feasible design to certify against; give --cstar", file=sys.stderr)
            return EXIT_INFEASIBLE
        c_star = best.best_cost

    rows = []
    violations = 0
    uncertified = []
    for b in bounds:
        dom = check_dominance(b, samples=cfg.samples, seed=cfg.seed, box=cfg.box, params=cfg.params, n_jobs=args.jobs)
        cert = certify(b, c_star, samples=cfg.samples, seed=cfg.seed, box=cfg.box, params=cfg.params)
        violations += len(dom.violations)
        # the optimal case is expected to reach its own optimum
        required = b.case_id != 9
        if required and not cert.certified:
            uncertified.append(b.label)
        rows.append((b, dom, cert, required))

    if cfg.format == "csv":
        text = _csv(
            ["subcase", "samples", "in_domain", "violations", "max_slack_FR", "max_slack_C", "c_star",
             "counterexamples", "certified", "required"],
            [
                [b.label, d.samples, d.in_domain, len(d.violations), _g(d.max_slack_fr), _g(d.max_slack_cost),
                 _g(c_star), ce.counterexamples, int(ce.certified), int(req)]
                for b, d, ce, req in rows
            ],
        )
    elif cfg.format == "json":
        text = json.dumps(
            dict(
                c_star=c_star,
                violations=violations,
                subcases=[
                    dict(label=b.label, dominance=asdict(d), certification=asdict(ce), required=req)
                    for b, d, ce, req in rows
                ],
            ),
            indent=2,
        ) + "\n"
    else:
        lines = [f"samples={cfg.samples} seed={cfg.seed} box={cfg.box:g} C*={c_star:.6f}"]
        for b, d, ce, req in rows:
            verdict = "pass" if ce.certified else "FAIL"
            note = "" if req else " (optimal case, informational)"
            lines.append(
                f"{b.label:<5} dominance {'ok' if d.ok else 'VIOLATED'} in_domain={d.in_domain} "
                f"violations={len(d.violations)} max_slack_FR={_slack(d.max_slack_fr)} max_slack_C={_slack(d.max_slack_cost)}  "
                f"certify C*={c_star:.6f} {verdict} counterexamples={ce.counterexamples}{note}"
            )
        lines.append(f"{violations} violations across {len(rows)} subcases")
        if uncertified:
            lines.append(f"not certified: {', '.join(uncertified)}")
        text = "\n".join(lines) + "\n"
    _emit(text, cfg)
    return EXIT_OK if violations == 0 and not uncertified else EXIT_VIOLATION


def cmd_regions(args, cfg: RunConfig) -> int:
    if args.subcase is None and args.case is None:
        raise UsageError("regions needs --subcase or --case")
    bounds = _bounds_from_args(args)
    if len(bounds) > 1:
        raise UsageError(
            f"case {args.case} has subcases {', '.join(b.label for b in bounds)}; pick one with --subcase"
        )
    b = bounds[0]
    if args.res < 2:
        raise UsageError("--res must be at least 2")
    # res cells of width box/res over (0, box]; nodes sit on their right edges
    axis = cfg.box * np.arange(1, args.res + 1) / args.res
    if b.reduced_dim == 1:
        x = axis[:, None]
        coords = ["x"]
    else:
        g1, g2 = np.meshgrid(axis, axis, indexing="ij")
        x = np.stack([g1.ravel(), g2.ravel()], axis=-1)
        coords = ["x", "y"]
    p = cfg.params
    domain = b.in_reduced_domain(x)
    fr = b.F_tilde(x, p)
    table = np.column_stack(
        [x, fr, b.C_tilde(x), b.strength(x) >= p.f_min, domain & (fr >= p.fr_min), domain]
    )
    header = coords + ["F_tilde_R", "C_tilde", "feasible_strength", "feasible_FR", "in_reduced_domain"]
    buf = io.StringIO()
    np.savetxt(buf, table, fmt=["%.17g"] * (len(coords) + 2) + ["%d"] * 3, delimiter=",",
               header=",".join(header), comments="")
    _emit(buf.getvalue(), cfg)
    if cfg.out:
        print(f"{b.label}: wrote {len(table)} rows to {cfg.out}", file=sys.stderr)
    return EXIT_OK


def cmd_brute(args, cfg: RunConfig) -> int:
    if args.case is None and not args.all:
        raise UsageError("brute needs --all or --case N")
    if args.case is not None and args.case not in CASE_IDS:
        raise UsageError(f"--case must be in 1..{CASE_IDS[-1]}")
    cases = CASE_IDS if args.all else (args.case,)
    results = [brute_force(i, cfg.params, cfg.grid, n_jobs=args.jobs) for i in cases]
    found = [r for r in results if r.best_cost is not None]
    best = min(found, key=lambda r: (r.best_cost, r.case_id), default=None)
    g = cfg.grid
    if cfg.format == "csv":
        text = _csv(
            ["case", "best_cost", "best_c", "feasible_count", "evaluated"],
            [
                [r.case_id, "" if r.best_cost is None else _g(r.best_cost),
                 "" if r.best_c is None else _vec(r.best_c, ".17g", ";"), r.feasible_count, r.evaluated]
                for r in results
            ],
        )
    elif cfg.format == "json":
        text = json.dumps([asdict(r) for r in results], indent=2) + "\n"
    else:
        lines = [f"grid lower={g.lower:g} upper={g.upper:g} step={g.step:g}"]
        for r in results:
            if r.best_cost is None:
                lines.append(f"case {r.case_id:<2} no feasible grid point ({r.evaluated} evaluated)")
            else:
                lines.append(
                    f"case {r.case_id:<2} cost={r.best_cost:.6f} c=({_vec(r.best_c)}) "
                    f"feasible={r.feasible_count}/{r.evaluated}"
                )
        lines.append("MIN none" if best is None else f"MIN case={best.case_id} cost={best.best_cost:.6f}")
        text = "\n".join(lines) + "\n"
    _emit(text, cfg)
    return EXIT_OK if best is not None else EXIT_INFEASIBLE


def cmd_simulate(args, cfg: RunConfig) -> int:
    tree = _tree_from_args(args)
    c = _parse_floats(args.c, "--c")
    k = None if args.k is None else _parse_floats(args.k, "--k")
    try:
        result = simulate_loading(tree, c, k=k, ramp=args.ramp, steps=args.steps)
    except SimulationError as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    buf = io.StringIO()
    np.savetxt(buf, np.column_stack([result.elongation, result.force]), fmt="%.17g", delimiter=",",
               header="elongation,force", comments="")
    formula = response_force(tree, c)
    summary = f"F_sim={result.max_force:.3f} F_formula={formula:.3f} diff={abs(result.max_force - formula):.3g}"
    if cfg.out:
        _emit(buf.getvalue(), cfg)
        print(summary)
    else:
        sys.stdout.write(buf.getvalue())
        print(summary, file=sys.stderr)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    g.add_argument("--alpha", type=float, help="weight of F in FR (default 0.2)")
    g.add_argument("--beta", type=float, help="weight of R in FR (default 0.1)")
    g.add_argument("--fmin", type=float, help="strength threshold (default 0.75)")
    g.add_argument("--frmin", type=float, help="performance threshold (default 0.5)")
    g.add_argument("--tol", type=float, help="solver and feasibility tolerance (default 1e-6)")
    g.add_argument("--grid-step", type=float, dest="grid_step", help="brute-force grid step (default 0.02)")
    g.add_argument(
        "--grid-max",
        type=float,
        dest="grid_max",
        help="upper bound of the brute-force grid (default 2.5) and of the reduced search box "
        "(default 3; designs costing more than 3 are already beaten)",
    )
    g.add_argument("--seed", type=int, help="sampling seed (default 0)")
    g.add_argument("--samples", type=int, help="samples per subcase for verify (default 100000)")
    g.add_argument("--out", help="write output to this file instead of stdout")
    g.add_argument("--format", choices=_FORMATS, help="output format (default text)")

    parser = _Parser(prog="springopt", description="Series-parallel spring lattices: evaluation and minimal-cost design.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("list-cases", parents=[common], help="list the ten four-spring cases")
    p.add_argument("--subcases", action="store_true", help="list the reduced-bound registry instead")
    p.set_defaults(func=cmd_list_cases)

    def network_args(p):
        p.add_argument("--case", type=int, help="case id 1..10")
        p.add_argument("--topology", help="topology expression such as 's(1,p(2,3))'")
        p.add_argument("--c", required=True, help="comma-separated elastic limits")

    p = sub.add_parser("eval", parents=[common], help="evaluate F, R, FR and C of a design")
    network_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("solve", parents=[common], help="solve the reduced problems")
    p.add_argument("--all", action="store_true", help="all subcases")
    p.add_argument("--case", type=int, help="only the subcases of this case")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="sample-check the bounds and certify a target cost")
    p.add_argument("--all", action="store_true", help="all subcases (default)")
    p.add_argument("--case", type=int, help="only the subcases of this case")
    p.add_argument("--subcase", help="a single subcase such as 9.1")
    p.add_argument("--cstar", type=float, help="target cost (default: the solved global optimum)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for sampling")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("regions", parents=[common], help="emit reduced-region grid data as CSV")
    p.add_argument("--case", type=int, help="case with a single subcase")
    p.add_argument("--subcase", help="subcase such as 9.1")
    p.add_argument("--res", type=int, default=200, help="grid points per axis (default 200)")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("brute", parents=[common], help="exhaustive grid search on the full problem")
    p.add_argument("--all", action="store_true", help="all ten cases")
    p.add_argument("--case", type=int, help="case id 1..10")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("simulate", parents=[common], help="stretch a network and record the force history")
    network_args(p)
    p.add_argument("--k", help="comma-separated stiffnesses (default all 1)")
    p.add_argument("--steps", type=int, default=1000, help="load increments (default 1000)")
    p.add_argument("--ramp", type=float, help="total elongation; must exceed 2*sum(c/k) (the default)")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:  # bad topology, limits or output path
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
