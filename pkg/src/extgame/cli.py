"""``extgame`` command line.

    extgame list
    extgame analyze fearful --alpha 1
    extgame analyze realist --q 1/2,1/2
    extgame classify merged-3 --alpha 3/4 --format json
    extgame sweep --alphas 0.51:1.0:0.05
    extgame analyze scenarios/sensor.yaml

Exit status: 0 on success, 1 on bad input, 2 when an analysis that needs a
proper game meets a choice without a unique joint distribution.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import scenarios as sc
from .game import (
    ConfigurationError,
    ImproperGame,
    best_response,
    classify_game,
    classify_joint_strategy,
)
from .prob import ValidationError
from .rational import parse_distribution, rational_range, to_fraction
from .report import (
    best_response_json,
    classification_json,
    intersection_json,
    jsonable,
    render_text,
)
from .scenario_file import ScenarioFile, ScenarioFileError, load_scenario

DEFAULT_SWEEP = ("51/100", "3/5", "3/4", "9/10", "1")


class UsageError(ValueError):
    pass


def _choice_label(game, player: str, param) -> Optional[str]:
    """The outcome a delta strategy commits to, e.g. ``B``."""
    if isinstance(param, tuple) and len(param) == 2 and all(isinstance(x, Fraction) for x in param):
        var = "y" if player == "you" else "g"
        labels = sc.CHOICE if var == "y" else sc.PREDICTION
        for label, p in zip(labels, param):
            if p == 1:
                return label
    return None


def _br_report(game, br, **extra) -> dict:
    out = best_response_json(game, br)
    label = _choice_label(game, br.player, br.parameter)
    if label is not None:
        out["maximizer_choice"] = label
    out.update(extra)
    return out


def _params(args) -> sc.NewcombParams:
    return sc.NewcombParams(args.alpha)


def _grid(args):
    return sc.default_grid(args.grid_denominator)


def _h_grid(args):
    return sc.farey_grid(args.h_grid) if args.h_grid else None


# -- built-in analyses -------------------------------------------------------

def _analyze_builtin(target: str, args) -> dict:
    p = _params(args)
    grid = _grid(args)
    if target == "fearful":
        game = sc.newcomb_fearful(p, grid)
        return _br_report(game, best_response(game, "you"), alpha=jsonable(p.alpha))
    if target == "realist":
        game = sc.newcomb_realist(args.q, p.payoffs, grid)
        return _br_report(game, best_response(game, "you"), q=jsonable(args.q))
    if target.startswith("merged-"):
        which = int(target[-1])
        m = sc.merged_scenario(which, p, grid)
        # W is pinned: the predictor table in merge 1, P(g) = q in merge 2
        fixed = {}
        if which == 1:
            fixed = {"W": m.game.player("W").family.grid[0]}
        elif which == 2:
            fixed = {"W": args.q}
        br = best_response(m.game, "you", fixed)
        return _br_report(m.game, br, classification=m.classification.verdict.value)
    if target == "appendix":
        return sc.appendix_lemma_check(p.alpha, _h_grid(args)).as_dict()
    if target == "alpha-sweep":
        return _sweep_report(_alphas(args.alphas), args)
    if target == "time-reversed":
        return sc.time_reversed_newcomb(p, args.q).as_dict()
    if target == "matching-pennies":
        game = sc.matching_pennies(args.pr, args.pc)
        check = sc.matching_pennies_check(args.pr, args.pc)
        br = best_response(game, "Row", {"Col": game.player("Col").family.grid[0]})
        return {
            "scenario": "matching-pennies",
            "check": jsonable(check),
            "classification": classification_json(game, classify_game(game)),
            "best_response": best_response_json(game, br),
        }
    if target == "sensor":
        game = sc.sensor_variant()
        return {"scenario": "sensor", "classification": classification_json(game, classify_game(game))}
    raise UsageError(f"unknown scenario {target!r}; run 'extgame list'")


def _classify_builtin(target: str, args) -> dict:
    p = _params(args)
    grid = _grid(args)
    if target == "fearful":
        game = sc.newcomb_fearful(p, grid)
    elif target == "realist":
        game = sc.newcomb_realist(args.q, p.payoffs, grid)
    elif target.startswith("merged-") and target[-1] in "123":
        return sc.merged_scenario(int(target[-1]), p, grid).report()
    elif target == "appendix":
        game = sc.merged_scenario(3, p, _h_grid(args) or grid).game
    elif target == "matching-pennies":
        game = sc.matching_pennies(args.pr, args.pc)
    elif target == "sensor":
        game = sc.sensor_variant()
    elif target in ("alpha-sweep", "time-reversed"):
        return _analyze_builtin(target, args)
    else:
        raise UsageError(f"unknown scenario {target!r}; run 'extgame list'")
    return classification_json(game, classify_game(game))


# -- scenario files ----------------------------------------------------------

def _run_file(scn: ScenarioFile, mode: str) -> dict:
    game = scn.game
    a = scn.analysis
    fixed = {pid: scn.param(pid, ref) for pid, ref in (a.opponents or {}).items()}
    if mode == "classify":
        return classification_json(game, classify_game(game))
    if mode == "best-response":
        player = a.player or next(p.id for p in game.players if not p.is_nature)
        return best_response_json(game, best_response(game, player, fixed))
    # sweep: one joint check per strategy of ``over``, others held fixed
    over = game.player(a.over)
    rows = []
    for param in over.family.grid:
        r = classify_joint_strategy(game, {**fixed, over.id: param})
        rows.append({"strategy": over.family.render(param), "result": intersection_json(r, game.space)})
    out = {"game": game.name, "over": over.id, "rows": rows}
    if a.player:
        out["best_response"] = best_response_json(game, best_response(game, a.player, fixed))
    return out


def _file_mode(command: str, scn: ScenarioFile) -> str:
    if command == "classify":
        return "classify"
    return scn.analysis.mode


# -- sweep -------------------------------------------------------------------

def _alphas(text: Optional[str]) -> list[Fraction]:
    if not text:
        return [to_fraction(a) for a in DEFAULT_SWEEP]
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("--alphas range must be start:stop:step")
        return rational_range(*(to_fraction(x) for x in parts))
    return [to_fraction(s) for s in text.split(",") if s.strip()]


def _sweep_report(alphas: Sequence[Fraction], args) -> dict:
    rows = sc.alpha_sweep(alphas, _h_grid(args) or _grid(args))
    return {"scenario": "alpha-sweep", "rows": [r.as_dict() for r in rows]}


def _sweep_text(report: dict) -> str:
    head = f"{'alpha':>12}  {'merged-3':<11} {'feasible h':<28} {'fearful best':<16} value"
    lines = [head, "-" * len(head)]
    for r in report["rows"]:
        a = r["alpha"]["exact"]
        feas = ", ".join(r["feasible_h"])
        best = " | ".join(m.replace("P(y)=", "") for m in r["fearful_maximizers"])
        lines.append(f"{a:>12}  {r['merged_3']:<11} {feas:<28} {best:<16} {r['fearful_value']['exact']}")
    return "\n".join(lines)


# -- entry point ---------------------------------------------------------------

def _is_file(target: str) -> bool:
    return target.endswith((".yaml", ".yml")) or Path(target).is_file()


def _emit(report: dict, fmt: str, text: Optional[Callable[[dict], str]] = None) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2))
    else:
        print(text(report) if text else render_text(report))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extgame", description="Exact analysis of extended games.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--alpha", default="1", help="predictor accuracy, e.g. 1, 3/4 or 0.51")
    common.add_argument("--q", default="1/2,1/2", help="the predictor's P(g) as 'q_ab,q_b'")
    common.add_argument("--pr", default="1/2", help="Row's heads probability (matching-pennies)")
    common.add_argument("--pc", default="1/2", help="Col's heads probability (matching-pennies)")
    common.add_argument("--grid-denominator", type=int, default=8, help="your strategy grid is (1-k/d, k/d)")
    common.add_argument("--h-grid", type=int, default=0, metavar="D", help="use every h with denominator <= D")
    common.add_argument("--alphas", default=None, help="start:stop:step or a comma list")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", parents=[common], help="list built-in scenarios")
    for name, help_ in (("analyze", "run a scenario's analysis"), ("classify", "classify a game")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("target", help="registry id or scenario file")
    sub.add_parser("sweep", parents=[common], help="merged-3 and fearful results across alpha")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.q = parse_distribution(args.q)
        args.pr = to_fraction(args.pr)
        args.pc = to_fraction(args.pc)
        if args.grid_denominator < 1:
            raise UsageError("--grid-denominator must be positive")
        if args.command == "list":
            if args.format == "json":
                _emit({"scenarios": dict(sc.SCENARIOS)}, "json")
            else:
                width = max(map(len, sc.SCENARIOS))
                print("\n".join(f"{k:<{width}}  {v}" for k, v in sc.SCENARIOS.items()))
            return 0
        if args.command == "sweep":
            report = _sweep_report(_alphas(args.alphas), args)
            _emit(report, args.format, _sweep_text)
            return 0
        target = args.target
        if _is_file(target):
            scn = load_scenario(target)
            mode = _file_mode(args.command, scn)
            report = {"scenario": scn.name, "mode": mode, **_run_file(scn, mode)}
        elif args.command == "analyze":
            report = _analyze_builtin(target, args)
        else:
            report = _classify_builtin(target, args)
        builtin_sweep = target == "alpha-sweep" and not _is_file(target)
        _emit(report, args.format, _sweep_text if builtin_sweep else None)
        return 0
    except ImproperGame as exc:
        report = {
            "error": "improper game",
            "message": str(exc),
            "choice": jsonable(exc.choice),
            "result": {"verdict": exc.result.verdict.value, "dimension": exc.result.dimension},
        }
        if exc.result.certificate is not None:
            report["result"]["certificate_verified"] = exc.result.certificate.verify()
        _emit(report, args.format)
        return 2
    except (ScenarioFileError, UsageError, ValidationError, ConfigurationError, ValueError) as exc:
        print(f"extgame: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
