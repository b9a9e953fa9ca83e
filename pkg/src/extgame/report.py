"""Plain-data reports and their text rendering.

Reports are nested dicts of strings, ints, bools and lists, ready for
``json.dumps``.  Every rational appears as ``{"exact": "p/q", "decimal": ...}``.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Any, Mapping

from .game import BestResponse, Check, ClassificationResult, ExtendedGame
from .prob import Cpt, JointDistribution
from .rational import exact, rational_json
from .strategies import Certificate, IntersectionResult, Verdict


def jsonable(value: Any) -> Any:
    """Convert parameters and results into JSON-ready values."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (int, Fraction)):
        return exact(Fraction(value))
    if isinstance(value, Cpt):
        return value.describe()
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (tuple, list)):
        return [jsonable(v) for v in value]
    if isinstance(value, Mapping):
        return {str(k): jsonable(v) for k, v in value.items()}
    return str(value)


def joint_json(j: JointDistribution) -> dict:
    return {
        "variables": [v.name for v in j.variables],
        "table": [
            {"outcome": dict(zip(j.space.names, o)), "p": rational_json(p)} for o, p in j.items()
        ],
    }


def certificate_json(cert: Certificate, space) -> dict:
    return {
        "verified": cert.verify(),
        "uses_nonnegativity": cert.farkas.uses_nonnegativity,
        "combined_coefficients": [exact(c) for c in cert.farkas.combined],
        "combined_rhs": rational_json(cert.farkas.rhs),
        "terms": [
            {"multiplier": exact(w), "constraint": c.label, "equation": c.render(space)}
            for w, c in cert.terms
        ],
    }


def intersection_json(r: IntersectionResult, space) -> dict:
    out: dict[str, Any] = {"verdict": r.verdict.value, "dimension": r.dimension}
    if r.point is not None:
        out["point" if r.verdict is Verdict.SINGLETON else "sample_point"] = joint_json(r.point)
    if r.certificate is not None:
        out["certificate"] = certificate_json(r.certificate, space)
    return out


def check_json(game: ExtendedGame, c: Check) -> dict:
    return {
        "name": c.name,
        "choice": game.render_choice(c.choice),
        "result": intersection_json(c.result, game.space),
    }


def classification_json(game: ExtendedGame, res: ClassificationResult) -> dict:
    return {
        "game": game.name,
        "verdict": res.verdict.value,
        "checked": res.checked,
        "counts": dict(res.counts),
        "coverage_note": res.coverage_note,
        "witnesses": [check_json(game, c) for c in res.witnesses],
    }


def best_response_json(game: ExtendedGame, br: BestResponse) -> dict:
    family = game.player(br.player).family
    return {
        "game": game.name,
        "player": br.player,
        "maximizer": family.render(br.parameter),
        "maximizer_parameter": jsonable(br.parameter),
        "value": rational_json(br.value),
        "tie": br.tie,
        "maximizers": [family.render(m) for m in br.maximizers],
        "expected_utilities": [
            {"strategy": family.render(p), "value": rational_json(v)} for p, v in br.values
        ],
    }


def _fmt_rational(d: Any) -> str:
    if isinstance(d, dict) and set(d) == {"exact", "decimal"}:
        return d["exact"] if d["exact"] == d["decimal"] else f"{d['exact']} (~{d['decimal']})"
    return str(d)


def render_text(report: Mapping[str, Any], indent: int = 0) -> str:
    """Indented ``key: value`` rendering of a report."""
    lines: list[str] = []

    def emit(key, value, level):
        p = "  " * level
        if isinstance(value, dict) and set(value) == {"exact", "decimal"}:
            lines.append(f"{p}{key}: {_fmt_rational(value)}")
        elif isinstance(value, dict):
            if "outcome" in value and "p" in value:
                cell = ",".join(f"{k}={v}" for k, v in value["outcome"].items())
                lines.append(f"{p}{key}P({cell}) = {_fmt_rational(value['p'])}")
                return
            lines.append(f"{p}{key}:")
            for k, v in value.items():
                emit(k, v, level + 1)
        elif isinstance(value, list):
            if all(not isinstance(v, (dict, list)) for v in value):
                lines.append(f"{p}{key}: [{', '.join(str(v) for v in value)}]")
            else:
                lines.append(f"{p}{key}:")
                for v in value:
                    if isinstance(v, dict) and not ("outcome" in v and "p" in v):
                        lines.append(f"{p}  -")
                        for k, vv in v.items():
                            emit(k, vv, level + 2)
                    else:
                        emit("- " if not isinstance(v, dict) else "", v, level + 1)
        else:
            lines.append(f"{p}{key}: {value}")

    for k, v in report.items():
        emit(k, v, indent)
    return "\n".join(lines)


__all__ = [
    "best_response_json",
    "certificate_json",
    "check_json",
    "classification_json",
    "intersection_json",
    "joint_json",
    "jsonable",
    "render_text",
]
