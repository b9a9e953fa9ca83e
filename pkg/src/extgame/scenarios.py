"""Built-in games: Newcomb's problem in its two readings, their merges,
and Matching Pennies.

Your choice ``y`` takes values ``AB`` (both boxes) or ``B`` (box B only);
the predictor's guess ``g`` takes ``ab`` or ``b``.  The predictor is right
with probability ``alpha`` whatever you do.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional, Sequence

from .game import (
    BestResponse,
    ClassificationResult,
    ExtendedGame,
    GameVerdict,
    JointWitness,
    Player,
    StrategyFamily,
    Utility,
    bayes_net_game,
    best_response,
    classify_game,
    classify_joint_strategy,
    expected_utility,
    union_family,
)
from .prob import Cpt, Dag, JointDistribution, Space, ValidationError, VariableSpec, delta
from .rational import RationalLike, exact, format_vector, rational_json, to_fraction
from .report import best_response_json, classification_json, intersection_json, joint_json
from .strategies import (
    IntersectionResult,
    Verdict,
    compile,
    conditional_independent_fixed,
    cpt_fixed,
    intersect,
    marginal_fixed,
)

CHOICE = ("AB", "B")
PREDICTION = ("ab", "b")

TABLE1: dict[tuple[str, str], Fraction] = {
    ("AB", "ab"): Fraction(1000),
    ("B", "ab"): Fraction(0),
    ("AB", "b"): Fraction(1_001_000),
    ("B", "b"): Fraction(1_000_000),
}

SCENARIOS = {
    "fearful": "you set P(y); a Nature predictor fixes P(g|y) with accuracy alpha",
    "realist": "you set a g-independent P(y|g)=h(y); a Nature predictor fixes P(g)=q",
    "merged-1": "both players may use either reading's strategies (union)",
    "merged-2": "your marginal P(y) against the predictor's product-form P(g)",
    "merged-3": "your g-independent h(y) against the predictor's P(g|y)",
    "appendix": "which g-independent conditionals survive an accuracy-alpha predictor",
    "alpha-sweep": "merged-3 verdicts and the fearful best response across alpha",
    "time-reversed": "fearful, realist and merged-3 with the prediction made after the choice",
    "matching-pennies": "two independent players with no edge between their nodes",
    "sensor": "Row -> noisy sensor D -> Col chain, the sensor a Nature player",
}


def _variables(reversed_time: bool = False) -> tuple[VariableSpec, VariableSpec]:
    if reversed_time:
        y = VariableSpec("y", CHOICE, annotation="your choice, made at t=0")
        g = VariableSpec("g", PREDICTION, annotation="W's retrodiction of your choice, made at t=1")
    else:
        y = VariableSpec("y", CHOICE, annotation="your choice, made at t=1")
        g = VariableSpec("g", PREDICTION, annotation="W's prediction of your choice, made at t=0")
    return y, g


Y, G = _variables()
NEWCOMB_SPACE = Space((Y, G))


def default_grid(denominator: int = 8) -> tuple[tuple[Fraction, Fraction], ...]:
    """Distributions ``(1-k/d, k/d)``, ``k = 0..d``; both deltas included."""
    return tuple((1 - Fraction(k, denominator), Fraction(k, denominator)) for k in range(denominator + 1))


def _dist(values: Sequence[RationalLike], what: str) -> tuple[Fraction, Fraction]:
    d = tuple(to_fraction(v) for v in values)
    if len(d) != 2 or any(p < 0 for p in d) or sum(d) != 1:
        raise ValidationError(f"{what} must be two nonnegative numbers summing to 1, got {format_vector(d)}")
    return d  # type: ignore[return-value]


def render_dist(var: str, labels: Sequence[str], dist: Sequence[Fraction]) -> str:
    for label, p in zip(labels, dist):
        if p == 1:
            return f"delta_{{{var},{label}}}"
    return format_vector(dist)


def validate_payoffs(payoffs: Mapping) -> dict[tuple[str, str], Fraction]:
    table = {tuple(k): to_fraction(v) for k, v in payoffs.items()}
    want = {(y, g) for y in CHOICE for g in PREDICTION}
    if set(table) != want:
        raise ValidationError(f"payoff table must have exactly the cells {sorted(want)}")
    return table


def affine_payoffs(scale: RationalLike, shift: RationalLike = 0, base: Mapping = TABLE1) -> dict:
    a, b = to_fraction(scale), to_fraction(shift)
    return {k: a * v + b for k, v in base.items()}


@dataclass(frozen=True)
class NewcombParams:
    alpha: Fraction = Fraction(1)
    payoffs: Mapping[tuple[str, str], Fraction] = field(default_factory=lambda: dict(TABLE1))

    def __post_init__(self):
        alpha = to_fraction(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "payoffs", validate_payoffs(self.payoffs))
        if not (Fraction(1, 2) < alpha <= 1):
            raise ValidationError(f"predictor accuracy must lie in (1/2, 1], got {alpha}")


def predictor_cpt(alpha: RationalLike, y: VariableSpec = Y, g: VariableSpec = G) -> Cpt:
    """``P(g | y) = alpha`` on a correct guess, ``1 - alpha`` otherwise."""
    a = to_fraction(alpha)
    return Cpt(g, (y,), {("AB",): (a, 1 - a), ("B",): (1 - a, a)})


def _you_utility(payoffs: Mapping) -> Utility:
    return dict(payoffs)


def _antagonist_utility(payoffs: Mapping) -> Utility:
    return {k: -v for k, v in payoffs.items()}


# -- strategy families ------------------------------------------------------

def fearful_you_family(grid: Optional[Sequence] = None) -> StrategyFamily:
    """Your marginal ``P(y)``; parameters are distributions over (AB, B)."""
    grid = tuple(_dist(p, "P(y)") for p in (grid or default_grid()))
    return StrategyFamily(
        "fearful",
        lambda p: marginal_fixed("y", p),
        grid,
        render=lambda p: f"P(y)={render_dist('y', CHOICE, p)}",
    )


def realist_you_family(grid: Optional[Sequence] = None, witnesses: Sequence = ()) -> StrategyFamily:
    """Your g-independent conditional ``P(y|g) = h(y)``."""
    grid = tuple(_dist(p, "h(y)") for p in (grid or default_grid()))
    return StrategyFamily(
        "realist",
        lambda h: conditional_independent_fixed("y", "g", h),
        grid,
        witnesses=tuple((name, _dist(h, "h(y)")) for name, h in witnesses),
        render=lambda h: f"P(y|g)=h={render_dist('y', CHOICE, h)}",
    )


def fearful_w_family(alpha: RationalLike) -> StrategyFamily:
    cpt = predictor_cpt(alpha)
    a = to_fraction(alpha)
    label = f"P(g|y) with accuracy {exact(a)}"
    return StrategyFamily("fearful", lambda _: cpt_fixed(cpt), (label,), render=str)


def realist_w_family(grid: Sequence) -> StrategyFamily:
    grid = tuple(_dist(q, "P(g)") for q in grid)
    return StrategyFamily(
        "realist",
        lambda q: marginal_fixed("g", q),
        grid,
        render=lambda q: f"P(g)={render_dist('g', PREDICTION, q)}",
    )


def product_w_family(grid: Sequence) -> StrategyFamily:
    """``P(y, g) = h(y) q(g)`` for some ``h``: marginal ``q`` and no dependence on y."""
    grid = tuple(_dist(q, "P(g)") for q in grid)
    return StrategyFamily(
        "realist-product",
        lambda q: conditional_independent_fixed("g", "y", q),
        grid,
        render=lambda q: f"P(g)={render_dist('g', PREDICTION, q)}, g independent of y",
    )


# -- the two readings -------------------------------------------------------

def build_fearful(
    alpha: RationalLike,
    payoffs: Mapping = TABLE1,
    grid: Optional[Sequence] = None,
    reversed_time: bool = False,
) -> ExtendedGame:
    """Fearful game without the ``alpha > 1/2`` restriction (used for boundary studies)."""
    y, g = _variables(reversed_time)
    a = to_fraction(alpha)
    if not 0 <= a <= 1:
        raise ValidationError("alpha must be a probability")
    payoffs = validate_payoffs(payoffs)
    you = Player("you", fearful_you_family(grid), _you_utility(payoffs))
    w = Player("W", fearful_w_family(a), None, is_nature=True)
    return ExtendedGame("fearful", (y, g), (you, w))


def newcomb_fearful(p: NewcombParams = NewcombParams(), grid: Optional[Sequence] = None, reversed_time: bool = False) -> ExtendedGame:
    return build_fearful(p.alpha, p.payoffs, grid, reversed_time)


def newcomb_realist(
    q: Sequence[RationalLike] = (Fraction(1, 2), Fraction(1, 2)),
    payoffs: Mapping = TABLE1,
    grid: Optional[Sequence] = None,
    reversed_time: bool = False,
) -> ExtendedGame:
    y, g = _variables(reversed_time)
    q = _dist(q, "P(g)")
    payoffs = validate_payoffs(payoffs)
    you = Player("you", realist_you_family(grid), _you_utility(payoffs))
    w = Player("W", realist_w_family((q,)), None, is_nature=True)
    return ExtendedGame("realist", (y, g), (you, w))


def fearful_eu_closed_form(alpha: Fraction, p_b: Fraction, payoffs: Mapping = TABLE1) -> Fraction:
    """Expected payoff written directly from ``P(g|y) P(y)``, independent of the solver."""
    u = validate_payoffs(payoffs)
    p_ab = 1 - p_b
    return (
        u[("AB", "ab")] * alpha * p_ab
        + u[("AB", "b")] * (1 - alpha) * p_ab
        + u[("B", "ab")] * (1 - alpha) * p_b
        + u[("B", "b")] * alpha * p_b
    )


def fearful_threshold(payoffs: Mapping = TABLE1) -> Fraction:
    """The accuracy at which taking B and taking both boxes pay the same."""
    u = validate_payoffs(payoffs)
    num = u[("AB", "b")] - u[("B", "ab")]
    den = u[("B", "b")] - u[("B", "ab")] - u[("AB", "ab")] + u[("AB", "b")]
    return num / den


# -- merges -----------------------------------------------------------------

CROSS_WITNESS_H = (Fraction(3, 4), Fraction(1, 4))


@dataclass(frozen=True)
class MergedScenario:
    which: int
    game: ExtendedGame
    classification: ClassificationResult
    notes: tuple[str, ...] = ()
    extra_checks: tuple[tuple[str, Mapping[str, str], IntersectionResult], ...] = ()
    coincides_with_realist: Optional[bool] = None

    def report(self) -> dict:
        out = classification_json(self.game, self.classification)
        out["scenario"] = f"merged-{self.which}"
        out["notes"] = list(self.notes)
        if self.coincides_with_realist is not None:
            out["coincides_with_realist"] = self.coincides_with_realist
        if self.extra_checks:
            out["extra_checks"] = [
                {"name": n, "strategies": dict(c), "result": intersection_json(r, self.game.space)}
                for n, c, r in self.extra_checks
            ]
        return out


def _footnote_checks(alpha: Fraction) -> list[tuple[str, dict, IntersectionResult]]:
    """Your h fixes P(g) once W fixes P(g|y); a W who also sets P(g) conflicts."""
    out = []
    w_cpt = compile(cpt_fixed(predictor_cpt(alpha)), NEWCOMB_SPACE, "W")
    for label in CHOICE:
        h = delta(Y, label)
        you = compile(conditional_independent_fixed("y", "g", h), NEWCOMB_SPACE, "you")
        forced = intersect([you, w_cpt])
        out.append((f"h=delta_{{y,{label}}} forces P(g)", {"you": you.describe(), "W": w_cpt.describe()}, forced))
        # the other outcome's prediction marginal can no longer be chosen by W
        other = delta(G, "b" if label == "AB" else "ab")
        w_marg = compile(marginal_fixed("g", other), NEWCOMB_SPACE, "W")
        clash = intersect([you, w_cpt, w_marg])
        out.append(
            (
                f"h=delta_{{y,{label}}} with W also setting P(g)={render_dist('g', PREDICTION, other)}",
                {"you": you.describe(), "W": f"{w_cpt.describe()} & {w_marg.describe()}"},
                clash,
            )
        )
    return out


def merged_scenario(
    which: int,
    p: NewcombParams = NewcombParams(),
    grid: Optional[Sequence] = None,
    w_grid: Optional[Sequence] = None,
    reversed_time: bool = False,
) -> MergedScenario:
    """Build and classify one of the three ways of merging the two readings."""
    y, g = _variables(reversed_time)
    grid = tuple(grid or default_grid())
    w_grid = tuple(w_grid or default_grid())
    payoffs = p.payoffs
    if which == 1:
        you = Player(
            "you",
            union_family("you", fearful_you_family(grid), realist_you_family(grid)),
            _you_utility(payoffs),
        )
        w = Player("W", union_family("W", fearful_w_family(p.alpha), realist_w_family(w_grid)), _antagonist_utility(payoffs))
        w_cpt_param = ("fearful", w.family.grid[0][1])
        game = ExtendedGame(
            "merged-1",
            (y, g),
            (you, w),
            witnesses=(JointWitness("realist you vs fearful W", {"you": ("realist", CROSS_WITNESS_H), "W": w_cpt_param}),),
        )
        notes = (
            "your strategy set is the union of both readings' sets, and so is W's",
            "W is given the antagonist utility -u since it has several strategies",
        )
        checks = tuple(_footnote_checks(p.alpha))
        return MergedScenario(1, game, classify_game(game), notes, checks)
    if which == 2:
        you = Player("you", fearful_you_family(grid), _you_utility(payoffs))
        w = Player("W", product_w_family(w_grid), _antagonist_utility(payoffs))
        game = ExtendedGame("merged-2", (y, g), (you, w))
        res = classify_game(game)
        same = _matches_realist(game, grid, w_grid, payoffs)
        notes = (
            "W's strategies are read in product form: marginal P(g) with P(y,g)=h(y)P(g)",
            "every intersection is the product P(y)P(g), which is the realist game again",
        )
        return MergedScenario(2, game, res, notes, coincides_with_realist=same)
    if which == 3:
        you = Player("you", realist_you_family(grid), _you_utility(payoffs))
        w = Player("W", fearful_w_family(p.alpha), None, is_nature=True)
        game = ExtendedGame(
            "merged-3",
            (y, g),
            (you, w),
            witnesses=(JointWitness("h=(3/4,1/4) against the predictor", {"you": CROSS_WITNESS_H}),),
        )
        notes = ("only the two delta functions h survive a predictor of accuracy alpha",)
        return MergedScenario(3, game, classify_game(game), notes)
    raise ValidationError(f"merged scenario must be 1, 2 or 3, got {which}")


def product_joint(p_y: Sequence[Fraction], q_g: Sequence[Fraction]) -> JointDistribution:
    return JointDistribution.from_function(NEWCOMB_SPACE, lambda o: p_y[Y.index(o[0])] * q_g[G.index(o[1])])


def _matches_realist(game: ExtendedGame, grid, w_grid, payoffs) -> bool:
    for p_y in grid:
        for q in w_grid:
            merged = classify_joint_strategy(game, {"you": p_y, "W": q})
            realist = classify_joint_strategy(newcomb_realist(q, payoffs, grid=(p_y,)), {"you": p_y})
            if not (merged.is_singleton and realist.is_singleton):
                return False
            if merged.point.probs != realist.point.probs or merged.point.probs != product_joint(p_y, q).probs:
                return False
    return True


# -- appendix ---------------------------------------------------------------

@dataclass(frozen=True)
class AppendixWitness:
    """The general joint table consistent with an accuracy-alpha predictor."""

    alpha: Fraction
    z_AB: Fraction
    z_B: Fraction

    def __post_init__(self):
        for name in ("alpha", "z_AB", "z_B"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        if self.z_AB < 0 or self.z_B < 0 or self.z_AB + self.z_B != 1:
            raise ValidationError("z_AB and z_B must be nonnegative and sum to 1")

    def joint(self, space: Space = NEWCOMB_SPACE) -> JointDistribution:
        a = self.alpha
        table = {
            ("AB", "ab"): a * self.z_AB,
            ("B", "ab"): (1 - a) * self.z_B,
            ("AB", "b"): (1 - a) * self.z_AB,
            ("B", "b"): a * self.z_B,
        }
        return JointDistribution.from_mapping(space, table)


def farey_grid(max_denominator: int = 20) -> tuple[tuple[Fraction, Fraction], ...]:
    """Every ``(1-x, x)`` with ``x`` in [0, 1] of denominator at most ``max_denominator``."""
    xs = sorted({Fraction(k, d) for d in range(1, max_denominator + 1) for k in range(d + 1)})
    return tuple((1 - x, x) for x in xs)


@dataclass(frozen=True)
class AppendixReport:
    alpha: Fraction
    ratio_gap: Fraction
    feasible_h: tuple[tuple[Fraction, Fraction], ...]
    induced_joints: tuple[JointDistribution, ...]
    payoffs: tuple[Fraction, ...]
    checked: int

    def as_dict(self) -> dict:
        return {
            "scenario": "appendix",
            "alpha": rational_json(self.alpha),
            "ratio_gap": rational_json(self.ratio_gap),
            "ratio_equation_solvable_with_both_z_positive": self.ratio_gap == 0,
            "h_checked": self.checked,
            "feasible_h": [
                {
                    "h": render_dist("y", CHOICE, h),
                    "joint": joint_json(j),
                    "payoff": rational_json(u),
                }
                for h, j, u in zip(self.feasible_h, self.induced_joints, self.payoffs)
            ],
        }


def appendix_lemma_check(alpha: RationalLike, h_grid: Optional[Sequence] = None, payoffs: Mapping = TABLE1) -> AppendixReport:
    """Decide which g-independent ``P(y|g)`` an accuracy-alpha predictor allows.

    With both ``z`` positive the two columns of the table would need equal
    ratios, which cross-multiplies to ``z_AB z_B (alpha^2 - (1-alpha)^2) = 0``;
    for ``alpha != 1/2`` that forces one ``z`` to vanish.  The solver scan over
    ``h_grid`` must agree.
    """
    a = to_fraction(alpha)
    if a == Fraction(1, 2):
        raise ValidationError(
            "alpha = 1/2 is excluded: both rows of the table become proportional, "
            "the ratio equation is an identity and every h is feasible"
        )
    NewcombParams(a)
    gap = a * a - (1 - a) * (1 - a)
    grid = tuple(h_grid or farey_grid(20))
    you = realist_you_family(grid)
    w = Player("W", fearful_w_family(a), None, is_nature=True)
    game = ExtendedGame("appendix", (Y, G), (Player("you", you, dict(TABLE1)), w))
    feasible = []
    for h in grid:
        r = classify_joint_strategy(game, {"you": h})
        if r.verdict is Verdict.SINGLETON:
            feasible.append((h, r.point))
        elif r.verdict is Verdict.POLYTOPE:
            raise AssertionError(f"h={h} admits several joints at alpha={a}")
    deltas = {delta(Y, "AB"), delta(Y, "B")}
    if {h for h, _ in feasible} - deltas:
        raise AssertionError(f"non-delta h feasible at alpha={a}: {feasible}")
    if gap != 2 * a - 1:
        raise AssertionError("ratio identity mis-evaluated")
    # report both deltas, with the joint read off the table at z = h
    hs, joints, pays = [], [], []
    u = validate_payoffs(payoffs)
    for label in CHOICE:
        h = delta(Y, label)
        j = AppendixWitness(a, h[0], h[1]).joint()
        hs.append(h)
        joints.append(j)
        pays.append(expected_utility(j, u))
    return AppendixReport(a, gap, tuple(hs), tuple(joints), tuple(pays), len(grid))


# -- alpha sweep and time reversal -------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    alpha: Fraction
    h_verdicts: tuple[tuple[tuple[Fraction, Fraction], Verdict], ...]
    scenario3: GameVerdict
    fearful: BestResponse

    def as_dict(self) -> dict:
        fam = fearful_you_family()
        return {
            "alpha": rational_json(self.alpha),
            "merged_3": self.scenario3.value,
            "feasible_h": [render_dist("y", CHOICE, h) for h, v in self.h_verdicts if v is Verdict.SINGLETON],
            "empty_h": len([1 for _, v in self.h_verdicts if v is Verdict.EMPTY]),
            "h_verdicts": [{"h": render_dist("y", CHOICE, h), "verdict": v.value} for h, v in self.h_verdicts],
            "fearful_maximizer": fam.render(self.fearful.parameter),
            "fearful_maximizers": [fam.render(m) for m in self.fearful.maximizers],
            "fearful_value": rational_json(self.fearful.value),
        }


def alpha_sweep(alphas: Sequence[RationalLike], h_grid: Optional[Sequence] = None, payoffs: Mapping = TABLE1) -> list[SweepRow]:
    rows = []
    for alpha in alphas:
        p = NewcombParams(alpha, payoffs)
        merged = merged_scenario(3, p, grid=h_grid)
        game = merged.game
        verdicts = tuple(
            (h, classify_joint_strategy(game, {"you": h}).verdict) for h in game.player("you").family.grid
        )
        br = best_response(newcomb_fearful(p), "you")
        rows.append(SweepRow(p.alpha, verdicts, merged.classification.verdict, br))
    return rows


def analysis_report(game_id: str, p: NewcombParams, q: Sequence = (Fraction(1, 2), Fraction(1, 2)), reversed_time: bool = False) -> dict:
    """The analysis of one Newcomb game; contains nothing about variable annotations."""
    if game_id == "fearful":
        game = newcomb_fearful(p, reversed_time=reversed_time)
        return {
            "classification": classification_json(game, classify_game(game)),
            "best_response": best_response_json(game, best_response(game, "you")),
        }
    if game_id == "realist":
        game = newcomb_realist(q, p.payoffs, reversed_time=reversed_time)
        return {
            "classification": classification_json(game, classify_game(game)),
            "best_response": best_response_json(game, best_response(game, "you")),
        }
    if game_id == "merged-3":
        return merged_scenario(3, p, reversed_time=reversed_time).report()
    raise ValidationError(f"no time-reversal analysis for {game_id!r}")


@dataclass(frozen=True)
class TimeReversalReport:
    forward: Mapping[str, Any]
    reversed: Mapping[str, Any]
    annotations: Mapping[str, Any]

    @property
    def identical(self) -> dict[str, bool]:
        return {k: self.forward[k] == self.reversed[k] for k in self.forward}

    def as_dict(self) -> dict:
        return {
            "scenario": "time-reversed",
            "identical": self.identical,
            "annotations": dict(self.annotations),
            "forward": dict(self.forward),
            "reversed": dict(self.reversed),
        }


def time_reversed_newcomb(p: NewcombParams = NewcombParams(), q: Sequence = (Fraction(1, 2), Fraction(1, 2))) -> TimeReversalReport:
    games = ("fearful", "realist", "merged-3")
    forward = {gid: analysis_report(gid, p, q) for gid in games}
    backward = {gid: analysis_report(gid, p, q, reversed_time=True) for gid in games}
    fy, fg = _variables(False)
    ry, rg = _variables(True)
    annotations = {
        "forward": {fy.name: fy.annotation, fg.name: fg.annotation},
        "reversed": {ry.name: ry.annotation, rg.name: rg.annotation},
    }
    return TimeReversalReport(forward, backward, annotations)


def time_reversed_games(p: NewcombParams = NewcombParams()) -> tuple[ExtendedGame, ExtendedGame]:
    """The reversed fearful and realist games."""
    return newcomb_fearful(p, reversed_time=True), newcomb_realist(reversed_time=True, payoffs=p.payoffs)


# -- matching pennies ---------------------------------------------------------

X_R = VariableSpec("x_R", ("0", "1"), annotation="Row's coin")
X_C = VariableSpec("x_C", ("0", "1"), annotation="Col's coin")


def _coin(var: VariableSpec, p: RationalLike) -> Cpt:
    """``p`` is the probability of heads (outcome 1)."""
    p = to_fraction(p)
    return Cpt.root(var, (1 - p, p))


def _as_list(x) -> list:
    return list(x) if isinstance(x, (list, tuple)) else [x]


def matching_utilities(space: Space) -> dict[str, Utility]:
    row = {o: Fraction(int(o[0] == o[-1])) for o in space.outcomes()}
    col = {o: 1 - v for o, v in row.items()}
    return {"Row": row, "Col": col}


def matching_pennies(p_R: Any = Fraction(1, 2), p_C: Any = Fraction(1, 2)) -> ExtendedGame:
    """Row and Col each fix the distribution at their own unconnected node.

    ``p_R`` and ``p_C`` are heads probabilities, or lists of them to use
    as the players' grids.
    """
    dag = Dag.from_variables((X_R, X_C))
    grids = {"x_R": [_coin(X_R, p) for p in _as_list(p_R)], "x_C": [_coin(X_C, p) for p in _as_list(p_C)]}
    return bayes_net_game(
        "matching-pennies", dag, {"x_R": "Row", "x_C": "Col"}, grids, matching_utilities(dag.space)
    )


def matching_pennies_check(p_R: RationalLike, p_C: RationalLike) -> dict:
    """Expected utilities from the engine against the closed-form sums."""
    p_R, p_C = to_fraction(p_R), to_fraction(p_C)
    game = matching_pennies(p_R, p_C)
    row_param = game.player("Row").family.grid[0]
    col_param = game.player("Col").family.grid[0]
    r = classify_joint_strategy(game, {"Row": row_param, "Col": col_param})
    eu_row = expected_utility(r.point, game.player("Row").utility)
    eu_col = expected_utility(r.point, game.player("Col").utility)
    formula_row = p_R * p_C + (1 - p_R) * (1 - p_C)
    return {
        "verdict": r.verdict.value,
        "eu_row": eu_row,
        "eu_col": eu_col,
        "formula_row": formula_row,
        "formula_col": 1 - formula_row,
        "matches": eu_row == formula_row and eu_col == 1 - formula_row,
    }


D = VariableSpec("D", ("0", "1"), annotation="sensor reading of Row's move")


def sensor_variant(cpts: Optional[Mapping[str, Any]] = None) -> ExtendedGame:
    """Row -> D -> Col.  ``cpts`` may override ``"x_R"``, ``"D"``, ``"x_C"``
    with a :class:`Cpt` or a list of them (a grid)."""
    dag = Dag.from_variables((X_R, D, X_C), [("x_R", "D"), ("D", "x_C")])
    defaults = {
        "x_R": _coin(X_R, Fraction(1, 2)),
        "D": Cpt(D, (X_R,), {("0",): (1, 0), ("1",): (0, 1)}),
        "x_C": Cpt(X_C, (D,), {("0",): (1, 0), ("1",): (0, 1)}),
    }
    chosen = dict(defaults)
    chosen.update(cpts or {})
    grids = {k: _as_list(v) for k, v in chosen.items()}
    if len(grids["D"]) != 1:
        raise ValidationError("the sensor is a Nature player with a single conditional table")
    return bayes_net_game(
        "sensor",
        dag,
        {"x_R": "Row", "D": "sensor", "x_C": "Col"},
        grids,
        matching_utilities(dag.space),
        nature=("sensor",),
    )
