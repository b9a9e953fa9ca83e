"""Extended games: players choose strategy sets, not actions.

A joint choice of one strategy per player determines the joint
distribution only if the strategies intersect in exactly one table.
:func:`classify_game` scans joint choices for the two ways this fails,
and :func:`best_response` refuses to rank strategies in a game where it
does.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence, Union

from .prob import Cpt, Dag, JointDistribution, Outcome, Space, ValidationError, VariableSpec
from .rational import RationalLike, to_fraction
from .strategies import (
    CptFixed,
    Description,
    IntersectionResult,
    StrategySet,
    Verdict,
    compile,
    cpt_fixed,
    intersect,
)

Utility = Mapping[Outcome, Fraction]


class ConfigurationError(ValueError):
    """A game or analysis request is incompletely specified."""


class ImproperGame(Exception):
    """A joint choice does not pin down a unique joint distribution."""

    def __init__(self, message: str, choice: Mapping[str, Any], result: IntersectionResult):
        super().__init__(message)
        self.choice = dict(choice)
        self.result = result


@dataclass(frozen=True)
class StrategyFamily:
    """A parameterised family of strategies.

    ``build`` maps a parameter to the descriptions defining that strategy.
    ``grid`` is the declared finite set of parameters to check, and
    ``witnesses`` are named parameters that are always checked first.
    """

    name: str
    build: Callable[[Any], Union[Description, Sequence[Description]]]
    grid: tuple = ()
    witnesses: tuple[tuple[str, Any], ...] = ()
    render: Callable[[Any], str] = str

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(self.grid))
        object.__setattr__(self, "witnesses", tuple(self.witnesses))

    @classmethod
    def single(cls, name: str, description, label: str = "") -> "StrategyFamily":
        return cls(name, lambda _: description, grid=(label or name,), render=lambda p: str(p))

    def candidates(self) -> list:
        out = [p for _, p in self.witnesses]
        for p in self.grid:
            if p not in out:
                out.append(p)
        return out

    def strategy(self, param, space: Space, owner: Optional[str] = None) -> StrategySet:
        return compile(self.build(param), space, owner)

    def with_grid(self, grid: Iterable) -> "StrategyFamily":
        return StrategyFamily(self.name, self.build, tuple(grid), self.witnesses, self.render)


def union_family(name: str, *families: StrategyFamily) -> StrategyFamily:
    """All strategies of the given families; parameters are ``(family name, param)``."""
    by_name = {f.name: f for f in families}
    if len(by_name) != len(families):
        raise ConfigurationError("union members need distinct names")
    grid = tuple((f.name, p) for f in families for p in f.grid)
    witnesses = tuple((w, (f.name, p)) for f in families for w, p in f.witnesses)
    return StrategyFamily(
        name,
        lambda tp: by_name[tp[0]].build(tp[1]),
        grid,
        witnesses,
        lambda tp: f"{tp[0]}: {by_name[tp[0]].render(tp[1])}",
    )


@dataclass(frozen=True)
class Player:
    id: str
    family: StrategyFamily
    utility: Optional[Utility] = None
    is_nature: bool = False

    def __post_init__(self):
        if self.is_nature:
            if len(self.family.candidates()) != 1:
                raise ConfigurationError(f"Nature player {self.id!r} must have exactly one strategy")
            if self.utility is not None:
                raise ConfigurationError(f"Nature player {self.id!r} has no utility")
        elif self.utility is None:
            raise ConfigurationError(f"player {self.id!r} needs a utility table")


@dataclass(frozen=True)
class JointWitness:
    """A named joint choice that classification always examines first."""

    name: str
    choice: Mapping[str, Any]


@dataclass(frozen=True)
class ExtendedGame:
    name: str
    variables: tuple[VariableSpec, ...]
    players: tuple[Player, ...]
    structure: Optional[Dag] = None
    ownership: Optional[Mapping[str, str]] = None
    witnesses: tuple[JointWitness, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "players", tuple(self.players))
        space = Space(self.variables)
        ids = [p.id for p in self.players]
        if len(set(ids)) != len(ids):
            raise ConfigurationError("duplicate player ids")
        outcomes = list(space.outcomes())
        for p in self.players:
            if p.utility is not None:
                missing = [o for o in outcomes if o not in p.utility]
                if missing:
                    raise ConfigurationError(f"utility of {p.id!r} misses outcomes {missing}")
        if self.structure is not None:
            if tuple(self.structure.variables) != self.variables:
                raise ConfigurationError("Bayes-net skeleton must label nodes with the game variables in order")
            owners = dict(self.ownership or {})
            if set(owners) != set(self.structure.nodes):
                raise ConfigurationError("every node must be owned by exactly one player")
            unknown = set(owners.values()) - set(ids)
            if unknown:
                raise ConfigurationError(f"nodes owned by unknown players {sorted(unknown)}")
        elif self.ownership:
            raise ConfigurationError("node ownership given without a Bayes-net skeleton")
        for w in self.witnesses:
            for pid in w.choice:
                if pid not in ids:
                    raise ConfigurationError(f"witness {w.name!r} names unknown player {pid!r}")

    @property
    def space(self) -> Space:
        return Space(self.variables)

    def player(self, pid: str) -> Player:
        for p in self.players:
            if p.id == pid:
                return p
        raise ConfigurationError(f"unknown player {pid!r}")

    def strategy(self, pid: str, param) -> StrategySet:
        return self.player(pid).family.strategy(param, self.space, pid)

    def render_choice(self, choice: Mapping[str, Any]) -> dict[str, str]:
        return {pid: self.player(pid).family.render(p) for pid, p in choice.items()}


def _complete(game: ExtendedGame, choice: Mapping[str, Any]) -> dict[str, Any]:
    full = {}
    for p in game.players:
        if p.id in choice:
            full[p.id] = choice[p.id]
        elif p.is_nature:
            full[p.id] = p.family.candidates()[0]
        else:
            raise ConfigurationError(f"joint choice lacks a strategy for {p.id!r}")
    extra = set(choice) - set(full)
    if extra:
        raise ConfigurationError(f"joint choice names unknown players {sorted(extra)}")
    return full


def classify_joint_strategy(game: ExtendedGame, choice: Mapping[str, Any]) -> IntersectionResult:
    """Intersect one strategy per player; Nature players fill themselves in.

    Values in ``choice`` are family parameters or already-compiled
    :class:`StrategySet` objects.
    """
    full = _complete(game, choice)
    sets = []
    for pid, param in full.items():
        if isinstance(param, StrategySet):
            if param.space != game.space:
                raise ValidationError(f"strategy for {pid!r} lives on a different joint space")
            sets.append(param)
        else:
            sets.append(game.strategy(pid, param))
    return intersect(sets)


class GameVerdict(enum.Enum):
    PROPER = "Proper"
    OVER_PLAYED = "OverPlayed"
    UNDER_PLAYED = "UnderPlayed"


@dataclass(frozen=True)
class Check:
    choice: Mapping[str, Any]
    result: IntersectionResult
    name: str = ""


@dataclass(frozen=True)
class ClassificationResult:
    verdict: GameVerdict
    witnesses: tuple[Check, ...]
    coverage_note: str
    checked: int
    counts: Mapping[str, int]
    exhaustive: bool = False


def expected_utility(j: JointDistribution, u: Utility) -> Fraction:
    total = Fraction(0)
    for outcome, p in j.items():
        if outcome not in u:
            raise ValidationError(f"utility table has no entry for {outcome}")
        if p:
            total += p * u[outcome]
    return total


def classify_game(game: ExtendedGame, grids: Optional[Mapping[str, Sequence]] = None) -> ClassificationResult:
    """Check named witnesses, then every joint choice on the declared grids.

    The verdict is OverPlayed if any checked choice is empty, else
    UnderPlayed if any admits several distributions, else Proper.  The first
    offending choice of each kind is kept as a witness.  Proper is only
    certified over the checked choices.
    """
    grids = dict(grids or {})
    axes = []
    for p in game.players:
        cands = list(grids[p.id]) if p.id in grids else p.family.candidates()
        if not cands:
            raise ConfigurationError(f"player {p.id!r} has no grid and no witnesses")
        axes.append(cands)
    ids = [p.id for p in game.players]
    checks: list[tuple[str, dict]] = [(w.name, _complete(game, w.choice)) for w in game.witnesses]
    checks.extend(("", dict(zip(ids, combo))) for combo in itertools.product(*axes))

    counts = {v.value: 0 for v in Verdict}
    first: dict[Verdict, Check] = {}
    for name, choice in checks:
        result = classify_joint_strategy(game, choice)
        counts[result.verdict.value] += 1
        if result.verdict is not Verdict.SINGLETON and result.verdict not in first:
            first[result.verdict] = Check(choice, result, name)

    if Verdict.EMPTY in first:
        verdict = GameVerdict.OVER_PLAYED
    elif Verdict.POLYTOPE in first:
        verdict = GameVerdict.UNDER_PLAYED
    else:
        verdict = GameVerdict.PROPER
    witnesses = tuple(first[v] for v in (Verdict.EMPTY, Verdict.POLYTOPE) if v in first)
    scope = "overridden grids" if grids else "declared grids and witnesses"
    if verdict is GameVerdict.PROPER:
        note = (
            f"all {len(checks)} joint choices on the {scope} intersect in a single distribution; "
            "properness is certified on these choices only"
        )
    else:
        note = f"{len(checks)} joint choices on the {scope} checked; the witness is an exact proof of impropriety"
    return ClassificationResult(verdict, witnesses, note, len(checks), counts, exhaustive=not grids)


@dataclass(frozen=True)
class BestResponse:
    player: str
    parameter: Any
    value: Fraction
    maximizers: tuple
    values: tuple[tuple[Any, Fraction], ...]
    joints: tuple[JointDistribution, ...] = field(default=(), compare=False, repr=False)

    @property
    def tie(self) -> bool:
        return len(self.maximizers) > 1


def best_response(
    game: ExtendedGame,
    player: str,
    opponents_fixed: Optional[Mapping[str, Any]] = None,
    candidate_grid: Optional[Sequence] = None,
) -> BestResponse:
    """Maximise ``player``'s expected utility over ``candidate_grid``.

    Every candidate must meet the fixed opponents in a single distribution;
    otherwise :class:`ImproperGame` is raised with the offending choice.
    Ties are all reported; the canonical pick is the first in grid order.
    """
    me = game.player(player)
    if me.is_nature or me.utility is None:
        raise ConfigurationError(f"{player!r} is a Nature player and does not optimise")
    cands = list(candidate_grid) if candidate_grid is not None else me.family.candidates()
    if not cands:
        raise ConfigurationError(f"no candidate strategies for {player!r}")
    fixed = dict(opponents_fixed or {})
    if player in fixed:
        raise ConfigurationError("the responding player cannot also be fixed")
    values = []
    joints = []
    for c in cands:
        choice = _complete(game, {**fixed, player: c})
        result = classify_joint_strategy(game, choice)
        if not result.is_singleton:
            raise ImproperGame(
                f"joint choice {game.render_choice(choice)} gives {result.verdict.value}; "
                "expected utility is undefined",
                choice,
                result,
            )
        joints.append(result.point)
        values.append((c, expected_utility(result.point, me.utility)))
    best = max(v for _, v in values)
    maximizers = tuple(c for c, v in values if v == best)
    return BestResponse(player, maximizers[0], best, maximizers, tuple(values), tuple(joints))


def utility_from_function(space: Space, fn: Callable[[Outcome], RationalLike]) -> dict[Outcome, Fraction]:
    return {o: to_fraction(fn(o)) for o in space.outcomes()}


def node_strategy(dag: Dag, node: str, cpt: Cpt) -> CptFixed:
    """Fix the conditional at ``node`` of a DAG-structured game.

    The child is also required to be independent of its non-descendants
    given its parents, which every table factorising over the DAG
    satisfies.  With it, the node strategies of all players meet in exactly
    the factorised distribution.
    """
    context = tuple(dag.labeling[n].name for n in dag.non_descendants(node))
    return cpt_fixed(cpt, context)


def bayes_net_game(
    name: str,
    dag: Dag,
    ownership: Mapping[str, str],
    cpt_grids: Mapping[str, Sequence[Cpt]],
    utilities: Mapping[str, Utility],
    nature: Iterable[str] = (),
) -> ExtendedGame:
    """A game whose players each set the conditionals at the nodes they own.

    Parameters of a player's family are tuples of :class:`Cpt`, one per
    owned node in DAG node order.
    """
    nature = set(nature)
    players = []
    owners_in_order = []
    for node in dag.nodes:
        pid = ownership[node]
        if pid not in owners_in_order:
            owners_in_order.append(pid)
    for pid in owners_in_order:
        nodes = [n for n in dag.nodes if ownership[n] == pid]
        for n in nodes:
            if not cpt_grids.get(n):
                raise ConfigurationError(f"node {n!r} has no conditional tables to choose from")
        grid = tuple(itertools.product(*(tuple(cpt_grids[n]) for n in nodes)))

        def build(param, nodes=tuple(nodes)):
            return tuple(node_strategy(dag, n, c) for n, c in zip(nodes, param))

        def render(param):
            return "; ".join(c.describe() for c in param)

        family = StrategyFamily(f"{pid}-cpts", build, grid, render=render)
        players.append(Player(pid, family, None if pid in nature else utilities[pid], pid in nature))
    return ExtendedGame(name, dag.variables, tuple(players), dag, dict(ownership))
