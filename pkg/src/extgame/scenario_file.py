"""Declarative scenario files.

A scenario file is a single YAML document; see ``scenarios/*.yaml`` in the
repository for one commented example per built-in scenario.  Numbers are
read exactly: ``0.51`` becomes ``51/100`` and ``"3/4"`` stays ``3/4``.

Top-level keys::

    name:       free text
    variables:  [{name, domain, annotation?}, ...]      # fixes table order
    net:        {edges: [[parent, child], ...], owners: {variable: player}}
    players:    [{id, nature?, utility?, strategies? | family? | cpts?}, ...]
    witnesses:  [{name, choice: {player: index-or-label}}, ...]
    analysis:   {mode: classify | best-response | sweep, player?, opponents?, over?}

Without ``net``, a player's strategies are an explicit ``strategies`` list
and/or a ``family`` shorthand expanded over a ``grid``.  With ``net``, each
player lists ``cpts: {variable: [table, ...]}`` for the nodes it owns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import yaml

from .game import (
    ConfigurationError,
    ExtendedGame,
    JointWitness,
    Player,
    StrategyFamily,
    bayes_net_game,
)
from .prob import Cpt, Dag, Space, ValidationError, VariableSpec
from .rational import format_vector, to_fraction
from .strategies import (
    ConditionalIndependentFixed,
    CptFixed,
    MarginalFixed,
    compile,
)

KINDS = ("marginal", "conditional_independent", "cpt")
MODES = ("classify", "best-response", "sweep")


class ScenarioFileError(ValueError):
    def __init__(self, source: str, line: Optional[int], where: str, message: str):
        self.source, self.line, self.where = source, line, where
        loc = f"{source}:{line}" if line else source
        super().__init__(f"{loc}: {where}: {message}" if where else f"{loc}: {message}")


class _Map(dict):
    line: Optional[int] = None


class _List(list):
    line: Optional[int] = None


class _Loader(yaml.SafeLoader):
    pass


def _construct_map(loader, node):
    m = _Map(loader.construct_mapping(node, deep=True))
    m.line = node.start_mark.line + 1
    return m


def _construct_seq(loader, node):
    s = _List(loader.construct_sequence(node, deep=True))
    s.line = node.start_mark.line + 1
    return s


def _construct_float(loader, node):
    return to_fraction(loader.construct_scalar(node))


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_map)
_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_SEQUENCE_TAG, _construct_seq)
_Loader.add_constructor("tag:yaml.org,2002:float", _construct_float)


@dataclass(frozen=True)
class Analysis:
    mode: str
    player: Optional[str] = None
    opponents: Optional[dict] = None
    over: Optional[str] = None


@dataclass(frozen=True)
class ScenarioFile:
    name: str
    game: ExtendedGame
    analysis: Analysis
    labels: dict[str, list[str]]

    def param(self, player: str, ref: Any):
        """Resolve a grid index or strategy label to a family parameter."""
        fam = self.game.player(player).family
        if isinstance(ref, int) and not isinstance(ref, bool):
            if not 0 <= ref < len(fam.grid):
                raise ConfigurationError(f"{player!r} has no strategy #{ref}")
            return fam.grid[ref]
        labels = self.labels[player]
        if ref in labels:
            return fam.grid[labels.index(ref)]
        raise ConfigurationError(f"{player!r} has no strategy labelled {ref!r}")


class _Ctx:
    def __init__(self, source: str):
        self.source = source

    def fail(self, node, where: str, message: str):
        raise ScenarioFileError(self.source, getattr(node, "line", None), where, message)

    def need(self, node, key: str, where: str, kind=None):
        if not isinstance(node, dict) or key not in node:
            self.fail(node, where, f"missing required field {key!r}")
        value = node[key]
        if kind is not None and not isinstance(value, kind):
            self.fail(node, f"{where}.{key}", f"expected {kind.__name__ if isinstance(kind, type) else kind}")
        return value

    def rational(self, node, value, where: str) -> Fraction:
        try:
            return to_fraction(value)
        except (TypeError, ValueError) as exc:
            self.fail(node, where, str(exc))

    def dist(self, node, value, size: int, where: str) -> tuple[Fraction, ...]:
        if not isinstance(value, list):
            self.fail(node, where, "expected a list of probabilities")
        d = tuple(self.rational(value, v, f"{where}[{i}]") for i, v in enumerate(value))
        if len(d) != size:
            self.fail(value, where, f"expected {size} probabilities, got {len(d)}")
        if any(p < 0 for p in d) or sum(d) != 1:
            self.fail(value, where, f"{format_vector(d)} is not a probability distribution")
        return d


def _cpt_table(ctx: _Ctx, node, child: VariableSpec, parents: list[VariableSpec], where: str) -> dict:
    if not parents:
        if isinstance(node, list):
            return {(): ctx.dist(node, node, len(child), where)}
    if not isinstance(node, dict):
        ctx.fail(node, where, "expected a mapping from parent labels to distributions")
    rows = {}
    for key, row in node.items():
        labels = tuple(str(key).split(",")) if parents else ()
        if len(labels) != len(parents) or any(
            lbl not in p.domain for lbl, p in zip(labels, parents)
        ):
            ctx.fail(node, f"{where}.{key}", f"row key must be parent labels {[p.name for p in parents]}")
        rows[labels] = ctx.dist(node, row, len(child), f"{where}.{key}")
    expected = set(itertools.product(*(p.domain for p in parents)))
    if set(rows) != expected:
        ctx.fail(node, where, f"needs one row for each of {sorted(expected)}")
    return rows


def _description(ctx: _Ctx, space: Space, node, where: str):
    kinds = [k for k in KINDS if k in node]
    if "all" in node:
        parts = ctx.need(node, "all", where, list)
        out = []
        for i, part in enumerate(parts):
            d = _description(ctx, space, part, f"{where}.all[{i}]")
            out.extend(d if isinstance(d, tuple) else (d,))
        return tuple(out)
    if len(kinds) != 1:
        ctx.fail(node, where, f"exactly one of {list(KINDS)} or 'all' is required")
    kind = kinds[0]
    body = node[kind]
    w = f"{where}.{kind}"
    try:
        if kind == "marginal":
            var = space.variable(str(ctx.need(body, "variable", w)))
            return MarginalFixed(var.name, ctx.dist(body, ctx.need(body, "distribution", w), len(var), f"{w}.distribution"))
        if kind == "conditional_independent":
            var = space.variable(str(ctx.need(body, "target", w)))
            given = space.variable(str(ctx.need(body, "given", w)))
            return ConditionalIndependentFixed(
                var.name, given.name, ctx.dist(body, ctx.need(body, "distribution", w), len(var), f"{w}.distribution")
            )
        child = space.variable(str(ctx.need(body, "child", w)))
        parents = [space.variable(str(p)) for p in body.get("parents", [])]
        context = tuple(space.variable(str(c)).name for c in body.get("context", []))
        table = _cpt_table(ctx, ctx.need(body, "table", w), child, parents, f"{w}.table")
        return CptFixed(child.name, tuple(p.name for p in parents), table, context)
    except ValidationError as exc:
        ctx.fail(body, w, str(exc))


def _family_entries(ctx: _Ctx, space: Space, node, where: str) -> list[dict]:
    """Expand ``family: {kind, ..., grid: [...]}`` into explicit strategy entries."""
    kind = str(ctx.need(node, "kind", where)).replace("-", "_")
    if kind not in KINDS:
        ctx.fail(node, f"{where}.kind", f"unknown family kind {kind!r}; use one of {list(KINDS)}")
    grid = ctx.need(node, "grid", where, list)
    if not grid:
        ctx.fail(node, f"{where}.grid", "grid is empty")
    base = {k: v for k, v in node.items() if k not in ("kind", "grid")}
    entries = []
    for i, point in enumerate(grid):
        body = _Map(base)
        body.line = getattr(grid, "line", None)
        body["table" if kind == "cpt" else "distribution"] = point
        e = _Map({kind: body})
        e.line = body.line
        entries.append((f"{where}.grid[{i}]", e))
    return entries


def _players_plain(ctx: _Ctx, space: Space, players_node) -> tuple[list[Player], dict[str, list[str]]]:
    players, labels = [], {}
    for i, pnode in enumerate(players_node):
        where = f"players[{i}]"
        pid = str(ctx.need(pnode, "id", where))
        nature = bool(pnode.get("nature", False))
        entries = [(f"{where}.strategies[{k}]", e) for k, e in enumerate(pnode.get("strategies", []) or [])]
        if "family" in pnode:
            entries.extend(_family_entries(ctx, space, pnode["family"], f"{where}.family"))
        if not entries:
            ctx.fail(pnode, where, "a player needs 'strategies' or a 'family'")
        descs, names = [], []
        for w, e in entries:
            d = _description(ctx, space, e, w)
            descs.append(d)
            compile(d, space)
            names.append(str(e.get("label")) if isinstance(e, dict) and "label" in e else _describe(d))
        utility = _utility(ctx, space, pnode, where) if "utility" in pnode else None
        fam = StrategyFamily(
            f"{pid}-strategies",
            lambda k, descs=tuple(descs): descs[k],
            tuple(range(len(descs))),
            render=lambda k, names=tuple(names): names[k],
        )
        try:
            players.append(Player(pid, fam, utility, nature))
        except ConfigurationError as exc:
            ctx.fail(pnode, where, str(exc))
        labels[pid] = names
    return players, labels


def _describe(d) -> str:
    if isinstance(d, tuple):
        return " & ".join(x.describe() for x in d)
    return d.describe()


def _utility(ctx: _Ctx, space: Space, pnode, where: str) -> dict:
    node = pnode["utility"]
    w = f"{where}.utility"
    if not isinstance(node, dict):
        ctx.fail(pnode, w, "expected a mapping 'label,label,...': value")
    out = {}
    for key, value in node.items():
        outcome = tuple(str(key).split(","))
        try:
            space.index(outcome)
        except ValidationError as exc:
            ctx.fail(node, f"{w}.{key}", str(exc))
        out[outcome] = ctx.rational(node, value, f"{w}.{key}")
    missing = [",".join(o) for o in space.outcomes() if o not in out]
    if missing:
        ctx.fail(node, w, f"no utility for outcomes {missing}")
    return out


def _net_game(ctx: _Ctx, name: str, variables: list[VariableSpec], data) -> tuple[ExtendedGame, dict]:
    net = data["net"]
    edges = [tuple(map(str, e)) for e in net.get("edges", []) or []]
    try:
        dag = Dag.from_variables(variables, edges)
    except ValidationError as exc:
        ctx.fail(net, "net.edges", str(exc))
    owners = {str(k): str(v) for k, v in ctx.need(net, "owners", "net", dict).items()}
    if set(owners) != set(dag.nodes):
        ctx.fail(net, "net.owners", f"every variable must have exactly one owner; have {sorted(owners)}")
    grids: dict[str, list[Cpt]] = {}
    utilities, nature = {}, []
    space = dag.space
    for i, pnode in enumerate(ctx.need(data, "players", "", list)):
        where = f"players[{i}]"
        pid = str(ctx.need(pnode, "id", where))
        if pnode.get("nature", False):
            nature.append(pid)
        elif "utility" in pnode:
            utilities[pid] = _utility(ctx, space, pnode, where)
        else:
            ctx.fail(pnode, where, "non-Nature players need a utility table")
        for node, tables in (ctx.need(pnode, "cpts", where, dict)).items():
            node = str(node)
            if owners.get(node) != pid:
                ctx.fail(pnode, f"{where}.cpts.{node}", f"node {node!r} is not owned by {pid!r}")
            child = dag.labeling[node]
            parents = [dag.labeling[p] for p in dag.parents(node)]
            if not isinstance(tables, list):
                ctx.fail(pnode, f"{where}.cpts.{node}", "expected a list of tables")
            grids[node] = []
            for k, t in enumerate(tables):
                rows = _cpt_table(ctx, t, child, parents, f"{where}.cpts.{node}[{k}]")
                grids[node].append(Cpt(child, tuple(parents), rows))
    try:
        game = bayes_net_game(name, dag, owners, grids, utilities, nature)
    except (ConfigurationError, ValidationError) as exc:
        ctx.fail(data, "players", str(exc))
    labels = {p.id: [p.family.render(x) for x in p.family.grid] for p in game.players}
    return game, labels


def parse_scenario(text: str, source: str = "<scenario>") -> ScenarioFile:
    ctx = _Ctx(source)
    try:
        data = yaml.load(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ScenarioFileError(source, mark.line + 1 if mark else None, "", f"not valid YAML: {getattr(exc, 'problem', exc)}") from None
    except (TypeError, ValueError) as exc:
        raise ScenarioFileError(source, None, "", str(exc)) from None
    if not isinstance(data, dict):
        raise ScenarioFileError(source, None, "", "top level must be a mapping")
    name = str(data.get("name", Path(source).stem))
    variables = []
    for i, vnode in enumerate(ctx.need(data, "variables", "", list)):
        where = f"variables[{i}]"
        try:
            variables.append(
                VariableSpec(
                    str(ctx.need(vnode, "name", where)),
                    tuple(str(x) for x in ctx.need(vnode, "domain", where, list)),
                    str(vnode.get("annotation", "")),
                )
            )
        except ValidationError as exc:
            ctx.fail(vnode, where, str(exc))
    try:
        space = Space(tuple(variables))
    except ValidationError as exc:
        ctx.fail(data, "variables", str(exc))

    if "net" in data:
        game, labels = _net_game(ctx, name, variables, data)
    else:
        players, labels = _players_plain(ctx, space, ctx.need(data, "players", "", list))
        try:
            game = ExtendedGame(name, tuple(variables), tuple(players))
        except (ConfigurationError, ValidationError) as exc:
            ctx.fail(data, "players", str(exc))

    scenario = ScenarioFile(name, game, Analysis("classify"), labels)
    witnesses = []
    for i, wnode in enumerate(data.get("witnesses", []) or []):
        where = f"witnesses[{i}]"
        choice = ctx.need(wnode, "choice", where, dict)
        try:
            resolved = {str(pid): scenario.param(str(pid), ref) for pid, ref in choice.items()}
        except ConfigurationError as exc:
            ctx.fail(wnode, f"{where}.choice", str(exc))
        witnesses.append(JointWitness(str(wnode.get("name", f"witness {i}")), resolved))
    if witnesses:
        game = ExtendedGame(game.name, game.variables, game.players, game.structure, game.ownership, tuple(witnesses))

    anode = data.get("analysis", {}) or {}
    mode = str(anode.get("mode", "classify"))
    if mode not in MODES:
        ctx.fail(anode, "analysis.mode", f"unknown mode {mode!r}; use one of {list(MODES)}")
    player = anode.get("player")
    ids = [p.id for p in game.players]
    if mode == "best-response" and player is None:
        ctx.fail(anode, "analysis", "best-response needs 'player'")
    if player is not None and str(player) not in ids:
        ctx.fail(anode, "analysis.player", f"unknown player {player!r}")
    over = anode.get("over")
    if mode == "sweep" and over is None:
        ctx.fail(anode, "analysis", "sweep needs 'over' (the player whose strategies are swept)")
    if over is not None and str(over) not in ids:
        ctx.fail(anode, "analysis.over", f"unknown player {over!r}")
    opponents = {str(k): v for k, v in (anode.get("opponents") or {}).items()}
    scenario = ScenarioFile(name, game, Analysis(mode, player and str(player), opponents, over and str(over)), labels)
    for pid, ref in opponents.items():
        try:
            scenario.param(pid, ref)
        except ConfigurationError as exc:
            ctx.fail(anode, f"analysis.opponents.{pid}", str(exc))
    return scenario


def load_scenario(path: str | Path) -> ScenarioFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioFileError(str(path), None, "", f"cannot read file: {exc.strerror}") from None
    return parse_scenario(text, str(path))
