"""Exact finite probability tables and Bayes nets.

Tables are flat tuples of :class:`Fraction` in row-major order over the
declared variable order: the last variable varies fastest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .rational import RationalLike, format_vector, to_fraction

Outcome = tuple[str, ...]


class ValidationError(ValueError):
    """An input table, name or distribution is malformed."""


class StructureError(ValidationError):
    """A graph violates the Bayes-net structural requirements."""


@dataclass(frozen=True)
class VariableSpec:
    """A named finite variable.

    ``annotation`` is free text (e.g. when the variable is observed) and
    takes no part in equality or in any computation.
    """

    name: str
    domain: tuple[str, ...]
    annotation: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(str(d) for d in self.domain))
        if not self.name or not str(self.name).isidentifier():
            raise ValidationError(f"variable name must be an identifier: {self.name!r}")
        if len(self.domain) < 2:
            raise ValidationError(f"variable {self.name!r} needs at least two outcomes")
        if len(set(self.domain)) != len(self.domain):
            raise ValidationError(f"variable {self.name!r} has duplicate outcome labels")

    def index(self, label: str) -> int:
        try:
            return self.domain.index(label)
        except ValueError:
            raise ValidationError(f"{label!r} is not an outcome of {self.name!r}") from None

    def __len__(self):
        return len(self.domain)


@dataclass(frozen=True)
class Space:
    """The product space of an ordered list of variables."""

    variables: tuple[VariableSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        names = [v.name for v in self.variables]
        if not names:
            raise ValidationError("a joint space needs at least one variable")
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate variable names in {names}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def size(self) -> int:
        n = 1
        for v in self.variables:
            n *= len(v)
        return n

    def variable(self, name: str) -> VariableSpec:
        for v in self.variables:
            if v.name == name:
                return v
        raise ValidationError(f"unknown variable {name!r}; have {list(self.names)}")

    def position(self, name: str) -> int:
        self.variable(name)
        return self.names.index(name)

    def outcomes(self) -> Iterator[Outcome]:
        return itertools.product(*(v.domain for v in self.variables))

    def index(self, outcome: Sequence[str]) -> int:
        if len(outcome) != len(self.variables):
            raise ValidationError(f"outcome {tuple(outcome)} has wrong arity")
        idx = 0
        for v, label in zip(self.variables, outcome):
            idx = idx * len(v) + v.index(label)
        return idx

    def outcome_str(self, outcome: Sequence[str]) -> str:
        return ",".join(f"{n}={a}" for n, a in zip(self.names, outcome))

    def project(self, outcome: Sequence[str], names: Sequence[str]) -> Outcome:
        return tuple(outcome[self.position(n)] for n in names)


def _check_distribution(values: Sequence[Fraction], what: str) -> None:
    if any(p < 0 for p in values):
        raise ValidationError(f"{what} has a negative entry: {format_vector(values)}")
    if sum(values) != 1:
        raise ValidationError(f"{what} sums to {sum(values)}, not 1")


def as_distribution(values: Sequence[RationalLike], size: int, what: str = "distribution") -> tuple[Fraction, ...]:
    dist = tuple(to_fraction(p) for p in values)
    if len(dist) != size:
        raise ValidationError(f"{what} has {len(dist)} entries, expected {size}")
    _check_distribution(dist, what)
    return dist


def delta(var: VariableSpec, label: str) -> tuple[Fraction, ...]:
    """The point mass on ``label`` as a distribution over ``var``."""
    i = var.index(label)
    return tuple(Fraction(int(k == i)) for k in range(len(var)))


@dataclass(frozen=True)
class JointDistribution:
    space: Space
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(to_fraction(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if len(probs) != self.space.size:
            raise ValidationError(f"table has {len(probs)} entries, space has {self.space.size}")
        _check_distribution(probs, "joint table")

    @classmethod
    def from_function(cls, variables: Iterable[VariableSpec], fn) -> "JointDistribution":
        space = variables if isinstance(variables, Space) else Space(tuple(variables))
        return cls(space, tuple(to_fraction(fn(o)) for o in space.outcomes()))

    @classmethod
    def from_mapping(cls, variables: Iterable[VariableSpec], table: Mapping[Outcome, RationalLike]) -> "JointDistribution":
        space = variables if isinstance(variables, Space) else Space(tuple(variables))
        for key in table:
            space.index(key)
        return cls(space, tuple(to_fraction(table.get(o, 0)) for o in space.outcomes()))

    @classmethod
    def point_mass(cls, variables: Iterable[VariableSpec], outcome: Outcome) -> "JointDistribution":
        return cls.from_mapping(variables, {tuple(outcome): 1})

    @classmethod
    def uniform(cls, variables: Iterable[VariableSpec]) -> "JointDistribution":
        space = variables if isinstance(variables, Space) else Space(tuple(variables))
        return cls(space, (Fraction(1, space.size),) * space.size)

    @property
    def variables(self) -> tuple[VariableSpec, ...]:
        return self.space.variables

    def __getitem__(self, outcome: Sequence[str]) -> Fraction:
        return self.probs[self.space.index(outcome)]

    def items(self) -> Iterator[tuple[Outcome, Fraction]]:
        return zip(self.space.outcomes(), self.probs)

    def support(self) -> list[Outcome]:
        return [o for o, p in self.items() if p]

    def __str__(self):
        cells = ", ".join(f"P({self.space.outcome_str(o)})={p}" for o, p in self.items())
        return f"JointDistribution[{cells}]"


def marginal(j: JointDistribution, keep: Union[str, Iterable[str]]) -> JointDistribution:
    """Sum out every variable not in ``keep``; result keeps ``j``'s order."""
    keep = {keep} if isinstance(keep, str) else set(keep)
    if not keep:
        raise ValidationError("marginal needs at least one variable to keep")
    for name in keep:
        j.space.variable(name)
    kept = [v for v in j.variables if v.name in keep]
    sub = Space(tuple(kept))
    names = sub.names
    acc = [Fraction(0)] * sub.size
    for outcome, p in j.items():
        acc[sub.index(j.space.project(outcome, names))] += p
    return JointDistribution(sub, tuple(acc))


@dataclass(frozen=True)
class ConditionalTable:
    """``P(target | given = v)`` for each assignment ``v`` of the given variables.

    ``rows[v]`` is ``None`` wherever ``P(given = v) = 0``; such rows are
    undefined and never filled in.
    """

    target: VariableSpec
    given: tuple[VariableSpec, ...]
    rows: Mapping[Outcome, tuple[Fraction, ...] | None]

    @property
    def support(self) -> dict[Outcome, bool]:
        return {k: r is not None for k, r in self.rows.items()}

    def prob(self, label: str, given: Union[str, Sequence[str]]) -> Fraction:
        key = (given,) if isinstance(given, str) else tuple(given)
        row = self.rows[key]
        if row is None:
            raise ValidationError(f"P({self.target.name} | {key}) is undefined: zero-probability condition")
        return row[self.target.index(label)]

    def row(self, given: Union[str, Sequence[str]]) -> tuple[Fraction, ...] | None:
        key = (given,) if isinstance(given, str) else tuple(given)
        return self.rows[key]


def conditional(j: JointDistribution, target: str, given: Union[str, Sequence[str]]) -> ConditionalTable:
    given_names = (given,) if isinstance(given, str) else tuple(given)
    if target in given_names:
        raise ValidationError("target must not be among the conditioning variables")
    tvar = j.space.variable(target)
    gvars = tuple(j.space.variable(n) for n in given_names)
    gspace_outcomes = list(itertools.product(*(v.domain for v in gvars)))
    joint = marginal(j, (target, *given_names))
    rows: dict[Outcome, tuple[Fraction, ...] | None] = {}
    for gv in gspace_outcomes:
        cells = []
        for a in tvar.domain:
            assignment = dict(zip(given_names, gv))
            assignment[target] = a
            cells.append(joint[tuple(assignment[n] for n in joint.space.names)])
        total = sum(cells)
        rows[gv] = None if total == 0 else tuple(c / total for c in cells)
    return ConditionalTable(tvar, gvars, rows)


@dataclass(frozen=True)
class Cpt:
    """Conditional table ``P(child | parents)``, rows keyed by parent labels."""

    child: VariableSpec
    parents: tuple[VariableSpec, ...]
    rows: Mapping[Outcome, tuple[Fraction, ...]]

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        expected = list(itertools.product(*(p.domain for p in self.parents)))
        rows = {}
        for key, row in dict(self.rows).items():
            key = (key,) if isinstance(key, str) else tuple(key)
            rows[key] = as_distribution(row, len(self.child), f"CPT row {self.child.name}|{key}")
        missing = [k for k in expected if k not in rows]
        extra = [k for k in rows if k not in set(expected)]
        if missing or extra:
            raise ValidationError(
                f"CPT for {self.child.name!r} must have one row per parent assignment "
                f"(missing {missing}, unexpected {extra})"
            )
        object.__setattr__(self, "rows", {k: rows[k] for k in expected})

    @classmethod
    def root(cls, child: VariableSpec, dist: Sequence[RationalLike]) -> "Cpt":
        return cls(child, (), {(): tuple(dist)})

    def prob(self, label: str, parent_labels: Sequence[str] = ()) -> Fraction:
        return self.rows[tuple(parent_labels)][self.child.index(label)]

    def describe(self) -> str:
        head = self.child.name + (("|" + ",".join(p.name for p in self.parents)) if self.parents else "")
        body = "; ".join(
            (",".join(k) + ":" if k else "") + format_vector(r) for k, r in self.rows.items()
        )
        return f"P({head}) = {body}"


def cpt_from_joint(j: JointDistribution, child: str, parents: Sequence[str]) -> tuple[Cpt, list[Outcome]]:
    """Read off ``P(child | parents)`` from a joint table.

    Zero-probability parent rows carry no information; they are filled with
    the uniform distribution and returned in the second element so callers
    can flag them.
    """
    cvar = j.space.variable(child)
    pvars = tuple(j.space.variable(p) for p in parents)
    if not parents:
        return Cpt.root(cvar, marginal(j, child).probs), []
    table = conditional(j, child, tuple(parents))
    uniform = tuple(Fraction(1, len(cvar)) for _ in cvar.domain)
    flagged = [k for k, r in table.rows.items() if r is None]
    rows = {k: (uniform if r is None else r) for k, r in table.rows.items()}
    return Cpt(cvar, pvars, rows), flagged


@dataclass(frozen=True)
class Dag:
    """Nodes, directed edges and a one-to-one labelling of nodes by variables."""

    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    labeling: Mapping[str, VariableSpec]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        object.__setattr__(self, "labeling", dict(self.labeling))
        if len(set(self.nodes)) != len(self.nodes):
            raise StructureError("duplicate node ids")
        if set(self.labeling) != set(self.nodes):
            raise StructureError("labeling must assign exactly one variable to every node")
        names = [v.name for v in self.labeling.values()]
        if len(set(names)) != len(names):
            raise StructureError("labeling must be one-to-one")
        for a, b in self.edges:
            if a not in self.labeling or b not in self.labeling:
                raise StructureError(f"edge {a}->{b} references an unknown node")
            if a == b:
                raise StructureError(f"self-loop at {a}")
        self.topological_order()

    @classmethod
    def from_variables(cls, variables: Sequence[VariableSpec], edges: Iterable[tuple[str, str]] = ()) -> "Dag":
        """Build a DAG whose node ids are the variable names."""
        return cls(tuple(v.name for v in variables), frozenset(edges), {v.name: v for v in variables})

    @property
    def variables(self) -> tuple[VariableSpec, ...]:
        return tuple(self.labeling[n] for n in self.nodes)

    @property
    def space(self) -> Space:
        return Space(self.variables)

    def parents(self, node: str) -> tuple[str, ...]:
        return tuple(n for n in self.nodes if (n, node) in self.edges)

    def children(self, node: str) -> tuple[str, ...]:
        return tuple(n for n in self.nodes if (node, n) in self.edges)

    def topological_order(self) -> tuple[str, ...]:
        indegree = {n: len(self.parents(n)) for n in self.nodes}
        order: list[str] = []
        ready = [n for n in self.nodes if indegree[n] == 0]
        while ready:
            n = ready.pop(0)
            order.append(n)
            for c in self.children(n):
                indegree[c] -= 1
                if indegree[c] == 0:
                    ready.append(c)
        if len(order) != len(self.nodes):
            raise StructureError("edge relation contains a cycle")
        return tuple(order)

    def descendants(self, node: str) -> set[str]:
        seen: set[str] = set()
        stack = list(self.children(node))
        while stack:
            n = stack.pop()
            if n not in seen:
                seen.add(n)
                stack.extend(self.children(n))
        return seen

    def non_descendants(self, node: str) -> tuple[str, ...]:
        """Nodes other than ``node``, its parents and its descendants."""
        excluded = self.descendants(node) | set(self.parents(node)) | {node}
        return tuple(n for n in self.nodes if n not in excluded)


@dataclass(frozen=True)
class BayesNet(Dag):
    cpts: Mapping[str, Cpt] = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "cpts", dict(self.cpts))
        if set(self.cpts) != set(self.nodes):
            raise ValidationError("every node needs exactly one conditional table")
        for node in self.nodes:
            cpt = self.cpts[node]
            want_parents = tuple(self.labeling[p] for p in self.parents(node))
            if cpt.child != self.labeling[node] or cpt.parents != want_parents:
                raise ValidationError(
                    f"CPT at node {node!r} must be P({self.labeling[node].name} | "
                    f"{','.join(p.name for p in want_parents)})"
                )


def joint_from_bayes_net(net: BayesNet) -> JointDistribution:
    """Multiply the node conditionals at every joint outcome."""
    space = net.space
    order = net.topological_order()
    names = space.names
    probs = []
    for outcome in space.outcomes():
        assignment = dict(zip(names, outcome))
        p = Fraction(1)
        for node in order:
            cpt = net.cpts[node]
            p *= cpt.prob(assignment[cpt.child.name], [assignment[v.name] for v in cpt.parents])
            if not p:
                break
        probs.append(p)
    return JointDistribution(space, tuple(probs))
