"""Strategies as affine families of joint distributions.

A strategy is a set of joint tables.  Each supported family is cut out of
the probability simplex by linear equalities on the table entries, so the
intersection of any number of strategies is a polytope and can be decided
exactly.

Conditional requirements are written with the denominator cleared,
``P(c=a, b) = t(a|b) * P(b)``, which is automatically satisfied wherever
``P(b) = 0``.  This is the "for every conditioning value of nonzero
probability" reading of a fixed conditional.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .linalg import Farkas, Polyhedron
from .prob import (
    Cpt,
    JointDistribution,
    Outcome,
    Space,
    ValidationError,
    VariableSpec,
    as_distribution,
)
from .rational import RationalLike, exact, format_vector, to_fraction


@dataclass(frozen=True)
class LinearConstraint:
    """``sum_k coefficients[k] * P(outcome_k) = rhs`` over a joint table."""

    coefficients: tuple[Fraction, ...]
    rhs: Fraction
    label: str = ""

    def __post_init__(self):
        if not any(self.coefficients):
            raise ValidationError(f"constraint {self.label!r} has no nonzero coefficient")

    def holds(self, probs: Sequence[Fraction]) -> bool:
        return sum(c * p for c, p in zip(self.coefficients, probs)) == self.rhs

    def render(self, space: Space) -> str:
        terms = []
        for c, o in zip(self.coefficients, space.outcomes()):
            if c:
                coef = "" if c == 1 else ("-" if c == -1 else exact(c) + "*")
                terms.append(f"{coef}P({','.join(o)})")
        return " + ".join(terms).replace("+ -", "- ") + f" = {exact(self.rhs)}"


@dataclass(frozen=True)
class MarginalFixed:
    """All tables whose marginal on ``variable`` equals ``distribution``."""

    variable: str
    distribution: tuple[Fraction, ...]

    def describe(self) -> str:
        return f"P({self.variable}) = {format_vector(self.distribution)}"


@dataclass(frozen=True)
class CptFixed:
    """All tables with ``P(child | parents, context) = table(child | parents)``.

    ``context`` lists extra variables the child's conditional must not
    depend on; it is empty for a plain conditional.  ``table`` maps each
    parent assignment to a distribution over the child.
    """

    child: str
    parents: tuple[str, ...]
    table: Mapping[Outcome, tuple[Fraction, ...]]
    context: tuple[str, ...] = ()

    def describe(self) -> str:
        given = ",".join(self.parents + self.context)
        rows = "; ".join((",".join(k) + ": " if k else "") + format_vector(r) for k, r in self.table.items())
        return f"P({self.child}{'|' + given if given else ''}) = {rows}"

    def __hash__(self):
        return hash((self.child, self.parents, tuple(self.table.items()), self.context))


@dataclass(frozen=True)
class ConditionalIndependentFixed:
    """All tables with ``P(target | given = v) = h`` for every ``v`` of nonzero probability."""

    target: str
    given: str
    distribution: tuple[Fraction, ...]

    def describe(self) -> str:
        return f"P({self.target}|{self.given}) = {format_vector(self.distribution)} for every {self.given}"


Description = Union[MarginalFixed, CptFixed, ConditionalIndependentFixed]


def marginal_fixed(variable: str, distribution: Sequence[RationalLike]) -> MarginalFixed:
    return MarginalFixed(variable, tuple(to_fraction(p) for p in distribution))


def cpt_fixed(cpt: Cpt, context: Sequence[str] = ()) -> CptFixed:
    return CptFixed(cpt.child.name, tuple(p.name for p in cpt.parents), dict(cpt.rows), tuple(context))


def conditional_independent_fixed(target: str, given: str, distribution: Sequence[RationalLike]) -> ConditionalIndependentFixed:
    return ConditionalIndependentFixed(target, given, tuple(to_fraction(p) for p in distribution))


@dataclass(frozen=True)
class StrategySet:
    """A compiled strategy: its defining descriptions and their constraints."""

    space: Space
    descriptions: tuple[Description, ...]
    constraints: tuple[LinearConstraint, ...]
    owner: Optional[str] = None

    def describe(self) -> str:
        return " & ".join(d.describe() for d in self.descriptions)


def _indicator_rows(space: Space, names: Sequence[str]) -> dict[Outcome, list[int]]:
    """Group joint-table indices by their projection onto ``names``."""
    groups: dict[Outcome, list[int]] = {}
    for k, o in enumerate(space.outcomes()):
        groups.setdefault(space.project(o, names), []).append(k)
    return groups


def _cleared_conditional(
    space: Space,
    child: VariableSpec,
    conditioning: Sequence[str],
    rows: Mapping[Outcome, Sequence[Fraction]],
    key_of,
    label,
) -> list[LinearConstraint]:
    """Constraints ``P(child=a, cond=v) - t(a|key(v)) * P(cond=v) = 0``."""
    n = space.size
    names = (child.name, *conditioning)
    cells = _indicator_rows(space, names)
    by_cond = _indicator_rows(space, conditioning) if conditioning else {(): list(range(n))}
    out = []
    for v in itertools.product(*(space.variable(c).domain for c in conditioning)):
        t = rows[key_of(v)]
        for i, a in enumerate(child.domain):
            coeffs = [Fraction(0)] * n
            for k in by_cond[v]:
                coeffs[k] -= t[i]
            for k in cells[(a, *v)]:
                coeffs[k] += 1
            out.append(LinearConstraint(tuple(coeffs), Fraction(0), label(a, v)))
    return out


def _compile_one(d: Description, space: Space) -> list[LinearConstraint]:
    n = space.size
    if isinstance(d, MarginalFixed):
        var = space.variable(d.variable)
        dist = as_distribution(d.distribution, len(var), f"P({var.name})")
        groups = _indicator_rows(space, [var.name])
        out = []
        for a, p in zip(var.domain, dist):
            coeffs = [Fraction(0)] * n
            for k in groups[(a,)]:
                coeffs[k] = Fraction(1)
            out.append(LinearConstraint(tuple(coeffs), p, f"P({var.name}={a}) = {exact(p)}"))
        return out
    if isinstance(d, ConditionalIndependentFixed):
        var = space.variable(d.target)
        given = space.variable(d.given)
        if var.name == given.name:
            raise ValidationError("target and given must differ")
        dist = as_distribution(d.distribution, len(var), f"h({var.name})")
        return _cleared_conditional(
            space, var, [given.name], {(): dist}, lambda v: (),
            lambda a, v: f"P({var.name}={a}|{given.name}={v[0]}) = {exact(dist[var.index(a)])}",
        )
    if isinstance(d, CptFixed):
        child = space.variable(d.child)
        parents = [space.variable(p) for p in d.parents]
        context = [space.variable(c) for c in d.context]
        names = [child.name] + [p.name for p in parents] + [c.name for c in context]
        if len(set(names)) != len(names):
            raise ValidationError(f"CPT for {child.name!r} repeats a variable")
        cpt = Cpt(child, tuple(parents), d.table)
        np_ = len(parents)
        cond = [p.name for p in parents] + [c.name for c in context]

        def label(a, v):
            given = ",".join(f"{nm}={x}" for nm, x in zip(cond, v))
            t = cpt.rows[tuple(v[:np_])][child.index(a)]
            return f"P({child.name}={a}{'|' + given if given else ''}) = {exact(t)}"

        return _cleared_conditional(space, child, cond, cpt.rows, lambda v: tuple(v[:np_]), label)
    raise TypeError(f"unsupported strategy description {d!r}")


def compile(
    description: Union[Description, Iterable[Description]],
    variables: Union[Space, Sequence[VariableSpec]],
    owner: Optional[str] = None,
) -> StrategySet:
    """Compile one description (or several, intersected) over a joint space."""
    space = variables if isinstance(variables, Space) else Space(tuple(variables))
    descs = (description,) if isinstance(description, (MarginalFixed, CptFixed, ConditionalIndependentFixed)) else tuple(description)
    if not descs:
        raise ValidationError("a strategy needs at least one description")
    constraints: list[LinearConstraint] = []
    for d in descs:
        constraints.extend(_compile_one(d, space))
    return StrategySet(space, descs, tuple(constraints), owner)


def contains(s: StrategySet, j: JointDistribution) -> bool:
    if s.space != j.space:
        raise ValidationError("strategy and distribution live on different joint spaces")
    return all(c.holds(j.probs) for c in s.constraints)


class Verdict(enum.Enum):
    EMPTY = "Empty"
    SINGLETON = "Singleton"
    POLYTOPE = "Polytope"


@dataclass(frozen=True)
class Certificate:
    """Rational multipliers that combine the constraints into a contradiction.

    ``farkas.multipliers`` has one entry per row of ``constraints``, the
    last row being the normalisation ``sum P = 1``.
    """

    constraints: tuple[LinearConstraint, ...]
    farkas: Farkas

    def verify(self) -> bool:
        A = [list(c.coefficients) for c in self.constraints]
        b = [c.rhs for c in self.constraints]
        return self.farkas.verify(A, b)

    @property
    def terms(self) -> list[tuple[Fraction, LinearConstraint]]:
        return [(w, c) for w, c in zip(self.farkas.multipliers, self.constraints) if w]


@dataclass(frozen=True)
class IntersectionResult:
    verdict: Verdict
    dimension: int
    point: Optional[JointDistribution] = None
    certificate: Optional[Certificate] = None

    @property
    def is_singleton(self) -> bool:
        return self.verdict is Verdict.SINGLETON


def _system(space: Space, constraints: Sequence[LinearConstraint]) -> tuple[LinearConstraint, ...]:
    norm = LinearConstraint((Fraction(1),) * space.size, Fraction(1), "sum P = 1")
    return tuple(constraints) + (norm,)


def _polyhedron(rows: Sequence[LinearConstraint]) -> Polyhedron:
    return Polyhedron([list(c.coefficients) for c in rows], [c.rhs for c in rows])


def feasible_dimension(constraints: Sequence[LinearConstraint], space: Space) -> int:
    """Affine dimension of ``{P in simplex : constraints}``; ``-1`` if empty."""
    return _polyhedron(_system(space, constraints)).dimension()


def intersect(sets: Sequence[StrategySet]) -> IntersectionResult:
    if not sets:
        raise ValidationError("intersect needs at least one strategy set")
    space = sets[0].space
    if any(s.space != space for s in sets):
        raise ValidationError("strategy sets live on different joint spaces")
    rows = _system(space, [c for s in sets for c in s.constraints])
    poly = _polyhedron(rows)
    if not poly.feasible:
        cert = Certificate(rows, poly.certificate)
        return IntersectionResult(Verdict.EMPTY, -1, None, cert)
    dim, point = poly.analyze()
    joint = JointDistribution(space, point)
    if dim == 0:
        return IntersectionResult(Verdict.SINGLETON, 0, joint)
    return IntersectionResult(Verdict.POLYTOPE, dim, joint)
