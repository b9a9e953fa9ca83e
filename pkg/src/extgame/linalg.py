"""Exact linear feasibility over the nonnegative orthant.

Everything here works on dense lists of :class:`Fraction`.  The systems
are ``A x = b, x >= 0``; the problem sizes are a few dozen unknowns at
most, so a dense tableau with Bland's rule is plenty and never cycles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

Matrix = list[list[Fraction]]
Vector = list[Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Elimination:
    rows: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]
    pivots: tuple[int, ...]
    # trace[k] expresses reduced row k as a combination of the input rows
    trace: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def inconsistency(self) -> Optional[tuple[Fraction, ...]]:
        """Multipliers ``w`` with ``w A = 0`` and ``w b < 0``, if the system is inconsistent."""
        for k in range(self.rank, len(self.rows)):
            c = self.rhs[k]
            if c != 0:
                w = self.trace[k]
                return tuple(-x for x in w) if c > 0 else w
        return None


def eliminate(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Elimination:
    """Reduced row echelon form of ``[A | b]``, tracking row operations."""
    m = len(A)
    n = len(A[0]) if m else 0
    rows = [list(map(Fraction, r)) for r in A]
    rhs = list(map(Fraction, b))
    trace = [[ONE if i == k else ZERO for k in range(m)] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        rhs[r], rhs[pr] = rhs[pr], rhs[r]
        trace[r], trace[pr] = trace[pr], trace[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        rhs[r] /= pv
        trace[r] = [x / pv for x in trace[r]]
        for i in range(m):
            f = rows[i][c]
            if i != r and f != 0:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
                rhs[i] -= f * rhs[r]
                trace[i] = [x - f * y for x, y in zip(trace[i], trace[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return Elimination(
        tuple(map(tuple, rows)), tuple(rhs), tuple(pivots), tuple(map(tuple, trace))
    )


def rank(A: Sequence[Sequence[Fraction]]) -> int:
    if not A or not A[0]:
        return 0
    return eliminate(A, [ZERO] * len(A)).rank


class Unbounded(ArithmeticError):
    pass


class _Tableau:
    """Simplex tableau; the last row is the objective (reduced costs | -value)."""

    def __init__(self, rows: Matrix, basis: list[int]):
        self.T = rows
        self.basis = basis

    @property
    def m(self) -> int:
        return len(self.basis)

    def copy(self) -> "_Tableau":
        return _Tableau([list(r) for r in self.T], list(self.basis))

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        pv = T[r][c]
        if pv != 1:
            T[r] = [x / pv for x in T[r]]
        pr = T[r]
        for i, row in enumerate(T):
            f = row[c]
            if i != r and f != 0:
                T[i] = [x - f * y for x, y in zip(row, pr)]
        self.basis[r] = c

    def set_objective(self, cost: Sequence[Fraction]) -> None:
        width = len(self.T[0])
        obj = list(cost) + [ZERO] * (width - len(cost))
        for i, j in enumerate(self.basis):
            f = obj[j]
            if f != 0:
                obj = [x - f * y for x, y in zip(obj, self.T[i])]
        self.T[-1] = obj

    def minimize(self, allowed: int) -> None:
        """Run Bland's rule over entering columns ``0 .. allowed-1``."""
        T = self.T
        while True:
            obj = T[-1]
            enter = next((j for j in range(allowed) if obj[j] < 0), None)
            if enter is None:
                return
            best = None
            for i in range(self.m):
                a = T[i][enter]
                if a > 0:
                    ratio = T[i][-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded("objective is unbounded below")
            self.pivot(best[1], enter)

    def solution(self, n: int) -> tuple[Fraction, ...]:
        x = [ZERO] * n
        for i, j in enumerate(self.basis):
            if j < n:
                x[j] = self.T[i][-1]
        return tuple(x)


@dataclass(frozen=True)
class Farkas:
    """Multipliers proving ``{x >= 0 : A x = b}`` is empty.

    ``combined = multipliers @ A`` is componentwise nonnegative while
    ``rhs = multipliers @ b`` is negative: for any ``x >= 0`` the combined
    equation reads ``(nonnegative) = rhs``.  When ``combined`` is all zero
    the contradiction is the plain ``0 = rhs``.
    """

    multipliers: tuple[Fraction, ...]
    combined: tuple[Fraction, ...]
    rhs: Fraction

    @property
    def uses_nonnegativity(self) -> bool:
        return any(self.combined)

    def verify(self, A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> bool:
        if len(self.multipliers) != len(A):
            return False
        n = len(A[0]) if A else 0
        combined = [sum((w * row[k] for w, row in zip(self.multipliers, A)), ZERO) for k in range(n)]
        rhs = sum((w * bi for w, bi in zip(self.multipliers, b)), ZERO)
        return (
            tuple(combined) == self.combined
            and rhs == self.rhs
            and all(c >= 0 for c in combined)
            and rhs < 0
        )


def _certificate(A, b, w) -> Farkas:
    n = len(A[0])
    w = tuple(Fraction(x) for x in w)
    combined = tuple(sum((wi * row[k] for wi, row in zip(w, A)), ZERO) for k in range(n))
    rhs = sum((wi * bi for wi, bi in zip(w, b)), ZERO)
    return Farkas(w, combined, rhs)


class Polyhedron:
    """The set ``{x >= 0 : A x = b}`` with exact feasibility and optimisation."""

    def __init__(self, A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
        self.A = [list(map(Fraction, r)) for r in A]
        self.b = list(map(Fraction, b))
        if len(self.A) != len(self.b):
            raise ValueError("A and b disagree on the number of rows")
        self.n = len(self.A[0]) if self.A else 0
        self.elimination = eliminate(self.A, self.b)
        self.certificate: Optional[Farkas] = None
        self._feasible: Optional[_Tableau] = None
        self._phase_one()

    def _phase_one(self) -> None:
        w = self.elimination.inconsistency()
        if w is not None:
            self.certificate = _certificate(self.A, self.b, w)
            return
        A, b, n, m = self.A, self.b, self.n, len(self.A)
        sign = [ONE if bi >= 0 else -ONE for bi in b]
        rows = []
        for i in range(m):
            art = [ONE if k == i else ZERO for k in range(m)]
            rows.append([sign[i] * a for a in A[i]] + art + [sign[i] * b[i]])
        rows.append([ZERO] * (n + m + 1))
        tab = _Tableau(rows, [n + i for i in range(m)])
        tab.set_objective([ZERO] * n + [ONE] * m)
        tab.minimize(n + m)
        value = -tab.T[-1][-1]
        if value > 0:
            obj = tab.T[-1]
            y = [ONE - obj[n + i] for i in range(m)]
            w = [-y[i] * sign[i] for i in range(m)]
            self.certificate = _certificate(A, b, w)
            return
        # Drive artificials out of the basis; drop rows that are redundant.
        i = 0
        while i < tab.m:
            if tab.basis[i] >= n:
                j = next((c for c in range(n) if tab.T[i][c] != 0), None)
                if j is None:
                    del tab.T[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, j)
            i += 1
        width = n + 1
        tab.T = [r[:n] + [r[-1]] for r in tab.T]
        assert all(len(r) == width for r in tab.T)
        self._feasible = tab

    @property
    def feasible(self) -> bool:
        return self._feasible is not None

    def point(self) -> tuple[Fraction, ...]:
        if self._feasible is None:
            raise ValueError("polyhedron is empty")
        return self._feasible.solution(self.n)

    def maximize(self, objective: Sequence[Fraction]) -> tuple[Fraction, tuple[Fraction, ...]]:
        """Return ``(max value, optimal vertex)``."""
        if self._feasible is None:
            raise ValueError("polyhedron is empty")
        tab = self._feasible.copy()
        tab.set_objective([-Fraction(c) for c in objective])
        tab.minimize(self.n)
        return tab.T[-1][-1], tab.solution(self.n)

    def implicit_zeros(self) -> tuple[tuple[int, ...], list[tuple[Fraction, ...]]]:
        """Coordinates forced to zero, plus the distinct vertices found on the way.

        Coordinate ``k`` is implicitly zero iff ``max x_k = 0``.  Every
        maximiser is a basic feasible solution, so the returned vertices
        witness positivity of all other coordinates.
        """
        vertices = [self.point()]
        positive = {k for k, v in enumerate(vertices[0]) if v > 0}
        zeros = []
        for k in range(self.n):
            if k in positive:
                continue
            value, x = self.maximize([ONE if j == k else ZERO for j in range(self.n)])
            if value == 0:
                zeros.append(k)
            else:
                if x not in vertices:
                    vertices.append(x)
                positive.update(j for j, v in enumerate(x) if v > 0)
        return tuple(zeros), vertices

    def dimension(self) -> int:
        """Affine dimension; ``-1`` when empty."""
        return self.analyze()[0]

    def analyze(self) -> tuple[int, Optional[tuple[Fraction, ...]]]:
        """``(dimension, relative-interior point)``; ``(-1, None)`` when empty."""
        if not self.feasible:
            return -1, None
        zeros, vertices = self.implicit_zeros()
        free = [k for k in range(self.n) if k not in zeros]
        sub = [[row[k] for k in free] for row in self.A]
        dim = len(free) - rank(sub)
        if dim == 0:
            return 0, self.point()
        count = len(vertices)
        centroid = tuple(sum((v[k] for v in vertices), ZERO) / count for k in range(self.n))
        return dim, centroid
