"""Finite metric spaces with exact rational distances.

All distances are held as :class:`fractions.Fraction`.  Computations that
sweep many tuples work on an integer copy of the matrix scaled by the common
denominator (see :attr:`FiniteMetricSpace.scaled`); every quantity this
package compares is homogeneous of degree one in the distances, so ratios and
inequalities are unchanged by the scaling.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .exceptions import StructureError

__all__ = [
    "FiniteMetricSpace",
    "ValidationReport",
    "Violation",
    "as_rational",
    "default_labels",
    "is_ultrametric",
    "make_paper_example",
    "metric_closure",
    "total_pairwise_sum",
    "validate_metric",
]


def as_rational(value) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Accepts integers, rationals and strings such as ``"3"`` or ``"5/12"``.
    Floats are rejected: their binary expansion is rarely the number the
    caller meant.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not distances")
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ValueError(f"not a rational literal: {value!r}") from None
    if isinstance(value, numbers.Integral):  # numpy integers
        return Fraction(int(value))
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def default_labels(size: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, size + 1))


def _square(matrix) -> list[list[Fraction]]:
    rows = [list(row) for row in matrix]
    size = len(rows)
    for row in rows:
        if len(row) != size:
            raise StructureError(
                f"distance matrix is not square: {size} rows, a row of length {len(row)}")
    return [[as_rational(v) for v in row] for row in rows]


def _scale(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    denom = 1
    for row in rows:
        for v in row:
            denom = math.lcm(denom, v.denominator)
    return [[v.numerator * (denom // v.denominator) for v in row] for row in rows], denom


@dataclass(frozen=True)
class Violation:
    """One failed metric axiom.

    ``witness`` holds 0-based indices: ``(i,)`` for the diagonal, ``(i, j)``
    for symmetry and positivity, ``(i, j, k)`` when
    ``d(i, k) > d(i, j) + d(j, k)``.
    """

    axiom: str
    witness: tuple[int, ...]


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def validate_metric(matrix) -> ValidationReport:
    """Check every metric axiom and collect all violations with witnesses.

    Parameters
    ----------
    matrix : sequence of sequences
        Square matrix of exact rationals (ints, Fractions or ``"p/q"``
        strings).

    Returns
    -------
    ValidationReport
        ``valid`` is true iff no violation was found.

    Raises
    ------
    StructureError
        If ``matrix`` is not square.
    """
    rows, _ = _scale(_square(matrix))
    size = len(rows)
    found: list[Violation] = []
    for i in range(size):
        if rows[i][i] != 0:
            found.append(Violation("zero_diagonal", (i,)))
    for i, j in combinations(range(size), 2):
        if rows[i][j] != rows[j][i]:
            found.append(Violation("symmetry", (i, j)))
    for i in range(size):
        for j in range(size):
            if i != j and rows[i][j] <= 0:
                found.append(Violation("positivity", (i, j)))
    for i in range(size):
        ri = rows[i]
        for j in range(size):
            rij = ri[j]
            rj = rows[j]
            for k in range(size):
                if ri[k] > rij + rj[k]:
                    found.append(Violation("triangle", (i, j, k)))
    return ValidationReport(tuple(found))


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A labelled finite point set with an exact distance matrix.

    Construction validates the metric axioms and raises
    :class:`StructureError` (carrying the report as ``args[1]``) on failure.
    Labels are opaque; all computation is by index.
    """

    points: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = _square(self.dist)
        points = tuple(str(p) for p in self.points)
        if len(points) != len(rows):
            raise StructureError(
                f"{len(points)} labels for a {len(rows)}x{len(rows)} matrix")
        if len(set(points)) != len(points):
            raise StructureError("point labels must be unique")
        report = validate_metric(rows)
        if not report.valid:
            first = report.violations[0]
            raise StructureError(
                f"not a metric: {first.axiom} violated at {first.witness}", report)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "dist", tuple(tuple(r) for r in rows))

    @classmethod
    def from_matrix(cls, matrix, points: Iterable[str] | None = None) -> FiniteMetricSpace:
        rows = _square(matrix)
        labels = default_labels(len(rows)) if points is None else tuple(points)
        return cls(labels, tuple(tuple(r) for r in rows))

    @property
    def size(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def index(self, label: str) -> int:
        try:
            return self.points.index(label)
        except ValueError:
            raise KeyError(f"unknown point label {label!r}") from None

    @cached_property
    def scaled(self) -> tuple[tuple[tuple[int, ...], ...], int]:
        """Integer distance matrix and the denominator it was scaled by."""
        rows, denom = _scale(self.dist)
        return tuple(tuple(r) for r in rows), denom

    def permuted(self, perm: Sequence[int]) -> FiniteMetricSpace:
        """Return the space with point ``perm[i]`` moved to position ``i``."""
        return FiniteMetricSpace(
            tuple(self.points[p] for p in perm),
            tuple(tuple(self.dist[p][q] for q in perm) for p in perm))


def is_ultrametric(space: FiniteMetricSpace) -> bool:
    """True iff ``d(i, k) <= max(d(i, j), d(j, k))`` for every triple."""
    rows, _ = space.scaled
    n = space.size
    return all(rows[i][k] <= max(rows[i][j], rows[j][k])
               for i in range(n) for j in range(n) for k in range(n))


def total_pairwise_sum(space: FiniteMetricSpace, indices: Sequence[int]) -> Fraction:
    """Sum of ``d(x_i, x_j)`` over all index pairs ``i < j`` of the tuple.

    Repeated points are allowed and contribute zero to each other, so an
    image tuple that collapses points can be passed as-is.
    """
    if len(indices) < 2:
        raise ValueError("the pairwise sum needs a tuple of at least two points")
    return sum((space.dist[a][b] for a, b in combinations(indices, 2)), Fraction(0))


def metric_closure(raw, points: Iterable[str] | None = None) -> FiniteMetricSpace:
    """Repair a symmetric positive matrix into a metric by shortest paths.

    Every entry is replaced by the length of the shortest path between its
    endpoints (Floyd-Warshall, exact arithmetic).  Entries never increase,
    and a matrix that already is a metric comes back unchanged.

    Raises
    ------
    StructureError
        If the matrix is not square, not symmetric, has a non-zero diagonal
        or a non-positive off-diagonal entry.
    """
    rows = _square(raw)
    size = len(rows)
    for i in range(size):
        if rows[i][i] != 0:
            raise StructureError(f"non-zero diagonal entry at {i}")
        for j in range(size):
            if i != j and rows[i][j] <= 0:
                raise StructureError(
                    f"entry ({i}, {j}) is not positive; closure would merge points")
            if rows[i][j] != rows[j][i]:
                raise StructureError(f"matrix is not symmetric at ({i}, {j})")
    dist, denom = _scale(rows)
    for k in range(size):
        dk = dist[k]
        for i in range(size):
            di = dist[i]
            dik = di[k]
            for j in range(size):
                via = dik + dk[j]
                if via < di[j]:
                    di[j] = via
    closed = [[Fraction(v, denom) for v in row] for row in dist]
    return FiniteMetricSpace.from_matrix(closed, points)


def make_paper_example(n: int, M) -> tuple[FiniteMetricSpace, "SelfMap"]:
    """Build the ultrametric family E(n, M) and its shift-and-stall map.

    Points ``x1..x(n-1)`` sit at mutual distance 1 and ``xn`` sits at
    distance ``M`` from all of them.  The map sends ``x_i -> x_(i+1)`` for
    ``i <= n-2``, fixes ``x_(n-1)`` and sends ``x_n -> x_1``.

    The map is an n-point Kannan-type member for large ``M`` but never an
    (n-1)-point member when ``n >= 4``.
    """
    from .mappings import SelfMap

    M = as_rational(M)
    if n < 3:
        raise ValueError(f"E(n, M) needs n >= 3, got {n}")
    if M <= 1:
        raise ValueError(f"E(n, M) needs M > 1, got {M}")
    dist = [[Fraction(0) if i == j else (M if max(i, j) == n - 1 else Fraction(1))
             for j in range(n)] for i in range(n)]
    space = FiniteMetricSpace.from_matrix(dist)
    table = [i + 1 for i in range(n - 2)] + [n - 2, 0]
    return space, SelfMap(space, tuple(table))
