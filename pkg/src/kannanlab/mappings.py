"""Self-maps of finite metric spaces and their orbit structure.

A finite space is discrete, so every self-map is continuous; continuity
hypotheses on maps are therefore vacuous here and are never checked.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .metric import FiniteMetricSpace

__all__ = [
    "Cycle",
    "OrbitAnalysis",
    "SelfMap",
    "constant_map",
    "fixed_points",
    "identity_map",
    "is_asymptotically_regular",
    "orbit",
    "periodic_points",
]


@dataclass(frozen=True)
class Cycle:
    """A periodic orbit, rotated so that its smallest index comes first."""

    points: tuple[int, ...]

    @property
    def period(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class OrbitAnalysis:
    """Fixed points, cycles and per-start tails of a self-map.

    ``tails[x]`` is ``(pre-period length, index into cycles)`` for start
    ``x``.
    """

    fixed_points: frozenset[int]
    cycles: tuple[Cycle, ...]
    tails: tuple[tuple[int, int], ...]

    @property
    def periods(self) -> tuple[int, ...]:
        return tuple(c.period for c in self.cycles)


@dataclass(frozen=True)
class SelfMap:
    """A total function ``space -> space`` stored as an index table."""

    space: FiniteMetricSpace
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(t) for t in self.table)
        size = self.space.size
        if len(table) != size:
            raise ValueError(f"map table has {len(table)} entries for {size} points")
        bad = [t for t in table if not 0 <= t < size]
        if bad:
            raise ValueError(f"map images out of range: {bad}")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_labels(cls, space: FiniteMetricSpace, images: Mapping[str, str]) -> SelfMap:
        missing = [p for p in space.points if p not in images]
        if missing:
            raise ValueError(f"map has no image for {missing}")
        extra = set(images) - set(space.points)
        if extra:
            raise ValueError(f"map mentions unknown points {sorted(extra)}")
        return cls(space, tuple(space.index(images[p]) for p in space.points))

    def __call__(self, i: int) -> int:
        return self.table[i]

    def __len__(self) -> int:
        return len(self.table)

    def labelled(self) -> list[tuple[str, str]]:
        pts = self.space.points
        return [(pts[i], pts[t]) for i, t in enumerate(self.table)]

    def permuted(self, perm: Sequence[int]) -> SelfMap:
        """Relabel consistently with :meth:`FiniteMetricSpace.permuted`."""
        inverse = {old: new for new, old in enumerate(perm)}
        return SelfMap(self.space.permuted(perm),
                       tuple(inverse[self.table[old]] for old in perm))

    @cached_property
    def orbits(self) -> OrbitAnalysis:
        return _analyse(self)


def identity_map(space: FiniteMetricSpace) -> SelfMap:
    return SelfMap(space, tuple(range(space.size)))


def constant_map(space: FiniteMetricSpace, target: int = 0) -> SelfMap:
    return SelfMap(space, (target,) * space.size)


def orbit(f: SelfMap, start: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split the forward orbit of ``start`` into its tail and its cycle.

    ``tail + cycle`` is the longest repetition-free prefix of
    ``start, f(start), f(f(start)), ...``; the cycle begins at the first
    point that is visited twice.
    """
    if not 0 <= start < len(f.table):
        raise IndexError(f"start {start} out of range")
    seen: dict[int, int] = {}
    path: list[int] = []
    x = start
    while x not in seen:
        seen[x] = len(path)
        path.append(x)
        x = f.table[x]
    entry = seen[x]
    return tuple(path[:entry]), tuple(path[entry:])


def _analyse(f: SelfMap) -> OrbitAnalysis:
    cycles: dict[tuple[int, ...], int] = {}
    tails = []
    for start in range(len(f.table)):
        tail, cyc = orbit(f, start)
        k = cyc.index(min(cyc))
        key = cyc[k:] + cyc[:k]
        idx = cycles.setdefault(key, len(cycles))
        tails.append((len(tail), idx))
    # renumber cycles in order of their smallest point
    order = sorted(cycles, key=lambda c: c[0])
    renumber = {cycles[c]: i for i, c in enumerate(order)}
    fixed = frozenset(i for i, t in enumerate(f.table) if i == t)
    return OrbitAnalysis(
        fixed_points=fixed,
        cycles=tuple(Cycle(c) for c in order),
        tails=tuple((length, renumber[idx]) for length, idx in tails),
    )


def fixed_points(f: SelfMap) -> frozenset[int]:
    return f.orbits.fixed_points


def periodic_points(f: SelfMap) -> dict[int, frozenset[int]]:
    """Group every point lying on a cycle by its prime period."""
    groups: dict[int, set[int]] = {}
    for c in f.orbits.cycles:
        groups.setdefault(c.period, set()).update(c.points)
    return {p: frozenset(groups[p]) for p in sorted(groups)}


def is_asymptotically_regular(f: SelfMap) -> bool:
    """Consecutive-iterate distances tend to zero from every start.

    On a finite space the gap sequence is eventually periodic, so it tends
    to zero exactly when every orbit ends in a fixed point.
    """
    return all(c.period == 1 for c in f.orbits.cycles)
