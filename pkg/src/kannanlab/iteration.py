"""Picard iteration and gap-sequence decay checks.

Along a trace ``x_0, x_1 = T x_0, ...`` the gaps are ``p_m = d(x_m, x_{m+1})``.
The decay condition with window ``n`` and ratio ``rho`` asks, for every
``m >= n-1``, that

    p_m <= rho * max(p_{m-n+1}, ..., p_{m-1}),

and it implies the envelope ``p_m <= rho ** ((m-n+2)/(n-1)) * P`` with
``P = max(p_0, ..., p_{n-2})``.  The envelope is checked exactly by raising
both sides to the power ``n-1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from .classifiers import INFINITE, coefficient_calculus
from .exceptions import DomainError
from .mappings import SelfMap
from .metric import as_rational

__all__ = [
    "CauchyCertificate",
    "EnvelopeCheck",
    "GapAnalysis",
    "IterationTrace",
    "Termination",
    "cauchy_certificate",
    "distinct_windows",
    "envelope_check",
    "gap_condition",
    "picard",
]


@dataclass(frozen=True)
class Termination:
    """Why a trace stopped.

    ``kind`` is ``"fixed_point"`` (``point`` reached at ``step``),
    ``"cycle"`` (first revisit; the cycle is entered at ``step`` and has
    prime ``period``) or ``"budget_exhausted"``.
    """

    kind: str
    step: int | None = None
    point: int | None = None
    period: int | None = None


@dataclass(frozen=True)
class IterationTrace:
    points: tuple[int, ...]
    gaps: tuple[Fraction, ...]
    termination: Termination

    def extended(self, length: int) -> IterationTrace:
        """Continue a terminated trace to at least ``length`` gaps.

        The continuation is exact: a fixed point repeats forever and a cycle
        repeats with its period.
        """
        points, gaps = list(self.points), list(self.gaps)
        term = self.termination
        if len(gaps) >= length:
            return self
        if term.kind == "budget_exhausted":
            raise ValueError("cannot extend a trace that stopped on its step budget")
        if term.kind == "fixed_point":
            points += [term.point] * (length - len(gaps))
            gaps += [Fraction(0)] * (length - len(gaps))
        else:
            cyc_points = points[term.step:-1]
            cyc_gaps = gaps[term.step:]
            k = 0
            while len(gaps) < length:
                gaps.append(cyc_gaps[k % term.period])
                points.append(cyc_points[(k + 1) % term.period])
                k += 1
        return IterationTrace(tuple(points), tuple(gaps), term)


def picard(f: SelfMap, start: int, max_steps: int) -> IterationTrace:
    """Iterate ``f`` from ``start`` until a fixed point, a revisit or the budget.

    Every application of ``f`` is recorded, so a trace ending at a fixed
    point carries one final zero gap.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    dist = f.space.dist
    points = [start]
    gaps: list[Fraction] = []
    seen = {start: 0}
    term = Termination("budget_exhausted")
    for _ in range(max_steps):
        x = points[-1]
        y = f.table[x]
        points.append(y)
        gaps.append(dist[x][y])
        if y == x:
            term = Termination("fixed_point", step=len(points) - 2, point=y)
            break
        if y in seen:
            entry = seen[y]
            term = Termination("cycle", step=entry, period=len(points) - 1 - entry)
            break
        seen[y] = len(points) - 1
    return IterationTrace(tuple(points), tuple(gaps), term)


@dataclass(frozen=True)
class GapAnalysis:
    n: int
    rho_min: Fraction | float
    P: Fraction
    envelope_ok: bool


class EnvelopeCheck(NamedTuple):
    holds: bool
    first_violation: int | None = None


def distinct_windows(points: Sequence[int], n: int, length: int) -> list[bool]:
    """``out[m]`` is true when ``points[m-n+1 .. m]`` are pairwise distinct."""
    out = []
    for m in range(length):
        lo = m - n + 1
        out.append(lo >= 0 and len(set(points[lo:m + 1])) == n)
    return out


def gap_condition(gaps: Sequence, n: int, active: Sequence[bool] | None = None) -> GapAnalysis:
    """Smallest ``rho`` satisfying the windowed decay condition on ``gaps``.

    Parameters
    ----------
    gaps : sequence of rationals
        At least ``n`` entries.
    n : int
        Window parameter; each gap from index ``n-1`` on is compared with
        the maximum of the ``n-1`` gaps before it.
    active : sequence of bool, optional
        Restricts the constraints to indices where ``active[m]`` holds.

    Returns
    -------
    GapAnalysis
        ``rho_min`` is :data:`INFINITE` when a positive gap follows a window
        of zeros.  ``envelope_ok`` reports :func:`envelope_check` at
        ``rho_min`` and is false whenever ``rho_min >= 1``.
    """
    gaps = [as_rational(g) for g in gaps]
    if n < 2:
        raise ValueError("window parameter n must be at least 2")
    if len(gaps) < n:
        raise ValueError(f"need at least n={n} gaps, got {len(gaps)}")
    P = max(gaps[:n - 1])
    num, den = Fraction(0), Fraction(1)
    for m in range(n - 1, len(gaps)):
        if active is not None and not active[m]:
            continue
        prev = max(gaps[m - n + 1:m])
        if prev == 0:
            if gaps[m] > 0:
                return GapAnalysis(n, INFINITE, P, False)
            continue
        if gaps[m] * den > num * prev:
            num, den = gaps[m], prev
    rho_min = num / den
    ok = rho_min < 1 and envelope_check(gaps, n, rho_min, P).holds
    return GapAnalysis(n, rho_min, P, ok)


def _envelope_scan(stream: Iterable[tuple[int, Fraction]], n: int, rho: Fraction,
                   P: Fraction) -> EnvelopeCheck:
    scale = P ** (n - 1)
    power = rho  # rho ** (m - n + 2) at m = n - 1
    for m, p in stream:
        if m < n - 1:
            continue
        if p ** (n - 1) > power * scale:
            return EnvelopeCheck(False, m)
        power *= rho
    return EnvelopeCheck(True)


def envelope_check(gaps: Sequence, n: int, rho, P) -> EnvelopeCheck:
    """Verify ``p_m <= rho ** ((m-n+2)/(n-1)) * P`` for every ``m >= n-1``.

    The comparison is ``p_m ** (n-1) <= rho ** (m-n+2) * P ** (n-1)``, exact
    in rational arithmetic.
    """
    rho, P = as_rational(rho), as_rational(P)
    if not 0 <= rho < 1:
        raise DomainError(f"envelope ratio must lie in [0, 1), got {rho}")
    if n < 2:
        raise ValueError("window parameter n must be at least 2")
    if len(gaps) < n:
        raise ValueError(f"need at least n={n} gaps, got {len(gaps)}")
    return _envelope_scan(enumerate(as_rational(g) for g in gaps), n, rho, P)


@dataclass(frozen=True)
class CauchyCertificate:
    """Outcome of checking one trace against the predicted gap decay.

    ``rho`` is the decay ratio implied by the coefficient; ``analysis`` is
    :func:`gap_condition` restricted to windows of ``n`` distinct iterates;
    ``envelope`` is checked on the whole (infinite, eventually periodic)
    gap sequence.
    """

    n: int
    lam: Fraction
    rho: Fraction
    analysis: GapAnalysis
    gap_ok: bool
    envelope: EnvelopeCheck

    @property
    def holds(self) -> bool:
        return self.gap_ok and self.envelope.holds

    def tail_bound(self, m: int | None = None) -> float:
        """Bound on ``d(x_m, x_(m+k))`` for all ``k``; irrational, so a float.

        Informational only; the bound is not claimed to be tight.
        """
        n, rho, P = self.n, self.rho, self.analysis.P
        m = n - 1 if m is None else m
        if m < n - 1:
            raise ValueError(f"the bound applies from m = {n - 1}")
        root = float(rho) ** (1 / (n - 1))
        return float(P) * root ** (m - n + 2) / (1 - root)


def _periodic_gaps(trace: IterationTrace) -> Iterator[tuple[int, Fraction]]:
    term = trace.termination
    head = trace.gaps
    cyc = trace.gaps[term.step:]
    return enumerate(itertools.chain(head, itertools.cycle(cyc)))


def cauchy_certificate(trace: IterationTrace, n: int, lam) -> CauchyCertificate:
    """Check a Picard trace against the decay predicted by an n-point coefficient.

    ``lam`` must satisfy ``0 <= lam < (n-1)/n``; the predicted ratio is
    ``rho = (n-1) lam / (n-1-lam)``.  The decay condition is enforced only on
    windows of ``n`` pairwise distinct consecutive iterates, where the
    n-point inequality applies.  A trace ending in a cycle of length >= 2
    keeps a positive periodic gap and can never satisfy the envelope; the
    reported violation index is the first one on the continued sequence.
    """
    lam = as_rational(lam)
    rho = coefficient_calculus(lam, n, "gap_ratio")
    term = trace.termination
    period = term.period or 1
    length = len(trace.gaps) + n + period
    full = trace.extended(length)
    active = distinct_windows(full.points, n, len(full.gaps))
    analysis = gap_condition(full.gaps, n, active)
    gap_ok = analysis.rho_min <= rho
    if term.kind == "cycle":
        envelope = _envelope_scan(_periodic_gaps(trace), n, rho, analysis.P)
    else:
        envelope = envelope_check(full.gaps, n, rho, analysis.P)
    return CauchyCertificate(n, lam, rho, analysis, gap_ok, envelope)
