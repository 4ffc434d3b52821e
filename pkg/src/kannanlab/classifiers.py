"""Exact minimal coefficients for the multipoint contraction classes.

For a self-map ``T`` and a family of point tuples, each class asks for the
least ``c`` with ``lhs(t) <= c * rhs(t)`` on every tuple.  That least value is
the largest ratio ``lhs / rhs`` over the family, with two conventions:

* ``0 / 0`` imposes no constraint and counts as ratio 0;
* ``positive / 0`` cannot be met by any finite ``c`` and yields
  :data:`INFINITE`.

The three ratio classes are

``kannan``
    pairs ``x != y``: ``d(Tx, Ty) / (d(x, Tx) + d(y, Ty))``, bound ``1/2``;
``npk``
    n-subsets: ``S(Tx_1..Tx_n) / sum d(x_i, Tx_i)``, bound ``(n-1)/n``;
``tpd``
    n-subsets: ``S(Tx_1..Tx_n) / S(x_1..x_n)``, bound ``1``,

where ``S`` is the total pairwise sum (image tuples may repeat points).
Membership is the strict comparison ``min_coefficient < bound``.

Subsets are enumerated in lexicographic order with a running maximum, so the
reported witness is the lexicographically smallest maximiser.  With
``jobs > 1`` the subsets are split by leading index across processes and the
partial maxima are reduced in index order, which yields the same witness.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable, NamedTuple, Sequence

from .exceptions import ContractError, DomainError
from .mappings import SelfMap
from .metric import as_rational, total_pairwise_sum

__all__ = [
    "INFINITE",
    "RULES",
    "ClassificationReport",
    "Verdict",
    "classify_b_kannan",
    "classify_g_kannan",
    "coefficient_calculus",
    "evaluate_ratio",
    "kannan_min_coefficient",
    "npk_min_coefficient",
    "tpd_min_coefficient",
]

INFINITE = math.inf


@dataclass(frozen=True)
class ClassificationReport:
    class_name: str
    n: int
    min_coefficient: Fraction | float
    bound: Fraction
    member: bool
    witness: tuple[int, ...]

    @property
    def finite(self) -> bool:
        return self.min_coefficient != INFINITE


class Verdict(NamedTuple):
    holds: bool
    witness: tuple[int, ...] | None = None


def _bound(class_name: str, n: int) -> Fraction:
    if class_name == "kannan":
        return Fraction(1, 2)
    if class_name == "npk":
        return Fraction(n - 1, n)
    return Fraction(1)


def _context(f: SelfMap):
    dist, _ = f.space.scaled
    t = f.table
    images = tuple(tuple(dist[t[a]][t[b]] for b in range(len(t))) for a in range(len(t)))
    disp = tuple(dist[a][t[a]] for a in range(len(t)))
    return dist, images, disp


def _scan(args):
    """Running max of lhs/rhs over subsets; ``lead`` restricts the first index.

    Returns ``(num, den, witness)`` with ``den == 0`` meaning infinite.
    """
    ctx, class_name, n, size, lead = args
    dist, images, disp = ctx
    if lead is None:
        family = combinations(range(size), n)
    else:
        family = ((lead,) + rest for rest in combinations(range(lead + 1, size), n - 1))
    best_num, best_den, witness = -1, 1, None
    for sub in family:
        pairs = tuple(combinations(sub, 2))
        num = sum(images[a][b] for a, b in pairs)
        if class_name == "tpd":
            den = sum(dist[a][b] for a, b in pairs)
        else:
            den = sum(disp[a] for a in sub)
        if den == 0:
            if num > 0:
                return 1, 0, sub
            num, den = 0, 1
        if num * best_den > best_num * den:
            best_num, best_den, witness = num, den, sub
    return best_num, best_den, witness


def _min_coefficient(f: SelfMap, class_name: str, n: int, jobs: int) -> ClassificationReport:
    size = len(f.table)
    if not 2 <= n <= size:
        raise ValueError(f"tuple size n={n} must satisfy 2 <= n <= {size}")
    ctx = _context(f)
    if jobs <= 1 or size - n < 1:
        num, den, witness = _scan((ctx, class_name, n, size, None))
    else:
        leads = range(size - n + 1)
        tasks = [(ctx, class_name, n, size, lead) for lead in leads]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan, tasks))
        num, den, witness = -1, 1, None
        for p_num, p_den, p_wit in parts:
            if p_wit is None:
                continue
            if p_den == 0:
                num, den, witness = p_num, p_den, p_wit
                break
            if p_num * den > num * p_den:
                num, den, witness = p_num, p_den, p_wit
    coefficient = INFINITE if den == 0 else Fraction(num, den)
    bound = _bound(class_name, n)
    return ClassificationReport(
        class_name=class_name,
        n=n,
        min_coefficient=coefficient,
        bound=bound,
        member=coefficient < bound,
        witness=witness,
    )


def kannan_min_coefficient(f: SelfMap, *, jobs: int = 1) -> ClassificationReport:
    """Least ``lam`` with ``d(Tx, Ty) <= lam (d(x, Tx) + d(y, Ty))`` for all pairs.

    Member iff the result is strictly below ``1/2``.
    """
    return _min_coefficient(f, "kannan", 2, jobs)


def npk_min_coefficient(f: SelfMap, n: int, *, jobs: int = 1) -> ClassificationReport:
    """Least ``lam`` making ``f`` an n-point Kannan-type map.

    Parameters
    ----------
    f : SelfMap
    n : int
        Subset size, ``2 <= n <= |X|``.
    jobs : int, optional
        Worker processes for the subset sweep.

    Returns
    -------
    ClassificationReport
        ``min_coefficient`` is the maximum over pairwise distinct n-subsets
        of ``S(images) / sum of displacements``; ``member`` iff it is
        strictly below ``(n-1)/n``.

    Examples
    --------
    >>> from kannanlab.metric import make_paper_example
    >>> _, f = make_paper_example(4, 10)
    >>> npk_min_coefficient(f, 4).min_coefficient
    Fraction(5, 12)
    """
    return _min_coefficient(f, "npk", n, jobs)


def tpd_min_coefficient(f: SelfMap, n: int, *, jobs: int = 1) -> ClassificationReport:
    """Least ``alpha`` with ``S(Tx_1..Tx_n) <= alpha S(x_1..x_n)`` on n-subsets."""
    return _min_coefficient(f, "tpd", n, jobs)


def evaluate_ratio(f: SelfMap, class_name: str, indices: Sequence[int]) -> Fraction | float:
    """Ratio of one tuple for ``class_name``, computed directly on Fractions."""
    space, t = f.space, f.table
    lhs = total_pairwise_sum(space, [t[i] for i in indices])
    if class_name == "tpd":
        rhs = total_pairwise_sum(space, indices)
    elif class_name in ("npk", "kannan"):
        rhs = sum((space.d(i, t[i]) for i in indices), Fraction(0))
    else:
        raise ValueError(f"unknown class {class_name!r}")
    if rhs == 0:
        return INFINITE if lhs > 0 else Fraction(0)
    return lhs / rhs


def classify_g_kannan(f: SelfMap, n: int, G: Callable[[tuple], object], *,
                      symmetric: bool = False) -> Verdict:
    """Check ``S(Tx_1..Tx_n) <= G(d(x_1, Tx_1), ..., d(x_n, Tx_n))``.

    ``G`` receives one tuple of ``n`` Fractions and must return a
    non-negative rational.  Unless ``symmetric`` is set, every ordering of
    every subset is tried, so position-dependent ``G`` is handled.  Whether
    ``G`` vanishes and is continuous at the origin is the caller's
    responsibility.

    Returns a :class:`Verdict` whose witness is the first violating ordered
    tuple.
    """
    size = len(f.table)
    if not 2 <= n <= size:
        raise ValueError(f"tuple size n={n} must satisfy 2 <= n <= {size}")
    space, t = f.space, f.table
    for sub in combinations(range(size), n):
        lhs = total_pairwise_sum(space, [t[i] for i in sub])
        orderings = (sub,) if symmetric else permutations(sub)
        for order in orderings:
            value = as_rational(G(tuple(space.d(i, t[i]) for i in order)))
            if value < 0:
                raise ContractError(f"G returned a negative value {value} at {order}")
            if lhs > value:
                return Verdict(False, tuple(order))
    return Verdict(True)


def classify_b_kannan(f: SelfMap, n: int, betas: Sequence[Callable]) -> Verdict:
    """Check ``S(Tx_1..Tx_n) <= sum_i beta_i(d(x_i, Tx_i)) d(x_i, Tx_i)``.

    All assignments of subset points to the ``n`` weight positions are
    checked.  The limsup condition on each ``beta_i`` is not checked.
    """
    if len(betas) != n:
        raise ValueError(f"need {n} weight functions, got {len(betas)}")

    def G(ts):
        total = Fraction(0)
        for beta, t in zip(betas, ts):
            w = as_rational(beta(t))
            if w < 0:
                raise ContractError(f"weight function returned {w} at {t}")
            total += w * t
        return total

    return classify_g_kannan(f, n, G)


# rule -> (upper end of the input domain, closed form, strict bound on output)
RULES: dict[str, tuple[Callable, Callable, Callable]] = {
    # Kannan constant lam < 1/n gives an n-point constant (n-1) lam.
    "kannan_to_npk": (lambda n: Fraction(1, n),
                      lambda v, n: (n - 1) * v,
                      lambda n: Fraction(n - 1, n)),
    # n-point constant lam gives a Kannan constant n lam / (2(n-1)); only
    # meaningful when every point is an accumulation point, which no finite
    # space satisfies.
    "npk_to_kannan": (lambda n: Fraction(n - 1, n),
                      lambda v, n: n * v / (2 * (n - 1)),
                      lambda n: Fraction(1, 2)),
    # pairwise-sum constant alpha < 1/(n+1) gives alpha (n-1) / (1 - alpha).
    "tpd_to_npk": (lambda n: Fraction(1, n + 1),
                   lambda v, n: v * (n - 1) / (1 - v),
                   lambda n: Fraction(n - 1, n)),
    # n-point constant lam gives the gap contraction (n-1) lam / (n-1-lam).
    "gap_ratio": (lambda n: Fraction(n - 1, n),
                  lambda v, n: (n - 1) * v / (n - 1 - v),
                  lambda n: Fraction(1)),
}


def coefficient_calculus(value, n: int, rule: str) -> Fraction:
    """Transform a coefficient between classes with an exact closed form.

    ``rule`` is one of ``kannan_to_npk``, ``npk_to_kannan``, ``tpd_to_npk``
    or ``gap_ratio``.  Raises :class:`DomainError` when ``value`` lies
    outside ``[0, upper)`` for the rule.
    """
    try:
        upper, form, target = RULES[rule]
    except KeyError:
        raise ValueError(f"unknown rule {rule!r}; expected one of {sorted(RULES)}") from None
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    v = as_rational(value)
    if not 0 <= v < upper(n):
        raise DomainError(f"{rule} needs 0 <= value < {upper(n)}, got {v}")
    out = form(v, n)
    assert 0 <= out < target(n)
    return out
