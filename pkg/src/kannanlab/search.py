"""Seeded instance generation, separation mining and theorem checks.

Every random draw goes through :func:`numpy.random.default_rng` seeded from
explicit integers, so a :class:`GeneratorConfig` (or a campaign seed plus a
trial index) reproduces its instance exactly.
"""
from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .classifiers import (ClassificationReport, INFINITE, coefficient_calculus,
                          kannan_min_coefficient, npk_min_coefficient,
                          tpd_min_coefficient)
from .iteration import cauchy_certificate, picard
from .mappings import SelfMap, is_asymptotically_regular
from .metric import FiniteMetricSpace, make_paper_example, metric_closure

__all__ = [
    "CLAIMS",
    "CampaignSummary",
    "ClaimVerdict",
    "GeneratorConfig",
    "SeparationWitness",
    "TheoremReport",
    "campaign",
    "generate",
    "mine_separation",
    "trial_config",
    "verify_theorems",
]

SCHEMES = ("range_1_2", "closure", "paper_family")
MAP_SCHEMES = ("uniform_random", "fixed_point_biased")


@dataclass(frozen=True)
class GeneratorConfig:
    """Everything needed to rebuild one random instance.

    ``range_1_2`` draws off-diagonal distances uniformly from the rationals
    ``k / denominator`` in ``[1, 2]``, which satisfy the triangle inequality
    automatically.  ``closure`` draws from ``[1/denominator, 3]`` and repairs
    the matrix by shortest paths.  ``paper_family`` ignores the seed and
    builds E(paper_n, paper_M) with its own map.
    """

    seed: int
    size: int
    scheme: str = "range_1_2"
    map_scheme: str = "uniform_random"
    paper_n: int | None = None
    paper_M: str | None = None
    denominator: int = 840

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> GeneratorConfig:
        return cls(**doc)


def _random_matrix(rng, size: int, lo: int, hi: int, q: int) -> list[list[Fraction]]:
    m = [[Fraction(0)] * size for _ in range(size)]
    for i, j in combinations(range(size), 2):
        v = Fraction(int(rng.integers(lo, hi + 1)), q)
        m[i][j] = m[j][i] = v
    return m


def generate(config: GeneratorConfig) -> tuple[FiniteMetricSpace, SelfMap]:
    if config.scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {config.scheme!r}")
    if config.map_scheme not in MAP_SCHEMES:
        raise ValueError(f"unknown map scheme {config.map_scheme!r}")
    if config.scheme == "paper_family":
        n = config.paper_n if config.paper_n is not None else config.size
        return make_paper_example(n, config.paper_M if config.paper_M is not None else n * (n + 1))
    if config.size < 2:
        raise ValueError("a generated space needs at least two points")
    rng = np.random.default_rng(config.seed)
    q, size = config.denominator, config.size
    if config.scheme == "range_1_2":
        space = FiniteMetricSpace.from_matrix(_random_matrix(rng, size, q, 2 * q, q))
    else:
        space = metric_closure(_random_matrix(rng, size, 1, 3 * q, q))
    if config.map_scheme == "uniform_random":
        table = [int(v) for v in rng.integers(0, size, size)]
    else:
        table = [i if rng.random() < 0.5 else int(rng.integers(0, size)) for i in range(size)]
    return space, SelfMap(space, tuple(table))


@dataclass(frozen=True)
class SeparationWitness:
    space: FiniteMetricSpace
    map: SelfMap
    n: int
    upper: ClassificationReport
    lower: ClassificationReport
    config: GeneratorConfig | None = None


def _separates(f: SelfMap, n: int):
    upper = npk_min_coefficient(f, n)
    if not upper.member:
        return None
    lower = npk_min_coefficient(f, n - 1)
    if lower.member:
        return None
    return upper, lower


def mine_separation(n: int, budget: int, template: GeneratorConfig | None = None, *,
                    include_family: bool = True) -> list[SeparationWitness]:
    """Find maps that are n-point Kannan-type members but not (n-1)-point members.

    For ``n >= 4`` the family E(n, n(n+1)) is always included first (unless
    ``include_family`` is false); ``budget`` further random instances are
    drawn from ``template`` with per-trial seeds.
    """
    if n < 3:
        raise ValueError("separation needs n >= 3")
    found = []
    if include_family and n >= 4:
        cfg = GeneratorConfig(seed=0, size=n, scheme="paper_family", paper_n=n,
                              paper_M=str(n * (n + 1)))
        space, f = generate(cfg)
        reports = _separates(f, n)
        if reports is not None:
            found.append(SeparationWitness(space, f, n, *reports, config=cfg))
    if template is None:
        template = GeneratorConfig(seed=0, size=n + 1, map_scheme="fixed_point_biased")
    for t in range(budget):
        seed = int(np.random.default_rng([template.seed, t]).integers(2**63))
        cfg = replace(template, seed=seed, size=max(template.size, n))
        space, f = generate(cfg)
        reports = _separates(f, n)
        if reports is not None:
            found.append(SeparationWitness(space, f, n, *reports, config=cfg))
    return found


CLAIMS = (
    "fixed_point_existence",
    "prime_period",
    "orbit_sum",
    "unique_fixed_point",
    "asymptotic_regular",
    "asymptotic_regular_any_coefficient",
    "kannan_implies_npk",
    "tpd_implies_npk",
    "gap_decay",
    "cauchy_envelope",
)


@dataclass(frozen=True)
class ClaimVerdict:
    """One implication checked on one instance.

    ``applicable`` is false when the hypothesis fails; the claim then holds
    vacuously.
    """

    claim: str
    applicable: bool
    holds: bool
    detail: str = ""


@dataclass(frozen=True)
class TheoremReport:
    space: FiniteMetricSpace
    map: SelfMap
    n: int
    verdicts: tuple[ClaimVerdict, ...]
    npk: ClassificationReport = field(repr=False, default=None)

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.verdicts)

    @property
    def failures(self) -> list[ClaimVerdict]:
        return [v for v in self.verdicts if not v.holds]

    def __getitem__(self, claim: str) -> ClaimVerdict:
        for v in self.verdicts:
            if v.claim == claim:
                return v
        raise KeyError(claim)


def _subset_sum(values: Sequence[int], target: int) -> tuple[int, ...] | None:
    """Indices of a sub-multiset of ``values`` summing to ``target``, if any."""
    reach: dict[int, tuple[int, ...]] = {0: ()}
    for i, v in enumerate(values):
        for s, idx in list(reach.items()):
            if s + v <= target and s + v not in reach:
                reach[s + v] = idx + (i,)
    return reach.get(target)


def verify_theorems(space: FiniteMetricSpace, f: SelfMap, n: int) -> TheoremReport:
    """Evaluate every implication of the fixed-point theory on one instance.

    See :data:`CLAIMS` for the claim identifiers.  The uniqueness claim uses
    its literal hypothesis, a Picard sequence converging to a fixed point it
    never visits, which no finite-space trace can meet.
    """
    if f.space != space:
        raise ValueError("map is defined on a different space")
    if not 2 <= n <= space.size:
        raise ValueError(f"n={n} must satisfy 2 <= n <= {space.size}")
    orbits = f.orbits
    fixed = orbits.fixed_points
    periods = orbits.periods
    npk = npk_min_coefficient(f, n)
    lam = npk.min_coefficient
    small = sorted({p for p in periods if 2 <= p <= n - 1})
    at_most = 0 < len(fixed) <= n - 1
    out = []

    def add(claim, applicable, holds, detail=""):
        out.append(ClaimVerdict(claim, applicable, holds or not applicable, detail))

    main_hyp = npk.member and not small
    add("fixed_point_existence", main_hyp, at_most,
        f"{len(fixed)} fixed points for n={n}, npk coefficient {lam}")

    add("prime_period", npk.member, min(periods) <= n - 1,
        f"cycle periods {sorted(periods)}")

    picked = _subset_sum(periods, n)
    add("orbit_sum", npk.member, picked is None,
        "" if picked is None else
        f"disjoint cycles with periods {[periods[i] for i in picked]} sum to {n}")

    traces = [picard(f, x, space.size + 1) for x in range(space.size)]
    literal = [tr for tr in traces if tr.termination.kind == "fixed_point"
               and tr.termination.point not in tr.points]
    add("unique_fixed_point", main_hyp and bool(literal), len(fixed) == 1,
        f"fixed points {sorted(fixed)}")

    regular = is_asymptotically_regular(f)
    add("asymptotic_regular", regular and lam < 1, at_most,
        f"{len(fixed)} fixed points, coefficient {lam}")
    add("asymptotic_regular_any_coefficient", regular and lam != INFINITE, at_most,
        f"{len(fixed)} fixed points, coefficient {lam}")

    kannan = kannan_min_coefficient(f).min_coefficient
    if kannan < Fraction(1, n):
        bound = coefficient_calculus(kannan, n, "kannan_to_npk")
        add("kannan_implies_npk", True, npk.member and lam <= bound,
            f"npk {lam} vs (n-1) * kannan {bound}")
    else:
        add("kannan_implies_npk", False, True)

    alpha = tpd_min_coefficient(f, n).min_coefficient
    if alpha < Fraction(1, n + 1):
        bound = coefficient_calculus(alpha, n, "tpd_to_npk")
        add("tpd_implies_npk", True, npk.member and lam <= bound,
            f"npk {lam} vs transformed pairwise-sum coefficient {bound}")
    else:
        add("tpd_implies_npk", False, True)

    if npk.member:
        certs = [cauchy_certificate(tr, n, lam) for tr in traces]
        bad = [x for x, c in enumerate(certs) if not c.gap_ok]
        add("gap_decay", True, not bad, f"starts violating the decay ratio: {bad}")
        bad = [x for x, c in enumerate(certs) if not c.holds]
        add("cauchy_envelope", not small, not bad, f"starts violating the envelope: {bad}")
    else:
        add("gap_decay", False, True)
        add("cauchy_envelope", False, True)

    return TheoremReport(space, f, n, tuple(out), npk)


def trial_config(seed: int, trial: int, sizes: tuple[int, int],
                 n_values: tuple[int, int]) -> tuple[GeneratorConfig, int]:
    """Derive the instance and window size of one campaign trial.

    Schemes alternate with the trial index and map schemes with every
    second trial, so both metric generators and both map generators are
    exercised equally.
    """
    rng = np.random.default_rng([seed, trial])
    size = int(rng.integers(sizes[0], sizes[1] + 1))
    hi = min(n_values[1], size)
    if n_values[0] > hi:
        raise ValueError(f"no n in {n_values} fits a space of size {size}")
    n = int(rng.integers(n_values[0], hi + 1))
    cfg = GeneratorConfig(
        seed=int(rng.integers(2**63)),
        size=size,
        scheme=("range_1_2", "closure")[trial % 2],
        map_scheme=MAP_SCHEMES[(trial // 2) % 2],
    )
    return cfg, n


def replay_command(config: GeneratorConfig, n: int) -> str:
    doc = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return f"kannanlab verify --replay '{doc}' --n {n}"


@dataclass
class CampaignSummary:
    """Aggregate of a campaign.

    ``counts[claim]`` maps ``checked``, ``held`` and ``failed`` to totals,
    where ``checked`` counts trials whose hypothesis was met.
    """

    trials: int
    seed: int
    sizes: tuple[int, int]
    n_values: tuple[int, int]
    counts: dict[str, dict[str, int]]
    npk_members: int
    failures: list[dict]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "sizes": list(self.sizes),
            "n_values": list(self.n_values),
            "npk_members": self.npk_members,
            "claims": self.counts,
            "failures": self.failures,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _run_trials(args):
    seed, indices, sizes, n_values = args
    rows = []
    for t in indices:
        cfg, n = trial_config(seed, t, sizes, n_values)
        space, f = generate(cfg)
        report = verify_theorems(space, f, n)
        rows.append((t, cfg, n, report.npk.member,
                     [(v.claim, v.applicable, v.holds, v.detail) for v in report.verdicts]))
    return rows


def campaign(trials: int, sizes: tuple[int, int] = (3, 7), n_values: tuple[int, int] = (2, 5),
             seed: int = 7, *, jobs: int = 1) -> CampaignSummary:
    """Run :func:`verify_theorems` on ``trials`` generated instances.

    The summary depends only on the arguments other than ``jobs``.
    """
    if trials < 1:
        raise ValueError("a campaign needs at least one trial")
    sizes, n_values = tuple(sizes), tuple(n_values)
    if jobs <= 1:
        rows = _run_trials((seed, range(trials), sizes, n_values))
    else:
        chunks = [range(k, trials, jobs) for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_run_trials, [(seed, c, sizes, n_values) for c in chunks])
            rows = sorted((r for part in parts for r in part), key=lambda r: r[0])
    counts = {c: Counter(checked=0, held=0, failed=0) for c in CLAIMS}
    failures = []
    members = 0
    for t, cfg, n, member, verdicts in rows:
        members += member
        for claim, applicable, holds, detail in verdicts:
            c = counts[claim]
            c["checked"] += applicable
            c["held"] += applicable and holds
            if not holds:
                c["failed"] += 1
                failures.append({
                    "trial": t,
                    "claim": claim,
                    "n": n,
                    "detail": detail,
                    "config": cfg.to_dict(),
                    "replay": replay_command(cfg, n),
                })
    return CampaignSummary(trials, seed, sizes, n_values,
                           {c: dict(v) for c, v in counts.items()}, members, failures)
