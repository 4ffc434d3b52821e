import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kannanlab import (FiniteMetricSpace, GeneratorConfig, SelfMap, campaign, fixed_points,
                       generate, identity_map, make_paper_example, mine_separation,
                       npk_min_coefficient, picard, validate_metric, verify_theorems)
from kannanlab.search import CLAIMS, _subset_sum, trial_config

from conftest import maps


def test_generate_range_scheme():
    space, f = generate(GeneratorConfig(seed=42, size=5))
    assert validate_metric(space.dist).valid
    off = [space.d(i, j) for i in range(5) for j in range(5) if i != j]
    assert all(1 <= v <= 2 for v in off)
    assert all(v.denominator <= 840 and 840 % v.denominator == 0 for v in off)


def test_generate_closure_and_biased_maps():
    for seed in range(20):
        space, f = generate(GeneratorConfig(seed=seed, size=6, scheme="closure",
                                            map_scheme="fixed_point_biased"))
        assert validate_metric(space.dist).valid


def test_generate_example_family():
    cfg = GeneratorConfig(seed=0, size=4, scheme="paper_family", paper_n=4, paper_M="10")
    assert generate(cfg) == make_paper_example(4, 10)


@given(st.integers(0, 2**63 - 1), st.integers(2, 7), st.sampled_from(["range_1_2", "closure"]),
       st.sampled_from(["uniform_random", "fixed_point_biased"]))
def test_generate_is_deterministic(seed, size, scheme, map_scheme):
    cfg = GeneratorConfig(seed=seed, size=size, scheme=scheme, map_scheme=map_scheme)
    assert generate(cfg) == generate(cfg)
    assert GeneratorConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_generate_rejects_bad_config():
    with pytest.raises(ValueError):
        generate(GeneratorConfig(seed=1, size=1))
    with pytest.raises(ValueError):
        generate(GeneratorConfig(seed=1, size=3, scheme="gaussian"))


def test_separation_example_family():
    found = mine_separation(4, 0)
    assert len(found) == 1
    w = found[0]
    assert w.upper.member and not w.lower.member
    assert w.space == make_paper_example(4, 20)[0]


def test_separation_m10_directly():
    _, f = make_paper_example(4, 10)
    assert npk_min_coefficient(f, 4).min_coefficient == Fraction(5, 12)
    assert npk_min_coefficient(f, 3).min_coefficient >= Fraction(2, 3)


def test_separation_empty_without_family():
    assert mine_separation(3, 0, include_family=False) == []
    with pytest.raises(ValueError):
        mine_separation(2, 10)


def test_separation_witnesses_reverify():
    found = mine_separation(3, 300, GeneratorConfig(seed=5, size=4, map_scheme="fixed_point_biased"))
    assert found, "expected at least one random 3-vs-2 separation in 300 draws"
    for w in found:
        space, f = generate(w.config)
        assert npk_min_coefficient(f, 3).member
        assert not npk_min_coefficient(f, 2).member


def test_verify_worked_example(e4):
    space, f = e4
    report = verify_theorems(space, f, 4)
    assert report.holds
    assert [v.claim for v in report.verdicts] == list(CLAIMS)
    main = report["fixed_point_existence"]
    assert main.applicable and main.holds
    assert fixed_points(f) == {2}


def test_verify_vacuous_cases(equilateral3):
    swap = SelfMap(FiniteMetricSpace.from_matrix([[0, 1], [1, 0]]), (1, 0))
    report = verify_theorems(swap.space, swap, 2)
    assert not report.npk.member and report.holds
    assert not report["fixed_point_existence"].applicable
    f = identity_map(equilateral3)
    report = verify_theorems(equilateral3, f, 3)
    assert not report.npk.member and report.holds
    assert not report["prime_period"].applicable


def test_relaxed_uniqueness_reading_is_false():
    # a trace that reaches a fixed point it never visited before does not force uniqueness
    space = FiniteMetricSpace.from_matrix([[0, 1, 4], [1, 0, "7/2"], [4, "7/2", 0]], "abc")
    f = SelfMap(space, (0, 1, 0))
    r = npk_min_coefficient(f, 3)
    assert r.member and r.min_coefficient == Fraction(1, 2)
    assert not any(2 <= p for p in f.orbits.periods)
    tr = picard(f, 2, 5)
    assert tr.termination.point == 0 and 0 not in tr.points[:tr.termination.step]
    assert fixed_points(f) == {0, 1}
    report = verify_theorems(space, f, 3)
    assert report.holds and not report["unique_fixed_point"].applicable


def test_subset_sum():
    assert _subset_sum([3, 1, 2], 3) in ((0,), (1, 2))
    assert _subset_sum([4, 5], 3) is None
    assert _subset_sum([1, 1, 1], 3) == (0, 1, 2)


@given(maps(min_size=2, max_size=6), st.data())
def test_invariant_cycles_block_membership(f, data):
    # n points forming a union of whole cycles can never satisfy the n-point condition
    periods = f.orbits.periods
    subset = data.draw(st.lists(st.integers(0, len(periods) - 1), unique=True, min_size=1))
    n = sum(periods[i] for i in subset)
    if n >= 2:
        assert not npk_min_coefficient(f, n).member


@given(maps(min_size=2, max_size=6), st.data())
def test_verify_theorems_holds(f, data):
    n = data.draw(st.integers(2, len(f)))
    report = verify_theorems(f.space, f, n)
    assert report.holds, report.failures


def test_campaign_small_and_deterministic():
    a = campaign(200, (3, 6), (2, 4), seed=11)
    b = campaign(200, (3, 6), (2, 4), seed=11)
    assert a.to_json() == b.to_json()
    assert a.ok
    assert a.to_json() != campaign(200, (3, 6), (2, 4), seed=12).to_json()


def test_campaign_single_trial_matches_verify():
    summary = campaign(1, (3, 7), (2, 5), seed=3)
    cfg, n = trial_config(3, 0, (3, 7), (2, 5))
    space, f = generate(cfg)
    report = verify_theorems(space, f, n)
    for v in report.verdicts:
        assert summary.counts[v.claim]["checked"] == int(v.applicable)


def test_campaign_parallel_matches_serial():
    assert campaign(60, seed=2, jobs=2).to_json() == campaign(60, seed=2).to_json()


def test_campaign_needs_trials():
    with pytest.raises(ValueError):
        campaign(0)
