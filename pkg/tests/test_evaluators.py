import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import C_OPT, COST_OPT, FORCE, R_OPT, RESISTANCE
from springopt.evaluators import (
    ConstraintParams,
    DomainError,
    cost,
    evaluate,
    performance,
    resistance,
    response_force,
)
from springopt.network import CASE_IDS, Series, canonical_case, case_resistance_formula, parse_topology

limits = st.floats(0.05, 5.0)
four = st.tuples(limits, limits, limits, limits)


@pytest.mark.parametrize("case_id", CASE_IDS)
def test_against_closed_forms(case_id):
    rng = np.random.default_rng(case_id)
    c = rng.uniform(0.1, 3.0, size=(200, 4))
    tree = canonical_case(case_id)
    r = resistance(tree, c)
    f = response_force(tree, c)
    for row, ri, fi in zip(c, r, f):
        assert ri == pytest.approx(RESISTANCE[case_id](*row), rel=1e-12)
        assert fi == pytest.approx(FORCE[case_id](*row), rel=1e-12)


@pytest.mark.parametrize("case_id", CASE_IDS)
def test_formula_strings_agree(case_id):
    c1, c2, c3, c4 = 0.3, 1.7, 0.9, 2.2
    value = eval(case_resistance_formula(case_id), {}, dict(c1=c1, c2=c2, c3=c3, c4=c4))
    assert value == pytest.approx(RESISTANCE[case_id](c1, c2, c3, c4), rel=1e-12)


def test_optimum_design_hits_both_thresholds():
    c = [float(v) for v in C_OPT]
    ev = evaluate(canonical_case(9), c)
    assert ev.F == pytest.approx(0.75, abs=1e-12)
    assert ev.R == pytest.approx(float(R_OPT), abs=1e-12)
    assert ev.FR == pytest.approx(0.5, abs=1e-12)
    assert ev.C == pytest.approx(float(COST_OPT), abs=1e-12)
    assert ev.feasible


def test_rounded_optimum_needs_the_tolerance():
    # six-decimal inputs put FR about 2e-8 under the threshold
    c = [0.75, 0.576923, 0.576923, 0.173077]
    assert not evaluate(canonical_case(9), c).feasible_FR
    assert evaluate(canonical_case(9), c, tol=1e-6).feasible


def test_small_examples():
    ev = evaluate(canonical_case(2), [1, 1, 1, 1])
    assert (ev.F, ev.R, ev.C) == (1.0, 4.0, 4.0)
    assert ev.FR == pytest.approx(0.6)
    assert not evaluate(canonical_case(9), [0.1] * 4).feasible_F
    assert response_force(parse_topology("s(1,2)"), [1, 2]) == 1.0
    assert resistance(parse_topology("p(1,2)"), [1, 3]) == pytest.approx(0.25)
    assert cost([1, 2, 3]) == 6.0


def test_broadcasting():
    tree = canonical_case(10)
    c = np.random.default_rng(0).uniform(0.5, 2, size=(3, 5, 4))
    r = resistance(tree, c)
    assert r.shape == (3, 5)
    assert r[1, 2] == pytest.approx(resistance(tree, c[1, 2]))
    assert performance(tree, c).shape == (3, 5)


@pytest.mark.parametrize("bad", [[1, 2, 3], [1, 2, 3, 0], [1, 2, 3, -1], [1, 2, math.nan, 1], 1.0])
def test_domain_errors(bad):
    with pytest.raises(DomainError):
        resistance(canonical_case(1), bad)


def test_params_validation():
    with pytest.raises(DomainError):
        ConstraintParams(alpha=0)
    with pytest.raises(DomainError):
        ConstraintParams(fr_min=-1)
    assert ConstraintParams() == ConstraintParams(0.2, 0.1, 0.75, 0.5)


@settings(max_examples=100, deadline=None)
@given(c=four, case_id=st.sampled_from(CASE_IDS), lam=st.sampled_from([0.5, 2.0, 10.0]))
def test_scaling(c, case_id, lam):
    tree = canonical_case(case_id)
    scaled = [lam * v for v in c]
    assert resistance(tree, scaled) == pytest.approx(resistance(tree, c) / lam, rel=1e-12)
    assert response_force(tree, scaled) == pytest.approx(lam * response_force(tree, c), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(c=four, case_id=st.sampled_from(CASE_IDS), i=st.integers(0, 3), bump=st.floats(0.0, 2.0))
def test_monotone_in_each_limit(c, case_id, i, bump):
    tree = canonical_case(case_id)
    stronger = list(c)
    stronger[i] += bump
    assert resistance(tree, stronger) <= resistance(tree, c) * (1 + 1e-12)
    assert response_force(tree, stronger) >= response_force(tree, c) * (1 - 1e-12)


@settings(max_examples=50, deadline=None)
@given(c=four)
def test_symmetric_cases_ignore_order(c):
    for case_id in (2, 8):
        tree = canonical_case(case_id)
        for perm in itertools.permutations(c):
            assert resistance(tree, perm) == pytest.approx(resistance(tree, c), rel=1e-12)
            assert response_force(tree, perm) == pytest.approx(response_force(tree, c), rel=1e-12)


def test_series_of_equal_springs():
    tree = Series(*range(1, 7))
    assert resistance(tree, [2.0] * 6) == pytest.approx(3.0)
    assert response_force(tree, [2.0] * 6) == 2.0
