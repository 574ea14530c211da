import math

import numpy as np
import pytest

from oracles import C_OPT, CASE4_COST, CASE4_X, CASE8_COST, COST_OPT
from springopt.bounds import ReducedProblem, lookup, registry, subcases_of
from springopt.evaluators import ConstraintParams, DomainError, evaluate
from springopt.network import canonical_case
from springopt.solvers import GridSpec, brute_force, solve_all, solve_reduced


@pytest.fixture(scope="module")
def report():
    return solve_all()


def test_global_optimum(report):
    assert report.best_label == "9.1"
    np.testing.assert_allclose(report.best_c, [float(v) for v in C_OPT], atol=1e-9)
    assert report.best_cost == pytest.approx(float(COST_OPT), abs=1e-9)
    assert report.to_text().splitlines()[-1].startswith("BEST case=9.1 cost=2.076923 ")


def test_optimum_is_feasible_with_both_constraints_active(report):
    r = report.result("9.1")
    assert r.status == "optimal"
    assert set(r.active) == {"F>=f_min", "FR>=fr_min"}
    ev = evaluate(canonical_case(9), report.best_c, tol=1e-9)
    assert ev.feasible


def test_statuses(report):
    statuses = {r.label: r.status for r in report.subcases}
    # 9.2 reaches the same design from the other regime
    assert statuses["9.2"] == "optimal"
    assert all(s == "dominated" for label, s in statuses.items() if not label.startswith("9."))
    for r in report.subcases:
        assert r.cost >= float(COST_OPT) - 1e-9


@pytest.mark.parametrize(
    "label, expected",
    [("2", 3.0), ("6.1", 4.0), ("6.2", 4.0), ("1.1", 2.25), ("3", 4.0), ("7.1", 4.0), ("8", CASE8_COST)],
)
def test_one_dimensional_optima(label, expected):
    sol = solve_reduced(ReducedProblem(lookup(label)), tol=1e-6)
    assert sol.cost == pytest.approx(expected, abs=1e-6)


def test_case_4(report):
    r = report.result("4")
    np.testing.assert_allclose(r.x, [float(v) for v in CASE4_X], atol=1e-6)
    assert r.cost == pytest.approx(float(CASE4_COST), abs=1e-6)


def test_scan_fallback_is_flagged(report):
    r = report.result("5")
    assert r.method == "scan"
    assert r.warnings


def test_strength_only_problem():
    rep = solve_all(ConstraintParams(fr_min=0.0))
    assert rep.best_label == "8"
    assert rep.best_cost == pytest.approx(0.75, abs=1e-9)


def test_unreachable_performance():
    rep = solve_all(ConstraintParams(fr_min=10.0))
    assert rep.best_label is None
    assert all(r.status == "infeasible" for r in rep.subcases)
    assert rep.to_text().splitlines()[-1] == "BEST none (no feasible subcase)"


def test_deterministic_text(report):
    assert solve_all().to_text() == report.to_text()
    assert solve_all().to_csv() == report.to_csv()


def test_monotone_in_fr_min():
    previous = None
    for fr_min in (0.3, 0.45, 0.5, 0.6, 0.7):
        rep = solve_all(ConstraintParams(fr_min=fr_min))
        costs = np.array([math.inf if r.cost is None else r.cost for r in rep.subcases])
        if previous is not None:
            assert np.all(costs >= previous - 1e-9)
        previous = costs


def test_case_subset():
    rep = solve_all(bounds=subcases_of(2))
    assert rep.best_label == "2" and rep.best_cost == pytest.approx(3.0)


def test_csv_layout(report):
    lines = report.to_csv().splitlines()
    assert lines[0] == "subcase,status,x*,c*,cost,active_constraints"
    assert len(lines) == 1 + len(registry())
    label, status, x, c, cost, active = lines[1].split(",")
    assert (label, status) == ("9.1", "optimal")
    assert float(cost) == pytest.approx(float(COST_OPT), abs=1e-12)
    assert active == "F>=f_min;FR>=fr_min"


def test_solver_input_checks():
    with pytest.raises(DomainError):
        solve_reduced(ReducedProblem(lookup("8")), tol=0)
    with pytest.raises(DomainError):
        GridSpec(lower=0)
    assert GridSpec(0.5, 1.0, 0.25).points().tolist() == [0.5, 0.75, 1.0]


def test_brute_force_strength_only():
    res = brute_force(8, ConstraintParams(fr_min=0.0), GridSpec(0.02, 2.5, 0.02))
    assert res.best_cost == pytest.approx(0.76)
    # ties go to the lexicographically smallest design
    assert res.best_c == pytest.approx((0.02, 0.02, 0.02, 0.70))


def test_brute_force_case_2():
    res = brute_force(2, grid=GridSpec(0.05, 2.5, 0.05))
    assert res.best_cost >= 2.9
    assert res.best_c == pytest.approx((0.75, 0.75, 0.75, 0.75))


def test_brute_force_agrees_with_the_reduced_optimum():
    res = brute_force(9, grid=GridSpec(0.05, 2.5, 0.05))
    assert float(COST_OPT) - 1e-9 <= res.best_cost <= float(COST_OPT) + 4 * 0.05
    assert evaluate(canonical_case(9), res.best_c).feasible


def test_brute_force_ignores_worker_count():
    grid = GridSpec(0.1, 2.5, 0.1)
    assert brute_force(9, grid=grid, n_jobs=1) == brute_force(9, grid=grid, n_jobs=2)


def test_brute_force_without_feasible_points():
    res = brute_force(2, grid=GridSpec(0.1, 0.5, 0.1))
    assert res.best_c is None and res.feasible_count == 0
