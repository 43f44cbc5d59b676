import numpy as np
import pytest

from osculants.pipeline import dense_support, manifest, random_target, run_experiment, solve
from osculants.series import SparseHypersurface
from osculants.tracker import TrackerConfig


def test_dense_support():
    sup = dense_support((1, 2))
    assert sup == [(0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
    assert all(0 < sum(e) < 6 for e in dense_support((3, 3)))
    assert len(dense_support((2, 2))) == 9


def test_random_target_reproducible():
    a = random_target((3, 3), np.random.default_rng(4))
    b = random_target((3, 3), np.random.default_rng(4))
    assert a == b and a.is_real()
    assert all(-1 <= c.real <= 1 for c in a.terms.values())
    assert max(abs(a.coefficient(e)) for e in [(1, 0), (0, 1)]) > 1e-3


def test_manifest_fields():
    m = manifest((2, 3), {"random_seed": 1}, TrackerConfig(gamma_seed=2))
    assert m["multidegree"] == [2, 3] and m["tracker"]["gamma_seed"] == 2
    assert set(m) == {"multidegree", "target", "tracker", "gamma", "timestamp", "version"}
    assert abs(complex(*m["gamma"])) == pytest.approx(1.0)


def test_solve_summary(parabola):
    sol = solve(parabola, (1, 2))
    assert sol.summary() == "1 osculant, 1 real" and sol.complete
    assert np.allclose(sol.osculants[0].form.flat, [1, 0, 1], atol=1e-8)


def test_solve_dimension_mismatch(parabola):
    with pytest.raises(ValueError):
        solve(parabola, (1, 1, 1))


def test_solve_incomplete_reports_failures(parabola):
    sol = solve(parabola, (2, 2))
    assert not sol.complete and len(sol.failures) == 1
    doc = sol.to_dict()
    assert doc["failures"] == ["1122"] and doc["summary"] == "0 osculants, 0 real"


def test_random_two_three():
    sol = solve(random_target((2, 3), np.random.default_rng(0)), (2, 3))
    assert len(sol.osculants) == 2 and sol.n_real in (0, 2)


def test_experiment_two_two():
    res = run_experiment((2, 2), 50, seed=3)
    assert not res.failed and not res.parity_anomalies
    assert res.real_counts == [1] * 50
    assert res.histogram.rows == {0: 50}
    assert res.to_csv() == "row,count,anomalies\n0,50,\n"


def test_experiment_reproducible():
    a = run_experiment((2, 3), 5, seed=9)
    b = run_experiment((2, 3), 5, seed=9)
    assert a.real_counts == b.real_counts and a.to_csv() == b.to_csv()


def test_experiment_needs_trials():
    with pytest.raises(ValueError):
        run_experiment((2, 2), 0, seed=0)
