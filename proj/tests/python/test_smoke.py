import numpy as np
import pytest

import invsched as iv


def test_lp_triangle():
    sol = iv.lp_solve([2.0, 1.0], [[-1, 0], [0, -1], [1, 1]], [0, 0, 1])
    assert sol.status == iv.LPStatus.Optimal
    assert sol.value == pytest.approx(2.0)
    np.testing.assert_allclose(sol.point, [1.0, 0.0], atol=1e-12)


def test_polytope_algebra():
    square = iv.HPolytope.box([-1.0, -1.0], [1.0, 1.0])
    assert square.dim == 2 and square.rows == 4
    assert iv.contains(square, [1.0, 1.0])
    assert not iv.contains(square, [1.001, 0.0])
    assert iv.support(square, [1.0, 1.0]) == pytest.approx(2.0)
    simplex = iv.HPolytope(np.vstack([-np.eye(3), np.ones((1, 3))]), [0, 0, 0, 1])
    triangle = iv.HPolytope([[-1, 0], [0, -1], [1, 1]], [0, 0, 1])
    assert iv.equals(iv.project(simplex, [0, 1]), triangle)
    eroded = iv.pontryagin_diff(iv.HPolytope.box([-1.0], [1.0]), iv.HPolytope.box([0.0], [0.5]))
    assert iv.equals(eroded, iv.HPolytope.box([-1.0], [0.5]))
    with pytest.raises(iv.DimensionMismatch):
        iv.contains(square, [0.0])


def test_aps_pipeline_companion():
    sys = iv.aps_model(iv.ApsVariant.Companion)
    inv = iv.max_invariant(sys)
    assert inv.converged
    st = iv.safe_time(sys, inv.set, 6)
    assert st.alpha == 3 and not st.hit_cap
    schedule = iv.periodic_schedule(st.alpha, 60)
    assert len(schedule) == 20
    traj = iv.simulate(sys, inv.set, schedule, iv.DisturbanceGenerator.worst_case(), 60,
                       np.zeros(3))
    assert len(traj["states"]) == 61
    assert all(iv.contains(inv.set, x) for x in traj["states"])
    assert iv.savings(iv.periodic_schedule(3, 300), 300) == pytest.approx(2.0 / 3.0)


def test_printed_matrix_alpha():
    sys = iv.aps_model()
    np.testing.assert_array_equal(sys.A[2], [0.0, 1.0, 1.0])
    inv = iv.max_invariant(sys)
    assert iv.safe_time(sys, inv.set, 6).alpha == 1


def test_schedule_validation():
    assert iv.is_feasible([0, 2, 4, 7, 10], 3)
    assert not iv.is_feasible([0, 4], 3)
    with pytest.raises(iv.MalformedSequence):
        iv.is_feasible([0, 2, 2], 3)
    with pytest.raises(iv.InfeasibleSchedule):
        iv.Schedule([0, 5], 3)


def test_cli_entry_point(tmp_path):
    code, out, err = iv.cli(["safetime", "--system", "aps", "--a32-zero", "--out", str(tmp_path)])
    assert code == 0, err
    assert out.startswith("alpha = 3")
    assert (tmp_path / "safetime.json").exists()
