import math

import numpy as np
import pytest

import phs


def wave(n=8):
    return phs.build_wave(phs.GridSpec([n], [1.0]), phs.CoefficientField("rho", 1.0), phs.CoefficientField("T", 1.0))


def test_wave_dims_and_green_identity():
    s = wave(4)
    assert s.dims == {"X1": 5, "X2": 6, "U1": 2, "U2": 0}
    assert phs.green_residual(s) <= 1e-12 * phs.green_scale(s)


def test_extended_operator_is_skew_and_dirac():
    op = phs.assemble_extended(wave(6))
    m = op.gram
    assert np.abs(m @ op.full + (m @ op.full).T).max() <= 1e-12 * np.abs(m @ op.full).sum(axis=1).max()
    assert phs.is_dirac(phs.graph_subspace(op.full), m)


def test_skew_check_examples():
    assert phs.check_skew_symmetric_like(np.array([[0.0, -3.0], [3.0, 0.0]]), np.eye(2)) == 0.0
    assert phs.check_skew_symmetric_like(np.eye(1), np.eye(1)) == pytest.approx(2.0)


def test_simulate_with_python_input_balances_energy():
    s = wave(8)
    law = phs.build_constitutive("wave", s, [phs.CoefficientField("rho", 1.0), phs.CoefficientField("T", 1.0)])
    x0 = np.zeros(s.dims["X1"] + s.dims["X2"])
    traj = phs.simulate(s, law, x0, 0.01, 100, lambda t: np.array([math.sin(3.0 * t), 0.0]))
    work = 0.01 * sum(traj.boundary_power)
    assert traj.energies[-1] == pytest.approx(work, rel=1e-9, abs=1e-12)
    assert max(traj.balance_residuals) <= 1e-10 * (1 + max(traj.energies))


def test_verify_report_and_corruption():
    good = phs.verify("wave1d", 8)
    assert good["pass"] and all(line["pass"] for line in good["checks"])
    bad = phs.verify("wave1d", 8, "K")
    green = next(line for line in bad["checks"] if line["name"] == "green_identity")
    assert not green["pass"]


def test_convergence_order_close_to_two():
    res = phs.convergence_order("wave1d", [8, 16, 32])
    assert all(1.8 <= p <= 2.2 for p in res["orders"])


def test_errors_are_typed():
    with pytest.raises(phs.InvalidArgument):
        phs.CoefficientField("rho", -1.0)
    with pytest.raises(phs.InvalidArgument):
        phs.GridSpec([1], [1.0])
