import math

import numpy as np
import pytest

import singma


def test_domain_basics():
    d = singma.Domain.parabola_cap(2, 1.0, 0.0)
    assert d.dim == 2
    assert d.contains(np.array([0.0, 0.5]))
    assert not d.contains(np.array([0.0, 1.5]))
    assert d.dist_to_boundary(np.array([0.0, 0.5])) == pytest.approx(0.5, abs=1e-3)
    assert singma.Domain.ball(2, 1.0).volume() == pytest.approx(math.pi, rel=1e-12)


def test_barrier_exponents():
    b = singma.super_w(2, 1.0)
    assert b.a == pytest.approx(2.0 / 3.0)
    assert singma.singular_exponent(2, 4.0) == pytest.approx(1.0 / 3.0)
    assert singma.affine_exponent(2, 1.0) == pytest.approx(3.0 / 8.0)
    assert singma.c_alpha(2.0, 0.5) > 0


def test_record_round_trip():
    b = singma.super_wk(2, 1.0, 0.5)
    c = singma.barrier_from_record(b.to_record())
    x = np.array([0.1, 0.3])
    assert c.value(x) == b.value(x)


def test_verify_family_passes():
    rows = singma.verify_power_family(2, 1.0, samples=500, seed=3)
    assert rows
    assert all(r.passed for r in rows)


def test_fit_on_synthetic_power_law():
    samples = [(d, 2.0 * d ** 0.4) for d in np.geomspace(1e-3, 1e-1, 20)]
    fit = singma.fit_exponent(samples, 1e-3, 1e-1)
    assert fit.slope == pytest.approx(0.4, abs=1e-12)


def test_bootstrap_closed_form():
    tr = singma.bootstrap(3, 1.0, 10)
    assert len(tr.beta) == 11
    for k, e in enumerate(tr.error):
        assert e == pytest.approx(singma.bootstrap_error_closed_form(3, 1.0, k), abs=1e-14)


def test_trace_inequality_and_mixc():
    a = np.diag([1.0, 2.0])
    assert singma.trace_inequality_check(a, np.eye(2))
    assert singma.mixc_exponent(5, 14.0) == pytest.approx(0.0, abs=1e-15)
    assert singma.mixc_identity_residual(3, 2.0) < 1e-12


def test_coarse_solve():
    cfg = singma.SolveConfig()
    cfg.h = 1.0 / 16.0
    sol = singma.solve(singma.Domain.ball(2, 1.0), singma.RhsSpec.degenerate(0.0), cfg)
    assert sol.points.shape == (len(sol.values), 2)
    assert sol.sup_norm() > 0
    # u = (|x|^2 - 1)/2 solves det D^2 u = 1 on the unit disc
    i = int(np.argmin(np.linalg.norm(sol.points, axis=1)))
    assert sol.values[i] == pytest.approx(-0.5, abs=5e-2)


def test_run_bootstrap(tmp_path):
    code, files, _ = singma.run("bootstrap", {"bootstrap.n": "3", "bootstrap.q": "1", "bootstrap.steps": "5",
                                              "output.dir": str(tmp_path)})
    assert code == 0
    assert files


def test_run_config_error(tmp_path):
    code, _, log = singma.run("verify-barriers", {"verify.alpha": "1.5", "verify.family": "alpha",
                                                  "output.dir": str(tmp_path)})
    assert code == 2
    assert "out of range" in log
