import math

import pytest

import sonorad


def test_constants():
    assert sonorad.c == 2.99792458e8
    assert sonorad.hbar == pytest.approx(1.054571817e-34)
    assert sonorad.sw_coefficient == pytest.approx(1.16)


def test_medium_and_reflection():
    m = sonorad.MediumSpec.constant(1.3)
    assert sonorad.refractive_index(m, 1e15) == 1.3
    assert sonorad.reflection_probability(1.3) == pytest.approx(0.09 / 5.29)
    assert sonorad.reflection_probability(1.3) < 0.02
    with pytest.raises(Exception):
        sonorad.MediumSpec.constant(0.9)


def test_bessel_and_born_limit():
    assert sonorad.sph_bessel_j(0, math.pi) == pytest.approx(0.0, abs=1e-15)
    assert sonorad.sph_bessel_j(1, 10.0) == pytest.approx(
        0.07846694179875155, rel=1e-12
    )
    norm = sonorad.normalization(3, sonorad.Pol.TE, 1.0, 5.0)
    assert abs(norm.s_inv - 1.0) < 1e-10


def test_profile_and_diagnostics():
    p = sonorad.RunParams()
    p.r0 = 45e-6
    p.rmin = 3e-6
    p.gamma = 10e-15
    p.period = 2e-12
    p.center = 1e-12
    prof = sonorad.BubbleProfile.lorentzian(p)
    assert prof.radius(p.center) == pytest.approx(p.rmin)
    diag = sonorad.diagnostics(prof)
    assert diag.warning
    assert diag.beta_max == pytest.approx(13.370785, rel=1e-3)


def test_model_energy_scaling():
    p = sonorad.RunParams()
    p.r0 = 10e-6
    p.rmin = 0.5e-6
    p.gamma = 1e-15
    p.period = 1e-12
    p.center = 0.5e-12
    w1 = sonorad.model_energy(p, 1.3)
    p.gamma = 2e-15
    w2 = sonorad.model_energy(p, 1.3)
    assert w1 / w2 == pytest.approx(32.0, rel=1e-12)
    assert sonorad.effective_temperature(1e-15) == pytest.approx(3819.116, rel=1e-6)


def test_small_sweep_runs():
    p = sonorad.RunParams()
    p.r0 = 20e-6
    p.rmin = 8e-6
    p.gamma = 50e-15
    p.period = 1.2e-11
    p.center = 0.5 * p.period
    prof = sonorad.BubbleProfile.lorentzian(p)
    medium = sonorad.MediumSpec.constant(1.3)
    cfg = sonorad.EngineConfig()
    cfg.tau_points = 4096
    cfg.omega_prime_points = 32
    cfg.omega_prime_max = 8.0 / p.gamma
    cfg.rel_tol = 1e-2
    grid = [0.4 / p.gamma, 0.8 / p.gamma, 1.2 / p.gamma]
    table = sonorad.spectrum_sweep(grid, prof, medium, cfg)
    assert len(table.rows) == 3
    assert all(row.p >= 0.0 for row in table.rows)
    assert table.total_energy >= 0.0
    # mid-band row tracks the closed form loosely
    closed = sonorad.model_spectrum_at(p, 1.3, grid[1])
    assert table.rows[1].p == pytest.approx(closed, rel=0.1)
