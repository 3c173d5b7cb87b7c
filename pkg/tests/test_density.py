import math

import numpy as np
import pytest

from deteq.density import (DensityCurve, density_curve, stieltjes_trace,
                           sv_density_correction, write_density_csv,
                           write_density_metadata)
from deteq.dyson import OperatorStieltjes, SolverConfig
from deteq.profiles import constant_profile


def _g_semicircle(lam: complex) -> complex:
    return (lam - np.sqrt(complex(lam - 2.0)) * np.sqrt(complex(lam + 2.0))) / 2.0


def _cauchy(t, eta):
    return eta / (math.pi * (t * t + eta * eta))


def test_stieltjes_trace_is_the_mean():
    g = OperatorStieltjes(np.array([0.5 - 1j, -0.5 - 3j]))
    assert stieltjes_trace(g) == complex(0.0, -2.0)


def test_zero_noise_point_mass_smooths_to_cauchy():
    """A noise-free scalar model has density exactly eta/(pi (t^2 + eta^2))."""
    prof = constant_profile(1, 1, 0.0, hermitian=True)
    eta = 0.01
    grid = np.array([0.0, 0.05, 1.0])
    curve = density_curve(prof, None, grid, eta=eta)
    for t, v in zip(grid, curve.values):
        assert abs(v - _cauchy(t, eta)) <= 1e-12
    assert curve.converged.all()
    assert curve.eta == eta


def test_density_matches_smoothed_semicircle():
    # The constant-profile curve at t + i eta equals the closed-form
    # semicircle transform evaluated off the axis, for every N.
    prof = constant_profile(400, 400, 1.0, hermitian=True)
    eta = 0.05
    grid = np.arange(-3.0, 3.0 + 1e-9, 0.05)
    curve = density_curve(prof, None, grid, eta=eta)
    assert curve.converged.all()
    oracle = np.array([-_g_semicircle(t + 1j * eta).imag / math.pi for t in grid])
    assert np.max(np.abs(curve.values - oracle)) <= 1e-9
    assert abs(curve.mass() - 1.0) <= 0.02  # Cauchy tails leak a little mass


def test_workers_agree_with_sequential_path():
    prof = constant_profile(60, 60, 1.0, hermitian=True)
    grid = np.linspace(-2.5, 2.5, 21)
    seq = density_curve(prof, None, grid, eta=0.1)
    par = density_curve(prof, None, grid, eta=0.1, workers=3)
    assert np.array_equal(seq.converged, par.converged)
    assert np.max(np.abs(seq.values - par.values)) <= 1e-11


def test_density_curve_validation():
    prof = constant_profile(4, 4, 1.0, hermitian=True)
    with pytest.raises(ValueError):
        density_curve(prof, None, np.empty(0), eta=0.1)
    with pytest.raises(ValueError):
        density_curve(prof, None, np.linspace(0, 1, 4), eta=0.0)
    with pytest.raises(ValueError):
        DensityCurve(grid=np.array([0.0, 1.0]), values=np.array([-1.0, 0.0]),
                     eta=0.1, converged=np.array([True, True]), tolerance=1e-12)
    with pytest.raises(ValueError):
        DensityCurve(grid=np.array([0.0, 1.0]), values=np.array([0.0]),
                     eta=0.1, converged=np.array([True]), tolerance=1e-12)


def test_sv_correction_square_case_doubles():
    grid = np.linspace(0.0, 2.0, 11)
    raw = DensityCurve(grid=grid, values=np.full(11, 0.25), eta=0.01,
                       converged=np.ones(11, dtype=bool), tolerance=1e-12)
    out = sv_density_correction(raw, 50, 50)
    assert np.allclose(out.values, 0.5, rtol=0.0, atol=1e-15)


def test_sv_correction_cancels_the_origin_bump():
    # A raw curve equal to the zero-singular-value bump alone maps to zero.
    n, m, eta = 30, 50, 0.02
    q = (m - n) / (m + n)
    grid = np.linspace(0.0, 1.0, 41)
    bump = q * eta / (math.pi * (grid ** 2 + eta ** 2))
    raw = DensityCurve(grid=grid, values=bump, eta=eta,
                       converged=np.ones(41, dtype=bool), tolerance=1e-12)
    out = sv_density_correction(raw, n, m)
    assert np.max(np.abs(out.values)) <= 1e-12


def test_sv_correction_validation():
    grid = np.linspace(0.0, 1.0, 5)
    raw = DensityCurve(grid=grid, values=np.zeros(5), eta=0.1,
                       converged=np.ones(5, dtype=bool), tolerance=1e-12)
    with pytest.raises(ValueError):
        sv_density_correction(raw, 6, 5)
    signed = DensityCurve(grid=np.linspace(-1.0, 1.0, 5), values=np.zeros(5),
                          eta=0.1, converged=np.ones(5, dtype=bool),
                          tolerance=1e-12)
    with pytest.raises(ValueError):
        sv_density_correction(signed, 4, 5)


def test_mass_is_the_trapezoid_integral():
    grid = np.linspace(0.0, 1.0, 101)
    values = grid ** 2
    curve = DensityCurve(grid=grid, values=values, eta=0.1,
                         converged=np.ones(101, dtype=bool), tolerance=1e-12)
    assert abs(curve.mass() - np.trapezoid(values, grid)) == 0.0
    assert abs(curve.mass() - 1.0 / 3.0) <= 1e-4


def test_density_csv_and_metadata(tmp_path):
    grid = np.array([0.0, 0.5, 1.0])
    curve = DensityCurve(grid=grid, values=np.array([0.1, 0.2, 0.3]), eta=0.05,
                         converged=np.array([True, False, True]),
                         tolerance=1e-10)
    csv_path = tmp_path / "density.csv"
    write_density_csv(curve, csv_path)
    lines = csv_path.read_text().strip().split("\n")
    assert lines[0] == "t,density"
    parsed = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert np.array_equal(parsed[:, 0], grid)
    assert np.array_equal(parsed[:, 1], curve.values)

    meta_path = tmp_path / "density.json"
    write_density_metadata(curve, meta_path, extra={"label": "test"})
    import json
    meta = json.loads(meta_path.read_text())
    assert meta["eta"] == 0.05
    assert meta["tolerance"] == 1e-10
    assert meta["converged"] == [True, False, True]
    assert meta["label"] == "test"
