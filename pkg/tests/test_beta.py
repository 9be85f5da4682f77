"""Beta numbers: annihilation, covariance, profiles, monotonicity ratios."""

import numpy as np
import pytest

from heisbeta.beta import beta_number, beta_profile, check_monotonicity
from heisbeta.fields import catalog, precompose_dilation, vertical_translate
from heisbeta.hgroup import dilate, group_mul
from heisbeta.quad import QuadSpec, ScaleGrid

from conftest import random_points

GRID = QuadSpec(mode="grid")
MC = QuadSpec(samples=60_000)


@pytest.mark.parametrize("spec", [GRID, MC], ids=["grid", "mc"])
@pytest.mark.parametrize("q", [1.0, 2.0])
def test_affine_fields_annihilated(spec, q):
    f = catalog("affine", a=[1.5, -0.5], b=2.0)
    rng = np.random.default_rng(41)
    for _ in range(3):
        x = random_points(rng, 1)[0]
        r = float(rng.uniform(0.2, 4.0))
        val, _ = beta_number(f, x, r, 1, q, spec)
        assert val <= 1e-12


def test_gaussian_beta_positive_and_vanishing_at_small_scale():
    f = catalog("gaussian")
    x = np.array([0.3, 0.1, -0.2])
    small = beta_number(f, x, 0.01, 1, 1.0, GRID)[0]
    mid = beta_number(f, x, 1.0, 1, 1.0, GRID)[0]
    assert 0.0 < small < 1e-4  # smooth fields look affine at small scale
    assert mid > 1e-2


@pytest.mark.parametrize("s", [0.5, 2.0, 4.0])
def test_dilation_covariance(s):
    # beta of f o delta_s at (x, r) equals beta of f at (delta_s x, s r);
    # shared templates and power-of-two factors make it exact
    f = catalog("gaussian")
    fs = precompose_dilation(f, s)
    x = np.array([0.4, -0.2, 0.3])
    r = 0.75
    lhs = beta_number(fs, x, r, 1, 1.0, MC)[0]
    rhs = beta_number(f, dilate(s, x), s * r, 1, 1.0, MC)[0]
    assert abs(lhs - rhs) <= 1e-12 * max(lhs, 1e-30)


def test_translation_covariance():
    f = catalog("vertical-wave", omega=3.0)
    ft = vertical_translate(f, 0.6)
    x = np.array([0.2, 0.5, -0.1])
    shifted = x.copy()
    shifted[-1] += 0.6
    lhs = beta_number(ft, x, 0.8, 1, 1.0, MC)[0]
    rhs = beta_number(f, shifted, 0.8, 1, 1.0, MC)[0]
    assert abs(lhs - rhs) <= 1e-10 * max(lhs, 1e-30)


def test_beta_number_error_reporting():
    f = catalog("gaussian")
    x = np.zeros(3)
    val, se = beta_number(f, x, 1.0, 1, 1.0, MC)
    assert val > 0 and se > 0
    gval, gse = beta_number(f, x, 1.0, 1, 1.0, GRID)
    assert gse >= 0
    assert abs(val - gval) < 6.0 * max(se, gse, 1e-4)


def test_beta_profile_shapes_and_annihilation():
    grid = ScaleGrid(1e-2, 1e1, 8)
    f = catalog("affine", a=[1.0, 1.0], b=0.0)
    prof = beta_profile(f, np.zeros(3), 1, 1.0, grid, GRID)
    assert prof.values.shape == (grid.count,)
    assert prof.stderrs.shape == (grid.count,)
    assert np.all(prof.values <= 1e-12)
    g = catalog("gaussian")
    gprof = beta_profile(g, np.zeros(3), 1, 1.0, grid, GRID)
    assert np.all(gprof.values >= 0.0)
    assert gprof.values.max() > 1e-2


def test_validation_errors():
    f = catalog("gaussian")
    x = np.zeros(3)
    with pytest.raises(ValueError, match="degree"):
        beta_number(f, x, 1.0, 2, 1.0, GRID)
    with pytest.raises(ValueError, match="q"):
        beta_number(f, x, 1.0, 1, 0.5, GRID)
    with pytest.raises(ValueError, match="radius"):
        beta_number(f, x, 0.0, 1, 1.0, GRID)


def test_monotonicity_ratio_conventions():
    gauss = catalog("gaussian")
    x = np.array([0.2, -0.1, 0.1])
    ratio = check_monotonicity(gauss, (x, 0.5), (x, 1.0), spec=GRID)
    assert 0.0 < ratio < np.inf
    flat = catalog("affine", a=[2.0, 1.0], b=-1.0)
    assert check_monotonicity(flat, (x, 0.5), (x, 1.0), spec=GRID) == 0.0
    # off-center inner ball still allowed while contained
    y = group_mul(x, np.array([0.05, 0.0, 0.0]))
    assert check_monotonicity(gauss, (y, 0.4), (x, 1.0), spec=GRID) > 0.0


def test_monotonicity_containment_enforced():
    f = catalog("gaussian")
    x = np.zeros(3)
    far = np.array([3.0, 0.0, 0.0])
    with pytest.raises(ValueError, match="containment"):
        check_monotonicity(f, (far, 0.5), (x, 1.0), spec=GRID)
    with pytest.raises(ValueError, match="containment"):
        check_monotonicity(f, (x, 2.0), (x, 1.0), spec=GRID)
    with pytest.raises(ValueError, match="positive"):
        check_monotonicity(f, (x, 0.0), (x, 1.0), spec=GRID)
