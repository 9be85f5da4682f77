"""Catalog field construction, gradients, decay certificates, transforms."""

import numpy as np
import pytest

from heisbeta.fields import catalog, precompose_dilation, vertical_translate
from heisbeta.hgroup import dilate, gauge, group_mul, horizontal_derivative

from conftest import random_points

SMOOTH = ["gaussian", "affine", "vertical-wave", "coordinate", "quadratic"]


def central_difference(f, j, x, h=1e-5):
    ev = f.eval
    step = np.zeros(x.shape[-1])
    step[j - 1] = h
    return (ev(group_mul(x, step)) - ev(group_mul(x, -step))) / (2.0 * h)


def test_catalog_rejects_unknown_names_and_params():
    with pytest.raises(ValueError, match="unknown field"):
        catalog("fourier")
    with pytest.raises(ValueError, match="unexpected parameters"):
        catalog("gaussian", sigma=2.0)
    with pytest.raises(ValueError):
        catalog("affine", a=np.ones(3))  # needs length 2n
    with pytest.raises(ValueError):
        catalog("coordinate", axis=5)
    with pytest.raises(ValueError):
        catalog("quadratic", j=0, k=1)


@pytest.mark.parametrize("name", SMOOTH)
@pytest.mark.parametrize("n", [1, 2])
def test_analytic_gradient_matches_difference_quotient(name, n):
    f = catalog(name, n=n)
    rng = np.random.default_rng(21)
    pts = random_points(rng, 40, n=n, z_extent=1.2, t_extent=1.5)
    grad = f.analytic_hgrad(pts)
    assert grad.shape == (40, 2 * n)
    for j in range(1, 2 * n + 1):
        num = central_difference(f, j, pts)
        assert np.max(np.abs(num - grad[:, j - 1])) < 5e-9


def test_bump_gradient_away_from_kinks():
    f = catalog("bump")
    rng = np.random.default_rng(22)
    raw = random_points(rng, 300, z_extent=0.8, t_extent=0.2)
    r = gauge(raw)
    pts = raw[(r > 0.2) & (r < 0.9)]
    assert len(pts) > 30
    grad = f.analytic_hgrad(pts)
    for j in (1, 2):
        num = central_difference(f, j, pts, h=1e-6)
        assert np.max(np.abs(num - grad[:, j - 1])) < 1e-6


def test_horizontal_derivative_uses_analytic_gradient():
    f = catalog("gaussian")
    x = np.array([0.3, -0.2, 0.1])
    assert horizontal_derivative(f, 1, x) == f.analytic_hgrad(x)[..., 0]


def test_bump_support():
    f = catalog("bump")
    rng = np.random.default_rng(23)
    pts = random_points(rng, 500, z_extent=2.0, t_extent=2.0)
    r = gauge(pts)
    vals = f.eval(pts)
    assert np.all(vals[r >= 1.0] == 0.0)
    inside = (r < 0.95) & (r > 0.0)
    assert np.all(vals[inside] > 0.0)
    assert np.all(f.analytic_hgrad(pts[r >= 1.0]) == 0.0)


@pytest.mark.parametrize("name,params", [
    ("gaussian", {}),
    ("vertical-wave", {"omega": 4.0}),
    ("bump", {}),
])
def test_decay_certificates_hold(name, params):
    f = catalog(name, **params)
    rng = np.random.default_rng(24)
    pts = random_points(rng, 2000, z_extent=4.0, t_extent=9.0)
    r = gauge(pts)
    keep = r >= f.support_radius
    assert keep.sum() > 500
    pts, r = pts[keep], r[keep]
    assert np.all(np.abs(f.eval(pts)) <= f.decay_bound(r) * (1 + 1e-12))
    gnorm = np.linalg.norm(f.analytic_hgrad(pts), axis=-1)
    assert np.all(gnorm <= f.grad_decay_bound(r) * (1 + 1e-12))


def test_decay_bounds_integrable():
    # bounds must decay fast enough for L^1 tail sums downstream
    f = catalog("gaussian")
    rs = np.geomspace(1.0, 50.0, 40)
    vals = f.decay_bound(rs) * rs**4
    assert vals[-1] < 1e-12


def test_vertical_translate_exact():
    f = catalog("vertical-wave", omega=2.0)
    g = vertical_translate(f, 0.7)
    rng = np.random.default_rng(25)
    pts = random_points(rng, 50)
    shifted = pts.copy()
    shifted[:, -1] += 0.7
    assert np.array_equal(g.eval(pts), f.eval(shifted))
    assert np.array_equal(g.analytic_hgrad(pts), f.analytic_hgrad(shifted))
    assert g.support_radius == pytest.approx(1.0 + 2.0 * np.sqrt(0.7))
    assert vertical_translate(f, 0.0) is f


def test_precompose_dilation_exact():
    f = catalog("gaussian")
    s = 2.0
    fs = precompose_dilation(f, s)
    rng = np.random.default_rng(26)
    pts = random_points(rng, 50)
    assert np.array_equal(fs.eval(pts), f.eval(dilate(s, pts)))
    assert np.array_equal(fs.analytic_hgrad(pts), s * f.analytic_hgrad(dilate(s, pts)))
    assert fs.support_radius == pytest.approx(0.5)
    # dilated decay certificate still valid
    r = gauge(pts)
    keep = r >= fs.support_radius
    assert np.all(np.abs(fs.eval(pts[keep])) <= fs.decay_bound(r[keep]) * (1 + 1e-12))
    assert precompose_dilation(f, 1.0) is f
    with pytest.raises(ValueError):
        precompose_dilation(f, -2.0)


def test_affine_field_values():
    f = catalog("affine", n=2, a=[1.0, 2.0, 3.0, 4.0], b=-1.0)
    p = np.array([1.0, 1.0, 1.0, 1.0, 99.0])
    assert f.eval(p) == pytest.approx(9.0)
    assert np.array_equal(f.analytic_hgrad(p), [1.0, 2.0, 3.0, 4.0])


def test_default_parameters():
    w = catalog("vertical-wave")
    assert "omega=1" in w.label
    c = catalog("coordinate")
    p = np.array([3.0, 5.0, 7.0])
    assert c.eval(p) == 3.0
