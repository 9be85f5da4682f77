"""Beta numbers: normalized L^q distance from f to its projection on a ball.

beta_{f,d,q}(B(x,r)) = (average over B(x,r) of |f - A^d_{x,r}|^q)^(1/q),
with the projection fitted by the moment formula on the same quadrature
nodes used for the average.  Sharing one centered template across every
(x, r) pair keeps the dilation covariance of beta exact under common
random numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .affine import fit_from_values
from .hgroup import dilate, distance, group_mul
from .quad import QuadSpec, ScaleGrid, ball_template, mean_stderr

Array = np.ndarray

# cap on nodes (center count x template size) held in memory at once
_NODE_BUDGET = 2_000_000


@dataclass(frozen=True, eq=False)
class BetaProfile:
    """Beta numbers of one field at one center across a scale grid."""

    x: Array
    d: int
    q: float
    grid: ScaleGrid
    values: Array
    stderrs: Array


def _check_dq(d: int, q: float) -> None:
    if d not in (0, 1):
        raise ValueError(f"degree must be 0 or 1, got {d}")
    if q < 1:
        raise ValueError(f"exponent q must be >= 1, got {q}")


def scale_sweep(
    f, centers: Array, rs, d: int, q: float, template, center_vals=None,
    want_se: bool = True,
):
    """Per-(center, radius) ball statistics from one template pass.

    Returns a dict with arrays of shape (k, R): "beta" and "beta_se" for the
    fitted residual, "mean" for the ball average of f, "amax" for the largest
    |f| seen on the ball (the scale of unavoidable roundoff in the residual),
    and, when center_vals (f evaluated at the centers) is given,
    "cdiff"/"cdiff_se" for the centered difference average of |f(x * y) -
    f(x)| over B(x, r).  want_se=False skips the error estimates (norm paths
    evaluate thousands of balls and only need values).
    """
    ev = getattr(f, "eval", f)
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    rs = np.atleast_1d(np.asarray(rs, dtype=float))
    k, m = len(centers), len(template.nodes)
    nr = len(rs)
    out = {
        "beta": np.empty((k, nr)),
        "beta_se": np.zeros((k, nr)),
        "mean": np.empty((k, nr)),
        "amax": np.empty((k, nr)),
    }
    if center_vals is not None:
        center_vals = np.asarray(center_vals, dtype=float).reshape(k)
        out["cdiff"] = np.empty((k, nr))
        out["cdiff_se"] = np.zeros((k, nr))
    step = max(1, int(_NODE_BUDGET // max(1, k * m)))
    u = template.nodes[:, :-1]
    for lo in range(0, nr, step):
        rblock = rs[lo : lo + step]
        # nodes for every (center, radius, template point) triple
        scaled = dilate(rblock[:, None], template.nodes[None, :, :])
        nodes = group_mul(centers[:, None, None, :], scaled[None])
        vals = np.asarray(ev(nodes), dtype=float)  # (k, R, m)
        if not np.all(np.isfinite(vals)):
            bad = np.argwhere(~np.isfinite(vals))[0]
            raise FloatingPointError(
                f"non-finite ball integrand at node {nodes[tuple(bad)]!r}"
            )
        sl = slice(lo, lo + len(rblock))
        out["amax"][:, sl] = np.abs(vals).max(axis=-1)
        # with r = 1 the returned slopes absorb the radius, so the fitted
        # model at the template nodes is b + a . u for every radius at once
        b, a = fit_from_values(vals, template, 1.0, d)
        res = vals - b[..., None]
        if d == 1:
            res -= np.einsum("krj,mj->krm", a, u)
        np.abs(res, out=res)
        g = res if q == 1.0 else res**q
        s = g.mean(axis=-1)
        val = s if q == 1.0 else s ** (1.0 / q)
        out["beta"][:, sl] = val
        out["mean"][:, sl] = b
        if want_se:
            se_s = mean_stderr(g, template)
            if q == 1.0:
                se = se_s
            else:
                with np.errstate(divide="ignore", invalid="ignore"):
                    se = np.where(
                        s > 0, se_s * s ** (1.0 / q - 1.0) / q, se_s ** (1.0 / q)
                    )
            out["beta_se"][:, sl] = se
        if center_vals is not None:
            dgv = np.abs(vals - center_vals[:, None, None])
            out["cdiff"][:, sl] = dgv.mean(axis=-1)
            if want_se:
                out["cdiff_se"][:, sl] = mean_stderr(dgv, template)
    return out


def _sweep_with_grid_error(f, centers, rs, d, q, spec: QuadSpec, n: int, center_vals=None):
    """scale_sweep plus honest stderr: orbit stderr for Monte Carlo,
    half-resolution comparison for grid mode."""
    tpl = ball_template(n, spec)
    mc = spec.mode == "montecarlo"
    out = scale_sweep(f, centers, rs, d, q, tpl, center_vals=center_vals, want_se=mc)
    if spec.mode == "grid":
        coarse = scale_sweep(
            f, centers, rs, d, q, tpl.coarse, center_vals=center_vals, want_se=False
        )
        out["beta_se"] = np.abs(out["beta"] - coarse["beta"])
        if center_vals is not None:
            out["cdiff_se"] = np.abs(out["cdiff"] - coarse["cdiff"])
    return out


def beta_number(
    f, x, r: float, d: int, q: float, spec: QuadSpec
) -> tuple[float, float]:
    """(beta_{f,d,q}(B(x,r)), stderr)."""
    _check_dq(d, q)
    if r <= 0:
        raise ValueError(f"ball radius must be positive, got {r}")
    x = np.asarray(x, dtype=float)
    n = (x.shape[-1] - 1) // 2
    out = _sweep_with_grid_error(f, x[None], [r], d, q, spec, n)
    return float(out["beta"][0, 0]), float(out["beta_se"][0, 0])


def beta_profile(
    f, x, d: int, q: float, grid: ScaleGrid, spec: QuadSpec
) -> BetaProfile:
    """beta_number at every node of the scale grid."""
    _check_dq(d, q)
    x = np.asarray(x, dtype=float)
    n = (x.shape[-1] - 1) // 2
    out = _sweep_with_grid_error(f, x[None], grid.nodes(), d, q, spec, n)
    return BetaProfile(
        x=x, d=d, q=q, grid=grid, values=out["beta"][0], stderrs=out["beta_se"][0]
    )


def check_monotonicity(f, inner, outer, q: float = 1.0, spec: QuadSpec = QuadSpec()):
    """beta ratio of a contained ball pair: beta(inner) / beta(outer), d = 1.

    Requires B(x1, r1) inside B(x2, r2).  When both betas vanish (affine f)
    the ratio is defined as 0; an inner beta over a vanishing outer beta
    returns inf.
    """
    (x1, r1), (x2, r2) = inner, outer
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if r1 <= 0 or r2 <= 0:
        raise ValueError("ball radii must be positive")
    if float(distance(x1, x2)) + r1 > r2 * (1.0 + 1e-9):
        raise ValueError(
            f"containment violated: distance {float(distance(x1, x2)):.6g} + "
            f"r1 {r1:.6g} exceeds r2 {r2:.6g}"
        )
    n = (x1.shape[-1] - 1) // 2
    out = _sweep_with_grid_error(
        f, np.stack([x1, x2]), [r1, r2], 1, q, spec, n
    )
    b1, b2 = float(out["beta"][0, 0]), float(out["beta"][1, 1])
    eps = 1e-12 * (1.0 + float(out["amax"][1, 1]))
    if b2 <= eps:
        return 0.0 if b1 <= eps else np.inf
    return b1 / b2
