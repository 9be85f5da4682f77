"""Integration over Koranyi balls, truncated H^n, and log scale ranges.

Ball integration maps one cached centered template (nodes of gauge-unit-ball
quadrature) through y = center * delta_r(u).  Reusing the template across all
centers, radii, and both sides of an identity is what makes translation and
dilation identities hold to machine precision under common random numbers.

The Monte Carlo template is symmetrized over the full sign orbit
{(+-z_1, ..., +-t)}: the gauge ball is invariant under flipping any single
coordinate, so every template moment that is odd in some axis vanishes
exactly.  Closed-form moment fits assume exactly that.  The quoted budget
(QuadSpec.samples) counts box proposals; accepted points times the orbit
size land within it.  Standard errors treat one orbit as one independent
unit.  Grid mode uses a per-axis midpoint tensor grid, which has the same
symmetries, and estimates error by comparing against a half-resolution grid.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hgroup import dilate, group_mul

Array = np.ndarray

_BALL_ROLE = 101
_DOMAIN_ROLE = 202
_VOLUME_SEED = 760355

_MODES = ("grid", "montecarlo")


@dataclass(frozen=True)
class QuadSpec:
    """Quadrature request: mode, budget, and determinism knobs.

    samples is the Monte Carlo proposal budget; grid_per_axis the tensor
    grid resolution.  Identical specs give bit-identical results.
    """

    mode: str = "montecarlo"
    samples: int = 100_000
    seed: int = 42
    grid_per_axis: int = 24

    def __post_init__(self) -> None:
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.grid_per_axis < 1:
            raise ValueError(f"grid_per_axis must be >= 1, got {self.grid_per_axis}")


@dataclass(frozen=True)
class ScaleGrid:
    """Geometric scale nodes carrying the measure dr/r.

    Nodes sit at the log-midpoints of a uniform partition of
    [log r_min, log r_max], so sum(g(r_i)) * log_step is the midpoint rule
    for the integral of g over [r_min, r_max] against dr/r.
    """

    r_min: float = 1e-3
    r_max: float = 1e2
    points_per_decade: int = 16

    def __post_init__(self) -> None:
        if not (0.0 < self.r_min < self.r_max):
            raise ValueError(
                f"need 0 < r_min < r_max, got [{self.r_min}, {self.r_max}]"
            )
        if self.points_per_decade < 1:
            raise ValueError(
                f"points_per_decade must be >= 1, got {self.points_per_decade}"
            )

    @property
    def count(self) -> int:
        decades = math.log10(self.r_max / self.r_min)
        return max(1, round(decades * self.points_per_decade))

    @property
    def log_step(self) -> float:
        return math.log(self.r_max / self.r_min) / self.count

    def nodes(self) -> Array:
        h = self.log_step
        return self.r_min * np.exp((np.arange(self.count) + 0.5) * h)


@dataclass(frozen=True, eq=False)
class BallTemplate:
    """Quadrature nodes for the gauge unit ball at the origin.

    nodes has shape (m, 2n+1) with gauge <= 1.  For Monte Carlo templates,
    nodes.reshape(units, orbit, dim) groups each accepted point with its
    sign orbit; units is the independent-sample count for standard errors.
    m2 holds the template's second moments mean(u_j^2) per horizontal axis.
    """

    nodes: Array
    units: int
    orbit: int
    m2: Array
    coarse: "BallTemplate | None" = None


def _sign_orbit(dim: int) -> Array:
    return np.array(list(itertools.product((1.0, -1.0), repeat=dim)))


def _mc_ball_template(n: int, samples: int, seed: int) -> BallTemplate:
    dim = 2 * n + 1
    orbit = 2**dim
    proposals = max(1, samples // orbit)
    rng = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([seed, _BALL_ROLE, n]))
    )
    kept = np.empty((0, dim))
    for _ in range(1000):
        u = rng.uniform(-1.0, 1.0, size=(proposals, dim))
        u[:, -1] *= 0.25
        zsq = (u[:, :-1] ** 2).sum(axis=1)
        kept = u[zsq * zsq + 16.0 * u[:, -1] ** 2 <= 1.0]
        if len(kept):
            break
    if not len(kept):
        raise RuntimeError("rejection sampling produced no ball nodes")
    nodes = (kept[:, None, :] * _sign_orbit(dim)[None, :, :]).reshape(-1, dim)
    m2 = (nodes[:, :-1] ** 2).mean(axis=0)
    return BallTemplate(nodes=nodes, units=len(kept), orbit=orbit, m2=m2)


def _grid_ball_template(n: int, per_axis: int, with_coarse: bool = True) -> BallTemplate:
    dim = 2 * n + 1
    mids = (2.0 * np.arange(per_axis) + 1.0) / per_axis - 1.0
    axes = [mids] * (2 * n) + [0.25 * mids]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    zsq = (mesh[:, :-1] ** 2).sum(axis=1)
    nodes = mesh[zsq * zsq + 16.0 * mesh[:, -1] ** 2 <= 1.0]
    if not len(nodes):
        raise RuntimeError(f"grid_per_axis={per_axis} keeps no ball nodes")
    coarse = None
    if with_coarse and per_axis >= 2:
        coarse = _grid_ball_template(n, max(1, per_axis // 2), with_coarse=False)
    m2 = (nodes[:, :-1] ** 2).mean(axis=0)
    return BallTemplate(nodes=nodes, units=len(nodes), orbit=1, m2=m2, coarse=coarse)


@lru_cache(maxsize=64)
def _ball_template_cached(n: int, mode: str, samples: int, seed: int, per_axis: int):
    if mode == "montecarlo":
        return _mc_ball_template(n, samples, seed)
    return _grid_ball_template(n, per_axis)


def ball_template(n: int, spec: QuadSpec) -> BallTemplate:
    """Centered unit-ball template for a QuadSpec, cached per (n, spec)."""
    if spec.mode == "montecarlo":
        return _ball_template_cached(n, "montecarlo", spec.samples, spec.seed, 0)
    return _ball_template_cached(n, "grid", 0, 0, spec.grid_per_axis)


def ball_nodes(center, r: float, template_nodes: Array) -> Array:
    """Map template nodes u to the ball B(center, r) via center * delta_r(u)."""
    center = np.asarray(center, dtype=float)
    return group_mul(center[..., None, :], dilate(r, template_nodes))


def _check_finite(vals: Array, nodes: Array, what: str) -> None:
    if not np.all(np.isfinite(vals)):
        flat = int(np.flatnonzero(~np.isfinite(np.ravel(vals)))[0])
        node = nodes.reshape(-1, nodes.shape[-1])[flat]
        raise FloatingPointError(f"non-finite {what} at node {node!r}")


def mean_stderr(vals: Array, template: BallTemplate) -> Array:
    """Standard error of mean(vals) over the template's independent units.

    Monte Carlo: standard deviation of per-orbit means over sqrt(units).
    Grid templates have no statistical error; callers use a coarse-grid
    comparison instead (see ball_integrate).
    """
    if template.orbit == 1:
        return np.zeros(np.shape(vals)[:-1])
    w = vals.reshape(vals.shape[:-1] + (template.units, template.orbit)).mean(axis=-1)
    if template.units < 2:
        return np.full(np.shape(vals)[:-1], np.inf)
    return w.std(axis=-1, ddof=1) / math.sqrt(template.units)


def ball_integrate(f, center, r: float, spec: QuadSpec) -> tuple[float, float]:
    """Average of f over the Koranyi ball B(center, r), with error estimate.

    Returns (value, stderr): the Monte Carlo standard error, or for grid
    mode the difference against a half-resolution grid.
    """
    if r <= 0:
        raise ValueError(f"ball radius must be positive, got {r}")
    ev = getattr(f, "eval", f)
    center = np.asarray(center, dtype=float)
    n = (center.shape[-1] - 1) // 2
    tpl = ball_template(n, spec)
    nodes = ball_nodes(center, r, tpl.nodes)
    vals = np.asarray(ev(nodes), dtype=float)
    _check_finite(vals, nodes, "ball integrand")
    value = float(vals.mean())
    if spec.mode == "grid":
        cnodes = ball_nodes(center, r, tpl.coarse.nodes)
        cvals = np.asarray(ev(cnodes), dtype=float)
        _check_finite(cvals, cnodes, "ball integrand")
        return value, abs(value - float(cvals.mean()))
    return value, float(mean_stderr(vals, tpl))


@lru_cache(maxsize=8)
def _ball_constant(n: int) -> tuple[float, float]:
    """(c_n, stderr): unit-ball volume from a one-time 4e6-proposal run."""
    dim = 2 * n + 1
    box_vol = 2.0 ** (2 * n) * 0.5
    rng = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([_VOLUME_SEED, n]))
    )
    total = 4_000_000
    accepted = 0
    for _ in range(8):
        u = rng.uniform(-1.0, 1.0, size=(total // 8, dim))
        u[:, -1] *= 0.25
        zsq = (u[:, :-1] ** 2).sum(axis=1)
        accepted += int((zsq * zsq + 16.0 * u[:, -1] ** 2 <= 1.0).sum())
    frac = accepted / total
    return box_vol * frac, box_vol * math.sqrt(frac * (1.0 - frac) / total)


def ball_volume(r: float, n: int = 1) -> float:
    """Volume of a gauge ball of radius r: c_n * r^Q with cached c_n."""
    if r <= 0:
        raise ValueError(f"ball radius must be positive, got {r}")
    return _ball_constant(n)[0] * r ** (2 * n + 2)


@lru_cache(maxsize=64)
def _unit_box_template_cached(n: int, mode: str, samples: int, seed: int, per_axis: int):
    dim = 2 * n + 1
    if mode == "montecarlo":
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([seed, _DOMAIN_ROLE, n]))
        )
        return rng.uniform(-1.0, 1.0, size=(samples, dim))
    mids = (2.0 * np.arange(per_axis) + 1.0) / per_axis - 1.0
    return np.stack(np.meshgrid(*([mids] * dim), indexing="ij"), axis=-1).reshape(
        -1, dim
    )


def box_nodes(n: int, box_radius: float, spec: QuadSpec) -> Array:
    """Quadrature nodes for the gauge box |z_j| <= R, |t| <= R^2."""
    if box_radius <= 0:
        raise ValueError(f"box_radius must be positive, got {box_radius}")
    if spec.mode == "montecarlo":
        unit = _unit_box_template_cached(n, "montecarlo", spec.samples, spec.seed, 0)
    else:
        unit = _unit_box_template_cached(n, "grid", 0, 0, spec.grid_per_axis)
    return scale_box_nodes(unit, box_radius)


def scale_box_nodes(unit: Array, box_radius: float) -> Array:
    out = unit * box_radius
    out[..., -1] *= box_radius
    return out


def box_volume(n: int, box_radius: float) -> float:
    return (2.0 * box_radius) ** (2 * n) * 2.0 * box_radius**2


def lp_tail_bound(decay_bound, p: float, box_radius: float, n: int = 1) -> float:
    """Upper bound for the L^p norm of f outside the gauge box of radius R.

    The box contains the gauge ball B(0, R), so the complement is covered by
    dyadic shells R 2^k <= N < R 2^(k+1); on each shell |f|^p is bounded by
    the decay bound's sampled shell maximum times the shell volume.  Returns
    (sum of shell terms)^(1/p); 0 when no bound is supplied.
    """
    if decay_bound is None:
        return 0.0
    total = 0.0
    for k in range(200):
        lo = box_radius * 2.0**k
        hi = 2.0 * lo
        sup = float(np.max(decay_bound(np.geomspace(lo, hi, 17))))
        term = sup**p * (ball_volume(hi, n) - ball_volume(lo, n))
        total += term
        if not math.isfinite(term):
            return math.inf
        if term <= 1e-300 or (total > 0 and term < 1e-16 * total):
            break
    return total ** (1.0 / p)


def domain_integrate_lp(
    f, p: float, box_radius: float, spec: QuadSpec, tail=None, n: int | None = None
) -> tuple[float, float]:
    """L^p norm of f over the gauge box |z_j| <= R, |t| <= R^2.

    Returns (value, tail_bound) where tail_bound bounds the L^p norm of f
    outside the box, computed from the supplied decay bound (0 when none is
    given; the caller owns tail accounting in that case).  n is inferred
    from a ScalarField argument and must be passed for bare callables.
    """
    if p < 1:
        raise ValueError(f"exponent p must be >= 1, got {p}")
    if n is None:
        n = getattr(f, "n", None)
        if n is None:
            raise ValueError("pass n explicitly when integrating a bare callable")
    ev = getattr(f, "eval", f)
    nodes = box_nodes(n, box_radius, spec)
    vals = np.asarray(ev(nodes), dtype=float)
    _check_finite(vals, nodes, "domain integrand")
    value = (box_volume(n, box_radius) * float(np.mean(np.abs(vals) ** p))) ** (1.0 / p)
    return value, lp_tail_bound(tail, p, box_radius, n)


def log_scale_integrate(g, grid: ScaleGrid) -> float:
    """Integral of g(r) against dr/r over [r_min, r_max].

    Midpoint rule in log r: the grid nodes are log-cell midpoints, so this
    is sum(g(r_i)) * log_step.
    """
    rs = grid.nodes()
    vals = np.asarray([g(r) for r in rs], dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = rs[~np.isfinite(vals)][0]
        raise FloatingPointError(f"non-finite scale integrand at r={bad!r}")
    return float(vals.sum() * grid.log_step)


def log_scale_integrate_values(values: Array, grid: ScaleGrid):
    """Same rule as log_scale_integrate for precomputed node values.

    values has shape (..., grid.count); leading axes integrate in a batch.
    """
    values = np.asarray(values, dtype=float)
    if values.shape[-1] != grid.count:
        raise ValueError(
            f"expected {grid.count} node values, got {values.shape[-1]}"
        )
    out = values.sum(axis=-1) * grid.log_step
    return float(out) if out.ndim == 0 else out
