"""Scalar test fields on H^n with analytic horizontal gradients.

Each field evaluates on point arrays of shape (..., 2n+1) and returns an
array of shape (...).  Support metadata, when present, certifies
|f(x)| <= decay_bound(N(x)) whenever N(x) >= support_radius, and likewise
|grad_H f(x)| <= grad_decay_bound(N(x)); truncation accounting downstream
relies on those certificates and reports infinite bounds without them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .hgroup import dilate

Array = np.ndarray


@dataclass(frozen=True)
class ScalarField:
    label: str
    n: int
    eval: Callable[[Array], Array]
    analytic_hgrad: Callable[[Array], Array] | None = None
    support_radius: float | None = None
    decay_bound: Callable[[Array], Array] | None = None
    grad_decay_bound: Callable[[Array], Array] | None = None


def _gauss_envelope(r):
    # sharp lower bound for |z|^2 + t^2 on the gauge sphere N = r:
    # the minimum sits at z = 0 (r^4/16) until r > 4, then at t = 0 (r^2)
    r = np.asarray(r, dtype=float)
    return np.exp(-np.minimum(r**4 / 16.0, r**2))


def _gaussian(n: int) -> ScalarField:
    def ev(p):
        p = np.asarray(p, dtype=float)
        return np.exp(-(p[..., :-1] ** 2).sum(axis=-1) - p[..., -1] ** 2)

    def grad(p):
        p = np.asarray(p, dtype=float)
        g = ev(p)[..., None]
        x, y, t = p[..., :n], p[..., n:-1], p[..., -1:]
        return np.concatenate([-2.0 * x + y * t, -2.0 * y - x * t], axis=-1) * g

    def gbound(r):
        r = np.asarray(r, dtype=float)
        # per component |X_j f| <= (2|z| + |z||t|) e^(-|z|^2-t^2), with
        # |z| <= r and |t| <= r^2/4 on the gauge ball boundary
        return np.sqrt(2.0 * n) * r * (2.0 + r**2 / 4.0) * _gauss_envelope(r)

    return ScalarField(
        label="gaussian",
        n=n,
        eval=ev,
        analytic_hgrad=grad,
        support_radius=1.0,
        decay_bound=_gauss_envelope,
        grad_decay_bound=gbound,
    )


def _bump(n: int) -> ScalarField:
    # exp(-1/(1 - N^2)) inside the unit gauge ball, 0 outside; continuous
    # everywhere, smooth away from the gauge cone at the origin
    def _parts(p):
        p = np.asarray(p, dtype=float)
        zsq = (p[..., :-1] ** 2).sum(axis=-1)
        u = np.sqrt(zsq * zsq + 16.0 * p[..., -1] ** 2)
        return zsq, u

    def ev(p):
        _, u = _parts(p)
        w = 1.0 - u
        with np.errstate(divide="ignore", over="ignore"):
            val = np.where(u < 1.0, np.exp(-1.0 / np.where(w > 0, w, 1.0)), 0.0)
        return val

    def grad(p):
        p = np.asarray(p, dtype=float)
        zsq, u = _parts(p)
        x, y, t = p[..., :n], p[..., n:-1], p[..., -1:]
        inside = (u > 0.0) & (u < 1.0)
        safe_u = np.where(inside, u, 1.0)
        w = np.where(inside, 1.0 - u, 1.0)
        scale = np.where(inside, -np.exp(-1.0 / w) / (w * w) / safe_u, 0.0)[..., None]
        zsq = zsq[..., None]
        du = np.concatenate(
            [2.0 * zsq * x - 8.0 * y * t, 2.0 * zsq * y + 8.0 * x * t], axis=-1
        )
        return scale * du

    zero = lambda r: np.zeros_like(np.asarray(r, dtype=float))
    return ScalarField(
        label="bump",
        n=n,
        eval=ev,
        analytic_hgrad=grad,
        support_radius=1.0,
        decay_bound=zero,
        grad_decay_bound=zero,
    )


def _affine(n: int, a, b: float) -> ScalarField:
    a = np.asarray(a, dtype=float)
    if a.shape != (2 * n,):
        raise ValueError(f"affine coefficient vector must have length {2 * n}")
    b = float(b)

    def ev(p):
        p = np.asarray(p, dtype=float)
        return b + p[..., :-1] @ a

    def grad(p):
        p = np.asarray(p, dtype=float)
        return np.broadcast_to(a, p.shape[:-1] + (2 * n,)).copy()

    return ScalarField(label="affine", n=n, eval=ev, analytic_hgrad=grad)


def _vertical_wave(n: int, omega: float) -> ScalarField:
    omega = float(omega)

    def _parts(p):
        p = np.asarray(p, dtype=float)
        g = np.exp(-(p[..., :-1] ** 2).sum(axis=-1) - p[..., -1] ** 2)
        return p, g

    def ev(p):
        p, g = _parts(p)
        return g * np.sin(omega * p[..., -1])

    def grad(p):
        p, g = _parts(p)
        x, y, t = p[..., :n], p[..., n:-1], p[..., -1:]
        s = np.sin(omega * t)
        c = np.cos(omega * t)
        common = t * s - 0.5 * omega * c
        return np.concatenate(
            [-2.0 * x * s + y * common, -2.0 * y * s - x * common], axis=-1
        ) * g[..., None]

    def gbound(r):
        r = np.asarray(r, dtype=float)
        return (
            np.sqrt(2.0 * n)
            * r
            * (2.0 + r**2 / 4.0 + omega / 2.0)
            * _gauss_envelope(r)
        )

    return ScalarField(
        label=f"vertical-wave(omega={omega:g})",
        n=n,
        eval=ev,
        analytic_hgrad=grad,
        support_radius=1.0,
        decay_bound=_gauss_envelope,
        grad_decay_bound=gbound,
    )


def _coordinate(n: int, axis) -> ScalarField:
    if axis == "t":
        def ev(p):
            p = np.asarray(p, dtype=float)
            return p[..., -1].copy()

        def grad(p):
            # X_j t = -y_j/2, X_{n+j} t = x_j/2
            p = np.asarray(p, dtype=float)
            return 0.5 * np.concatenate([-p[..., n:-1], p[..., :n]], axis=-1)

        return ScalarField(label="coordinate(t)", n=n, eval=ev, analytic_hgrad=grad)
    j = int(axis)
    if not 1 <= j <= 2 * n:
        raise ValueError(f"coordinate axis must be 't' or an index in 1..{2 * n}")
    e = np.zeros(2 * n)
    e[j - 1] = 1.0

    def ev(p):
        p = np.asarray(p, dtype=float)
        return p[..., j - 1].copy()

    def grad(p):
        p = np.asarray(p, dtype=float)
        return np.broadcast_to(e, p.shape[:-1] + (2 * n,)).copy()

    return ScalarField(label=f"coordinate(z{j})", n=n, eval=ev, analytic_hgrad=grad)


def _quadratic(n: int, j: int, k: int) -> ScalarField:
    j, k = int(j), int(k)
    if not (1 <= j <= 2 * n and 1 <= k <= 2 * n):
        raise ValueError(f"quadratic indices must lie in 1..{2 * n}")

    def ev(p):
        p = np.asarray(p, dtype=float)
        return p[..., j - 1] * p[..., k - 1]

    def grad(p):
        p = np.asarray(p, dtype=float)
        out = np.zeros(p.shape[:-1] + (2 * n,))
        out[..., j - 1] += p[..., k - 1]
        out[..., k - 1] += p[..., j - 1]
        return out

    return ScalarField(label=f"quadratic(z{j}*z{k})", n=n, eval=ev, analytic_hgrad=grad)


_BUILDERS = {
    "gaussian": (_gaussian, set()),
    "bump": (_bump, set()),
    "affine": (_affine, {"a", "b"}),
    "vertical-wave": (_vertical_wave, {"omega"}),
    "coordinate": (_coordinate, {"axis"}),
    "quadratic": (_quadratic, {"j", "k"}),
}

_DEFAULTS = {
    "affine": {"b": 1.0},
    "vertical-wave": {"omega": 1.0},
    "coordinate": {"axis": 1},
    "quadratic": {"j": 1, "k": 1},
}


def catalog(name: str, n: int = 1, **params) -> ScalarField:
    """Build a named test field on H^n.

    Names: gaussian, bump, affine (params a, b), vertical-wave (param omega),
    coordinate (param axis: 't' or 1..2n), quadratic (params j, k).
    """
    if name not in _BUILDERS:
        raise ValueError(
            f"unknown field {name!r}; choose from {sorted(_BUILDERS)}"
        )
    builder, allowed = _BUILDERS[name]
    merged = dict(_DEFAULTS.get(name, {}))
    merged.update(params)
    if name == "affine" and "a" not in merged:
        merged["a"] = np.ones(2 * n)
    extra = set(merged) - allowed
    if extra:
        raise ValueError(f"unexpected parameters for {name!r}: {sorted(extra)}")
    missing = allowed - set(merged)
    if missing:
        raise ValueError(f"missing parameters for {name!r}: {sorted(missing)}")
    return builder(n, **merged)


def vertical_translate(f: ScalarField, t: float) -> ScalarField:
    """Right-translate by the central element (0, t): x -> f(x * (0,t)).

    Central elements only shift the vertical coordinate, and left-invariant
    frames commute with right translations, so the horizontal gradient just
    translates along.
    """
    t = float(t)
    if t == 0.0:
        return f

    def shift(p):
        p = np.asarray(p, dtype=float).copy()
        p[..., -1] += t
        return p

    ev = f.eval
    new = {"label": f"{f.label}+v{t:g}", "eval": lambda p: ev(shift(p))}
    if f.analytic_hgrad is not None:
        g = f.analytic_hgrad
        new["analytic_hgrad"] = lambda p: g(shift(p))
    if f.support_radius is not None:
        # N(x * (0,t)) >= N(x) - N((0,t)) and N((0,t)) = 2 sqrt|t|
        off = 2.0 * np.sqrt(abs(t))
        new["support_radius"] = f.support_radius + off
        if f.decay_bound is not None:
            db = f.decay_bound
            new["decay_bound"] = lambda r: db(np.maximum(np.asarray(r, float) - off, 0.0))
        if f.grad_decay_bound is not None:
            gb = f.grad_decay_bound
            new["grad_decay_bound"] = lambda r: gb(
                np.maximum(np.asarray(r, float) - off, 0.0)
            )
    return replace(f, **new)


def precompose_dilation(f: ScalarField, s: float) -> ScalarField:
    """Return f_s = f o delta_s; gradients pick up one factor of s."""
    s = float(s)
    if s <= 0:
        raise ValueError(f"dilation factor must be positive, got {s!r}")
    if s == 1.0:
        return f
    ev = f.eval
    new = {"label": f"{f.label}@s{s:g}", "eval": lambda p: ev(dilate(s, p))}
    if f.analytic_hgrad is not None:
        g = f.analytic_hgrad
        new["analytic_hgrad"] = lambda p: s * g(dilate(s, p))
    if f.support_radius is not None:
        new["support_radius"] = f.support_radius / s
        if f.decay_bound is not None:
            db = f.decay_bound
            new["decay_bound"] = lambda r: db(s * np.asarray(r, float))
        if f.grad_decay_bound is not None:
            gb = f.grad_decay_bound
            new["grad_decay_bound"] = lambda r: s * gb(s * np.asarray(r, float))
    return replace(f, **new)
