"""Brute-force checks that do not go through the spectral analysis.

:func:`detect_period_numeric` searches ``t -> exp(tX)`` for its first return
to the identity on a grid; the closed-form evaluators write the sl(2, R)
and sl(3, R) subgroups out entry by entry.
"""
from __future__ import annotations

import math

import numpy as np

from .algebras import SL3_ARITY, Sl2Coords
from .exceptions import InvalidInputError
from .linalg import as_matrix, mat_exp, norm

MIN_STEPS = 10_000
BISECTION_ITERS = 50
ANCHOR_EVERY = 128
SL2_PARABOLIC_TOL = 1e-12


def closure_eps(X, t: float, eps: float = 1e-8) -> float:
    """Closure tolerance for ``exp(tX) = I`` scaled by the size of the exponent ``t * ||X||``."""
    return eps * max(1.0, abs(t) * norm(as_matrix(X)))


def default_steps(X, t_max: float) -> int:
    return max(MIN_STEPS, math.ceil(20.0 * t_max * norm(X)))


def _grid_exponentials(X: np.ndarray, h: float, steps: int) -> np.ndarray:
    """exp(i*h*X) for i = 0..steps, from anchored powers of one step."""
    n = X.shape[0]
    dtype = complex if np.iscomplexobj(X) else float
    powers = np.empty((ANCHOR_EVERY, n, n), dtype=dtype)
    powers[0] = np.eye(n)
    step = mat_exp(h * X)
    for j in range(1, ANCHOR_EVERY):
        powers[j] = powers[j - 1] @ step
    n_anchor = steps // ANCHOR_EVERY + 1
    anchors = np.stack([mat_exp((m * ANCHOR_EVERY * h) * X) for m in range(n_anchor)])
    grid = np.matmul(anchors[:, None], powers[None]).reshape(-1, n, n)
    return grid[: steps + 1]


def _distance_sq(X, t):
    E = mat_exp(t * X) - np.eye(X.shape[0])
    return float(np.sum(np.abs(E) ** 2))


def _distance_sq_slope(X, t):
    E = mat_exp(t * X)
    D = E - np.eye(X.shape[0])
    return 2.0 * float(np.real(np.trace(D.conj().T @ X @ E)))


def _refine(X, lo, hi):
    """Bisect the slope of ``||exp(tX) - I||^2`` on a bracket around a minimum."""
    g_lo = _distance_sq_slope(X, lo)
    g_hi = _distance_sq_slope(X, hi)
    if g_lo > 0 or g_hi < 0:
        # no sign change: keep the better grid point
        return lo if _distance_sq(X, lo) < _distance_sq(X, hi) else hi
    for _ in range(BISECTION_ITERS):
        mid = 0.5 * (lo + hi)
        if _distance_sq_slope(X, mid) <= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def detect_period_numeric(X, t_max: float, steps: int | None = None,
                          eps: float = 1e-8) -> float | None:
    """Smallest ``0 < T <= t_max`` with ``||exp(TX) - I|| <= eps``, or None.

    ``||exp(tX) - I||`` is sampled on a uniform grid; every local minimum
    that is low enough to hide a zero between grid points is refined by
    bisection and kept if it reaches ``eps``. None is evidence of
    injectivity on ``[0, t_max]``, not a proof.
    """
    A = as_matrix(X)
    if not t_max > 0:
        raise InvalidInputError("t_max must be positive")
    if eps <= 0:
        raise InvalidInputError("eps must be positive")
    if steps is None:
        steps = default_steps(A, t_max)
    if steps < 10:
        raise InvalidInputError("steps must be at least 10")
    h = t_max / steps
    grid = _grid_exponentials(A, h, steps)
    dist = np.sqrt(np.sum(np.abs(grid - np.eye(A.shape[0])) ** 2, axis=(1, 2)))
    growth = np.max(np.sqrt(np.sum(np.abs(grid) ** 2, axis=(1, 2))))
    # a zero between grid points leaves a grid value at most ~h*||X||*||exp||
    flag = max(math.sqrt(eps), 2.0 * h * norm(A) * growth)
    inner = dist[1:-1]
    minima = np.nonzero((inner <= dist[:-2]) & (inner <= dist[2:]) & (inner < flag))[0] + 1
    for i in minima:
        t = _refine(A, (i - 1) * h, (i + 1) * h)
        if t > 0 and math.sqrt(_distance_sq(A, t)) <= eps:
            return t
    # the endpoint itself can be the return point
    if dist[-1] < flag:
        t = _refine(A, (steps - 1) * h, steps * h)
        if math.sqrt(_distance_sq(A, t)) <= eps:
            return t
    return None


def closed_form_sl2(coords: Sl2Coords, t: float) -> np.ndarray:
    """``exp(tX)`` for ``X = aE + bH + cF`` without a generic exponential.

    Branches on ``rho^2 = a^2 + b^2 - c^2``: trigonometric when negative,
    linear when zero, hyperbolic when positive.
    """
    a, b, c = coords.a, coords.b, coords.c
    rho2 = coords.rho_squared
    if abs(rho2) <= SL2_PARABOLIC_TOL:
        return np.array([[1 + b * t, (a - c) * t], [(a + c) * t, 1 - b * t]])
    if rho2 < 0:
        lam = math.sqrt(-rho2)
        cs, sn = math.cos(lam * t), math.sin(lam * t)
        return np.array([
            [cs + (b / lam) * sn, ((a - c) / lam) * sn],
            [((a + c) / lam) * sn, cs - (b / lam) * sn],
        ])
    rho = math.sqrt(rho2)
    ch, sh = math.cosh(rho * t), math.sinh(rho * t)
    return np.array([
        [ch + (b / rho) * sh, ((a - c) / rho) * sh],
        [((a + c) / rho) * sh, ch - (b / rho) * sh],
    ])


def closed_form_sl3(form_tag: str, params, t: float) -> np.ndarray:
    """``exp(t X_k)`` for the Jordan-class representatives ``X1``..``X4``."""
    params = tuple(params)
    if form_tag not in SL3_ARITY:
        raise InvalidInputError(f"unknown sl3 form {form_tag!r}")
    if len(params) != SL3_ARITY[form_tag]:
        raise InvalidInputError(f"{form_tag} takes {SL3_ARITY[form_tag]} parameters")
    if form_tag == "X1":
        l1, l2 = params
        return np.diag([math.exp(l1 * t), math.exp(l2 * t), math.exp(-(l1 + l2) * t)])
    if form_tag == "X2":
        (lam,) = params
        e = math.exp(lam * t)
        return np.array([[e, t * e, 0.0], [0.0, e, 0.0], [0.0, 0.0, math.exp(-2 * lam * t)]])
    if form_tag == "X3":
        return np.array([[1.0, t, t * t / 2.0], [0.0, 1.0, t], [0.0, 0.0, 1.0]])
    a, b = params
    e = math.exp(a * t)
    cs, sn = math.cos(b * t), math.sin(b * t)
    return np.array([[e * cs, e * sn, 0.0], [-e * sn, e * cs, 0.0], [0.0, 0.0, math.exp(-2 * a * t)]])
