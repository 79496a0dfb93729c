"""Canonical generators, conjugating matrices and ambient paths.

Every :class:`CanonicalForm` stores ``P`` such that ``P @ X @ inv(P)`` is
the canonical generator, so ``P @ exp(tX) @ inv(P) = exp(t * generator)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebras import LieAlgebraElement, Sl2Coords, SL2_F, sl3_form
from .exceptions import DomainError, InvalidInputError
from .linalg import (
    as_matrix,
    block_matrix,
    det3,
    eigh,
    is_purely_imaginary,
    mat_exp,
    norm,
    principal_log_unitary,
    real_log_orthogonal,
    skew_block_schur,
    small_eigs,
)

CLUSTER_TOL = 1e-6
RANK_TOL = 1e-8
NILPOTENT_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    generator: np.ndarray
    conjugator: np.ndarray
    target_group: str
    residual: float


def _form(X, generator, P, group) -> CanonicalForm:
    residual = norm(P @ X @ np.linalg.inv(P) - generator)
    return CanonicalForm(generator, P, group, residual)


def _require(elem, *tags):
    if not isinstance(elem, LieAlgebraElement) or elem.family.tag not in tags:
        raise InvalidInputError(f"expected an element of {' or '.join(tags)}")


def canonical_su(elem: LieAlgebraElement) -> CanonicalForm:
    """Unitary diagonalization ``diag(i b_1, ..., i b_n)``, ``b`` descending.

    The conjugator is rescaled by a phase so that it lies in SU(n).
    """
    _require(elem, "su")
    X = elem.matrix
    n = X.shape[0]
    w, V = eigh(-1j * X)
    P = V.conj().T
    P = P * np.exp(-1j * np.angle(np.linalg.det(P)) / n)
    return _form(X, np.diag(1j * w), P, f"SU({n})")


def canonical_so(elem: LieAlgebraElement) -> CanonicalForm:
    """Rotation-block form ``J(l_1) + ... + J(l_k) + 0`` with an SO(n) conjugator."""
    _require(elem, "so")
    X = elem.matrix
    Q, blocks, zeros = skew_block_schur(X)
    return _form(X, block_matrix(blocks, zeros), Q, f"SO({X.shape[0]})")


def canonical_sl2(elem: LieAlgebraElement) -> CanonicalForm:
    """Rotation generator ``l * F`` (``F = [[0, -1], [1, 0]]``) of a knotted sl(2, R) element.

    The conjugator has positive determinant. Conjugation inside GL+(2, R)
    cannot reverse a rotation, so for ``c < 0`` the generator is ``-l * F``;
    both generate the same circle.
    """
    _require(elem, "sl2R", "slnR")
    X = elem.matrix
    if X.shape != (2, 2):
        raise InvalidInputError("canonical_sl2 needs a 2x2 matrix")
    co = Sl2Coords.from_matrix(X)
    if not co.a**2 + co.b**2 < co.c**2:
        raise DomainError("element does not generate a knotted subgroup (needs a^2 + b^2 < c^2)")
    lam = math.sqrt(co.c**2 - co.a**2 - co.b**2)
    sign = 1.0 if co.c > 0 else -1.0
    # X v1 = sign*lam*v2 and X v2 = -sign*lam*v1 for v2 = sign * X v1 / lam
    e1, e2 = np.eye(2)
    v1 = e1 if abs(co.a + co.c) >= abs(co.c - co.a) else e2
    v2 = sign * (X @ v1) / lam
    V = np.column_stack([v1, v2])
    return _form(X, sign * lam * SL2_F, np.linalg.inv(V), "GL+(2,R)")


def _null_vector(M: np.ndarray) -> np.ndarray:
    _, _, Vh = np.linalg.svd(M)
    return Vh[-1].conj()


def _rank(M: np.ndarray, scale: float) -> int:
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > RANK_TOL * max(scale, 1.0)))


def _positive_det(tag: str, V: np.ndarray) -> np.ndarray:
    if np.linalg.det(V) > 0:
        return V
    if tag == "X3":
        # the columns form one Jordan chain; only a global sign keeps it
        return -V
    V = V.copy()
    V[:, -1] = -V[:, -1]
    return V


def canonical_sl3(elem: LieAlgebraElement):
    """Jordan class of an sl(3, R) element.

    Returns ``(form_tag, params, CanonicalForm)`` with ``form_tag`` one of
    ``"X1"`` (real diagonalizable), ``"X2"`` (2x2 Jordan block), ``"X3"``
    (regular nilpotent) or ``"X4"`` (complex pair ``a +- ib``, ``b > 0``).
    For ``X1`` the eigenvalue of largest magnitude goes last and the other
    two ascend. The conjugator is real with positive determinant.
    """
    _require(elem, "sl3R", "slnR")
    X = elem.matrix
    if X.shape != (3, 3):
        raise InvalidInputError("canonical_sl3 needs a 3x3 matrix")
    tag, params, V = _sl3_jordan(X)
    V = _positive_det(tag, V)
    gen = sl3_form(tag, *params)
    return tag, params, _form(X, gen, np.linalg.inv(V), "GL+(3,R)")


def sl3_jordan_class(X) -> tuple[str, tuple]:
    """``(form_tag, params)`` of a 3x3 traceless real matrix, without the conjugator."""
    tag, params, _ = _sl3_jordan(np.real(as_matrix(X)))
    return tag, tuple(params)


def _sl3_jordan(X: np.ndarray):
    scale = norm(X)
    eye = np.eye(3)
    if scale == 0.0:
        return "X1", (0.0, 0.0), eye
    Y = X / scale
    p = float(Y[0, 0] * Y[1, 1] - Y[0, 1] * Y[1, 0] + Y[0, 0] * Y[2, 2] - Y[0, 2] * Y[2, 0]
              + Y[1, 1] * Y[2, 2] - Y[1, 2] * Y[2, 1])
    q = -float(det3(Y))
    if abs(p) <= NILPOTENT_TOL and abs(q) <= NILPOTENT_TOL:
        return _sl3_nilpotent(X, scale)
    eigs = small_eigs(X)
    complex_pair = [z for z in eigs if abs(z.imag) > CLUSTER_TOL * (1.0 + scale)]
    if complex_pair:
        z = max(complex_pair, key=lambda w: w.imag)
        a, b = z.real, z.imag
        if is_purely_imaginary(z, scale):
            a = 0.0
        w = _null_vector(X - z * eye)
        w = w / w[np.argmax(np.abs(w))]
        v3 = _null_vector(X + 2.0 * z.real * eye).real
        return "X4", (a, b), np.column_stack([w.real, w.imag, v3])
    lams = sorted((z.real for z in eigs), key=lambda x: (abs(x), x))
    # discriminant from the coefficients, relative to the spectral radius
    radius = abs(lams[2]) / scale
    disc = (-4.0 * p**3 - 27.0 * q**2) / radius**6
    if abs(disc) <= CLUSTER_TOL or abs(lams[0] - lams[1]) <= CLUSTER_TOL * (1.0 + scale) \
            or abs(lams[1] - lams[2]) <= CLUSTER_TOL * (1.0 + scale):
        # double root mu and simple root -2 mu
        mu = -1.5 * q / p * scale
        if _rank(X - mu * eye, scale) >= 2:
            M = X - mu * eye
            M2 = M @ M
            _, _, Vh = np.linalg.svd(M2)
            gen_space = Vh[-2:].T
            v2 = gen_space[:, np.argmax(np.linalg.norm(M @ gen_space, axis=0))]
            v1 = M @ v2
            v3 = _null_vector(X + 2.0 * mu * eye)
            return "X2", (mu,), np.column_stack([v1, v2, v3])
        V = _eigvecs_real(X, [mu, mu, -2.0 * mu])
        return "X1", (mu, mu), V
    l1, l2, _ = lams[0], lams[1], lams[2]
    l1, l2 = sorted((l1, l2))
    V = _eigvecs_real(X, [l1, l2, -(l1 + l2)])
    return "X1", (l1, l2), V


def _eigvecs_real(X, values):
    eye = np.eye(3)
    cols = []
    done = set()
    for lam in values:
        if lam in done:
            continue
        done.add(lam)
        mult = values.count(lam)
        _, _, Vh = np.linalg.svd(X - lam * eye)
        cols.extend(Vh[-mult:][::-1])
    return np.column_stack(cols).real


def _sl3_nilpotent(X, scale):
    r = _rank(X, scale)
    if r >= 2:
        _, _, Vh = np.linalg.svd(X @ X)
        v3 = Vh[0]
        v2 = X @ v3
        v1 = X @ v2
        return "X3", (), np.column_stack([v1, v2, v3])
    _, _, Vh = np.linalg.svd(X)
    v2 = Vh[0]
    v1 = X @ v2
    # second kernel direction, orthogonal to v1
    K = Vh[1:].T
    v3 = _orth_to(v1, K)
    return "X2", (0.0,), np.column_stack([v1, v2, v3])


def _orth_to(v, K):
    """A vector in span(K) orthogonal to v."""
    c = K.T @ v
    w = K @ np.array([-c[1], c[0]]) if len(c) == 2 else K[:, 0]
    return w / np.linalg.norm(w)


def ambient_path(P, s: float, group: str) -> np.ndarray:
    """Point ``xi(s) = exp(s K)`` of a path from ``I`` to ``P`` inside the group.

    ``group="su"`` accepts a unitary ``P``; when ``det P = 1`` the logarithm
    is shifted to be traceless so the whole path stays in SU(n).
    ``group="so"`` needs ``P`` in SO(n) and uses a real logarithm.
    """
    A = as_matrix(P, name="P")
    if group == "su":
        K = principal_log_unitary(A)
        winding = np.trace(K).imag / (2.0 * math.pi)
        m = round(winding)
        if m and abs(winding - m) < 1e-8:
            # det P = 1: move one eigenphase by 2*pi*m so that tr K = 0
            _, V = eigh(-1j * K)
            v = V[:, 0] if m > 0 else V[:, -1]
            K = K - 2j * math.pi * m * np.outer(v, v.conj())
        return mat_exp(s * K)
    if group == "so":
        if np.linalg.det(np.real(A)) < 0:
            raise DomainError("no path in SO(n) reaches a matrix with determinant -1")
        return mat_exp(s * real_log_orthogonal(A))
    raise InvalidInputError(f"unknown group {group!r}; expected 'su' or 'so'")
