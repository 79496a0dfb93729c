"""Dense matrix kernels: exponential, Hermitian/small eigenproblems, skew Schur form.

Matrices are plain ``numpy`` arrays. Real input stays real where the
operation allows it; everything else is promoted to ``complex128``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import InvalidInputError, PreconditionError, UnsupportedDimensionError

TAYLOR_ORDER = 12
SCALING_TARGET = 0.5
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
IMAG_TOL = 1e-9


@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: np.ndarray


def as_matrix(X, *, name: str = "X") -> np.ndarray:
    """Validate ``X`` as a finite square matrix and return it as an array.

    Integer and boolean input is promoted to float; complex input is kept.
    """
    A = np.asarray(X)
    if A.dtype == object:
        raise InvalidInputError(f"{name} has non-numeric entries")
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidInputError(f"{name} must be a square matrix, got shape {A.shape}")
    if A.shape[0] == 0:
        raise InvalidInputError(f"{name} has dimension 0")
    if not np.iscomplexobj(A):
        A = A.astype(float)
    if not np.all(np.isfinite(A)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return A


def norm(X) -> float:
    """Frobenius norm; the default matrix norm used for tolerances."""
    return float(np.linalg.norm(X))


def is_real(X, tol: float = 0.0) -> bool:
    A = np.asarray(X)
    if not np.iscomplexobj(A):
        return True
    return bool(np.max(np.abs(A.imag), initial=0.0) <= tol)


def is_purely_imaginary(value: complex, scale: float) -> bool:
    """``|Re value| <= IMAG_TOL * (1 + scale)``."""
    return abs(complex(value).real) <= IMAG_TOL * (1.0 + scale)


def mat_exp(X) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a degree-12 Taylor polynomial.

    The matrix is scaled by ``2**-s`` so that its 1-norm is at most 0.5, the
    truncated series is evaluated with Horner's rule, and the result is
    squared ``s`` times.
    """
    A = as_matrix(X)
    n = A.shape[0]
    norm1 = float(np.max(np.sum(np.abs(A), axis=0)))
    s = 0
    if norm1 > SCALING_TARGET:
        s = int(math.ceil(math.log2(norm1 / SCALING_TARGET)))
    B = A / (2.0**s)
    eye = np.eye(n, dtype=B.dtype)
    E = eye.copy()
    for k in range(TAYLOR_ORDER, 0, -1):
        E = eye + (B @ E) / k
    for _ in range(s):
        E = E @ E
    return E


def _jacobi_rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    """2x2 unitary G with G^H [[app, apq], [conj(apq), aqq]] G diagonal."""
    r = abs(apq)
    phase = apq / r
    tau = (aqq - app) / (2.0 * r)
    if abs(tau) > 1e150:
        t = 0.5 / tau
    else:
        t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    # diag(1, conj(phase)) makes the pivot real, then a real Jacobi rotation.
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)


def _jacobi_eigh(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    A = np.array(H, dtype=complex)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = norm(A)
    if scale == 0.0 or n == 1:
        return A.diagonal().real.copy(), V
    threshold = JACOBI_TOL * scale
    for _ in range(JACOBI_MAX_SWEEPS):
        if norm(A - np.diag(A.diagonal())) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-30 * scale:
                    continue
                G = _jacobi_rotation(A[p, p].real, A[q, q].real, apq)
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ G
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return A.diagonal().real.copy(), V


def eigh(H) -> tuple[np.ndarray, np.ndarray]:
    """Array form of :func:`hermitian_eigs`: values descending, vectors as columns."""
    A = as_matrix(H, name="H")
    scale = norm(A)
    if norm(A - A.conj().T) > 1e-10 * scale:
        raise PreconditionError("matrix is not Hermitian")
    A = 0.5 * (A + A.conj().T)
    w, V = _jacobi_eigh(A)
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def hermitian_eigs(H) -> list[EigenPair]:
    """Eigenpairs of a Hermitian matrix by cyclic Jacobi rotations.

    Returns real eigenvalues in descending order with orthonormal
    eigenvectors.

    Raises
    ------
    PreconditionError
        If ``H`` is not Hermitian to ``1e-10 * ||H||``.
    """
    w, V = eigh(H)
    return [EigenPair(float(w[j]), V[:, j].copy()) for j in range(len(w))]


def det3(A) -> complex:
    """Cofactor determinant of a 3x3 matrix; unlike LU it tolerates subnormal entries."""
    return (A[0, 0] * (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
            - A[0, 1] * (A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0])
            + A[0, 2] * (A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0]))


def _charpoly_eval(A: np.ndarray, lam: complex) -> complex:
    return complex(det3(lam * np.eye(3) - A))


def _cubic_roots(a2: complex, a1: complex, a0: complex, real: bool) -> list[complex]:
    """Roots of l^3 + a2 l^2 + a1 l + a0."""
    shift = -a2 / 3.0
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2**3 / 27.0 - a2 * a1 / 3.0 + a0
    if real:
        p, q, shift = p.real, q.real, shift.real
        disc = -(4.0 * p**3 + 27.0 * q**2)
        if disc > 0 and p < 0:
            m = 2.0 * math.sqrt(-p / 3.0)
            arg = 3.0 * q / (p * m)
            theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
            ts = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
            return [complex(t + shift) for t in ts]
        root = math.sqrt(max(q * q / 4.0 + p**3 / 27.0, 0.0))
        t0 = float(np.cbrt(-q / 2.0 + root) + np.cbrt(-q / 2.0 - root))
        # deflate: t^2 + t0 t + (t0^2 + p)
        d = -0.75 * t0 * t0 - p
        if d >= 0:
            r = math.sqrt(d)
            pair = [complex(-t0 / 2.0 + r), complex(-t0 / 2.0 - r)]
        else:
            r = math.sqrt(-d)
            pair = [complex(-t0 / 2.0, r), complex(-t0 / 2.0, -r)]
        return [complex(t0 + shift)] + [z + shift for z in pair]
    root = cmath.sqrt(q * q / 4.0 + p**3 / 27.0)
    u3 = -q / 2.0 + root
    if abs(u3) < abs(-q / 2.0 - root):
        u3 = -q / 2.0 - root
    if u3 == 0:
        return [complex(shift)] * 3
    u = u3 ** (1.0 / 3.0)
    omega = cmath.exp(2j * math.pi / 3.0)
    roots = []
    for k in range(3):
        uk = u * omega**k
        roots.append(uk - p / (3.0 * uk) + shift)
    return roots


def small_eigs(X) -> list[complex]:
    """All eigenvalues of a matrix of size at most 3, with multiplicity.

    Closed-form quadratic/cubic solution of the characteristic polynomial.
    For real input the roots are real or come in exact conjugate pairs.
    """
    A = as_matrix(X)
    n = A.shape[0]
    if n > 3:
        raise UnsupportedDimensionError(f"small_eigs supports n <= 3, got {n}")
    real = is_real(A)
    if real:
        A = A.real
    if n == 1:
        return [complex(A[0, 0])]
    tr = complex(np.trace(A))
    if n == 2:
        det = complex(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])
        disc = tr * tr - 4.0 * det
        if real:
            d = disc.real
            if d >= 0:
                r = math.sqrt(d)
                return [complex((tr.real + r) / 2.0), complex((tr.real - r) / 2.0)]
            r = math.sqrt(-d)
            return [complex(tr.real / 2.0, r / 2.0), complex(tr.real / 2.0, -r / 2.0)]
        r = cmath.sqrt(disc)
        return [(tr + r) / 2.0, (tr - r) / 2.0]
    minors = (
        A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        + A[0, 0] * A[2, 2] - A[0, 2] * A[2, 0]
        + A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1]
    )
    det = complex(det3(A))
    roots = _cubic_roots(-tr, complex(minors), -det, real)
    polished = []
    for lam in roots:
        best, res = lam, abs(_charpoly_eval(A, lam))
        # One guarded Newton step; skipped near multiple roots.
        h = 1e-7 * (1.0 + abs(lam))
        deriv = (_charpoly_eval(A, lam + h) - _charpoly_eval(A, lam - h)) / (2 * h)
        if abs(deriv) > 1e-8:
            cand = lam - _charpoly_eval(A, lam) / deriv
            if real and lam.imag == 0.0:
                cand = complex(cand.real)
            cres = abs(_charpoly_eval(A, cand))
            if cres < res:
                best = cand
        polished.append(best)
    if real:
        polished = _conjugate_symmetrize(polished)
    return polished


def _conjugate_symmetrize(roots: list[complex]) -> list[complex]:
    if all(z.imag == 0.0 for z in roots):
        return roots
    out = list(roots)
    cplx = [i for i, z in enumerate(out) if z.imag != 0.0]
    if len(cplx) == 2:
        i, j = cplx
        re = 0.5 * (out[i].real + out[j].real)
        im = 0.5 * (abs(out[i].imag) + abs(out[j].imag))
        out[i] = complex(re, im if out[i].imag > 0 else -im)
        out[j] = complex(re, -out[i].imag)
    return out


def skew_block_schur(X) -> tuple[np.ndarray, list[float], int]:
    """Real block form of a skew-symmetric matrix.

    Returns ``(Q, blocks, zero_count)`` with ``Q`` in SO(n) and
    ``X = Q.T @ D @ Q``, where ``D`` is the direct sum of ``J(l) =
    [[0, l], [-l, 0]]`` for ``l`` in ``blocks`` followed by ``zero_count``
    zeros. Block magnitudes are sorted descending. Every ``l`` is positive
    except when ``det(Q) = +1`` can only be reached by reversing the
    orientation of the last block (no zero block available), in which case
    the last ``l`` is negative.
    """
    A = as_matrix(X)
    if not is_real(A):
        raise PreconditionError("matrix is not real")
    A = np.real(A)
    n = A.shape[0]
    scale = norm(A)
    if norm(A + A.T) > 1e-10 * scale:
        raise PreconditionError("matrix is not skew-symmetric")
    A = 0.5 * (A - A.T)
    if scale == 0.0:
        return np.eye(n), [], n
    w, V = eigh(-1j * A)
    cutoff = IMAG_TOL * (1.0 + scale)
    pos = [j for j in range(n) if w[j] > cutoff]
    rows = []
    blocks = []
    for j in pos:
        v = V[:, j] * math.sqrt(2.0)
        # A v = i w v  =>  A Re v = -w Im v,  A Im v = w Re v
        rows.append(v.real)
        rows.append(v.imag)
        blocks.append(float(w[j]))
    if rows:
        B = np.array(rows)
        Qb, _ = np.linalg.qr(B.T)
        # keep each row's direction from the eigenvectors
        signs = np.sign(np.sum(Qb * B.T, axis=0))
        signs[signs == 0] = 1.0
        B = (Qb * signs).T
    else:
        B = np.zeros((0, n))
    zero_count = n - 2 * len(blocks)
    if zero_count:
        # orthonormal complement of the block rows
        P = np.eye(n) - B.T @ B
        U, _, _ = np.linalg.svd(P)
        Q = np.vstack([B, U[:, :zero_count].T])
    else:
        Q = B
    if np.linalg.det(Q) < 0:
        if zero_count:
            Q[-1] = -Q[-1]
        else:
            Q[[-2, -1]] = Q[[-1, -2]]
            blocks[-1] = -blocks[-1]
    # refine block values from the orthonormal basis itself
    D = Q @ A @ Q.T
    blocks = [float(D[2 * j, 2 * j + 1]) for j in range(len(blocks))]
    return Q, blocks, zero_count


def block_matrix(blocks, zero_count: int) -> np.ndarray:
    """Exact direct sum ``J(l_1) + ... + J(l_k) + 0``."""
    n = 2 * len(blocks) + zero_count
    D = np.zeros((n, n))
    for j, lam in enumerate(blocks):
        D[2 * j, 2 * j + 1] = lam
        D[2 * j + 1, 2 * j] = -lam
    return D


def _is_unitary(P: np.ndarray, tol: float) -> bool:
    return norm(P.conj().T @ P - np.eye(P.shape[0])) <= tol * math.sqrt(P.shape[0])


def principal_log_unitary(P) -> np.ndarray:
    """Skew-Hermitian ``K`` with ``exp(K) = P``, eigenphases in ``(-pi, pi]``.

    An eigenphase at ``-pi`` (to rounding) is moved to ``+pi``.
    """
    A = as_matrix(P, name="P").astype(complex)
    if not _is_unitary(A, 1e-9):
        raise PreconditionError("matrix is not unitary")
    T, Z = scipy.linalg.schur(A, output="complex")
    d = T.diagonal()
    phases = np.angle(d)
    phases[phases <= -math.pi + 1e-12] = math.pi
    K = Z @ np.diag(1j * phases) @ Z.conj().T
    return 0.5 * (K - K.conj().T)


def real_log_orthogonal(P) -> np.ndarray:
    """Real skew-symmetric ``K`` with ``exp(K) = P`` for ``P`` in SO(n)."""
    A = as_matrix(P, name="P")
    if not is_real(A):
        raise PreconditionError("matrix is not real")
    A = np.real(A)
    n = A.shape[0]
    if norm(A.T @ A - np.eye(n)) > 1e-9 * math.sqrt(n):
        raise PreconditionError("matrix is not orthogonal")
    if np.linalg.det(A) < 0:
        raise PreconditionError("matrix has determinant -1")
    T, Z = scipy.linalg.schur(A, output="real")
    L = np.zeros((n, n))
    minus_one = []
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > 1e-12:
            theta = math.atan2(T[i + 1, i] - T[i, i + 1], T[i, i] + T[i + 1, i + 1])
            L[i + 1, i] = theta
            L[i, i + 1] = -theta
            i += 2
        else:
            if T[i, i] < 0:
                minus_one.append(i)
            i += 1
    for a, b in zip(minus_one[0::2], minus_one[1::2]):
        L[b, a] = math.pi
        L[a, b] = -math.pi
    K = Z @ L @ Z.T
    return 0.5 * (K - K.T)
