"""Matrix Lie algebra families, membership tests and structured constructors."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidInputError, PreconditionError
from .linalg import as_matrix, is_real, norm

TAGS = ("su", "so", "sl2R", "sl3R", "slnR", "heisenberg")
_FIXED_DIM = {"sl2R": 2, "sl3R": 3, "heisenberg": 3}
MEMBERSHIP_TOL = 1e-10

SIGMA_X = np.array([[1j, 0], [0, -1j]])
SIGMA_Y = np.array([[0, 1], [-1, 0]], dtype=complex)
SIGMA_Z = np.array([[0, 1j], [1j, 0]])

# sl(2, R) basis, chosen so that aE + bH + cF = [[b, a - c], [a + c, -b]].
SL2_E = np.array([[0.0, 1.0], [1.0, 0.0]])
SL2_H = np.array([[1.0, 0.0], [0.0, -1.0]])
SL2_F = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class AlgebraFamily:
    tag: str
    n: int

    def __post_init__(self):
        if self.tag not in TAGS:
            raise InvalidInputError(f"unknown algebra family {self.tag!r}")
        fixed = _FIXED_DIM.get(self.tag)
        if fixed is not None and self.n != fixed:
            raise InvalidInputError(f"{self.tag} has fixed dimension {fixed}, got {self.n}")
        if self.n < 2:
            raise InvalidInputError(f"{self.tag}({self.n}): n must be at least 2")

    @classmethod
    def of(cls, tag: str, n: int | None = None) -> "AlgebraFamily":
        if n is None:
            if tag not in _FIXED_DIM:
                raise InvalidInputError(f"{tag} needs an explicit dimension")
            n = _FIXED_DIM[tag]
        return cls(tag, int(n))

    @property
    def is_real(self) -> bool:
        return self.tag != "su"

    def __str__(self):
        if self.tag in _FIXED_DIM:
            return self.tag
        return f"{self.tag}({self.n})"


def check_membership(family: AlgebraFamily, X) -> bool:
    """True iff ``X`` lies in the Lie algebra of ``family``.

    All tests use the tolerance ``1e-10 * (1 + ||X||)``.
    """
    A = as_matrix(X)
    if A.shape[0] != family.n:
        raise InvalidInputError(f"{family} expects a {family.n}x{family.n} matrix, got {A.shape}")
    tol = MEMBERSHIP_TOL * (1.0 + norm(A))
    tag = family.tag
    if tag == "su":
        return bool(norm(A + A.conj().T) <= tol and abs(np.trace(A)) <= tol)
    if not is_real(A, tol):
        return False
    R = np.real(A)
    if tag == "so":
        return bool(norm(R + R.T) <= tol)
    if tag == "heisenberg":
        return bool(norm(np.tril(R)) <= tol)
    return bool(abs(np.trace(R)) <= tol)


@dataclass(frozen=True, eq=False)
class LieAlgebraElement:
    """A matrix together with the algebra it is claimed to belong to.

    Construction fails with :class:`InvalidInputError` when the matrix is
    not a member. Real families store a real array.
    """

    family: AlgebraFamily
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        A = as_matrix(self.matrix)
        if not check_membership(self.family, A):
            raise InvalidInputError(f"matrix is not an element of {self.family}")
        A = np.array(np.real(A) if self.family.is_real else A.astype(complex))
        A.setflags(write=False)
        object.__setattr__(self, "matrix", A)

    @property
    def n(self) -> int:
        return self.family.n

    def __repr__(self):
        return f"LieAlgebraElement({self.family}, {self.matrix.tolist()!r})"


def element(tag: str, X) -> LieAlgebraElement:
    """Tag ``X`` with the family ``tag`` sized from the matrix."""
    A = as_matrix(X)
    return LieAlgebraElement(AlgebraFamily.of(tag, A.shape[0]), A)


@dataclass(frozen=True)
class Sl2Coords:
    a: float
    b: float
    c: float

    def matrix(self) -> np.ndarray:
        a, b, c = self.a, self.b, self.c
        return np.array([[b, a - c], [a + c, -b]], dtype=float)

    @property
    def rho_squared(self) -> float:
        return self.a**2 + self.b**2 - self.c**2

    @classmethod
    def from_matrix(cls, X) -> "Sl2Coords":
        A = np.real(as_matrix(X))
        if A.shape != (2, 2):
            raise InvalidInputError("sl2R coordinates need a 2x2 matrix")
        return cls(
            a=float(0.5 * (A[0, 1] + A[1, 0])),
            b=float(0.5 * (A[0, 0] - A[1, 1])),
            c=float(0.5 * (A[1, 0] - A[0, 1])),
        )


def build_sl2(coords: Sl2Coords) -> LieAlgebraElement:
    return LieAlgebraElement(AlgebraFamily.of("sl2R"), coords.matrix())


def build_su2_sigma(x1: float, x2: float, x3: float) -> LieAlgebraElement:
    """Unit combination ``x1*SIGMA_X + x2*SIGMA_Y + x3*SIGMA_Z``; squares to ``-I``."""
    if abs(math.sqrt(x1 * x1 + x2 * x2 + x3 * x3) - 1.0) > 1e-9:
        raise PreconditionError("coefficients must form a unit vector")
    S = x1 * SIGMA_X + x2 * SIGMA_Y + x3 * SIGMA_Z
    return LieAlgebraElement(AlgebraFamily.of("su", 2), S)


def pauli_basis(n: int, kind: str, *indices: int) -> LieAlgebraElement:
    """Pauli-type basis element of su(n), 1-based indices.

    ``kind="H"`` takes one index ``l`` and gives ``i(E_ll - E_{l+1,l+1})``;
    ``"X"`` and ``"Y"`` take ``r < s`` and give ``E_rs - E_sr`` and
    ``i(E_rs + E_sr)``.
    """
    if n < 2:
        raise InvalidInputError("n must be at least 2")
    M = np.zeros((n, n), dtype=complex)
    if kind == "H":
        if len(indices) != 1 or not 1 <= indices[0] <= n - 1:
            raise InvalidInputError(f"H needs one index in [1, {n - 1}], got {indices}")
        ell = indices[0] - 1
        M[ell, ell] = 1j
        M[ell + 1, ell + 1] = -1j
    elif kind in ("X", "Y"):
        if len(indices) != 2 or not 1 <= indices[0] < indices[1] <= n:
            raise InvalidInputError(f"{kind} needs 1 <= r < s <= {n}, got {indices}")
        r, s = indices[0] - 1, indices[1] - 1
        if kind == "X":
            M[r, s], M[s, r] = 1, -1
        else:
            M[r, s] = M[s, r] = 1j
    else:
        raise InvalidInputError(f"unknown basis kind {kind!r}")
    return LieAlgebraElement(AlgebraFamily.of("su", n), M)


SL3_ARITY = {"X1": 2, "X2": 1, "X3": 0, "X4": 2}


def sl3_form(tag: str, *params: float) -> np.ndarray:
    """Jordan-class representative of sl(3, R): ``X1(l1, l2)``, ``X2(l)``, ``X3``, ``X4(a, b)``."""
    if tag not in SL3_ARITY:
        raise InvalidInputError(f"unknown sl3 form {tag!r}")
    if len(params) != SL3_ARITY[tag]:
        raise InvalidInputError(f"{tag} takes {SL3_ARITY[tag]} parameters, got {len(params)}")
    if tag == "X1":
        l1, l2 = params
        return np.diag([l1, l2, -(l1 + l2)]).astype(float)
    if tag == "X2":
        (lam,) = params
        return np.array([[lam, 1.0, 0.0], [0.0, lam, 0.0], [0.0, 0.0, -2.0 * lam]])
    if tag == "X3":
        return np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    a, b = params
    return np.array([[a, b, 0.0], [-b, a, 0.0], [0.0, 0.0, -2.0 * a]])
