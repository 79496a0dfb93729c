"""Knottedness of one-parameter subgroups ``t -> exp(tX)``.

A nonzero ``X`` generates a knotted (circle) subgroup exactly when
``exp(tX)`` is periodic. For compact families that reduces to the
eigenvalue frequencies being commensurable; the split groups are decided
by their spectra.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .algebras import LieAlgebraElement, Sl2Coords
from .exceptions import InvalidInputError, NotPeriodicError
from .canonical import sl3_jordan_class
from .linalg import eigh, is_purely_imaginary, mat_exp, norm, skew_block_schur
from .oracle import closure_eps, detect_period_numeric

DEFAULT_QMAX = 10**4
DEFAULT_TOL = 1e-9
MAX_EIGVEC_COND = 1e8
GUARD_SAMPLES = 64
GUARD_DISTANCE = 1e-3
PERIOD_CLOSURE = 1e-7


class Verdict(str, enum.Enum):
    TRIVIAL = "Trivial"
    INJECTIVE_LINE = "InjectiveLine"
    KNOTTED = "Knotted"


@dataclass(frozen=True)
class IntegerForm:
    k: tuple[int, ...]
    mu: float


@dataclass(frozen=True)
class FrequencyVector:
    """Frequencies ``beta`` of ``exp(tX)``, eigenvalues ``i*beta``.

    ``imaginary`` is False when the spectrum is not purely imaginary; the
    betas then hold the imaginary parts only and carry no period.
    """

    betas: tuple[float, ...]
    integer_form: IntegerForm | None = None
    imaginary: bool = True


@dataclass(frozen=True)
class TorusKnotType:
    p: int
    q: int

    def __post_init__(self):
        if math.gcd(self.p, self.q) != 1 or not self.p >= self.q >= 1:
            raise ValueError(f"not a normalized torus knot label: ({self.p}, {self.q})")


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    period: float | None = None
    frequencies: FrequencyVector | None = None
    knot: TorusKnotType | None = None
    experimental: bool = False
    detail: str | None = None

    @property
    def knotted(self) -> bool:
        return self.verdict is Verdict.KNOTTED


def commensurate(betas, qmax: int = DEFAULT_QMAX, tol: float = DEFAULT_TOL):
    """Common integer form of real frequencies, or None.

    Each ratio to the largest-magnitude entry is replaced by its best
    rational approximation with denominator at most ``qmax``; the numbers
    are commensurable when every residual is at most ``tol``. Returns
    ``(k, mu)`` with ``beta ~= mu * k``, ``mu > 0`` and ``gcd(k) == 1``.
    """
    b = np.asarray(betas, dtype=float).ravel()
    if b.size == 0 or not np.any(b):
        raise InvalidInputError("commensurate needs at least one nonzero frequency")
    if qmax < 1:
        raise InvalidInputError("qmax must be at least 1")
    ref = b[int(np.argmax(np.abs(b)))]
    fracs = []
    for beta in b:
        r = beta / ref
        f = Fraction(r).limit_denominator(qmax)
        if abs(r - f) > tol:
            return None
        fracs.append(f)
    lcm = reduce(lambda x, y: x * y // math.gcd(x, y), (f.denominator for f in fracs), 1)
    k = [int(f * lcm) for f in fracs]
    g = reduce(math.gcd, (abs(x) for x in k if x), 0)
    k = [x // g for x in k]
    if ref < 0:
        k = [-x for x in k]
    ka = np.array(k, dtype=float)
    mu = float(ka @ b / (ka @ ka))
    return tuple(k), mu


def _integer_form(betas, qmax, tol) -> IntegerForm | None:
    if not any(betas):
        return None
    found = commensurate(betas, qmax, tol)
    return None if found is None else IntegerForm(*found)


def spectrum_frequencies(elem: LieAlgebraElement, qmax: int = DEFAULT_QMAX,
                         tol: float = DEFAULT_TOL) -> FrequencyVector:
    """Frequencies of ``exp(tX)`` read off the spectrum of ``X``, descending."""
    tag = elem.family.tag
    X = elem.matrix
    scale = norm(X)
    if tag == "su":
        w, _ = eigh(-1j * X)
        betas = tuple(float(x) for x in w)
    elif tag == "so":
        _, blocks, zeros = skew_block_schur(X)
        lams = [abs(x) for x in blocks]
        betas = tuple(sorted(lams + [-x for x in lams] + [0.0] * zeros, reverse=True))
    elif tag == "sl2R" or (tag == "slnR" and elem.n == 2):
        co = Sl2Coords.from_matrix(X)
        disc = -co.rho_squared
        if disc > _sl2_zero_tol(scale):
            lam = math.sqrt(disc)
            return FrequencyVector((lam, -lam), IntegerForm((1, -1), lam))
        lam = math.sqrt(max(-disc, 0.0))
        return FrequencyVector((0.0, 0.0), None, imaginary=lam == 0.0)
    elif tag == "sl3R" or (tag == "slnR" and elem.n == 3):
        return _sl3_frequencies(X)
    elif tag == "slnR":
        eigs = np.linalg.eigvals(X)
        return _frequencies_from_eigs(list(eigs), scale, qmax, tol)
    else:
        raise InvalidInputError(f"no frequency spectrum for family {elem.family}")
    return FrequencyVector(betas, _integer_form(betas, qmax, tol))


def _frequencies_from_eigs(eigs, scale, qmax, tol) -> FrequencyVector:
    imaginary = all(is_purely_imaginary(z, scale) for z in eigs)
    zero = 1e-9 * (1.0 + scale)
    betas = tuple(sorted((0.0 if abs(z.imag) <= zero else float(z.imag) for z in eigs),
                         reverse=True))
    if not imaginary:
        return FrequencyVector(betas, None, imaginary=False)
    return FrequencyVector(betas, _integer_form(betas, qmax, tol))


def _sl3_frequencies(X) -> FrequencyVector:
    # read off the Jordan class so that clustered and nilpotent spectra are
    # snapped the same way the canonicalizer snaps them
    form_tag, params = sl3_jordan_class(X)
    if form_tag == "X4":
        a, b = params
        betas = (b, 0.0, -b)
        if a != 0.0:
            return FrequencyVector(betas, None, imaginary=False)
        return FrequencyVector(betas, IntegerForm((1, 0, -1), b))
    eigs = {"X1": lambda p: (p[0], p[1], -(p[0] + p[1])), "X2": lambda p: (p[0], p[0], -2 * p[0]),
            "X3": lambda p: (0.0, 0.0, 0.0)}[form_tag](params)
    return FrequencyVector((0.0, 0.0, 0.0), None, imaginary=not any(eigs))


def _sl2_zero_tol(scale: float) -> float:
    return 1e-12 * (1.0 + scale * scale)


def minimal_period(freqs: FrequencyVector) -> float:
    """Smallest ``T > 0`` with ``exp(TX) = I``: ``2*pi/mu`` for reduced ``k``."""
    form = freqs.integer_form
    if form is None or not any(form.k):
        raise NotPeriodicError("frequencies are not commensurable")
    g = reduce(math.gcd, (abs(x) for x in form.k), 0)
    return 2.0 * math.pi / (form.mu * g)


def verify_period(X, period: float, closure: float = PERIOD_CLOSURE) -> bool:
    """Check ``exp(TX) = I`` and that no sampled ``0 < t < T`` returns to ``I``."""
    X = np.asarray(X)
    eye = np.eye(X.shape[0])
    if norm(mat_exp(period * X) - eye) > closure * (1.0 + period * norm(X)):
        return False
    for j in range(1, GUARD_SAMPLES):
        if norm(mat_exp((period * j / GUARD_SAMPLES) * X) - eye) <= GUARD_DISTANCE:
            return False
    return True


def torus_knot_type(freqs: FrequencyVector, family_tag: str | None = None) -> TorusKnotType | None:
    """(p, q) torus-knot label of a periodic curve in a maximal torus.

    For a traceless 3-vector (su(3), or an untagged vector summing to zero)
    the entry of largest magnitude is fixed by the other two and the
    remaining two are the torus coordinates. Otherwise
    the two largest distinct nonzero ``|k|`` are used. Labels are ordered
    ``p >= q >= 1``; None when fewer than two independent frequencies exist
    or the pair is not coprime.
    """
    form = freqs.integer_form
    if form is None:
        return None
    g = reduce(math.gcd, (abs(x) for x in form.k), 0)
    if g == 0:
        return None
    k = [x // g for x in form.k]
    if family_tag in ("su", None) and len(k) == 3 and sum(k) == 0:
        drop = max(range(3), key=lambda i: abs(k[i]))
        pair = sorted((abs(x) for i, x in enumerate(k) if i != drop), reverse=True)
        if pair[1] == 0:
            return None
        assert math.gcd(*pair) == 1, "reduced su(3) frequencies must give coprime coordinates"
        return TorusKnotType(*pair)
    mags = sorted({abs(x) for x in k if x}, reverse=True)
    if len(mags) < 2:
        return None
    p, q = mags[0], mags[1]
    if math.gcd(p, q) != 1:
        return None
    return TorusKnotType(p, q)


def classify(elem: LieAlgebraElement, qmax: int = DEFAULT_QMAX, tol: float = DEFAULT_TOL,
             verify: bool = True) -> Classification:
    """Decide whether ``exp(tX)`` is trivial, an injective line or a circle.

    ``verify`` runs the sampled minimality guard on periodic su/so results
    and the oracle confirmation required for experimental sl(n, R) verdicts.
    """
    if not isinstance(elem, LieAlgebraElement):
        raise InvalidInputError("classify expects a LieAlgebraElement")
    X = elem.matrix
    tag = elem.family.tag
    if not np.any(X):
        return Classification(Verdict.TRIVIAL)
    if tag == "heisenberg":
        return Classification(Verdict.INJECTIVE_LINE, detail="exponential map of the Heisenberg algebra is a bijection")
    if tag == "slnR" and elem.n >= 4:
        return _classify_sln(elem, qmax, tol, verify)

    freqs = spectrum_frequencies(elem, qmax, tol)
    if tag in ("su", "so"):
        if freqs.integer_form is None:
            return Classification(Verdict.INJECTIVE_LINE, frequencies=freqs,
                                  detail="incommensurable frequencies: dense winding in a torus")
        T = minimal_period(freqs)
        if verify and not verify_period(X, T):
            raise RuntimeError(f"period {T} failed the sampled minimality check")
        return Classification(Verdict.KNOTTED, T, freqs, torus_knot_type(freqs, tag))

    if tag == "sl2R" or elem.n == 2:
        if freqs.integer_form is not None:
            return Classification(Verdict.KNOTTED, minimal_period(freqs), freqs)
        detail = "nilpotent" if freqs.imaginary else "real eigenvalues"
        return Classification(Verdict.INJECTIVE_LINE, frequencies=freqs, detail=detail)

    # sl(3, R): knotted iff the spectrum is {i b, -i b, 0} with b != 0.
    if freqs.integer_form is not None:
        return Classification(Verdict.KNOTTED, minimal_period(freqs), freqs)
    detail = "not purely imaginary spectrum" if not freqs.imaginary else "nilpotent"
    return Classification(Verdict.INJECTIVE_LINE, frequencies=freqs, detail=detail)


def _classify_sln(elem, qmax, tol, verify) -> Classification:
    X = elem.matrix
    w, V = np.linalg.eig(X)
    freqs = _frequencies_from_eigs(list(w), norm(X), qmax, tol)
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond > MAX_EIGVEC_COND:
        return Classification(Verdict.INJECTIVE_LINE, frequencies=freqs, experimental=True,
                              detail="defective or ill-conditioned eigenvector basis")
    if not freqs.imaginary:
        return Classification(Verdict.INJECTIVE_LINE, frequencies=freqs, experimental=True,
                              detail="not purely imaginary spectrum")
    if freqs.integer_form is None:
        return Classification(Verdict.INJECTIVE_LINE, frequencies=freqs, experimental=True,
                              detail="incommensurable frequencies")
    T = minimal_period(freqs)
    if verify:
        found = detect_period_numeric(X, t_max=1.05 * T, eps=closure_eps(X, T))
        if found is None or abs(found - T) > 1e-6 * T:
            return Classification(Verdict.INJECTIVE_LINE, frequencies=freqs, experimental=True,
                                  detail=f"warning: oracle did not confirm period {T!r}")
    return Classification(Verdict.KNOTTED, T, freqs, torus_knot_type(freqs, "slnR"),
                          experimental=True)
