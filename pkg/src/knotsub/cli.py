"""``knotsub`` command line front end.

Input documents are JSON objects, one per line (a single JSON object or a
JSON array of objects is accepted too)::

    {"family": "su", "matrix": [[[0, 3], 0], [0, [0, -3]]]}
    {"family": "sl2R", "sl2_coords": [0, 0, 1]}

Matrix entries are ``[re, im]`` pairs or bare reals. Every output record is
one JSON object per line carrying ``"schema_version": "1"``.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys

import numpy as np

from . import __version__
from .algebras import AlgebraFamily, LieAlgebraElement, Sl2Coords, sl3_form
from .canonical import ambient_path, canonical_sl2, canonical_sl3, canonical_so, canonical_su
from .classify import (
    DEFAULT_QMAX,
    DEFAULT_TOL,
    Classification,
    classify,
)
from .exceptions import DomainError, InvalidInputError, KnotsubError, NotPeriodicError
from .linalg import mat_exp, norm
from .oracle import closed_form_sl2, closed_form_sl3, closure_eps, default_steps, detect_period_numeric

SCHEMA_VERSION = "1"
TORUS_R = 2.0
TORUS_r = 1.0
ORACLE_AGREEMENT = 1e-6
DEFAULT_TMAX = 100.0
DEFAULT_SAMPLES = 64
SEED_ENV = "KNOTSUB_SEED"

_FAMILY_RE = re.compile(r"^\s*([A-Za-z0-9]+?)\s*(?:\(\s*(\d+)\s*\))?\s*$")


# -- encoding ----------------------------------------------------------------

def encode_matrix(A) -> list:
    A = np.asarray(A, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def _decode_entry(x):
    if isinstance(x, bool):
        raise InvalidInputError("matrix entries must be numbers or [re, im] pairs")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(x[0], x[1])
    raise InvalidInputError(f"bad matrix entry {x!r}")


def decode_matrix(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InvalidInputError("matrix must be a non-empty list of rows")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InvalidInputError("matrix rows are ragged or not square")
    A = np.array([[_decode_entry(x) for x in r] for r in rows], dtype=complex)
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix has non-finite entries")
    if not np.any(A.imag):
        return A.real.copy()
    return A


def parse_family(text: str, n: int) -> AlgebraFamily:
    m = _FAMILY_RE.match(text or "")
    if not m:
        raise InvalidInputError(f"bad family tag {text!r}")
    tag, dim = m.group(1), m.group(2)
    if dim is not None and int(dim) != n:
        raise InvalidInputError(f"family {text} does not match a {n}x{n} matrix")
    return AlgebraFamily.of(tag, n)


def parse_document(doc, family_override: str | None = None) -> LieAlgebraElement:
    """Turn one input record into a validated Lie algebra element."""
    if not isinstance(doc, dict):
        raise InvalidInputError("each document must be a JSON object")
    has_matrix = "matrix" in doc
    has_coords = "sl2_coords" in doc
    if has_matrix == has_coords:
        raise InvalidInputError("exactly one of 'matrix' or 'sl2_coords' is required")
    fam = family_override or doc.get("family")
    if not fam:
        raise InvalidInputError("no family given (document 'family' or --family)")
    if has_coords:
        co = doc["sl2_coords"]
        if not isinstance(co, list) or len(co) != 3:
            raise InvalidInputError("sl2_coords must be [a, b, c]")
        A = Sl2Coords(*(float(_decode_entry(x).real) for x in co)).matrix()
    else:
        A = decode_matrix(doc["matrix"])
    return LieAlgebraElement(parse_family(fam, A.shape[0]), A)


def read_documents(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    try:
        whole = json.loads(text)
    except json.JSONDecodeError:
        whole = None
    if isinstance(whole, list):
        return whole
    if isinstance(whole, dict):
        return [whole]
    docs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.strip():
            try:
                docs.append(json.loads(line))
            except json.JSONDecodeError as exc:
                docs.append(InvalidInputError(f"line {lineno}: {exc.msg}"))
    return docs


def dumps(record: dict) -> str:
    return json.dumps(record, allow_nan=False)


def _rng() -> np.random.Generator:
    seed = os.environ.get(SEED_ENV)
    return np.random.default_rng(int(seed) if seed not in (None, "") else None)


# -- reports -----------------------------------------------------------------

def _classification_fields(c: Classification) -> dict:
    f = c.frequencies
    return {
        "verdict": c.verdict.value,
        "period": c.period,
        "frequencies": None if f is None else list(f.betas),
        "purely_imaginary": None if f is None else f.imaginary,
        "integer_form": None if f is None or f.integer_form is None
        else {"k": list(f.integer_form.k), "mu": f.integer_form.mu},
        "knot": None if c.knot is None else {"p": c.knot.p, "q": c.knot.q},
        "experimental": c.experimental,
        "detail": c.detail,
    }


def _oracle_check(X, c: Classification, t_max, steps) -> dict:
    if t_max is None:
        t_max = 1.05 * c.period if c.knotted else DEFAULT_TMAX
    if steps is None:
        steps = default_steps(X, t_max)
    # a known period may close only to rounding in t*||X||; injective cases keep the strict eps
    eps = closure_eps(X, c.period) if c.knotted else 1e-8
    found = detect_period_numeric(X, t_max, steps, eps=eps)
    if c.knotted:
        agrees = found is not None and abs(found - c.period) <= ORACLE_AGREEMENT * c.period
    else:
        agrees = found is None
    return {"t_max": t_max, "steps": steps, "period": found, "agrees": bool(agrees)}


def cmd_classify(elem: LieAlgebraElement, args) -> dict:
    c = classify(elem, qmax=args.qmax, tol=args.tol)
    report = _classification_fields(c)
    if args.oracle:
        check = _oracle_check(elem.matrix, c, args.tmax, args.steps)
        report["oracle"] = check
        if c.knotted and check["period"] is None:
            report["verdict"] = "Unconfirmed"
            report["warning"] = "oracle found no period up to t_max; Knotted verdict withheld"
    return report


def cmd_canonicalize(elem: LieAlgebraElement, args) -> dict:
    tag = elem.family.tag
    n = elem.n
    report = {}
    if tag == "su":
        form = canonical_su(elem)
        path_group = "su"
    elif tag == "so":
        form = canonical_so(elem)
        path_group = "so"
    elif tag == "sl2R" or (tag == "slnR" and n == 2):
        form = canonical_sl2(elem)
        path_group = None
    elif tag == "sl3R" or (tag == "slnR" and n == 3):
        form_tag, params, form = canonical_sl3(elem)
        report["form_tag"] = form_tag
        report["params"] = list(params)
        report["knotted"] = form_tag == "X4" and params[0] == 0.0
        path_group = None
    else:
        raise DomainError(f"no canonical form is implemented for {elem.family}")
    report.update({
        "generator": encode_matrix(form.generator),
        "conjugator": encode_matrix(form.conjugator),
        "target_group": form.target_group,
        "residual": form.residual,
    })
    if path_group is not None:
        xi1 = ambient_path(form.conjugator, 1.0, path_group)
        report["ambient_path_residual"] = norm(xi1 - form.conjugator)
    return report


def cmd_period(elem: LieAlgebraElement, args) -> dict:
    c = classify(elem, qmax=args.qmax, tol=args.tol)
    if not c.knotted:
        raise NotPeriodicError(f"exp(tX) is not periodic ({c.verdict.value}"
                               + (f": {c.detail})" if c.detail else ")"))
    report = {"period": c.period, "experimental": c.experimental}
    if args.oracle:
        report["oracle"] = _oracle_check(elem.matrix, c, args.tmax, args.steps)
    return report


def cmd_oracle(elem: LieAlgebraElement, args) -> dict:
    X = elem.matrix
    t_max = DEFAULT_TMAX if args.tmax is None else args.tmax
    steps = default_steps(X, t_max) if args.steps is None else args.steps
    found = detect_period_numeric(X, t_max, steps)
    report = {"t_max": t_max, "steps": steps, "period": found}
    if found is None:
        report["message"] = "no period <= t_max"
    else:
        eye = np.eye(elem.n)
        probes = _rng().uniform(0.0, found, size=32)
        dists = [norm(mat_exp(t * X) - eye) for t in probes if 1e-6 * found < t < (1 - 1e-6) * found]
        report["closure_residual"] = norm(mat_exp(found * X) - eye)
        report["probe_min_distance"] = min(dists) if dists else None
    ts = np.linspace(-10.0, 10.0, 101)
    tag = elem.family.tag
    if tag == "sl2R" or (tag == "slnR" and elem.n == 2):
        co = Sl2Coords.from_matrix(X)
        report["closed_form_residual"] = max(
            norm(closed_form_sl2(co, t) - mat_exp(t * X)) / max(1.0, norm(mat_exp(t * X))) for t in ts)
    elif tag == "sl3R" or (tag == "slnR" and elem.n == 3):
        form_tag, params, _ = canonical_sl3(elem)
        G = sl3_form(form_tag, *params)
        report["form_tag"] = form_tag
        report["closed_form_residual"] = max(
            norm(closed_form_sl3(form_tag, params, t) - mat_exp(t * G)) / max(1.0, norm(mat_exp(t * G)))
            for t in ts)
    return report


def torus_embedding(p: int, q: int, s: float) -> list[float]:
    """Point of the standard (p, q) torus knot in R^3 at angle ``s``."""
    ring = TORUS_R + TORUS_r * math.cos(q * s)
    return [ring * math.cos(p * s), ring * math.sin(p * s), TORUS_r * math.sin(q * s)]


def cmd_sample(elem: LieAlgebraElement, args) -> list[dict]:
    """Curve samples over one period (or ``[0, 2*pi]`` when not periodic)."""
    count = args.samples
    if count < 2:
        raise InvalidInputError("need at least 2 samples")
    c = classify(elem, qmax=args.qmax, tol=args.tol)
    span = c.period if c.knotted else 2.0 * math.pi
    X = elem.matrix
    out = []
    for t in np.linspace(0.0, span, count):
        rec = {"t": float(t), "point": [[float(z.real), float(z.imag)]
                                         for z in np.asarray(mat_exp(t * X), dtype=complex).ravel()]}
        if c.knotted and c.knot is not None:
            rec["embedding3d"] = torus_embedding(c.knot.p, c.knot.q, 2.0 * math.pi * t / span)
        out.append(rec)
    return out


COMMANDS = {
    "classify": cmd_classify,
    "canonicalize": cmd_canonicalize,
    "period": cmd_period,
    "sample": cmd_sample,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knotsub",
        description="Classify one-parameter subgroups exp(tX) as knotted (circle) subgroups.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--family", help="algebra family tag: su, so, sl2R, sl3R, slnR, heisenberg")
    parser.add_argument("--input", default="-", help="input file of JSON documents ('-' for stdin)")
    parser.add_argument("--output", help="write records here instead of stdout")
    parser.add_argument("--oracle", action="store_true", help="cross-check with the numerical period search")
    parser.add_argument("--qmax", type=int, default=DEFAULT_QMAX, help="largest denominator for commensurability")
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL, help="commensurability residual")
    parser.add_argument("--tmax", type=float, help="oracle search horizon")
    parser.add_argument("--steps", type=int, help="oracle grid size")
    parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="curve samples for 'sample'")
    return parser


def run(args, text: str) -> tuple[list[dict], int]:
    records = []
    status = 0
    for i, doc in enumerate(read_documents(text)):
        base = {"schema_version": SCHEMA_VERSION, "command": args.command, "document": i}
        try:
            if isinstance(doc, Exception):
                raise doc
            elem = parse_document(doc, args.family)
            base["family"] = str(elem.family)
            base["n"] = elem.n
            result = COMMANDS[args.command](elem, args)
        except KnotsubError as exc:
            status = 1
            records.append({**base, "error": {"kind": exc.kind, "message": str(exc)}})
            continue
        except (ArithmeticError, RuntimeError, ValueError, np.linalg.LinAlgError) as exc:
            # numerical failure on one document should not sink the batch
            status = 1
            records.append({**base, "error": {"kind": "numerical", "message": f"{type(exc).__name__}: {exc}"}})
            continue
        if isinstance(result, list):
            records.extend({**base, **r} for r in result)
        else:
            records.append({**base, **result})
    return records, status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input) as fh:
                text = fh.read()
    except OSError as exc:
        print(dumps({"schema_version": SCHEMA_VERSION, "command": args.command,
                     "error": {"kind": "io", "message": str(exc)}}))
        return 1
    records, status = run(args, text)
    lines = "".join(dumps(r) + "\n" for r in records)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(lines)
    else:
        sys.stdout.write(lines)
    return status


if __name__ == "__main__":
    sys.exit(main())
