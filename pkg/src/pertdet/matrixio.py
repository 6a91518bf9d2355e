"""JSON wire formats for matrices, problems and generator pairs.

A matrix is ``{"n": n, "data": [[re, im], ...]}`` with n*n row-major entry
pairs.  Complex numbers are always [re, im] pairs, never strings.  Floats are
serialized with ``repr`` so write-then-read is the identity on finite doubles
and re-saving a loaded file reproduces it byte for byte.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .ideals import IdealSpec, ideal_from_dict, ideal_to_dict
from .perturbation import PerturbationProblem
from .semigroup import GeneratorPair


class MatrixParseError(ValueError):
    """Malformed matrix JSON; the message carries the offending location."""


def matrix_to_dict(m: np.ndarray) -> dict:
    a = np.asarray(m, dtype=np.complex128)
    n = a.shape[0]
    data = [[float(z.real), float(z.imag)] for z in a.ravel()]
    return {"n": n, "data": data}


def matrix_from_dict(data: dict, where: str = "matrix") -> np.ndarray:
    if not isinstance(data, dict):
        raise MatrixParseError(f"{where}: expected an object, got {type(data).__name__}")
    if "n" not in data or "data" not in data:
        raise MatrixParseError(f"{where}: missing required keys 'n' and 'data'")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MatrixParseError(f"{where}.n: expected a positive integer, got {n!r}")
    entries = data["data"]
    if not isinstance(entries, list) or len(entries) != n * n:
        raise MatrixParseError(
            f"{where}.data: expected {n * n} entries for a {n}x{n} matrix, "
            f"got {len(entries) if isinstance(entries, list) else type(entries).__name__}"
        )
    flat = np.empty(n * n, dtype=np.complex128)
    for idx, pair in enumerate(entries):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
        ):
            raise MatrixParseError(f"{where}.data[{idx}]: expected an [re, im] number pair, got {pair!r}")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise MatrixParseError(f"{where}.data[{idx}]: non-finite entry {pair!r}")
        flat[idx] = complex(re, im)
    return flat.reshape(n, n)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def save_matrix(m: np.ndarray, path: str) -> str:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_dumps(matrix_to_dict(m)))
    return path


def load_matrix(path: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MatrixParseError(f"{path}: invalid JSON ({exc})") from exc
    return matrix_from_dict(data, where=path)


def problem_to_dict(prob: PerturbationProblem) -> dict:
    return {
        "a": matrix_to_dict(prob.a),
        "k": matrix_to_dict(prob.k),
        "ideal": ideal_to_dict(prob.ideal),
        "p": prob.p,
    }


def problem_from_dict(data: dict, where: str = "problem") -> PerturbationProblem:
    for key in ("a", "k", "ideal"):
        if key not in data:
            raise MatrixParseError(f"{where}: missing key {key!r}")
    ideal = ideal_from_dict(data["ideal"])
    p = float(data.get("p", ideal.p))
    return PerturbationProblem(
        a=matrix_from_dict(data["a"], f"{where}.a"),
        k=matrix_from_dict(data["k"], f"{where}.k"),
        ideal=ideal,
        p=p,
    )


def save_problem(prob: PerturbationProblem, path: str) -> str:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_dumps(problem_to_dict(prob)))
    return path


def load_problem(path: str) -> PerturbationProblem:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return problem_from_dict(data, where=path)


def pair_to_dict(pair: GeneratorPair) -> dict:
    return {
        "h0": matrix_to_dict(pair.h0),
        "h": matrix_to_dict(pair.h),
        "a": pair.a,
        "ideal": ideal_to_dict(pair.ideal),
        "p": pair.p,
    }


def pair_from_dict(data: dict, where: str = "pair") -> GeneratorPair:
    for key in ("h0", "h", "a", "ideal"):
        if key not in data:
            raise MatrixParseError(f"{where}: missing key {key!r}")
    ideal = ideal_from_dict(data["ideal"])
    return GeneratorPair(
        h0=matrix_from_dict(data["h0"], f"{where}.h0"),
        h=matrix_from_dict(data["h"], f"{where}.h"),
        a=float(data["a"]),
        ideal=ideal,
        p=float(data.get("p", ideal.p)),
    )


def load_pair(path: str) -> GeneratorPair:
    with open(path, "r", encoding="utf-8") as fh:
        return pair_from_dict(json.load(fh), where=path)


def save_pair(pair: GeneratorPair, path: str) -> str:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_dumps(pair_to_dict(pair)))
    return path
