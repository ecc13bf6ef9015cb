"""JSON schemas for matrices, measures, Borel sets, step functions,
Herglotz data, perturbation instances, and semi-metric spaces.

Complex entries serialize as [re, im] pairs; infinite interval endpoints
as the strings "-inf"/"inf". Serialization is deterministic (sorted keys,
shortest round-trip float representation).
"""

from __future__ import annotations

import hashlib
import json
import math

import numpy as np

from .completion import FiniteSemiMetric, validate_semimetric
from .herglotz import MatrixHerglotz, make_herglotz
from .linops import DEFAULT_TOL
from .model_space import StepFunction
from .opmeasure import AtomicOperatorMeasure, BorelSet, atomic_measure
from .perturbation import PerturbationInstance, make_instance


def matrix_to_json(m) -> list:
    a = np.asarray(m, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in a]


def matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows],
                    dtype=complex)


def vector_to_json(v) -> list:
    return [[float(x.real), float(x.imag)] for x in np.asarray(v, dtype=complex)]


def vector_from_json(entries) -> np.ndarray:
    return np.array([complex(re, im) for re, im in entries], dtype=complex)


def _endpoint_to_json(x: float):
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return float(x)


def _endpoint_from_json(x) -> float:
    if x == "inf":
        return math.inf
    if x == "-inf":
        return -math.inf
    return float(x)


def borel_to_json(b: BorelSet) -> dict:
    return {"intervals": [[_endpoint_to_json(a), _endpoint_to_json(c)]
                          for a, c in b.intervals]}


def borel_from_json(obj) -> BorelSet:
    return BorelSet.from_intervals(
        [(_endpoint_from_json(a), _endpoint_from_json(c))
         for a, c in obj["intervals"]])


def measure_to_json(sigma: AtomicOperatorMeasure) -> dict:
    return {
        "dim": sigma.dim,
        "atoms": [{"lambda": float(lam), "matrix": matrix_to_json(w.mat)}
                  for lam, w in sigma.atoms],
    }


def measure_from_json(obj, tol: float = DEFAULT_TOL) -> AtomicOperatorMeasure:
    return atomic_measure(
        int(obj["dim"]),
        [(a["lambda"], matrix_from_json(a["matrix"])) for a in obj["atoms"]],
        tol,
    )


def step_to_json(u: StepFunction) -> dict:
    return {"terms": [{"set": borel_to_json(b), "xi": vector_to_json(xi)}
                      for b, xi in u.terms]}


def step_from_json(obj) -> StepFunction:
    return StepFunction(tuple(
        (borel_from_json(t["set"]), vector_from_json(t["xi"]))
        for t in obj["terms"]))


def herglotz_to_json(h: MatrixHerglotz) -> dict:
    return {
        "c": matrix_to_json(h.c),
        "d": matrix_to_json(h.d.mat),
        "omega": measure_to_json(h.omega),
        "form": h.form,
    }


def herglotz_from_json(obj, tol: float = DEFAULT_TOL) -> MatrixHerglotz:
    return make_herglotz(
        matrix_from_json(obj["c"]),
        matrix_from_json(obj["d"]),
        measure_from_json(obj["omega"], tol),
        obj.get("form", "nevanlinna"),
        tol,
    )


def instance_to_json(inst: PerturbationInstance) -> dict:
    return {
        "h0": matrix_to_json(inst.h0),
        "k": matrix_to_json(inst.kmap),
        "l": matrix_to_json(inst.ell),
    }


def instance_from_json(obj, tol: float = DEFAULT_TOL) -> PerturbationInstance:
    return make_instance(
        matrix_from_json(obj["h0"]),
        matrix_from_json(obj["k"]),
        matrix_from_json(obj["l"]),
        tol,
    )


def semimetric_to_json(s: FiniteSemiMetric) -> dict:
    return {"rho": [[float(x) for x in row] for row in s.rho]}


def semimetric_from_json(obj, tol: float = 1e-12) -> FiniteSemiMetric:
    return validate_semimetric(np.asarray(obj["rho"], dtype=float), tol)


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, no extra whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def fingerprint(obj) -> str:
    """Short content hash of the canonical JSON form."""
    return hashlib.sha256(dumps(obj).encode()).hexdigest()[:12]
