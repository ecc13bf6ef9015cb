"""Batch command-line front end.

Commands: gen, ingest, verify, diagonalize, herglotz, complete.
Reports stream as JSON lines; exit code 0 means every check passed,
1 flags a failed identity, 2 an input or IO problem.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import completion, herglotz as hg, perturbation, serialize
from .errors import NonConvergent, OpModelError
from .generators import (random_herglotz, random_instance, random_measure,
                         random_semimetric, rng_for)
from .opmeasure import atomic_measure
from .suites import SUITES, run_suite

SUITE_GROUPS = {
    "measures": ("measures",),
    "model": ("model", "kernel", "berezanskii", "uniqueness"),
    "linops": ("heinz",),
    "perturbation": ("perturbation", "weyl"),
    "herglotz": ("herglotz",),
    "completion": ("completion",),
    "all": tuple(SUITES),
}


def _default_tol() -> float:
    return float(os.environ.get("OPMODEL_TOL", "1e-10"))


def _out_stream(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w"), True


def _emit(stream, obj):
    stream.write(serialize.dumps(obj) + "\n")


def cmd_gen(args) -> int:
    os.makedirs(args.out or ".", exist_ok=True)
    makers = {
        "measures": lambda rng: serialize.measure_to_json(
            random_measure(rng, args.dim, args.atoms, tol=args.tol)),
        "perturbation": lambda rng: serialize.instance_to_json(
            random_instance(rng, args.n, args.k, require_generating=True,
                            tol=args.tol)),
        "herglotz": lambda rng: serialize.herglotz_to_json(
            random_herglotz(rng, args.k, args.atoms, tol=args.tol)),
        "semimetric": lambda rng: serialize.semimetric_to_json(
            random_semimetric(rng, args.points)),
    }
    maker = makers[args.kind]
    for i in range(args.count):
        obj = maker(rng_for(args.seed, i))
        path = os.path.join(args.out or ".", f"{args.kind}_{i:04d}.json")
        with open(path, "w") as fh:
            fh.write(serialize.dumps(obj) + "\n")
    return 0


def cmd_ingest(args) -> int:
    with open(args.input) as fh:
        obj = json.load(fh)
    dim = int(obj["dim"])
    samples = [(float(s["lambda"]), serialize.matrix_from_json(s["matrix"]))
               for s in obj["samples"]]
    lams = [lam for lam, _ in samples]
    if len(samples) < 2 or any(b <= a for a, b in zip(lams, lams[1:])):
        raise OpModelError("samples must be strictly increasing, >= 2 points")
    atoms = []
    if args.rule == "trapezoid":
        for i, (lam, dens) in enumerate(samples):
            left = lams[i] - lams[i - 1] if i > 0 else 0.0
            right = lams[i + 1] - lams[i] if i + 1 < len(lams) else 0.0
            atoms.append((lam, (left + right) / 2.0 * dens))
    else:  # midpoint over each sample interval, density averaged
        for (l0, d0), (l1, d1) in zip(samples, samples[1:]):
            atoms.append(((l0 + l1) / 2.0, (l1 - l0) * (d0 + d1) / 2.0))
    sigma = atomic_measure(dim, atoms, args.tol)
    stream, close = _out_stream(args.out)
    stream.write(serialize.dumps(serialize.measure_to_json(sigma)) + "\n")
    if close:
        stream.close()
    return 0


def cmd_verify(args) -> int:
    names = SUITE_GROUPS.get(args.suite, (args.suite,))
    for n in names:
        if n not in SUITES:
            raise OpModelError(f"unknown suite {args.suite!r}")
    stream, close = _out_stream(args.out)
    failed = False
    try:
        for name in names:
            for rep in run_suite(name, seed=args.seed, count=args.count):
                obj = rep.to_json()
                obj["suite"] = name
                _emit(stream, obj)
                failed = failed or not rep.passed
    finally:
        if close:
            stream.close()
    return 1 if failed else 0


def cmd_diagonalize(args) -> int:
    with open(args.input) as fh:
        inst = serialize.instance_from_json(json.load(fh), args.tol)
    omega = perturbation.omega_measure(inst, args.tol)
    u, ms = perturbation.model_unitary(inst, args.tol)
    basis, generating = perturbation.generating_check(inst, args.tol)
    rep = perturbation.verify_diagonalization(inst)
    fam = perturbation.spectral_family(perturbation.build_hl(inst), args.tol)
    out = {
        "eigenvalues": [float(x) for x in fam.eigenvalues],
        "omega": serialize.measure_to_json(omega),
        "unitary": serialize.matrix_to_json(u),
        "generating": bool(generating),
        "generated_dim": int(u.shape[1]),
        "n": inst.n,
        "residual": rep.residual,
        "pass": rep.passed,
    }
    stream, close = _out_stream(args.out)
    _emit(stream, out)
    if close:
        stream.close()
    return 0 if rep.passed else 1


def _default_grid():
    return [complex(re, im)
            for im in (0.1, 1.0, 10.0)
            for re in np.linspace(-5.0, 5.0, 21)]


def cmd_herglotz(args) -> int:
    with open(args.input) as fh:
        h = serialize.herglotz_from_json(json.load(fh), args.tol)
    ev = lambda z: hg.herglotz_eval(h, z)
    stream, close = _out_stream(args.out)
    try:
        if args.action == "eval":
            k = h.size
            header = ["re_z", "im_z"] + [
                f"im_m_{i}_{j}_{part}" for i in range(k) for j in range(k)
                for part in ("re", "im")]
            stream.write(",".join(header) + "\n")
            for z in _default_grid():
                im = hg.imag_part(ev(z))
                row = [repr(z.real), repr(z.imag)]
                for i in range(k):
                    for j in range(k):
                        row += [repr(im[i, j].real), repr(im[i, j].imag)]
                stream.write(",".join(row) + "\n")
            return 0
        if args.action == "invert":
            c, d = hg.recover_cd(ev)
            atoms = []
            for lam, _ in h.omega.atoms:
                w = hg.stieltjes_invert(ev, lam)
                atoms.append({"lambda": float(lam),
                              "matrix": serialize.matrix_to_json(w)})
            _emit(stream, {"c": serialize.matrix_to_json(c),
                           "d": serialize.matrix_to_json(d),
                           "atoms": atoms})
            return 0
        rep = hg.herglotz_scan(ev, _default_grid(), args.tol)
        obj = rep.to_json()
        _emit(stream, obj)
        return 0 if rep.passed else 1
    finally:
        if close:
            stream.close()


def cmd_complete(args) -> int:
    with open(args.input) as fh:
        s = serialize.semimetric_from_json(json.load(fh))
    r2 = completion.route2_quotient(s)
    seqs = [completion.CauchySequence((), p) for p in range(s.n)]
    r1 = completion.route1_complete_then_quotient(s, seqs)
    mapping = completion.isometry_j(r1, r2, seqs)
    rep = completion.verify_isometry(s, seqs)
    out = rep.to_json()
    out["route2_classes"] = [list(c) for c in r2.classes]
    out["isometry"] = list(mapping)
    stream, close = _out_stream(args.out)
    _emit(stream, out)
    if close:
        stream.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="opmodel",
        description="Atomic operator-valued measures, model spaces, and "
                    "their verification suites.")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--tol", type=float, default=None,
                   help="tolerance override (default 1e-10 or OPMODEL_TOL)")
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate seeded instance files")
    g.add_argument("kind", choices=["measures", "perturbation", "herglotz",
                                    "semimetric"])
    g.add_argument("--dim", type=int, default=6)
    g.add_argument("--atoms", type=int, default=8)
    g.add_argument("--n", type=int, default=8)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--points", type=int, default=12)

    i = sub.add_parser("ingest", help="quadrature-convert sampled densities")
    i.add_argument("input")
    i.add_argument("--rule", choices=["trapezoid", "midpoint"],
                   default="trapezoid")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", choices=sorted(set(SUITE_GROUPS) | set(SUITES)))

    d = sub.add_parser("diagonalize", help="diagonalize a perturbation instance")
    d.add_argument("input")

    h = sub.add_parser("herglotz", help="Herglotz function tooling")
    h.add_argument("action", choices=["eval", "invert", "scan"])
    h.add_argument("input")

    c = sub.add_parser("complete", help="run both completion routes")
    c.add_argument("input")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is None:
        args.tol = _default_tol()
    if args.count is None and args.command == "gen":
        args.count = 1
    handlers = {
        "gen": cmd_gen, "ingest": cmd_ingest, "verify": cmd_verify,
        "diagonalize": cmd_diagonalize, "herglotz": cmd_herglotz,
        "complete": cmd_complete,
    }
    try:
        return handlers[args.command](args)
    except NonConvergent as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OpModelError, OSError, json.JSONDecodeError, KeyError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
