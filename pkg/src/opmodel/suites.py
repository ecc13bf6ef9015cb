"""Property-verification suites driving every identity in the library.

Each suite yields Report objects for seeded random instances. The CLI
streams them as JSON lines; the acceptance tests assert that every
report passes. Instance counts default to the shipped acceptance scale
and may be reduced through the count argument.
"""

from __future__ import annotations

import numpy as np

from . import completion, herglotz, linops, model_space as msp, opmeasure, perturbation
from .generators import (random_borel_set, random_complex, random_herglotz,
                         random_instance, random_measure, random_psd,
                         random_semimetric, random_step_function,
                         random_unitary, rng_for)
from .report import Report
from .serialize import fingerprint, instance_to_json, measure_to_json


def _report(identity, residual, tolerance, **details) -> Report:
    return Report(identity, float(residual), float(tolerance),
                  bool(residual <= tolerance), details=details)


def measures_suite(seed: int = 1, count: int = 200):
    """Additivity, monotone bound, control-measure equivalence, kernel split."""
    for i in range(count):
        rng = rng_for(seed, i)
        sigma = random_measure(rng)
        fp = fingerprint(measure_to_json(sigma))
        t = opmeasure.total(sigma)
        b1 = random_borel_set(rng)
        # additivity: evaluating b1 equals the sum over its single-atom pieces
        s_union = opmeasure.evaluate(sigma, b1)
        parts = sum(
            (opmeasure.evaluate(sigma, opmeasure.atom_set(sigma, j)).mat
             for j in range(len(sigma.atoms)) if b1.contains(sigma.atoms[j][0])),
            np.zeros((sigma.dim, sigma.dim), dtype=complex))
        resid = np.linalg.norm(s_union.mat - parts) / max(t.norm2, 1e-300)
        yield _report("measure_additivity", resid, 1e-12, seed=seed, index=i,
                      instance=fp)
        # monotone bound T - Sigma(B) >= 0
        diff = t.mat - s_union.mat
        wmin = float(np.linalg.eigvalsh((diff + diff.conj().T) / 2.0)[0])
        yield _report("measure_monotone", max(-wmin, 0.0), 1e-12 * max(t.norm2, 1.0),
                      seed=seed, index=i, instance=fp)
        # control-measure equivalence: mass zero iff weight zero
        mu = opmeasure.control_measure(sigma)
        ok = set(mu.lambdas) == {lam for lam, w in sigma.atoms if w.norm2 > 0}
        yield _report("control_equivalence", 0.0 if ok else 1.0, 0.5,
                      seed=seed, index=i, instance=fp)
        # kernel split invariants
        split = opmeasure.kernel_split(t)
        r1 = np.linalg.norm(split.k1_basis.conj().T @ t.mat @ split.k1_basis
                            - split.t1.mat)
        r2 = np.linalg.norm(t.mat @ split.k0_basis)
        resid = (r1 + r2) / max(np.linalg.norm(t.mat), 1e-300)
        yield _report("kernel_split", resid, 1e-10, seed=seed, index=i,
                      instance=fp)


def model_suite(seed: int = 1, count: int = 200, probes: int = 10):
    """Parseval, Gram of the embedding, S(B) intertwining, covariance,
    density, and the weighted embedding identity."""
    for i in range(count):
        rng = rng_for(seed, i)
        sigma = random_measure(rng)
        fp = fingerprint(measure_to_json(sigma))
        ms = msp.build_model(sigma)
        t = ms.total()
        g = msp.gram_lambda(ms)
        resid = np.linalg.norm(g - t.mat) / max(np.linalg.norm(t.mat), 1e-300)
        yield _report("gram_lambda", resid, 1e-10, seed=seed, index=i,
                      instance=fp)
        worst = 0.0
        for _ in range(probes):
            b = random_borel_set(rng)
            eta = random_complex(rng, ms.dim)
            xi = random_complex(rng, ms.dim)
            worst = max(worst, msp.verify_parseval(ms, b, eta, xi).residual)
        yield _report("parseval", worst, 1e-10, seed=seed, index=i, instance=fp)
        # S(B) intertwining, the Gram identity, and the L^2 covariance
        thalf = linops.frac_power(t, 0.5).mat
        worst_s, worst_c, worst_g = 0.0, 0.0, 0.0
        for _ in range(probes):
            b = random_borel_set(rng)
            s = msp.s_operator(ms, b)
            sig_half = linops.frac_power(opmeasure.evaluate(sigma, b), 0.5).mat
            worst_s = max(worst_s, np.linalg.norm(thalf @ s - sig_half)
                          / max(np.linalg.norm(thalf), 1e-300))
            xi = random_complex(rng, ms.dim)
            eta = random_complex(rng, ms.dim)
            worst_c = max(worst_c, msp.covariance_residual(ms, b, xi))
            worst_g = max(worst_g, msp.covariance_gram_residual(ms, b, eta, xi))
        yield _report("s_intertwining", worst_s, 1e-9, seed=seed, index=i,
                      instance=fp)
        yield _report("s_gram_identity", worst_g, 1e-10, seed=seed, index=i,
                      instance=fp)
        yield _report("multiplication_covariance", worst_c, 1e-10, seed=seed,
                      index=i, instance=fp)
        s_full = msp.s_operator(ms, opmeasure.BorelSet.real_line())
        exact = float(np.linalg.norm(s_full - np.eye(ms.dim)))
        yield _report("s_full_line_identity", exact, 0.0, seed=seed, index=i,
                      instance=fp)
        # density of step functions at atomic scale
        dim_ok = msp.step_span_dimension(ms) == ms.total_dim
        yield _report("step_span_density", 0.0 if dim_ok else 1.0, 0.5,
                      seed=seed, index=i, instance=fp)
        # weighted embedding: w1-norm of {(lambda - i)^{-1} v} is (v, T v)
        v = random_complex(rng, ms.dim)
        lhs = msp.norm_sq(ms, msp.weighted_embed(ms, v), msp.w1_weight)
        rhs = float((v.conj() @ (t.mat @ v)).real)
        resid = abs(lhs - rhs) / max(abs(rhs), 1e-300)
        yield _report("weighted_embedding", resid, 1e-10, seed=seed, index=i,
                      instance=fp)


def kernel_suite(seed: int = 2, count: int = 50):
    """Forced-kernel measures: ker(Lambda) = ker(T) and block vanishing."""
    for i in range(count):
        rng = rng_for(seed, i)
        sigma = random_measure(rng, force_kernel=True)
        fp = fingerprint(measure_to_json(sigma))
        ms = msp.build_model(sigma)
        t = ms.total()
        split = opmeasure.kernel_split(t)
        worst = 0.0
        for j in range(split.k0_basis.shape[1]):
            v = split.k0_basis[:, j]
            worst = max(worst, msp.norm_sq(ms, msp.lambda_embed(ms, v))
                        / max(t.norm2, 1e-300))
        yield _report("lambda_kernel", worst, 1e-12, seed=seed, index=i,
                      instance=fp)
        w1 = split.t1.eig[0]
        small = float(w1[-1]) if w1.size else 0.0
        worst = 0.0
        for j in range(split.k1_basis.shape[1]):
            v = split.k1_basis[:, j]
            nrm = msp.norm_sq(ms, msp.lambda_embed(ms, v))
            worst = max(worst, max(small - 1e-10 - nrm, 0.0))
        yield _report("lambda_range_lower_bound", worst, 0.0, seed=seed,
                      index=i, instance=fp)
        rep = opmeasure.block_check(
            sigma, split, 1e-12,
            probe_sets=[random_borel_set(rng) for _ in range(3)])
        yield _report("block_diagonal", rep.residual, rep.tolerance,
                      seed=seed, index=i, instance=fp)
        rep = opmeasure.verify_kernel_inclusion(sigma, split, 1e-12)
        yield _report("kernel_inclusion", rep.residual, rep.tolerance,
                      seed=seed, index=i, instance=fp)


def heinz_suite(seed: int = 3, count: int = 500,
                alphas=(0.1, 0.2, 0.3, 0.4, 0.5)):
    """Heinz contraction bound and range inclusion for 0 <= F <= G."""
    for i in range(count):
        rng = rng_for(seed, i)
        d = int(rng.integers(2, 9))
        f = linops.validate_psd(random_psd(rng, d, rank=int(rng.integers(1, d + 1))))
        g = linops.validate_psd(f.mat + random_psd(rng, d, rank=int(rng.integers(1, d + 1))))
        worst = 0.0
        incl = True
        for alpha in alphas:
            worst = max(worst, linops.heinz_contraction(f, g, alpha) - 1.0)
            incl = incl and linops.range_inclusion(f, g, alpha, 1e-8)
        yield _report("heinz_contraction", max(worst, 0.0), 1e-8,
                      seed=seed, index=i)
        yield _report("range_inclusion", 0.0 if incl else 1.0, 0.5,
                      seed=seed, index=i)


def berezanskii_suite(seed: int = 4, count: int = 1000):
    """Step-function Stieltjes norm equals the model-space norm."""
    for i in range(count):
        rng = rng_for(seed, i)
        sigma = random_measure(rng)
        ms = msp.build_model(sigma)
        u = random_step_function(rng, ms.dim)
        rep = msp.verify_berezanskii(ms, u)
        yield _report("berezanskii_isometry", rep.residual, rep.tolerance,
                      seed=seed, index=i)


def uniqueness_suite(seed: int = 5, count: int = 20, rotations: int = 20):
    """Construction independence of the control basis."""
    for i in range(count):
        rng = rng_for(seed, i)
        sigma = random_measure(rng)
        fp = fingerprint(measure_to_json(sigma))
        worst = 0.0
        for _ in range(rotations):
            u = random_unitary(rng, sigma.dim)
            rep = msp.verify_uniqueness(sigma, None, u, 1e-11)
            worst = max(worst, rep.residual)
        yield _report("construction_uniqueness", worst, 1e-11, seed=seed,
                      index=i, instance=fp)
        # Gel'fand-Kostyuchenko density identity for a random invertible K
        kop = random_complex(rng, sigma.dim, sigma.dim) \
            + 2.0 * np.sqrt(sigma.dim) * np.eye(sigma.dim)
        probes = [(random_borel_set(rng), random_complex(rng, sigma.dim),
                   random_complex(rng, sigma.dim)) for _ in range(5)]
        rep = msp.gelfand_kostyuchenko_check(sigma, kop, probes, 1e-8)
        yield _report("gelfand_kostyuchenko", rep.residual, rep.tolerance,
                      seed=seed, index=i, instance=fp)


def perturbation_suite(seed: int = 6, count: int = 200, zpoints: int = 20):
    """Omega total mass, m-function agreement, Herglotz property,
    model unitarity, and the diagonalization identity."""
    for i in range(count):
        rng = rng_for(seed, i)
        inst = random_instance(rng, require_generating=True)
        fp = fingerprint(instance_to_json(inst))
        omega = perturbation.omega_measure(inst)
        kk = inst.kmap.conj().T @ inst.kmap
        resid = np.linalg.norm(opmeasure.total(omega).mat - kk) \
            / max(np.linalg.norm(kk), 1e-300)
        yield _report("omega_total_mass", resid, 1e-12, seed=seed, index=i,
                      instance=fp)
        worst_m, worst_h, worst_sym = 0.0, 0.0, 0.0
        for _ in range(zpoints):
            z = complex(rng.uniform(-3, 3), rng.uniform(0.1, 3))
            direct, stieltjes = perturbation.m_function(inst, z)
            scale = max(np.linalg.norm(direct), 1e-300)
            worst_m = max(worst_m, np.linalg.norm(direct - stieltjes) / scale)
            im = herglotz.imag_part(direct) / z.imag
            wmin = float(np.linalg.eigvalsh(im)[0])
            worst_h = max(worst_h, -wmin)
            conj_d, _ = perturbation.m_function(inst, np.conj(z))
            worst_sym = max(worst_sym,
                            np.linalg.norm(conj_d - direct.conj().T) / scale)
        yield _report("m_function_agreement", worst_m, 1e-10, seed=seed,
                      index=i, instance=fp)
        yield _report("m_function_herglotz", worst_h, 1e-10, seed=seed,
                      index=i, instance=fp)
        yield _report("m_function_symmetry", worst_sym, 1e-10, seed=seed,
                      index=i, instance=fp)
        u, ms = perturbation.model_unitary(inst)
        uu = u.conj().T @ u
        resid = np.linalg.norm(uu - np.eye(u.shape[1]))
        yield _report("model_isometry", resid, 1e-9, seed=seed, index=i,
                      instance=fp)
        if u.shape[0] == u.shape[1]:
            resid = np.linalg.norm(u @ u.conj().T - np.eye(u.shape[0]))
            yield _report("model_unitarity", resid, 1e-9, seed=seed, index=i,
                          instance=fp)
        rep = perturbation.verify_diagonalization(inst)
        yield _report("diagonalization", rep.residual, rep.tolerance,
                      seed=seed, index=i, instance=fp)


def weyl_suite(seed: int = 7, count: int = 50, grid_points: int = 100):
    """Weyl-Titchmarsh normalization, representation, and positivity."""
    for i in range(count):
        rng = rng_for(seed, i)
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, min(3, n) + 1))
        a = random_complex(rng, n, n)
        h = (a + a.conj().T) / 2.0
        nb = np.linalg.qr(random_complex(rng, n, k))[0]
        omega = perturbation.weyl_titchmarsh_measure(h, nb)
        norm_sum = sum(w.mat / (1.0 + lam * lam) for lam, w in omega.atoms)
        resid = np.linalg.norm(norm_sum - np.eye(k))
        yield _report("weyl_normalization", resid, 1e-10, seed=seed, index=i)
        worst = 0.0
        for _ in range(10):
            z = complex(rng.uniform(-3, 3), rng.uniform(0.1, 3))
            m = perturbation.weyl_titchmarsh(h, nb, z)
            rep_sum = sum(w.mat * (1.0 / (lam - z) - lam / (1.0 + lam * lam))
                          for lam, w in omega.atoms)
            worst = max(worst, np.linalg.norm(m - rep_sum)
                        / max(np.linalg.norm(m), 1e-300))
        yield _report("weyl_representation", worst, 1e-9, seed=seed, index=i)
        grid_rng = rng_for(seed, 10_000 + i)
        grid = [complex(grid_rng.uniform(-4, 4), grid_rng.uniform(0.05, 4))
                for _ in range(grid_points)]
        rep = herglotz.herglotz_scan(
            lambda z: perturbation.weyl_titchmarsh(h, nb, z), grid)
        yield _report("weyl_herglotz_scan", rep.residual, rep.tolerance,
                      seed=seed, index=i)


def herglotz_suite(seed: int = 8, count: int = 50):
    """Round trip: eval -> recover (C, D) and atoms by Stieltjes inversion."""
    for i in range(count):
        rng = rng_for(seed, i)
        h = random_herglotz(rng)
        ev = lambda z: herglotz.herglotz_eval(h, z)
        c, d = herglotz.recover_cd(ev)
        resid = (np.linalg.norm(c - h.c) + np.linalg.norm(d - h.d.mat)) \
            / max(np.linalg.norm(h.c) + np.linalg.norm(h.d.mat), 1.0)
        worst = resid
        for lam, w in h.omega.atoms:
            got = herglotz.stieltjes_invert(ev, lam)
            worst = max(worst, np.linalg.norm(got - w.mat)
                        / max(np.linalg.norm(w.mat), 1.0))
        # a point strictly between atoms must invert to zero
        lams = h.omega.lambdas
        off = float(lams[0]) - 1.0 if lams.size == 1 \
            else float((lams[0] + lams[1]) / 2.0)
        worst = max(worst, float(np.linalg.norm(herglotz.stieltjes_invert(ev, off))))
        yield _report("herglotz_round_trip", worst, 1e-6, seed=seed, index=i)
        # conjugate reflection agrees with the Hermitian transpose
        z = complex(rng.uniform(-2, 2), rng.uniform(0.2, 2))
        refl = herglotz.herglotz_eval_reflected(h, np.conj(z))
        resid = np.linalg.norm(refl - herglotz.herglotz_eval(h, z).conj().T)
        yield _report("herglotz_reflection", resid, 1e-12, seed=seed, index=i)


def completion_suite(seed: int = 9, count: int = 100):
    """Route-I/route-II isometry on random finite semi-metric spaces."""
    for i in range(count):
        rng = rng_for(seed, i)
        s = random_semimetric(rng)
        s = completion.validate_semimetric(s.rho)
        # sequences: one per point plus a few with nontrivial stems
        seqs = [completion.CauchySequence((), p) for p in range(s.n)]
        for _ in range(3):
            stem = tuple(int(x) for x in rng.integers(0, s.n, size=3))
            seqs.append(completion.CauchySequence(stem, int(rng.integers(0, s.n))))
        rep = completion.verify_isometry(s, seqs)
        yield _report("completion_isometry", rep.residual, rep.tolerance,
                      seed=seed, index=i, classes=rep.details["classes"])


SUITES = {
    "measures": measures_suite,
    "model": model_suite,
    "kernel": kernel_suite,
    "heinz": heinz_suite,
    "berezanskii": berezanskii_suite,
    "uniqueness": uniqueness_suite,
    "perturbation": perturbation_suite,
    "weyl": weyl_suite,
    "herglotz": herglotz_suite,
    "completion": completion_suite,
}

# scale factors mapping the CLI --count to per-suite instance counts,
# relative to the shipped acceptance defaults
_COUNT_SCALE = {
    "measures": 4, "model": 4, "kernel": 1, "heinz": 10, "berezanskii": 20,
    "uniqueness": 1, "perturbation": 4, "weyl": 1, "herglotz": 1,
    "completion": 2,
}


def run_suite(name: str, seed: int = 1, count: int | None = None):
    fn = SUITES[name]
    if count is None:
        yield from fn(seed=seed)
    else:
        yield from fn(seed=seed, count=max(1, count * _COUNT_SCALE[name] // 4))
