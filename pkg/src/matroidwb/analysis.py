"""Tiered decision procedures for the negative-dependence hierarchy.

Each check returns a Verdict: Holds with a certificate, Fails with an
exactly re-verified witness, or Inconclusive with diagnostics.  Floats are
used only to hunt for counterexample candidates; every candidate is rounded
to rationals and re-evaluated exactly before it is believed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from . import verdicts
from .core import (
    Matroid,
    connected_components,
    contract,
    delete,
    elements,
    is_isomorphic,
    mask_of,
    popcount,
    rank_of,
    restriction,
    set_of,
)
from .poly import (
    BoundedPoly,
    basis_poly,
    c_rayleigh_diff,
    pair_decomposition,
    rayleigh_diff,
)
from .ratlp import solve_eq_nonneg
from .sos import GramCertificate, sos_certificate, sos_certificate_orthant
from .verdicts import (
    COEFF_NONNEG,
    SINGLE_PAIR_WAGNER,
    SOS_GRAM,
    ALL_ONES_EXACT,
    Verdict,
    Witness,
)

POSITIVE_ORTHANT = "PositiveOrthant"
ALL_REALS = "AllReals"

# float-stage acceptance tolerance; exact re-verification makes this a
# search heuristic only, never a soundness parameter
SEARCH_TOL = 1e-9


# ---------------------------------------------------------------------------
# counterexample search


@dataclass
class SearchResult:
    witness: Optional[Witness]
    evals: int
    best: float


def _term_arrays(p: BoundedPoly, var_ids: Sequence[int]):
    idx = {v: k for k, v in enumerate(var_ids)}
    coeffs = np.array([float(c) for c in p.terms.values()])
    exps = np.zeros((len(p.terms), len(var_ids)), dtype=np.int64)
    for t, (lin, sq) in enumerate(p.terms):
        for v in elements(lin):
            exps[t, idx[v]] = 1
        for v in elements(sq):
            exps[t, idx[v]] = 2
    return coeffs, exps


def _batch_eval(coeffs, exps, X):
    """Evaluate at rows of X (signs handled exactly, magnitudes in logs)."""
    logmag = np.log(np.maximum(np.abs(X), 1e-300))
    mono = np.exp(logmag @ exps.T)
    neg = (X < 0).astype(np.int64)
    parity = (neg @ (exps % 2).T) % 2
    return (mono * (1 - 2 * parity)) @ coeffs


def _exactify(
    p: BoundedPoly, var_ids: Sequence[int], x: np.ndarray, positive: bool
) -> Optional[Witness]:
    """Round a float candidate to rationals and re-verify exactly."""
    for den in (1, 2, 3, 4, 6, 8, 12, 16, 10**2, 10**4, 10**6, 10**9):
        point = [Fraction(1)] * p.n
        ok = True
        for v, xv in zip(var_ids, x):
            q = Fraction(float(xv)).limit_denominator(den)
            if positive and q <= 0:
                ok = False
                break
            point[v - 1] = q
        if not ok:
            continue
        value = p.evaluate(point)
        if value < 0:
            return Witness(value=Fraction(value), point=tuple(point))
    return None


def counterexample_search(
    p: BoundedPoly,
    domain: str = POSITIVE_ORTHANT,
    budget: int = 100_000,
    seed: int = 0,
) -> SearchResult:
    """Multi-start descent for a point with p < 0; returns the first witness
    that survives exact re-verification, plus search diagnostics."""
    if domain not in (POSITIVE_ORTHANT, ALL_REALS):
        raise ValueError(f"unknown domain {domain!r}")
    var_ids = tuple(sorted(p.active_vars()))
    if p.is_zero() or not var_ids:
        value = p.evaluate([Fraction(1)] * p.n)
        if value < 0:
            return SearchResult(
                Witness(value=Fraction(value), point=tuple([Fraction(1)] * p.n)), 1, float(value)
            )
        return SearchResult(None, 1, float(value))
    coeffs, exps = _term_arrays(p, var_ids)
    rng = np.random.default_rng(seed)
    k = len(var_ids)
    positive = domain == POSITIVE_ORTHANT

    evals = 0
    best_val = np.inf
    best_x: Optional[np.ndarray] = None
    batch = 2048
    scales = (0.5, 1.0, 2.0, 4.0)
    random_budget = max(budget * 7 // 10, batch)
    si = 0
    while evals < random_budget:
        size = min(batch, budget - evals)
        if size <= 0:
            break
        u = rng.normal(0.0, scales[si % len(scales)], size=(size, k))
        si += 1
        X = np.exp(u)
        if not positive:
            X = X * rng.choice((-1.0, 1.0), size=(size, k))
        vals = _batch_eval(coeffs, exps, X)
        evals += size
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_x = X[i].copy()
        if best_val < -SEARCH_TOL:
            w = _exactify(p, var_ids, best_x, positive)
            if w is not None:
                return SearchResult(w, evals, best_val)

    # local refinement from the best start
    if best_x is not None and evals < budget:
        from scipy import optimize

        grads = [p.derivative(v) for v in var_ids]
        gcoeffs = []
        for g in grads:
            gc, ge = _term_arrays(g, var_ids)
            gcoeffs.append((gc, ge))

        def fun(z):
            x = np.exp(z) if positive else z
            return _batch_eval(coeffs, exps, x[None, :])[0]

        def grad(z):
            x = np.exp(z) if positive else z
            g = np.array(
                [_batch_eval(gc, ge, x[None, :])[0] for gc, ge in gcoeffs]
            )
            return g * x if positive else g

        z0 = np.log(best_x) if positive else best_x
        maxfun = max((budget - evals) // 2, 50)
        res = optimize.minimize(
            fun, z0, jac=grad, method="L-BFGS-B", options={"maxfun": maxfun}
        )
        evals += int(res.nfev)
        if res.fun < best_val:
            best_val = float(res.fun)
            best_x = np.exp(res.x) if positive else res.x
        if best_val < -SEARCH_TOL:
            w = _exactify(p, var_ids, best_x, positive)
            if w is not None:
                return SearchResult(w, evals, best_val)
    return SearchResult(None, evals, best_val)


# ---------------------------------------------------------------------------
# negative correlation and balance


def neg_corr(M: Matroid, e: int, f: int) -> Verdict:
    """Exact check of N_e * N_f >= N * N_ef (uniform measure on bases)."""
    if e == f:
        raise ValueError("need two distinct elements")
    be, bf = 1 << (e - 1), 1 << (f - 1)
    N = len(M.basis_masks)
    Ne = Nf = Nef = 0
    for B in M.basis_masks:
        he = bool(B & be)
        hf = bool(B & bf)
        Ne += he
        Nf += hf
        Nef += he and hf
    delta = Ne * Nf - N * Nef
    if delta >= 0:
        return verdicts.holds(
            ALL_ONES_EXACT, {"N": N, "Ne": Ne, "Nf": Nf, "Nef": Nef},
            property="negcorr", pair=(e, f),
        )
    return verdicts.fails(
        Witness(value=Fraction(delta), point=tuple([Fraction(1)] * M.n)),
        property="negcorr", pair=(e, f),
    )


def neg_corr_all_pairs(M: Matroid) -> Verdict:
    for e, f in combinations(range(1, M.n + 1), 2):
        v = neg_corr(M, e, f)
        if not v.holds:
            return v
    return verdicts.holds(ALL_ONES_EXACT, property="negcorr_all_pairs")


def _minor_reps(M: Matroid):
    """Isomorphism-class representatives of all minors with >= 2 elements."""
    seen_exact: set[tuple[int, tuple[int, ...]]] = set()
    buckets: dict[tuple, list[Matroid]] = {}
    elems = list(range(1, M.n + 1))
    for kc in range(0, M.r + 1):
        for I in combinations(elems, kc):
            if I and not M.is_independent(I):
                continue
            M1 = contract(M, I) if I else M
            for kd in range(0, M1.n - 1):
                for D in combinations(range(1, M1.n + 1), kd):
                    M2 = delete(M1, D) if D else M1
                    key = (M2.n, M2.basis_masks)
                    if key in seen_exact:
                        continue
                    seen_exact.add(key)
                    fp = _matroid_fingerprint(M2)
                    bucket = buckets.setdefault(fp, [])
                    if any(is_isomorphic(M2, other) for other in bucket):
                        continue
                    bucket.append(M2)
                    yield M2, set_of(mask_of(I)), set_of(mask_of(D))


def _matroid_fingerprint(M: Matroid):
    deg = [0] * (M.n + 1)
    for B in M.basis_masks:
        for e in elements(B):
            deg[e] += 1
    return (M.n, M.r, len(M.basis_masks), tuple(sorted(deg[1:])))


def is_balanced(M: Matroid) -> Verdict:
    """Negative correlation for M and all of its minors."""
    if M.n > 10:
        raise ValueError("balance check capped at n = 10")
    for minor, I, D in _minor_reps(M):
        v = neg_corr_all_pairs(minor)
        if not v.holds:
            v.diagnostics.update(
                {"property": "balanced", "contracted": sorted(I), "deleted_after": sorted(D)}
            )
            return v
    return verdicts.holds(ALL_ONES_EXACT, property="balanced")


# ---------------------------------------------------------------------------
# Rayleigh tiers


def wagner_pair(M: Matroid) -> Optional[tuple[int, int]]:
    """The lexicographically smallest pair lying together in some basis."""
    for i, j in combinations(range(1, M.n + 1), 2):
        bij = (1 << (i - 1)) | (1 << (j - 1))
        if any(B & bij == bij for B in M.basis_masks):
            return (i, j)
    return None


def _verdict_for_diff(
    diff: BoundedPoly,
    domain: str,
    budget: int,
    seed: int,
    *,
    use_sos: bool = True,
    diag: dict,
) -> Verdict:
    tiers = []
    # tier 1: certificate by inspection
    if all(c >= 0 for c in diff.terms.values()):
        if domain == POSITIVE_ORTHANT or all(lin == 0 for (lin, _) in diff.terms):
            return verdicts.holds(COEFF_NONNEG, tiers_run=["coeff"], **diag)
    tiers.append("coeff")
    # tier 2: hunt for an exact counterexample
    sr = counterexample_search(diff, domain, budget=budget, seed=seed)
    tiers.append("search")
    if sr.witness is not None:
        return verdicts.fails(
            sr.witness, tiers_run=list(tiers), evals=sr.evals, best=sr.best, **diag
        )
    # tier 3: SOS certificate
    if use_sos and len(diff.active_vars()) <= 10:
        cert = (
            sos_certificate(diff)
            if domain == ALL_REALS
            else sos_certificate_orthant(diff)
        )
        tiers.append("sos")
        if cert is not None and cert.verify(diff):
            return verdicts.holds(SOS_GRAM, cert, tiers_run=list(tiers), **diag)
    return verdicts.inconclusive(tiers_run=list(tiers), best=sr.best, evals=sr.evals, **diag)


def rayleigh_verdict(
    f: BoundedPoly,
    pair: Optional[tuple[int, int]] = None,
    budget: int = 20_000,
    seed: int = 0,
) -> Verdict:
    """Nonnegativity of the Rayleigh difference on the positive orthant,
    for one pair or (when pair is None) for all pairs."""
    if any(c < 0 for c in f.terms.values()):
        raise ValueError("f must have nonnegative coefficients")
    if pair is not None:
        i, j = pair
        diff = rayleigh_diff(f, i, j)
        return _verdict_for_diff(
            diff, POSITIVE_ORTHANT, budget, seed,
            diag={"property": "rayleigh", "pair": (i, j)},
        )
    per_pair = []
    for i, j in combinations(range(1, f.n + 1), 2):
        v = rayleigh_verdict(f, (i, j), budget=budget, seed=seed)
        if not v.holds:
            return v
        per_pair.append(((i, j), v.certificate.kind))
    kind = COEFF_NONNEG if all(k == COEFF_NONNEG for _, k in per_pair) else SOS_GRAM
    return verdicts.holds(kind, per_pair, property="rayleigh", pair=None)


def strong_rayleigh_verdict(
    f: BoundedPoly,
    pair: tuple[int, int],
    budget: int = 20_000,
    seed: int = 0,
) -> Verdict:
    """Nonnegativity of the Rayleigh difference on all of real space."""
    if any(c < 0 for c in f.terms.values()):
        raise ValueError("f must have nonnegative coefficients")
    i, j = pair
    diff = rayleigh_diff(f, i, j)
    return _verdict_for_diff(
        diff, ALL_REALS, budget, seed,
        diag={"property": "strong_rayleigh", "pair": (i, j)},
    )


def c_rayleigh_verdict(
    f: BoundedPoly,
    c: Fraction | int,
    pair: Optional[tuple[int, int]] = None,
    budget: int = 20_000,
    seed: int = 0,
) -> Verdict:
    """The c-weighted Rayleigh inequality on the positive orthant."""
    if c <= 0:
        raise ValueError("c must be positive")
    if any(cf < 0 for cf in f.terms.values()):
        raise ValueError("f must have nonnegative coefficients")
    if pair is not None:
        i, j = pair
        diff = c_rayleigh_diff(f, i, j, c)
        return _verdict_for_diff(
            diff, POSITIVE_ORTHANT, budget, seed,
            diag={"property": "c_rayleigh", "c": str(Fraction(c)), "pair": (i, j)},
        )
    per_pair = []
    for i, j in combinations(range(1, f.n + 1), 2):
        v = c_rayleigh_verdict(f, c, (i, j), budget=budget, seed=seed)
        if not v.holds:
            return v
        per_pair.append(((i, j), v.certificate.kind))
    kind = COEFF_NONNEG if all(k == COEFF_NONNEG for _, k in per_pair) else SOS_GRAM
    return verdicts.holds(
        kind, per_pair, property="c_rayleigh", c=str(Fraction(c)), pair=None
    )


@dataclass(frozen=True)
class CEstimate:
    """Empirical upper bound for the best Rayleigh constant of f."""

    value: Optional[Fraction]
    pair: Optional[tuple[int, int]]
    point: Optional[tuple[Fraction, ...]]


def min_c_estimate(f: BoundedPoly, samples: int = 120, seed: int = 0) -> CEstimate:
    """Minimum of (d_i f * d_j f) / (d_ij f * f) over sampled positive
    rational points and pairs (where the denominator is positive); exact."""
    import random

    rng = random.Random(seed)
    best: Optional[Fraction] = None
    arg_pair = arg_point = None
    pairs = list(combinations(sorted(f.active_vars()), 2))
    if not pairs:
        return CEstimate(None, None, None)
    for _ in range(samples):
        point = tuple(
            Fraction(rng.randint(1, 12), rng.randint(1, 12)) for _ in range(f.n)
        )
        for (i, j) in pairs:
            f_ij, f_i, f_j, f_0 = pair_decomposition(f, i, j)
            den = f_ij.evaluate(point) * f.evaluate(point)
            if den <= 0:
                continue
            num = f.derivative(i).evaluate(point) * f.derivative(j).evaluate(point)
            ratio = Fraction(num) / Fraction(den)
            if best is None or ratio < best:
                best, arg_pair, arg_point = ratio, (i, j), point
    return CEstimate(best, arg_pair, arg_point)


# ---------------------------------------------------------------------------
# half-plane property via the single-pair criterion


def hpp_verdict(
    M: Matroid,
    budget: int = 100_000,
    seed: int = 0,
    cross_check_all_pairs: bool = False,
) -> Verdict:
    """Half-plane property of the basis polynomial.

    Each connected component is tested through one designated pair (the
    lowest-labelled pair lying in a common basis); a globally real-nonnegative
    Rayleigh difference there certifies the component.  Fails witnesses are
    lifted to the full ground set and re-verified exactly.
    """
    comps = connected_components(M)
    inner_certs = []
    tiers = []
    for comp in comps:
        if len(comp) < 2:
            continue
        sub = restriction(M, comp)
        comp_sorted = sorted(comp)
        pair = wagner_pair(sub)
        if pair is None:
            continue
        f = basis_poly(sub)
        pairs = (
            list(combinations(range(1, sub.n + 1), 2))
            if cross_check_all_pairs
            else [pair]
        )
        for (i, j) in pairs:
            bij = (1 << (i - 1)) | (1 << (j - 1))
            if not any(B & bij == bij for B in sub.basis_masks):
                continue
            v = strong_rayleigh_verdict(f, (i, j), budget=budget, seed=seed)
            tiers.extend(v.diagnostics.get("tiers_run", []))
            orig_pair = (comp_sorted[i - 1], comp_sorted[j - 1])
            if v.fails:
                lifted = [Fraction(1)] * M.n
                for idx, e in enumerate(comp_sorted):
                    lifted[e - 1] = v.witness.point[idx]
                value = rayleigh_diff(basis_poly(M), *orig_pair).evaluate(lifted)
                assert value < 0, "lifted witness failed exact re-verification"
                return verdicts.fails(
                    Witness(value=Fraction(value), point=tuple(lifted)),
                    property="hpp", pair=orig_pair, component=sorted(comp),
                    tiers_run=tiers,
                )
            if not v.holds:
                return verdicts.inconclusive(
                    property="hpp", pair=orig_pair, component=sorted(comp),
                    tiers_run=tiers,
                )
            inner_certs.append((sorted(comp), orig_pair, v.certificate))
    return verdicts.holds(
        SINGLE_PAIR_WAGNER, inner_certs, property="hpp", tiers_run=tiers
    )


# ---------------------------------------------------------------------------
# nice principal-extension weights


def nice_extension_system(M: Matroid, F: Iterable[int]):
    """The equations: for each basis B of the principal truncation by F,
    sum of weights of the F-elements extending B back to a basis equals 1."""
    from .constructions import principal_truncation

    fel = sorted(set(F))
    tr = principal_truncation(M, fel)
    bset = M._basis_set
    rows = []
    for B in tr.basis_masks:
        row = []
        for fe in fel:
            bit = 1 << (fe - 1)
            row.append(Fraction(int(not (B & bit) and (B | bit) in bset)))
        rows.append(row)
    return fel, tr, rows


def nice_extension_weights(M: Matroid, F: Iterable[int]) -> Optional[dict[int, Fraction]]:
    """One nonnegative weight assignment making the extension nice, or None."""
    fel, _, rows = nice_extension_system(M, F)
    b = [Fraction(1)] * len(rows)
    sol = solve_eq_nonneg(rows, b)
    if sol is None:
        return None
    return dict(zip(fel, sol))


def nice_extension_report(M: Matroid, F: Iterable[int]) -> dict:
    """Facts about the weight system: whether the uniform choice works and
    whether any nonnegative solution exists (with one solution if so)."""
    fel, tr, rows = nice_extension_system(M, F)
    uniform = Fraction(1, len(fel))
    uniform_ok = all(sum(row) * uniform == 1 for row in rows)
    sol = nice_extension_weights(M, F)
    verified = sol is not None and all(
        sum(row[k] * sol[fe] for k, fe in enumerate(fel)) == 1 for row in rows
    )
    return {
        "F": fel,
        "truncation_bases": len(tr.basis_masks),
        "uniform_weight": uniform,
        "uniform_satisfies": uniform_ok,
        "feasible": sol is not None,
        "solution": sol,
        "solution_verified": verified,
    }
