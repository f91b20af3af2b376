"""Exact multivariate polynomials with per-variable degree at most 2.

A term's exponent vector is a pair of bit-sets (linear part, squared part);
coefficients are exact rationals (python ints or Fractions).  This is enough
to hold basis-generating polynomials, matching polynomials, and products of
two multi-affine polynomials such as Rayleigh differences.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .core import Matroid, elements, mask_of, popcount, set_of
from .constructions import MultiGraph
from .errors import (
    DegreeOverflow,
    LoopPresent,
    NotAProbabilityPolynomial,
    NotBipartite,
)
from . import verdicts
from .verdicts import Verdict, Witness

Rational = int | Fraction

TermKey = tuple[int, int]  # (linear mask, squared mask), disjoint


def _norm(c: Rational) -> Rational:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class BoundedPoly:
    """Immutable sparse polynomial, per-variable degree <= 2, exact coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[TermKey, Rational] | None = None):
        self.n = n
        clean: dict[TermKey, Rational] = {}
        if terms:
            full = (1 << n) - 1
            for (lin, sq), c in terms.items():
                if lin & sq:
                    raise ValueError("linear and squared masks must be disjoint")
                if (lin | sq) & ~full:
                    raise ValueError("term uses variables beyond n")
                c = _norm(c)
                if c != 0:
                    clean[(lin, sq)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "BoundedPoly":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, c: Rational) -> "BoundedPoly":
        return cls(n, {(0, 0): c})

    @classmethod
    def variable(cls, n: int, i: int) -> "BoundedPoly":
        return cls(n, {(1 << (i - 1), 0): 1})

    # -- basic structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_multiaffine(self) -> bool:
        return all(sq == 0 for (_, sq) in self.terms)

    def active_vars(self) -> frozenset[int]:
        m = 0
        for (lin, sq) in self.terms:
            m |= lin | sq
        return set_of(m)

    def degrees(self) -> set[int]:
        return {popcount(lin) + 2 * popcount(sq) for (lin, sq) in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def coefficient(self, lin: Iterable[int] | int, sq: Iterable[int] | int = 0) -> Rational:
        lmask = lin if isinstance(lin, int) else mask_of(lin)
        smask = sq if isinstance(sq, int) else mask_of(sq)
        return self.terms.get((lmask, smask), 0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BoundedPoly)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.terms.items()))))

    def __repr__(self) -> str:
        return f"BoundedPoly(n={self.n}, terms={len(self.terms)})"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "BoundedPoly") -> "BoundedPoly":
        self._check_same_space(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BoundedPoly(self.n, out)

    def __sub__(self, other: "BoundedPoly") -> "BoundedPoly":
        return self + (-other)

    def __neg__(self) -> "BoundedPoly":
        return BoundedPoly(self.n, {k: -c for k, c in self.terms.items()})

    def scale(self, c: Rational) -> "BoundedPoly":
        return BoundedPoly(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_same_space(other)
        out: dict[TermKey, Rational] = {}
        for (l1, s1), c1 in self.terms.items():
            for (l2, s2), c2 in other.terms.items():
                if (s1 & s2) | (s1 & l2) | (s2 & l1):
                    raise DegreeOverflow("product exceeds per-variable degree 2")
                sq = s1 | s2 | (l1 & l2)
                lin = l1 ^ l2
                key = (lin, sq)
                out[key] = out.get(key, 0) + c1 * c2
        return BoundedPoly(self.n, out)

    __rmul__ = __mul__

    def _check_same_space(self, other: "BoundedPoly"):
        if self.n != other.n:
            raise ValueError("polynomials live in different variable spaces")

    # -- calculus / evaluation ------------------------------------------------

    def derivative(self, i: int) -> "BoundedPoly":
        bit = 1 << (i - 1)
        out: dict[TermKey, Rational] = {}
        for (lin, sq), c in self.terms.items():
            if lin & bit:
                key = (lin ^ bit, sq)
                out[key] = out.get(key, 0) + c
            elif sq & bit:
                key = (lin | bit, sq ^ bit)
                out[key] = out.get(key, 0) + 2 * c
        return BoundedPoly(self.n, out)

    def evaluate(self, point: Sequence[Rational]) -> Rational:
        if len(point) != self.n:
            raise ValueError(f"point must have {self.n} coordinates")
        total: Rational = 0
        for (lin, sq), c in self.terms.items():
            v = c
            for e in elements(lin):
                v *= point[e - 1]
            for e in elements(sq):
                v *= point[e - 1] * point[e - 1]
            total += v
        return _norm(total)

    def evaluate_float(self, point: Sequence[float]) -> float:
        total = 0.0
        for (lin, sq), c in self.terms.items():
            v = float(c)
            for e in elements(lin):
                v *= point[e - 1]
            for e in elements(sq):
                v *= point[e - 1] * point[e - 1]
            total += v
        return total

    def assign(self, values: Mapping[int, Rational]) -> "BoundedPoly":
        """Substitute exact values for some variables."""
        vmask = mask_of(values.keys())
        out: dict[TermKey, Rational] = {}
        for (lin, sq), c in self.terms.items():
            v = c
            for e in elements(lin & vmask):
                v *= values[e]
            for e in elements(sq & vmask):
                v *= values[e] * values[e]
            if v == 0:
                continue
            key = (lin & ~vmask, sq & ~vmask)
            out[key] = out.get(key, 0) + v
        return BoundedPoly(self.n, out)


# ---------------------------------------------------------------------------
# module-level operation names


def basis_poly(M: Matroid) -> BoundedPoly:
    """The basis generating polynomial: one unit monomial per basis."""
    return BoundedPoly(M.n, {(B, 0): 1 for B in M.basis_masks})


def derivative(f: BoundedPoly, i: int) -> BoundedPoly:
    return f.derivative(i)


def multiply(f: BoundedPoly, g: BoundedPoly) -> BoundedPoly:
    return f * g


def evaluate(f: BoundedPoly, point: Sequence[Rational]) -> Rational:
    return f.evaluate(point)


def evaluate_float(f: BoundedPoly, point: Sequence[float]) -> float:
    return f.evaluate_float(point)


def pair_decomposition(
    f: BoundedPoly, i: int, j: int
) -> tuple[BoundedPoly, BoundedPoly, BoundedPoly, BoundedPoly]:
    """Write f = x_i x_j f_ij + x_i f_i + x_j f_j + f_0 (f multi-affine in i, j)."""
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    parts: list[dict[TermKey, Rational]] = [{}, {}, {}, {}]
    for (lin, sq), c in f.terms.items():
        if sq & (bi | bj):
            raise ValueError("f must be multi-affine in the chosen pair")
        which = (1 if lin & bi else 0) | (2 if lin & bj else 0)
        key = (lin & ~(bi | bj), sq)
        idx = {3: 0, 1: 1, 2: 2, 0: 3}[which]
        parts[idx][key] = parts[idx].get(key, 0) + c
    return tuple(BoundedPoly(f.n, p) for p in parts)  # type: ignore[return-value]


def rayleigh_diff(f: BoundedPoly, i: int, j: int) -> BoundedPoly:
    """d_i f * d_j f - d_i d_j f * f, for multi-affine f, via the reduced
    identity f_i*f_j - f_ij*f_0; the result involves neither x_i nor x_j."""
    if i == j:
        raise ValueError("need two distinct variables")
    if not f.is_multiaffine:
        raise ValueError("Rayleigh difference needs a multi-affine polynomial")
    f_ij, f_i, f_j, f_0 = pair_decomposition(f, i, j)
    return f_i * f_j - f_ij * f_0


def c_rayleigh_diff(f: BoundedPoly, i: int, j: int, c: Rational) -> BoundedPoly:
    """d_i f * d_j f - c * d_i d_j f * f for multi-affine f.

    Unlike the c=1 case this still involves x_i and x_j (linearly).
    """
    if i == j:
        raise ValueError("need two distinct variables")
    if not f.is_multiaffine:
        raise ValueError("needs a multi-affine polynomial")
    f_ij, f_i, f_j, f_0 = pair_decomposition(f, i, j)
    xi = BoundedPoly.variable(f.n, i)
    xj = BoundedPoly.variable(f.n, j)
    base = f_i * f_j - f_ij.scale(c) * f_0
    rest = xi * xj * (f_ij * f_ij) + xi * (f_i * f_ij) + xj * (f_j * f_ij)
    return base + rest.scale(Fraction(1) - Fraction(c))


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class Measure:
    """Probability measure on subsets of [n]; weights are exact nonnegative
    rationals summing to one, keyed by subset bit-mask."""

    n: int
    weights: dict[int, Fraction]

    def __post_init__(self):
        total = Fraction(0)
        full = (1 << self.n) - 1
        for mask, w in self.weights.items():
            if mask & ~full:
                raise ValueError("weight on a subset outside the ground set")
            if w < 0:
                raise ValueError("negative weight")
            total += w
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")

    def weight(self, mask: int) -> Fraction:
        return self.weights.get(mask, Fraction(0))

    @classmethod
    def uniform_on_bases(cls, M: Matroid) -> "Measure":
        w = Fraction(1, len(M.basis_masks))
        return cls(M.n, {B: w for B in M.basis_masks})


def generating_poly(mu: Measure) -> BoundedPoly:
    return BoundedPoly(mu.n, {(mask, 0): w for mask, w in mu.weights.items()})


def measure_from_poly(f: BoundedPoly) -> Measure:
    if not f.is_multiaffine:
        raise NotAProbabilityPolynomial("not multi-affine")
    weights: dict[int, Fraction] = {}
    total = Fraction(0)
    for (lin, _), c in f.terms.items():
        if c < 0:
            raise NotAProbabilityPolynomial("negative coefficient")
        weights[lin] = Fraction(c)
        total += c
    if total != 1:
        raise NotAProbabilityPolynomial(f"f(1) = {total} != 1")
    return Measure(f.n, weights)


def nlc_check(mu: Measure) -> Verdict:
    """Negative lattice condition: mu(S)mu(T) >= mu(SuT)mu(SnT) for all S, T.

    A violation needs both the union and the intersection in the support, so
    only support pairs are scanned.
    """
    if mu.n > 12:
        raise ValueError("NLC scan capped at n = 12")
    support = sorted(m for m, w in mu.weights.items() if w > 0)
    wt = mu.weights
    for U in support:
        for I in support:
            if I & ~U:
                continue
            diff = U & ~I
            # S = I u X, T = I u (diff \ X) over halvings X of the difference
            X = diff
            while True:
                S = I | X
                T = I | (diff ^ X)
                lhs = wt.get(S, Fraction(0)) * wt.get(T, Fraction(0))
                rhs = wt[U] * wt[I]
                if lhs < rhs:
                    return verdicts.fails(
                        Witness(
                            value=lhs - rhs,
                            extra={"S": sorted(set_of(S)), "T": sorted(set_of(T))},
                        ),
                        property="nlc",
                    )
                if X == 0:
                    break
                X = (X - 1) & diff
    return verdicts.holds(verdicts.ALL_ONES_EXACT, property="nlc")


# ---------------------------------------------------------------------------
# matching polynomials


@dataclass(frozen=True)
class EdgeWeights:
    """Nonnegative rational weight per edge index."""

    weights: dict[int, Rational]

    def __post_init__(self):
        for e, w in self.weights.items():
            if w < 0:
                raise ValueError(f"negative weight on edge {e}")

    def __getitem__(self, e: int) -> Rational:
        return self.weights.get(e, 1)

    @classmethod
    def ones(cls) -> "EdgeWeights":
        return cls({})


def _all_matchings(G: MultiGraph):
    """Yield (edge-id tuple, matched-vertex mask) for every matching of G."""
    edges = G.edges

    def rec(idx: int, used: int, chosen: tuple[int, ...]):
        if idx == len(edges):
            yield chosen, used
            return
        a, b = edges[idx]
        yield from rec(idx + 1, used, chosen)
        abit, bbit = 1 << (a - 1), 1 << (b - 1)
        if not (used & (abit | bbit)):
            yield from rec(idx + 1, used | abit | bbit, chosen + (idx + 1,))

    yield from rec(0, 0, ())


def _weight_product(chosen: Iterable[int], lam: EdgeWeights) -> Rational:
    w: Rational = 1
    for e in chosen:
        w *= lam[e]
    return w


def matching_poly(G: MultiGraph, lam: Optional[EdgeWeights] = None) -> BoundedPoly:
    """Sum over matchings of prod lambda_e x_i x_j; variables are vertices."""
    if G.has_loop():
        raise LoopPresent("matching polynomials need a loopless graph")
    lam = lam or EdgeWeights.ones()
    terms: dict[TermKey, Rational] = {}
    for chosen, used in _all_matchings(G):
        key = (used, 0)
        terms[key] = terms.get(key, 0) + _weight_product(chosen, lam)
    return BoundedPoly(G.v, terms)


def complementary_matching_poly(
    G: MultiGraph, lam: Optional[EdgeWeights] = None
) -> BoundedPoly:
    """x^V M_G(1/x; lambda): each matching contributes x^(unmatched vertices)."""
    if G.has_loop():
        raise LoopPresent("matching polynomials need a loopless graph")
    lam = lam or EdgeWeights.ones()
    full = (1 << G.v) - 1
    terms: dict[TermKey, Rational] = {}
    for chosen, used in _all_matchings(G):
        key = (full ^ used, 0)
        terms[key] = terms.get(key, 0) + _weight_product(chosen, lam)
    return BoundedPoly(G.v, terms)


def _check_bipartition(G: MultiGraph, A: Iterable[int]) -> int:
    amask = mask_of(A)
    for (a, b) in G.edges:
        ina = bool(amask & (1 << (a - 1)))
        inb = bool(amask & (1 << (b - 1)))
        if ina == inb:
            raise NotBipartite(f"edge ({a},{b}) does not cross the bipartition")
    return amask


def restricted_matching_poly(
    G: MultiGraph, A: Iterable[int], lam: Optional[EdgeWeights] = None
) -> BoundedPoly:
    """M_G with the non-A vertex variables set to one."""
    amask = _check_bipartition(G, A)
    f = matching_poly(G, lam)
    others = set_of(((1 << G.v) - 1) ^ amask)
    return f.assign({v: 1 for v in others})


def c_weights(
    G: MultiGraph, A: Iterable[int], lam: Optional[EdgeWeights] = None
) -> dict[int, Rational]:
    """c(S; lambda): summed matching weights grouped by the matched A-subset S.

    Keys are bit-masks over the vertex space; the support is exactly the set
    of independent sets of the transversal matroid of (G, A).
    """
    amask = _check_bipartition(G, A)
    lam = lam or EdgeWeights.ones()
    out: dict[int, Rational] = {}
    for chosen, used in _all_matchings(G):
        S = used & amask
        out[S] = out.get(S, 0) + _weight_product(chosen, lam)
    return {S: _norm(w) for S, w in out.items() if w != 0}


# ---------------------------------------------------------------------------
# determinantal representation for graphic matroids


def determinantal_rep_graphic(G: MultiGraph) -> list[list[int]]:
    """Signed incidence columns, one per edge, with one vertex row removed per
    connected component.  By Cauchy-Binet, det(sum_e x_e a_e a_e^T) equals the
    spanning-forest generating polynomial of G."""
    if G.has_loop():
        raise LoopPresent("determinantal representation needs a loopless graph")
    # find components over all vertices
    parent = list(range(G.v + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, b) in G.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    drop = {}
    for v in range(1, G.v + 1):
        root = find(v)
        drop[root] = max(drop.get(root, 0), v)
    dropped = set(drop.values())
    rows = [v for v in range(1, G.v + 1) if v not in dropped]
    row_index = {v: i for i, v in enumerate(rows)}
    vecs = []
    for (a, b) in G.edges:
        col = [0] * len(rows)
        if a in row_index:
            col[row_index[a]] += 1
        if b in row_index:
            col[row_index[b]] -= 1
        vecs.append(col)
    return vecs
