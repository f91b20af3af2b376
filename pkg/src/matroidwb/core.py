"""Exact matroids on small ground sets, represented by their bases as bit-sets.

Elements are 1-indexed (1..n, n <= 16); a subset of the ground set is an
n-bit integer mask with bit i-1 standing for element i.  All operations are
pure: a Matroid is immutable after construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Optional

import numpy as np

from .errors import (
    BasepointIsSeparator,
    EmptyBases,
    ExchangeViolation,
    MixedCardinality,
    NotCircuitHyperplane,
)

MAX_ELEMENTS = 16


def mask_of(elems: Iterable[int]) -> int:
    m = 0
    for e in elems:
        m |= 1 << (e - 1)
    return m


def set_of(mask: int) -> frozenset[int]:
    return frozenset(elements(mask))


def elements(mask: int) -> list[int]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return out


def popcount(mask: int) -> int:
    return mask.bit_count()


class Matroid:
    """A matroid given by its set of bases.

    Do not call the constructor directly with unchecked data; use
    :func:`from_bases`, which validates the basis exchange axiom.
    """

    __slots__ = ("n", "r", "basis_masks", "_basis_set", "_indep", "_spanning", "_circuits")

    def __init__(self, n: int, basis_masks: Iterable[int], validate: bool = True):
        masks = tuple(sorted(set(basis_masks)))
        if not masks:
            raise EmptyBases("a matroid needs at least one basis")
        if n < 0 or n > MAX_ELEMENTS:
            raise ValueError(f"ground set size must be in 0..{MAX_ELEMENTS}, got {n}")
        full = (1 << n) - 1
        r = popcount(masks[0])
        for m in masks:
            if m & ~full:
                raise ValueError("basis uses elements outside the ground set")
            if popcount(m) != r:
                raise MixedCardinality("bases must all have the same size")
        self.n = n
        self.r = r
        self.basis_masks = masks
        self._basis_set = frozenset(masks)
        self._indep = None
        self._spanning = None
        self._circuits = None
        if validate:
            self._check_exchange()

    # -- validation -----------------------------------------------------

    def _check_exchange(self) -> None:
        masks = self.basis_masks
        if len(masks) == 1:
            return
        # All r-subsets present => uniform, exchange holds trivially.
        import math

        if len(masks) == math.comb(self.n, self.r):
            return
        spanning = self._spanning_table()
        bset = self._basis_set
        full = (1 << self.n) - 1
        for I in masks:
            for a in elements(I):
                abit = 1 << (a - 1)
                # neighbours: b outside I with I - a + b a basis
                nb = 0
                swapped = I ^ abit
                rest = full & ~I
                b = rest
                while b:
                    bbit = b & -b
                    if (swapped | bbit) in bset:
                        nb |= bbit
                    b ^= bbit
                # a violating J is any basis avoiding both a and nb
                allowed = (full & ~nb & ~abit) | (I & ~abit)
                if spanning[allowed]:
                    J = next(m for m in masks if m & ~allowed == 0)
                    raise ExchangeViolation(set_of(I), set_of(J), a)

    # -- cached subset tables -------------------------------------------

    def _indep_table(self) -> np.ndarray:
        """indep[S] == 1 iff S is contained in some basis."""
        if self._indep is None:
            arr = np.zeros(1 << self.n, dtype=np.uint8)
            arr[list(self.basis_masks)] = 1
            for i in range(self.n):
                half = arr.reshape(-1, 2, 1 << i)
                half[:, 0, :] |= half[:, 1, :]
            self._indep = arr
        return self._indep

    def _spanning_table(self) -> np.ndarray:
        """spanning[S] == 1 iff S contains some basis."""
        if self._spanning is None:
            arr = np.zeros(1 << self.n, dtype=np.uint8)
            arr[list(self.basis_masks)] = 1
            for i in range(self.n):
                half = arr.reshape(-1, 2, 1 << i)
                half[:, 1, :] |= half[:, 0, :]
            self._spanning = arr
        return self._spanning

    def is_independent(self, S: int | Iterable[int]) -> bool:
        mask = S if isinstance(S, int) else mask_of(S)
        return bool(self._indep_table()[mask])

    # -- conveniences ----------------------------------------------------

    @property
    def bases(self) -> tuple[frozenset[int], ...]:
        return tuple(set_of(m) for m in self.basis_masks)

    @property
    def ground(self) -> frozenset[int]:
        return frozenset(range(1, self.n + 1))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matroid)
            and self.n == other.n
            and self.basis_masks == other.basis_masks
        )

    def __hash__(self) -> int:
        return hash((self.n, self.basis_masks))

    def __repr__(self) -> str:
        return f"Matroid(n={self.n}, r={self.r}, bases={len(self.basis_masks)})"


@dataclass(frozen=True)
class CircuitSet:
    """Antichain of minimal dependent sets of a matroid."""

    n: int
    masks: tuple[int, ...]

    @property
    def sets(self) -> tuple[frozenset[int], ...]:
        return tuple(set_of(m) for m in self.masks)

    def __len__(self) -> int:
        return len(self.masks)


# ---------------------------------------------------------------------------
# construction / rank / circuits


def from_bases(n: int, bases: Iterable[Iterable[int]]) -> Matroid:
    """Build a validated matroid from explicit bases on ground set 1..n."""
    if n < 1 or n > MAX_ELEMENTS:
        raise ValueError(f"n must be in 1..{MAX_ELEMENTS}, got {n}")
    masks = []
    for b in bases:
        b = set(b)
        if any(e < 1 or e > n for e in b):
            raise ValueError(f"element outside 1..{n} in basis {sorted(b)}")
        masks.append(mask_of(b))
    if not masks:
        raise EmptyBases("a matroid needs at least one basis")
    return Matroid(n, masks)


def rank_of(M: Matroid, S: Iterable[int] | int) -> int:
    """Rank of a subset: the largest intersection with a basis."""
    mask = S if isinstance(S, int) else mask_of(S)
    return max(popcount(B & mask) for B in M.basis_masks)


def closure(M: Matroid, S: Iterable[int] | int) -> frozenset[int]:
    mask = S if isinstance(S, int) else mask_of(S)
    r = rank_of(M, mask)
    cl = mask
    for e in range(1, M.n + 1):
        bit = 1 << (e - 1)
        if not (mask & bit) and rank_of(M, mask | bit) == r:
            cl |= bit
    return set_of(cl)


def circuits(M: Matroid) -> CircuitSet:
    """All minimal dependent subsets (sizes are at most r+1)."""
    if M._circuits is not None:
        return M._circuits
    indep = M._indep_table()
    found: list[int] = []
    elems = list(range(1, M.n + 1))
    for k in range(1, M.r + 2):
        for combo in combinations(elems, k):
            mask = mask_of(combo)
            if indep[mask]:
                continue
            if any(mask & c == c for c in found):
                continue
            if all(indep[mask ^ (1 << (e - 1))] for e in combo):
                found.append(mask)
    cs = CircuitSet(M.n, tuple(sorted(found)))
    M._circuits = cs
    return cs


# ---------------------------------------------------------------------------
# duality, minors, sums


def dual(M: Matroid) -> Matroid:
    full = (1 << M.n) - 1
    return Matroid(M.n, (full ^ B for B in M.basis_masks))


def relabel_map(n: int, removed: Iterable[int]) -> dict[int, int]:
    """Old-label -> new-label map after removing elements (survivors keep order)."""
    gone = set(removed)
    out = {}
    new = 1
    for e in range(1, n + 1):
        if e not in gone:
            out[e] = new
            new += 1
    return out


def _relabel_mask(mask: int, mapping: dict[int, int]) -> int:
    out = 0
    for e in elements(mask):
        out |= 1 << (mapping[e] - 1)
    return out


def delete(M: Matroid, S: Iterable[int]) -> Matroid:
    """Deletion M\\S; new labels follow :func:`relabel_map`."""
    smask = mask_of(S)
    keep = ((1 << M.n) - 1) & ~smask
    new_r = max(popcount(B & keep) for B in M.basis_masks)
    mapping = relabel_map(M.n, set_of(smask))
    masks = {
        _relabel_mask(B & keep, mapping)
        for B in M.basis_masks
        if popcount(B & keep) == new_r
    }
    return Matroid(M.n - popcount(smask), masks)


def contract(M: Matroid, S: Iterable[int]) -> Matroid:
    """Contraction M/S; new labels follow :func:`relabel_map`."""
    smask = mask_of(S)
    rk = rank_of(M, smask)
    mapping = relabel_map(M.n, set_of(smask))
    masks = {
        _relabel_mask(B & ~smask, mapping)
        for B in M.basis_masks
        if popcount(B & smask) == rk
    }
    return Matroid(M.n - popcount(smask), masks)


def direct_sum(M: Matroid, N: Matroid) -> Matroid:
    """Direct sum; N's elements are shifted up by M.n."""
    if M.n + N.n > MAX_ELEMENTS:
        raise ValueError("direct sum exceeds the ground set cap")
    masks = [B | (C << M.n) for B in M.basis_masks for C in N.basis_masks]
    return Matroid(M.n + N.n, masks)


def is_loop(M: Matroid, e: int) -> bool:
    bit = 1 << (e - 1)
    return all(not (B & bit) for B in M.basis_masks)


def is_coloop(M: Matroid, e: int) -> bool:
    bit = 1 << (e - 1)
    return all(B & bit for B in M.basis_masks)


def two_sum(M: Matroid, p: int, N: Matroid, q: int) -> Matroid:
    """2-sum of M and N glued along basepoints p and q.

    The circuit set of the result is C(M\\p) u C(N\\q) together with all
    (C u D) - {p,q} for circuits C through p and D through q; bases are
    rebuilt from the circuit-free subsets of size r(M)+r(N)-1.

    Ground set: elements of M except p (relabelled 1..M.n-1), then elements
    of N except q.
    """
    if M.n < 2 or N.n < 2:
        raise BasepointIsSeparator("both parts need at least two elements")
    for (mat, e) in ((M, p), (N, q)):
        if is_loop(mat, e) or is_coloop(mat, e):
            raise BasepointIsSeparator(f"basepoint {e} is a loop or coloop")

    map_m = relabel_map(M.n, [p])
    map_n = {e: new + (M.n - 1) for e, new in relabel_map(N.n, [q]).items()}
    pbit, qbit = 1 << (p - 1), 1 << (q - 1)

    circ: set[int] = set()
    cm = circuits(M).masks
    cn = circuits(N).masks
    for c in cm:
        if not (c & pbit):
            circ.add(_relabel_mask(c, map_m))
    for d in cn:
        if not (d & qbit):
            circ.add(_relabel_mask(d, map_n))
    for c in cm:
        if c & pbit:
            for d in cn:
                if d & qbit:
                    circ.add(
                        _relabel_mask(c ^ pbit, map_m) | _relabel_mask(d ^ qbit, map_n)
                    )

    n_tot = M.n + N.n - 2
    r_tot = M.r + N.r - 1
    clist = sorted(circ)
    masks = []
    for combo in combinations(range(1, n_tot + 1), r_tot):
        mask = mask_of(combo)
        if all(mask & c != c for c in clist):
            masks.append(mask)
    return Matroid(n_tot, masks)


# ---------------------------------------------------------------------------
# isomorphism and minors


def _degree_profiles(M: Matroid):
    n = M.n
    d1 = [0] * (n + 1)
    d2 = [[0] * (n + 1) for _ in range(n + 1)]
    for B in M.basis_masks:
        es = elements(B)
        for e in es:
            d1[e] += 1
        for i, e in enumerate(es):
            for f in es[i + 1 :]:
                d2[e][f] += 1
                d2[f][e] += 1
    profile = {
        e: (d1[e], tuple(sorted(d2[e][1:]))) for e in range(1, n + 1)
    }
    return d1, d2, profile


def isomorphism(M: Matroid, N: Matroid) -> Optional[dict[int, int]]:
    """A ground-set bijection carrying bases onto bases, or None.

    Backtracking search pruned by per-element basis degrees and pair degrees.
    """
    if (M.n, M.r, len(M.basis_masks)) != (N.n, N.r, len(N.basis_masks)):
        return None
    d1m, d2m, prof_m = _degree_profiles(M)
    d1n, d2n, prof_n = _degree_profiles(N)
    if sorted(prof_m.values()) != sorted(prof_n.values()):
        return None

    n = M.n
    # most constrained first: rarest profile, then element id for determinism
    freq: dict = {}
    for p in prof_m.values():
        freq[p] = freq.get(p, 0) + 1
    order = sorted(range(1, n + 1), key=lambda e: (freq[prof_m[e]], e))
    candidates = {
        e: [f for f in range(1, n + 1) if prof_n[f] == prof_m[e]] for e in order
    }
    n_bases = set(N.basis_masks)

    assign: dict[int, int] = {}
    used = [False] * (n + 1)

    def extend(idx: int) -> bool:
        if idx == n:
            for B in M.basis_masks:
                img = 0
                for e in elements(B):
                    img |= 1 << (assign[e] - 1)
                if img not in n_bases:
                    return False
            return True
        e = order[idx]
        for f in candidates[e]:
            if used[f]:
                continue
            ok = all(d2m[e][e2] == d2n[f][f2] for e2, f2 in assign.items())
            if not ok:
                continue
            assign[e] = f
            used[f] = True
            if extend(idx + 1):
                return True
            del assign[e]
            used[f] = False
        return False

    if extend(0):
        return dict(assign)
    return None


def is_isomorphic(M: Matroid, N: Matroid) -> bool:
    return isomorphism(M, N) is not None


def has_minor(M: Matroid, N: Matroid) -> bool:
    """Whether some deletion/contraction sequence of M yields a copy of N."""
    if N.n > M.n or N.r > M.r or (N.n - N.r) > (M.n - M.r):
        return False
    k_contract = M.r - N.r
    k_delete = M.n - k_contract - N.n
    seen: set[tuple] = set()
    elems = list(range(1, M.n + 1))
    for I in combinations(elems, k_contract):
        if not M.is_independent(I):
            continue
        M1 = contract(M, I) if I else M
        for D in combinations(range(1, M1.n + 1), k_delete):
            M2 = delete(M1, D) if D else M1
            if M2.r != N.r:
                continue
            key = (M2.n, M2.basis_masks)
            if key in seen:
                continue
            seen.add(key)
            if is_isomorphic(M2, N):
                return True
    return False


# ---------------------------------------------------------------------------
# connectivity


def is_connected(M: Matroid) -> bool:
    """No 1-separation: rank(A) + rank(E-A) > r for all proper nonempty A."""
    if M.n <= 1:
        return True
    full = (1 << M.n) - 1
    for A in range(1, full):
        if not (A & 1):
            continue  # fix element 1 on side A; complements are symmetric
        if rank_of(M, A) + rank_of(M, full ^ A) == M.r:
            return False
    return True


def two_separation(M: Matroid) -> Optional[tuple[frozenset[int], frozenset[int]]]:
    """A partition (A, B), both sides >= 2, with rank(A)+rank(B)-r <= 1, or None."""
    if M.n < 4:
        return None
    full = (1 << M.n) - 1
    for A in range(1, full):
        if not (A & 1):
            continue
        if popcount(A) < 2 or popcount(A) > M.n - 2:
            continue
        B = full ^ A
        if rank_of(M, A) + rank_of(M, B) - M.r <= 1:
            return (set_of(A), set_of(B))
    return None


def connected_components(M: Matroid) -> list[frozenset[int]]:
    """Finest direct-sum decomposition of the ground set.

    Two elements share a component iff some circuit contains both; loops and
    coloops are singletons.
    """
    parent = list(range(M.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for c in circuits(M).masks:
        es = elements(c)
        for e in es[1:]:
            union(es[0], e)
    groups: dict[int, set[int]] = {}
    for e in range(1, M.n + 1):
        groups.setdefault(find(e), set()).add(e)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def restriction(M: Matroid, S: Iterable[int]) -> Matroid:
    """M restricted to S (deletion of everything else)."""
    smask = mask_of(S)
    rest = set_of(((1 << M.n) - 1) & ~smask)
    return delete(M, rest)


# ---------------------------------------------------------------------------
# relaxation


def relax(M: Matroid, H: Iterable[int]) -> Matroid:
    """Promote a circuit-hyperplane H to a basis."""
    hmask = mask_of(H)
    if popcount(hmask) != M.r:
        raise NotCircuitHyperplane(f"|H| = {popcount(hmask)} != rank {M.r}")
    if hmask in M._basis_set:
        raise NotCircuitHyperplane("H is already a basis")
    if rank_of(M, hmask) != M.r - 1:
        raise NotCircuitHyperplane("H does not have rank r-1")
    indep = M._indep_table()
    for e in elements(hmask):
        if not indep[hmask ^ (1 << (e - 1))]:
            raise NotCircuitHyperplane("H is not a circuit")
    if closure(M, hmask) != set_of(hmask):
        raise NotCircuitHyperplane("H is not closed")
    return Matroid(M.n, M.basis_masks + (hmask,))
