"""Class-membership tests and deterministic family generators."""
from __future__ import annotations

from itertools import combinations, combinations_with_replacement, permutations
from typing import Iterator, Optional, Sequence

from .core import (
    Matroid,
    circuits,
    dual,
    elements,
    mask_of,
    popcount,
)
from .constructions import (
    LatticePathPair,
    MultiGraph,
    bicircular,
    lattice_path,
)

# ---------------------------------------------------------------------------
# paving


def is_paving(M: Matroid) -> bool:
    """No circuit smaller than the rank."""
    return all(popcount(c) >= M.r for c in circuits(M).masks)


def is_sparse_paving(M: Matroid) -> bool:
    return is_paving(M) and is_paving(dual(M))


# ---------------------------------------------------------------------------
# base-sorting orders / positroids


def is_base_sorting_order(M: Matroid, order: Sequence[int]) -> bool:
    """Whether merging any two bases in this order and splitting the merged
    multiset into odd and even positions always yields two bases."""
    if sorted(order) != list(range(1, M.n + 1)):
        raise ValueError("order must be a permutation of the ground set")
    pos = [0] * (M.n + 1)
    for k, e in enumerate(order):
        pos[e] = k
    blists = [sorted(elements(B), key=lambda e: pos[e]) for B in M.basis_masks]
    bset = M._basis_set
    nb = len(blists)
    for a in range(nb):
        for b in range(a + 1, nb):
            merged = sorted(blists[a] + blists[b], key=lambda e: pos[e])
            odd = 0
            even = 0
            for k in range(0, len(merged), 2):
                odd |= 1 << (merged[k] - 1)
            for k in range(1, len(merged), 2):
                even |= 1 << (merged[k] - 1)
            if odd not in bset or even not in bset:
                return False
    return True


def positroid_verdict(M: Matroid) -> Optional[tuple[int, ...]]:
    """A base-sorting order for M, or None if none exists.

    Searches orders with the first position pinned to element 1 (base-sorting
    orders are closed under cyclic shifts); each found order's shifts are
    re-checked, so the reduction cannot silently go wrong.
    """
    if M.n > 9:
        raise ValueError("order search capped at n = 9")
    if M.n == 1:
        return (1,)
    for rest in permutations(range(2, M.n + 1)):
        order = (1,) + rest
        if is_base_sorting_order(M, order):
            for s in range(1, M.n):
                shifted = order[s:] + order[:s]
                if not is_base_sorting_order(M, shifted):
                    raise RuntimeError(
                        "cyclic shift of a base-sorting order is not base-sorting; "
                        "the first-element reduction is unsound here"
                    )
            return order
    return None


# ---------------------------------------------------------------------------
# sparse paving family (stream of isomorphism-class representatives)


def _hyperfp(n: int, H: tuple[int, ...]):
    """Cheap isomorphism invariant of a family of equal-size subsets."""
    deg = [0] * (n + 1)
    for A in H:
        for e in elements(A):
            deg[e] += 1
    pair = []
    for i in range(len(H)):
        for j in range(i + 1, len(H)):
            pair.append(popcount(H[i] & H[j]))
    return (len(H), tuple(sorted(deg[1:])), tuple(sorted(pair)))


def _hyper_iso(n: int, H1: Sequence[int], H2: Sequence[int]) -> bool:
    """Backtracking element bijection carrying one subset family onto the other."""
    if len(H1) != len(H2):
        return False
    s2 = set(H2)

    def profile(H):
        deg = {e: 0 for e in range(1, n + 1)}
        for A in H:
            for e in elements(A):
                deg[e] += 1
        return deg

    d1, d2 = profile(H1), profile(H2)
    if sorted(d1.values()) != sorted(d2.values()):
        return False
    order = sorted(range(1, n + 1), key=lambda e: (-d1[e], e))
    cands = {e: [f for f in range(1, n + 1) if d2[f] == d1[e]] for e in order}
    assign: dict[int, int] = {}
    used = set()

    def img(mask: int) -> Optional[int]:
        out = 0
        for e in elements(mask):
            if e not in assign:
                return None
            out |= 1 << (assign[e] - 1)
        return out

    def extend(k: int) -> bool:
        if k == n:
            return all(img(A) in s2 for A in H1)
        e = order[k]
        for f in cands[e]:
            if f in used:
                continue
            assign[e] = f
            used.add(f)
            ok = True
            # prune: fully-mapped members must land in H2
            for A in H1:
                m = img(A)
                if m is not None and m not in s2:
                    ok = False
                    break
            if ok and extend(k + 1):
                return True
            del assign[e]
            used.discard(f)
        return False

    return extend(0)


def sparse_paving_family(n: int, r: int, limit: int = 1000) -> Iterator[Matroid]:
    """Sparse paving matroids on [n] of rank r, one per isomorphism class.

    Non-basis families H (r-sets, pairwise symmetric difference >= 4) are
    grown breadth-first by size; each new class representative is validated
    and streamed.  Deterministic enumeration order.
    """
    if not (0 < r < n) or n > 10:
        raise ValueError("need 0 < r < n <= 10")
    rsets = [mask_of(c) for c in combinations(range(1, n + 1), r)]
    nr = len(rsets)
    conflict = [0] * nr
    for i in range(nr):
        for j in range(nr):
            if i != j and popcount(rsets[i] ^ rsets[j]) == 2:
                conflict[i] |= 1 << j

    emitted = 0

    def emit(H_idx: tuple[int, ...]) -> Optional[Matroid]:
        gone = {rsets[i] for i in H_idx}
        masks = [m for m in rsets if m not in gone]
        M = Matroid(n, masks)
        return M if is_sparse_paving(M) else None

    # level 0: the uniform matroid
    M0 = emit(())
    if M0 is not None and limit > 0:
        emitted += 1
        yield M0
    reps: list[tuple[int, ...]] = [()]  # H as sorted index tuples
    seen_exact: set[tuple[int, ...]] = {()}
    while reps and emitted < limit:
        buckets: dict[tuple, list[tuple[int, ...]]] = {}
        next_reps: list[tuple[int, ...]] = []
        for H in reps:
            forbidden = 0
            for i in H:
                forbidden |= conflict[i] | (1 << i)
            for v in range(nr):
                if forbidden & (1 << v):
                    continue
                H2 = tuple(sorted(H + (v,)))
                if H2 in seen_exact:
                    continue
                seen_exact.add(H2)
                masks2 = tuple(rsets[i] for i in H2)
                fp = _hyperfp(n, masks2)
                bucket = buckets.setdefault(fp, [])
                if any(
                    _hyper_iso(n, masks2, tuple(rsets[i] for i in other))
                    for other in bucket
                ):
                    continue
                bucket.append(H2)
                next_reps.append(H2)
                M = emit(H2)
                if M is not None:
                    emitted += 1
                    yield M
                    if emitted >= limit:
                        return
        reps = next_reps


# ---------------------------------------------------------------------------
# lattice path family


def lpm_family(
    max_total: int, limit: int = 10**9, connected_only: bool = False
) -> Iterator[tuple[LatticePathPair, Matroid]]:
    """All lattice path presentations with m + r <= max_total, streamed with
    their matroids in a fixed enumeration order."""
    if max_total > 9:
        raise ValueError("path census capped at m + r = 9")
    from .core import is_connected

    count = 0
    for total in range(1, max_total + 1):
        for r in range(0, total + 1):
            pos = list(combinations(range(1, total + 1), r))
            for q_n in pos:  # upper path: N steps as early as the lower's
                for p_n in pos:
                    if any(l > u for l, u in zip(q_n, p_n)):
                        continue
                    p = "".join(
                        "N" if i in set(p_n) else "E" for i in range(1, total + 1)
                    )
                    q = "".join(
                        "N" if i in set(q_n) else "E" for i in range(1, total + 1)
                    )
                    L = LatticePathPair(p, q)
                    M = lattice_path(L)
                    if connected_only and not is_connected(M):
                        continue
                    yield (L, M)
                    count += 1
                    if count >= limit:
                        return


# ---------------------------------------------------------------------------
# bicircular family


def _canonical_graph_key(v: int, edges: tuple[tuple[int, int], ...]):
    """Degree-refinement relabelling key; collapses most isomorphic copies."""
    deg = [0] * (v + 1)
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    profile = {u: (deg[u],) for u in range(1, v + 1)}
    for _ in range(2):
        nxt = {}
        for u in range(1, v + 1):
            neigh = sorted(
                profile[b if a == u else a] for a, b in edges if u in (a, b)
            )
            nxt[u] = (profile[u], tuple(neigh))
        profile = nxt
    relabel = {
        u: k + 1
        for k, u in enumerate(sorted(range(1, v + 1), key=lambda u: (profile[u], u)))
    }
    canon = tuple(
        sorted(tuple(sorted((relabel[a], relabel[b]))) for a, b in edges)
    )
    return (v, canon)


def _connected_no_isolated(v: int, edges) -> bool:
    parent = list(range(v + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    seen = set()
    for a, b in edges:
        seen.update((a, b))
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    if seen != set(range(1, v + 1)):
        return False
    return len({find(u) for u in range(1, v + 1)}) == 1


def bicircular_family(
    max_edges: int, limit: int = 10**9
) -> Iterator[tuple[MultiGraph, Matroid]]:
    """Connected multigraphs (loops and parallels allowed) up to the edge
    bound, streamed with their bicircular matroids; cheap canonical keys
    suppress most isomorphic duplicates."""
    if max_edges > 9:
        raise ValueError("bicircular census capped at 9 edges")
    seen = set()
    count = 0
    for v in range(1, max_edges + 2):
        slots = [(a, b) for a in range(1, v + 1) for b in range(a, v + 1)]
        for e in range(max(1, v - 1), max_edges + 1):
            for combo in combinations_with_replacement(slots, e):
                if not _connected_no_isolated(v, combo):
                    continue
                key = _canonical_graph_key(v, combo)
                if key in seen:
                    continue
                seen.add(key)
                G = MultiGraph(v=v, edges=tuple(combo))
                yield (G, bicircular(G))
                count += 1
                if count >= limit:
                    return
