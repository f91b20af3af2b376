"""Matroid constructions from graphs, set systems, lattice paths, and the
loop/coloop/principal-extension operators."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .core import (
    MAX_ELEMENTS,
    Matroid,
    closure,
    dual,
    elements,
    is_connected,
    mask_of,
    popcount,
    rank_of,
    relax,
    set_of,
)
from .errors import (
    DependentGeneratorSet,
    FDisjointFromAllBases,
    PathViolation,
    UnknownName,
)

# ---------------------------------------------------------------------------
# presentation types


@dataclass(frozen=True)
class MultiGraph:
    """Labelled multigraph; loops (u, u) and parallel edges are allowed.

    Edge index (1-based position in `edges`) is the matroid element.
    """

    v: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.v < 1:
            raise ValueError("need at least one vertex")
        if len(self.edges) > MAX_ELEMENTS:
            raise ValueError(f"edge count capped at {MAX_ELEMENTS}")
        for (a, b) in self.edges:
            if not (1 <= a <= self.v and 1 <= b <= self.v):
                raise ValueError(f"edge ({a},{b}) outside vertex range 1..{self.v}")

    @property
    def e(self) -> int:
        return len(self.edges)

    def has_loop(self) -> bool:
        return any(a == b for a, b in self.edges)

    def incident(self, vertex: int) -> frozenset[int]:
        return frozenset(
            i + 1 for i, (a, b) in enumerate(self.edges) if vertex in (a, b)
        )


@dataclass(frozen=True)
class SetSystem:
    """A family A_1..A_k of subsets of [n]; duplicates are allowed."""

    n: int
    family: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.family) < 1:
            raise ValueError("set system needs at least one member")
        for A in self.family:
            if any(e < 1 or e > self.n for e in A):
                raise ValueError("set member outside ground set")


@dataclass(frozen=True)
class LatticePathPair:
    """Two monotone lattice paths (strings over N/E) from (0,0) to (m,r),
    with the lower path `p` never rising above the upper path `q`."""

    p: str
    q: str

    def __post_init__(self):
        if len(self.p) != len(self.q):
            raise PathViolation("paths must have equal length")
        if not self.p or set(self.p + self.q) - {"N", "E"}:
            raise PathViolation("paths must be nonempty strings over {N, E}")
        if self.p.count("N") != self.q.count("N"):
            raise PathViolation("paths must end at the same point")
        hp = hq = 0
        for cp, cq in zip(self.p, self.q):
            hp += cp == "N"
            hq += cq == "N"
            if hp > hq:
                raise PathViolation("lower path rises above the upper path")

    @property
    def r(self) -> int:
        return self.p.count("N")

    @property
    def m(self) -> int:
        return self.p.count("E")

    @property
    def size(self) -> int:
        return len(self.p)

    def intervals(self) -> tuple[tuple[int, int], ...]:
        """The interval [l_i, u_i] for each row, from the N-step positions."""
        upper_n = [i + 1 for i, c in enumerate(self.p) if c == "N"]
        lower_n = [i + 1 for i, c in enumerate(self.q) if c == "N"]
        return tuple(zip(lower_n, upper_n))


def lattice_path_pair_from_endpoints(
    lower: Sequence[int], upper: Sequence[int]
) -> LatticePathPair:
    """Pair from interval endpoints: `lower` gives l_1<..<l_r (upper path's
    N positions), `upper` gives u_1<..<u_r; the ground set is [u_r]."""
    if len(lower) != len(upper) or not lower:
        raise PathViolation("endpoint lists must be nonempty and equal length")
    r = len(lower)
    n = upper[-1]
    for seq in (lower, upper):
        if list(seq) != sorted(set(seq)) or seq[0] < 1 or seq[-1] > n:
            raise PathViolation("endpoints must be strictly increasing in 1..u_r")
    if any(l > u for l, u in zip(lower, upper)):
        raise PathViolation("need l_i <= u_i for every interval")
    p = "".join("N" if i in set(upper) else "E" for i in range(1, n + 1))
    q = "".join("N" if i in set(lower) else "E" for i in range(1, n + 1))
    return LatticePathPair(p, q)


# ---------------------------------------------------------------------------
# bipartite matching (used by transversal matroids)


def _matchable(items: Sequence[int], adj: dict[int, Sequence[int]], n_right: int) -> bool:
    """Whether every item can be matched to a distinct right vertex."""
    match_r: dict[int, int] = {}

    def augment(x: int, seen: set[int]) -> bool:
        for y in adj[x]:
            if y in seen:
                continue
            seen.add(y)
            if y not in match_r or augment(match_r[y], seen):
                match_r[y] = x
                return True
        return False

    for x in items:
        if not augment(x, set()):
            return False
    return True


# ---------------------------------------------------------------------------
# the constructions


def uniform(k: int, n: int) -> Matroid:
    if not (0 <= k <= n):
        raise ValueError("need 0 <= k <= n")
    return Matroid(n, (mask_of(c) for c in combinations(range(1, n + 1), k)))


def graphic(G: MultiGraph) -> Matroid:
    """Cycle matroid: bases are the maximal spanning forests of G."""
    comp = _graph_components(G, range(1, G.e + 1))
    rank = G.v - len(comp)
    masks = []
    for combo in combinations(range(1, G.e + 1), rank):
        if _is_forest(G, combo):
            masks.append(mask_of(combo))
    return Matroid(G.e, masks)


def _is_forest(G: MultiGraph, edge_ids: Iterable[int]) -> bool:
    parent = list(range(G.v + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in edge_ids:
        a, b = G.edges[i - 1]
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def _graph_components(G: MultiGraph, edge_ids: Iterable[int]) -> list[tuple[set[int], int]]:
    """Components of the edge-induced subgraph: (vertex set, edge count) pairs.

    Isolated vertices of G are ignored unless edge_ids covers the full graph,
    in which case every vertex forms part of some component.
    """
    ids = list(edge_ids)
    parent = list(range(G.v + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    touched = set()
    full = len(ids) == G.e
    for i in ids:
        a, b = G.edges[i - 1]
        touched.update((a, b))
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    if full:
        touched = set(range(1, G.v + 1))
    groups: dict[int, set[int]] = {}
    for x in touched:
        groups.setdefault(find(x), set()).add(x)
    counts = {root: 0 for root in groups}
    for i in ids:
        counts[find(G.edges[i - 1][0])] += 1
    return [(groups[root], counts[root]) for root in groups]


def bicircular(G: MultiGraph) -> Matroid:
    """Bicircular matroid: a set of edges is independent when every component
    of the edge-induced subgraph has at most one cycle (a loop is a cycle)."""
    rank = 0
    for verts, ecount in _graph_components(G, range(1, G.e + 1)):
        rank += min(ecount, len(verts))
    masks = []
    for combo in combinations(range(1, G.e + 1), rank):
        if _bicircular_independent(G, combo):
            masks.append(mask_of(combo))
    return Matroid(G.e, masks)


def _bicircular_independent(G: MultiGraph, edge_ids: Iterable[int]) -> bool:
    for verts, ecount in _graph_components(G, edge_ids):
        if ecount > len(verts):
            return False
    return True


def bicircular_presentation(G: MultiGraph) -> SetSystem:
    """One set per vertex: the edges incident with it (a loop counted once)."""
    return SetSystem(
        n=G.e, family=tuple(G.incident(v) for v in range(1, G.v + 1))
    )


def transversal(S: SetSystem) -> Matroid:
    """Transversal matroid: independent sets are the partial transversals."""
    adj = {
        e: [j for j, A in enumerate(S.family) if e in A] for e in range(1, S.n + 1)
    }
    k = len(S.family)
    rank = 0
    # grow a maximum matching greedily over all ground elements
    match_r: dict[int, int] = {}

    def augment(x: int, seen: set[int]) -> bool:
        for y in adj[x]:
            if y in seen:
                continue
            seen.add(y)
            if y not in match_r or augment(match_r[y], seen):
                match_r[y] = x
                return True
        return False

    for e in range(1, S.n + 1):
        if augment(e, set()):
            rank += 1
    masks = []
    for combo in combinations(range(1, S.n + 1), rank):
        if _matchable(combo, adj, k):
            masks.append(mask_of(combo))
    return Matroid(S.n, masks)


def lattice_path(L: LatticePathPair) -> Matroid:
    """Transversal matroid of the row intervals N_i = [l_i, u_i] on [m+r]."""
    if L.r == 0:
        # no North steps: rank-0 free of intervals; every element is a loop
        return Matroid(L.size, [0])
    family = tuple(
        frozenset(range(l, u + 1)) for (l, u) in L.intervals()
    )
    return transversal(SetSystem(n=L.size, family=family))


def _column_heights(path: str) -> tuple[list[int], list[int]]:
    """Arrival and departure heights of a path at each column x = 0..m."""
    m = path.count("E")
    ymin = [0] * (m + 1)
    ymax = [0] * (m + 1)
    x = y = 0
    for ch in path:
        if ch == "N":
            y += 1
        else:
            ymax[x] = y
            x += 1
            ymin[x] = y
    ymax[m] = y
    return ymin, ymax


def is_snake(L: LatticePathPair) -> bool:
    """Connected, at least two elements, and the strip between the paths has
    no interior lattice point (no column gap of 2 or more)."""
    if L.size < 2:
        return False
    _, p_max = _column_heights(L.p)
    q_min, _ = _column_heights(L.q)
    if any(q_min[a] - p_max[a] > 1 for a in range(L.m + 1)):
        return False
    return is_connected(lattice_path(L))


# ---------------------------------------------------------------------------
# principal truncation / extension and the recursive builder


def principal_truncation(M: Matroid, F: Iterable[int]) -> Matroid:
    """Bases are B minus one F-element: {B \\ {f} : B basis, f in F n B}."""
    fmask = mask_of(F)
    masks = set()
    for B in M.basis_masks:
        inter = B & fmask
        while inter:
            bit = inter & -inter
            masks.add(B ^ bit)
            inter ^= bit
    if not masks:
        raise FDisjointFromAllBases("F misses every basis")
    return Matroid(M.n, masks)


def principal_extension(M: Matroid, F: Iterable[int], label: Optional[int] = None) -> Matroid:
    """Add a new element freely on (the closure of) F.

    The new element is always M.n + 1; `label`, when given, must agree.
    Bases: all old bases plus B u {new} for B a basis of the principal
    truncation by F.
    """
    if label is not None and label != M.n + 1:
        raise ValueError(f"new element must be {M.n + 1}")
    if M.n + 1 > MAX_ELEMENTS:
        raise ValueError("ground set cap exceeded")
    tr = principal_truncation(M, F)
    newbit = 1 << M.n
    masks = list(M.basis_masks) + [B | newbit for B in tr.basis_masks]
    return Matroid(M.n + 1, masks)


LOOP = "loop"
COLOOP = "coloop"


def lpm_recursive_build(steps: Sequence[str | int]) -> Matroid:
    """Iterated construction: each step adds element i as a loop ("loop"),
    a coloop ("coloop"), or an integer h (< i) meaning a principal extension
    on the closure of {x_h, ..., x_{i-1}}, which must be independent."""
    M = Matroid(0, [0])
    for idx, step in enumerate(steps):
        i = idx + 1
        if step == LOOP:
            M = Matroid(i, M.basis_masks)
        elif step == COLOOP:
            newbit = 1 << (i - 1)
            M = Matroid(i, [B | newbit for B in M.basis_masks])
        elif isinstance(step, int):
            h = step
            if not (1 <= h < i):
                raise DependentGeneratorSet(f"step {i}: need 1 <= h < {i}")
            gens = set(range(h, i))
            if not M.is_independent(gens):
                raise DependentGeneratorSet(
                    f"step {i}: generators x_{h}..x_{i-1} are dependent"
                )
            F = closure(M, gens)
            M = principal_extension(M, F)
        else:
            raise ValueError(f"unknown step {step!r}")
    return M


# ---------------------------------------------------------------------------
# named matroids


def whirl(r: int) -> Matroid:
    """Rank-r whirl: the bicircular matroid of an r-cycle with one loop
    attached at each vertex (rim edges 1..r, loops r+1..2r)."""
    if r < 2:
        raise ValueError("whirl needs r >= 2")
    rim = [(i, i % r + 1) for i in range(1, r + 1)]
    loops = [(i, i) for i in range(1, r + 1)]
    return bicircular(MultiGraph(v=r, edges=tuple(rim + loops)))


def k4() -> MultiGraph:
    """K4 as the 3-wheel: hub vertex 1; spokes are edges 1-3, rim is 4-6."""
    return MultiGraph(
        v=4, edges=((1, 2), (1, 3), (1, 4), (2, 3), (3, 4), (2, 4))
    )


def k33() -> MultiGraph:
    return MultiGraph(
        v=6,
        edges=tuple((i, j) for i in (1, 2, 3) for j in (4, 5, 6)),
    )


_ATLAS = {
    "MK4": lambda: graphic(k4()),
    "BK33": lambda: bicircular(k33()),
    "TICTACTOE": lambda: dual(bicircular(k33())),
    "U24": lambda: uniform(2, 4),
    "W3": lambda: whirl(3),
}


def named_atlas(name: str) -> Matroid:
    key = name.upper()
    if key not in _ATLAS:
        raise UnknownName(f"unknown atlas entry {name!r}; have {sorted(_ATLAS)}")
    return _ATLAS[key]()
