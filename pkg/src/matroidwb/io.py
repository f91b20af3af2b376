"""Text formats: matroids, graphs, set systems, lattice paths, polynomial
dumps, and verdict JSON."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .core import Matroid, elements, from_bases
from .constructions import LatticePathPair, MultiGraph, SetSystem
from .poly import BoundedPoly
from .verdicts import Verdict


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


# -- matroid: `matroid <n> <r>` then one basis per line ----------------------


def format_matroid(M: Matroid, comments: Optional[list[str]] = None) -> str:
    out = [f"# {c}" for c in (comments or [])]
    out.append(f"matroid {M.n} {M.r}")
    for B in M.basis_masks:
        out.append(" ".join(str(e) for e in elements(B)))
    return "\n".join(out) + "\n"


def parse_matroid(text: str) -> Matroid:
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError(1, "empty matroid file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "matroid":
        raise ParseError(lineno, "expected header `matroid <n> <r>`")
    try:
        n, r = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError(lineno, "n and r must be integers") from None
    bases = []
    for lineno, line in lines[1:]:
        try:
            basis = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(lineno, f"bad basis line {line!r}") from None
        if len(basis) != r:
            raise ParseError(lineno, f"basis has {len(basis)} elements, expected {r}")
        bases.append(basis)
    M = from_bases(n, bases)
    if M.r != r:
        raise ParseError(lines[0][0], f"rank mismatch: header says {r}")
    return M


# -- graph: `graph <v> <e>` then `u w` per edge ------------------------------


def format_graph(G: MultiGraph) -> str:
    out = [f"graph {G.v} {G.e}"]
    out.extend(f"{a} {b}" for a, b in G.edges)
    return "\n".join(out) + "\n"


def parse_graph(text: str) -> MultiGraph:
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError(1, "empty graph file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "graph":
        raise ParseError(lineno, "expected header `graph <v> <e>`")
    v, e = int(parts[1]), int(parts[2])
    if len(lines) - 1 != e:
        raise ParseError(lineno, f"expected {e} edge lines, found {len(lines) - 1}")
    edges = []
    for lineno, line in lines[1:]:
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(lineno, f"bad edge line {line!r}")
        edges.append((int(toks[0]), int(toks[1])))
    return MultiGraph(v=v, edges=tuple(edges))


# -- lattice path pair: `lpm <P> <Q>` ----------------------------------------


def format_lpm(L: LatticePathPair) -> str:
    return f"lpm {L.p} {L.q}\n"


def parse_lpm(text: str) -> LatticePathPair:
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError(1, "empty path file")
    lineno, line = lines[0]
    parts = line.split()
    if len(parts) != 3 or parts[0] != "lpm":
        raise ParseError(lineno, "expected `lpm <P-string> <Q-string>`")
    return LatticePathPair(parts[1], parts[2])


# -- set system: `sys <n> <k>` then one set per line -------------------------


def format_setsystem(S: SetSystem) -> str:
    out = [f"sys {S.n} {len(S.family)}"]
    out.extend(" ".join(str(e) for e in sorted(A)) for A in S.family)
    return "\n".join(out) + "\n"


def parse_setsystem(text: str) -> SetSystem:
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError(1, "empty set system file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "sys":
        raise ParseError(lineno, "expected header `sys <n> <k>`")
    n, k = int(parts[1]), int(parts[2])
    if len(lines) - 1 != k:
        raise ParseError(lineno, f"expected {k} set lines, found {len(lines) - 1}")
    family = []
    for lineno, line in lines[1:]:
        family.append(frozenset(int(tok) for tok in line.split()))
    return SetSystem(n=n, family=tuple(family))


# -- polynomial dump ----------------------------------------------------------


def _term_sort_key(key):
    lin, sq = key
    factors = sorted(
        [(v, 2) for v in elements(sq)] + [(v, 1) for v in elements(lin)]
    )
    return tuple((v, -e) for v, e in factors)


def format_poly(f: BoundedPoly) -> str:
    """One term per line, `<coeff> : <var^k ...>`, deterministic order."""
    if not f.terms:
        return "0\n"
    out = []
    for key in sorted(f.terms, key=_term_sort_key):
        lin, sq = key
        c = f.terms[key]
        factors = sorted(
            [(v, 1) for v in elements(lin)] + [(v, 2) for v in elements(sq)]
        )
        mono = " ".join(f"x{v}" if e == 1 else f"x{v}^2" for v, e in factors)
        out.append(f"{c} : {mono}" if mono else f"{c} :")
    return "\n".join(out) + "\n"


# -- verdict JSON -------------------------------------------------------------


def _frac_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def verdict_to_json(
    v: Verdict,
    property_name: str,
    matroid_id: str,
    pair=None,
    seed: Optional[int] = None,
    wall_ms: Optional[int] = None,
) -> dict:
    out = {
        "property": property_name,
        "matroid_id": matroid_id,
        "outcome": v.outcome,
        "tiers_run": v.diagnostics.get("tiers_run", []),
    }
    pair = pair or v.diagnostics.get("pair")
    if pair:
        out["pair"] = list(pair)
    if v.certificate is not None:
        out["certificate_kind"] = v.certificate.kind
    if v.witness is not None:
        w = {"value": _frac_str(v.witness.value)}
        if v.witness.point is not None:
            w["point"] = [_frac_str(x) for x in v.witness.point]
        if v.witness.extra:
            w.update({k: v2 for k, v2 in v.witness.extra.items()})
        out["witness"] = w
    if seed is not None:
        out["seed"] = seed
    if wall_ms is not None:
        out["wall_ms"] = wall_ms
    return out


def dump_verdict_json(path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
