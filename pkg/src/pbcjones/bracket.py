"""Bracket state sums over diagrams.

The sum over smoothing states is organized as a frontier dynamic program:
crossings are resolved one at a time in a fixed order, and partial states
that induce the same pairing of still-unresolved crossing ports are
merged by adding their polynomials.  Loop closures multiply by the loop
value -A^2 - A^-2; open strands count through their virtual head-tail
closures, which the terminal graph has already folded in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .diagram import Diagram, smoothing_joins, terminal_graph
from .errors import StateSumTooLargeError
from .laurent import LaurentPoly

DEFAULT_CROSSING_CAP = 48


@dataclass(frozen=True)
class BracketResult:
    poly: LaurentPoly
    states_expanded: int
    cache_hits: int


def _mul_d(poly: Dict[int, int], times: int) -> Dict[int, int]:
    for _ in range(times):
        out: Dict[int, int] = {}
        for e, c in poly.items():
            out[e + 2] = out.get(e + 2, 0) - c
            out[e - 2] = out.get(e - 2, 0) - c
        poly = {e: c for e, c in out.items() if c}
    return poly


def _div_d(poly: Dict[int, int]) -> Dict[int, int]:
    """Exact division by -A^2 - A^-2; raises if the division is not exact."""
    if not poly:
        return {}
    floor = min(poly)
    q: Dict[int, int] = {}
    r = dict(poly)
    while r:
        e = max(r)
        if e < floor:
            raise ArithmeticError("state sum not divisible by the loop value")
        c = r.pop(e)
        q[e - 2] = q.get(e - 2, 0) - c
        low = r.get(e - 4, 0) - c
        if low:
            r[e - 4] = low
        else:
            r.pop(e - 4, None)
    return q


def _crossing_order(n: int, strand: Dict[int, int]) -> List[int]:
    """Greedy order keeping the processed set tightly connected.

    Repeatedly takes the crossing with the most strand connections into
    the already-chosen set, which keeps the live frontier narrow.
    """
    nbrs: List[Dict[int, int]] = [dict() for _ in range(n)]
    for p, q in strand.items():
        a, b = p // 4, q // 4
        if a != b:
            nbrs[a][b] = nbrs[a].get(b, 0) + 1
    score = [0] * n
    order: List[int] = []
    remaining = set(range(n))
    for _ in range(n):
        best = min(remaining, key=lambda i: (-score[i], i))
        order.append(best)
        remaining.discard(best)
        for b, w in nbrs[best].items():
            score[b] += w
    return order


def bracket(diagram: Diagram, crossing_cap: int = DEFAULT_CROSSING_CAP) -> BracketResult:
    tg = terminal_graph(diagram)
    n = len(tg.crossing_ids)
    if n > crossing_cap:
        raise StateSumTooLargeError(n, crossing_cap)

    if n == 0:
        if tg.free_loops == 0:
            return BracketResult(LaurentPoly.one(), 1, 0)
        return BracketResult(LaurentPoly(_mul_d({0: 1}, tg.free_loops - 1)), 1, 0)

    signs = [diagram.crossings[c] for c in tg.crossing_ids]
    order = _crossing_order(n, dict(tg.strand))

    live: List[int] = sorted(tg.strand)
    m0 = dict(tg.strand)
    states: Dict[Tuple[int, ...], Dict[int, int]] = {tuple(m0[p] for p in live): {0: 1}}
    states_expanded = 1
    cache_hits = 0

    for ci in order:
        sign = signs[ci]
        base = 4 * ci
        choices = []
        for kind, shift in (("A", 1), ("B", -1)):
            joins = smoothing_joins(sign, kind)
            choices.append((shift, tuple((base + x, base + y) for x, y in joins)))
        ports = {base, base + 1, base + 2, base + 3}
        next_live = [p for p in live if p not in ports]
        nxt: Dict[Tuple[int, ...], Dict[int, int]] = {}
        for key, poly in states.items():
            m = dict(zip(live, key))
            for shift, bonds in choices:
                m2 = dict(m)
                loops = 0
                for x, y in bonds:
                    px = m2.pop(x)
                    py = m2.pop(y)
                    if px == y:
                        loops += 1
                    else:
                        m2[px] = py
                        m2[py] = px
                contrib = {e + shift: c for e, c in poly.items()}
                if loops:
                    contrib = _mul_d(contrib, loops)
                key2 = tuple(m2[p] for p in next_live)
                slot = nxt.get(key2)
                if slot is None:
                    nxt[key2] = contrib
                    states_expanded += 1
                else:
                    cache_hits += 1
                    for e, c in contrib.items():
                        nc = slot.get(e, 0) + c
                        if nc:
                            slot[e] = nc
                        else:
                            del slot[e]
        states = nxt
        live = next_live

    total = states.get((), {})
    if tg.free_loops:
        total = _mul_d(total, tg.free_loops - 1)
    else:
        total = _div_d(total)
    return BracketResult(LaurentPoly(total), states_expanded, cache_hits)


def jones_of_diagram(diagram: Diagram, crossing_cap: int = DEFAULT_CROSSING_CAP) -> LaurentPoly:
    """Writhe-corrected bracket: (-A^3)^(-writhe) times the bracket."""
    res = bracket(diagram, crossing_cap)
    w = diagram.writhe
    return LaurentPoly.monomial(-1 if w % 2 else 1, -3 * w) * res.poly
