"""Slow reference implementations the tests compare against.

Everything here trades efficiency for obviousness: full state
enumeration instead of the contraction order, quadratic pair scans
instead of spatial hashing, and the Gauss integral instead of signed
crossing counts.  None of it imports the production bracket evaluator.
"""

from __future__ import annotations

import math
from itertools import product
from typing import Dict, List, Sequence, Tuple

import numpy as np

from pbcjones.diagram import Diagram
from pbcjones.laurent import LaurentPoly, d_power


def count_loops(diagram: Diagram) -> int:
    """Loops of a crossing-free diagram, virtual head-tail closures included."""
    if diagram.crossings:
        raise ValueError("diagram still has crossings")
    loops = sum(1 for c in diagram.components if c.closed)
    parent: Dict[object, object] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    owners = set()
    for comp in diagram.components:
        if comp.closed:
            continue
        union(comp.ends[0], comp.ends[1])
        owners.update(o for o, _ in comp.ends)
    for o in owners:
        union((o, "head"), (o, "tail"))
    roots = {find(x) for x in list(parent)}
    return loops + len(roots)


def brute_bracket(diagram: Diagram) -> LaurentPoly:
    """Bracket by expanding all 2^k smoothing states one crossing at a time."""
    cids = sorted(diagram.crossings)
    total = LaurentPoly.zero()
    for kinds in product("AB", repeat=len(cids)):
        d = diagram
        exp = 0
        for cid, kind in zip(cids, kinds):
            d = d.smooth(cid, kind)
            exp += 1 if kind == "A" else -1
        term = LaurentPoly.monomial(1, exp) * d_power(count_loops(d) - 1)
        total = total + term
    return total


def brute_segment_crossings(flat: np.ndarray, segments: Sequence[Tuple[int, int]],
                            skip_pairs=()) -> List[Tuple[int, int]]:
    """All transversally intersecting segment pairs in the plane, by direct scan.

    ``flat`` holds 2d endpoints; ``segments`` lists (start index, end index)
    pairs into it.  Pairs sharing an endpoint and pairs in ``skip_pairs``
    are ignored, mirroring what a projection treats as adjacency.
    """
    skip = {tuple(sorted(p)) for p in skip_pairs}
    out = []
    for i in range(len(segments)):
        a0, a1 = segments[i]
        for j in range(i + 1, len(segments)):
            if (i, j) in skip:
                continue
            b0, b1 = segments[j]
            if {a0, a1} & {b0, b1}:
                continue
            p, r = flat[a0], flat[a1] - flat[a0]
            q, s = flat[b0], flat[b1] - flat[b0]
            denom = r[0] * s[1] - r[1] * s[0]
            if denom == 0.0:
                continue
            t = ((q - p)[0] * s[1] - (q - p)[1] * s[0]) / denom
            u = ((q - p)[0] * r[1] - (q - p)[1] * r[0]) / denom
            if 0.0 < t < 1.0 and 0.0 < u < 1.0:
                out.append((i, j))
    return out


def gauss_linking(a: np.ndarray, b: np.ndarray) -> float:
    """Gauss linking integral of two closed polylines, segment pair by
    segment pair via the signed solid angle of the connecting tetrahedron."""
    total = 0.0
    na, nb = len(a), len(b)
    for i in range(na):
        p1, p2 = a[i], a[(i + 1) % na]
        for j in range(nb):
            q1, q2 = b[j], b[(j + 1) % nb]
            total += _pair_solid_angle(p1, p2, q1, q2)
    return total / (4.0 * math.pi)


def _unit(v: np.ndarray):
    n = np.linalg.norm(v)
    if n < 1e-12:
        return None
    return v / n


def _pair_solid_angle(p1, p2, q1, q2) -> float:
    r13 = q1 - p1
    r14 = q2 - p1
    r23 = q1 - p2
    r24 = q2 - p2
    n1 = _unit(np.cross(r13, r14))
    n2 = _unit(np.cross(r14, r24))
    n3 = _unit(np.cross(r24, r23))
    n4 = _unit(np.cross(r23, r13))
    if n1 is None or n2 is None or n3 is None or n4 is None:
        # coplanar segment pair; the spanned solid angle collapses
        return 0.0

    def asin_clip(x):
        return math.asin(max(-1.0, min(1.0, x)))

    star = (asin_clip(np.dot(n1, n2)) + asin_clip(np.dot(n2, n3))
            + asin_clip(np.dot(n3, n4)) + asin_clip(np.dot(n4, n1)))
    sign = np.dot(np.cross(q2 - q1, p2 - p1), r13)
    return star if sign > 0 else -star
