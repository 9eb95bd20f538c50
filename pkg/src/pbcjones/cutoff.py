"""Cutoff links and the factorization of their Jones polynomial.

A cutoff of a singly-periodic system takes N translated copies of the
minimal periodic link, spaced by the smallest translate that makes the
copies disjoint.  Smoothing every copy-to-copy crossing along the
orientation disconnects the diagram into N intact copies; that state's
contribution factors in closed form through the base polynomial and the
periodic self-linking, and the remaining states are collected into a
correction term.  This module builds cutoffs and verifies the
factorization exactly, enumerating all shared-crossing states as an
independent oracle.  At a projection whose shared crossings all agree in
sign per copy pair the oriented state is the only disconnecting one;
oblique projections can pick up cancelling crossing pairs that admit
more, which the report flags without breaking the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bracket import bracket
from .diagram import Diagram
from .errors import PbcJonesError
from .geometry import Curve, sample_directions
from .jones3d import project_generic
from .laurent import LaurentPoly, d_power
from .pbc import (MinimalPeriodicLink, PBCSystem, PlacedImage, box_presence,
                  minimal_periodic_link, single_periodic_axis, slk_p)


@dataclass(frozen=True)
class CutoffLink:
    n_copies: int
    axis: int
    period_cells: int  # copy spacing along the axis, in cells
    cell_count: int  # cells in the cutoff window
    copies: Tuple[Tuple[PlacedImage, ...], ...]
    link: MinimalPeriodicLink

    def copy_curves(self, k: int) -> List[Curve]:
        return [Curve(f"k{k}|{im.curve_id}", im.polyline, im.closed)
                for im in self.copies[k]]

    def all_curves(self) -> List[Curve]:
        out: List[Curve] = []
        for k in range(self.n_copies):
            out.extend(self.copy_curves(k))
        return out

    def copy_of_curve(self) -> Dict[str, int]:
        return {c.id: k for k in range(self.n_copies) for c in self.copy_curves(k)}


def build_cutoff(system: PBCSystem, n_copies: int,
                 link: Optional[MinimalPeriodicLink] = None) -> CutoffLink:
    """N copies of the periodic link spaced one disjointness period apart.

    Requires a single closed chain and exactly one periodic axis.  The
    union of copies is cross-checked against direct enumeration of image
    translates present in the cutoff window.
    """
    if n_copies < 1:
        raise ValueError("need at least one copy")
    if len(system.chains) != 1 or system.chains[0].topology != "closed":
        raise PbcJonesError("cutoffs are defined here for a single closed chain")
    axis = single_periodic_axis(system.cell)
    if link is None:
        link = minimal_periodic_link(system)
    m = link.mcu.dims[axis]
    period = 2 * m - 1

    copies: List[Tuple[PlacedImage, ...]] = []
    for k in range(n_copies):
        shift = [0, 0, 0]
        shift[axis] = k * period
        placed = []
        for im in link.images:
            v = tuple(im.translate[ax] + shift[ax] for ax in range(3))
            placed.append(PlacedImage(im.chain_id, v,
                                      im.closed,
                                      im.polyline + system.cell.translation(shift)))
        copies.append(tuple(placed))

    sets = [frozenset(im.translate for im in c) for c in copies]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if sets[i] & sets[j]:
                raise PbcJonesError("cutoff copies overlap; period too small for this system")

    # independent membership enumeration over the whole window
    lo = link.mcu.lo.copy()
    hi = link.mcu.hi.copy()
    hi[axis] += (n_copies - 1) * period
    base_img = link.base_images[system.chains[0].id]
    frac = system.cell.to_fractional(base_img.polyline)
    expected = set()
    vmin = int(np.floor(lo[axis] - frac[:, axis].max())) - 1
    vmax = int(np.ceil(hi[axis] - frac[:, axis].min())) + 1
    for v_ax in range(vmin, vmax + 1):
        v = [0, 0, 0]
        v[axis] = v_ax
        shifted = frac + np.asarray(v, dtype=float)
        if box_presence(shifted, base_img.closed, lo, hi) > 1e-9:
            expected.add(tuple(v))
    got = set().union(*sets)
    if got != expected:
        raise PbcJonesError(
            f"cutoff window membership mismatch: copies give {sorted(got)}, "
            f"window enumeration gives {sorted(expected)}"
        )

    dims = list(link.mcu.dims)
    dims[axis] = (2 * n_copies - 1) * m - (n_copies - 1)
    cells = dims[0] * dims[1] * dims[2]
    return CutoffLink(n_copies, axis, period, cells, tuple(copies), link)


def split_bracket(diagram: Diagram, crossing_cap: int = 48) -> LaurentPoly:
    """Bracket of a diagram that may split into independent pieces.

    Components are grouped by shared crossings and by shared open-end
    owners (virtual closures tie those together); each group is evaluated
    on its own and one loop factor is charged per extra piece.
    """
    comp_ids = [c.id for c in diagram.components]
    parent = {cid: cid for cid in comp_ids}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    owner = diagram.passage_owner()
    for cid in diagram.crossings:
        union(owner[(cid, "o")], owner[(cid, "u")])
    by_end_owner: Dict[str, str] = {}
    for comp in diagram.components:
        if comp.closed:
            continue
        for end_owner, _ in comp.ends:
            if end_owner in by_end_owner:
                union(by_end_owner[end_owner], comp.id)
            else:
                by_end_owner[end_owner] = comp.id

    groups: Dict[str, List] = {}
    for comp in diagram.components:
        groups.setdefault(find(comp.id), []).append(comp)
    if not groups:
        return LaurentPoly.one()
    total = LaurentPoly.one()
    for root in sorted(groups):
        comps = groups[root]
        present = {p[0] for c in comps for p in c.passages}
        sub = Diagram(comps, {cid: diagram.crossings[cid] for cid in present})
        total = total * bracket(sub, crossing_cap).poly
    return total * d_power(len(groups) - 1)


def _writhe_prefactor(w: int) -> LaurentPoly:
    return LaurentPoly.monomial(-1 if w % 2 else 1, -3 * w)


@dataclass(frozen=True)
class CutoffReport:
    n_copies: int
    axis: int
    period_cells: int
    cell_count: int
    component_count: int
    shared_crossings: int
    slk: Fraction
    shared_sign_total: int
    writhe_total: int
    writhe_base: int
    writhe_identity_ok: bool
    v_cutoff: LaurentPoly
    v_base: LaurentPoly
    state_term: LaurentPoly
    lambda_tilde: LaurentPoly
    states_enumerated: int
    disconnecting_unique_ok: bool
    state_oracle_ok: bool
    sum_identity_ok: bool
    factorization_ok: bool

    def to_json_obj(self) -> dict:
        return {
            "n_copies": self.n_copies,
            "axis": self.axis,
            "period_cells": self.period_cells,
            "cell_count": self.cell_count,
            "component_count": self.component_count,
            "shared_crossings": self.shared_crossings,
            "slk": str(self.slk),
            "shared_sign_total": self.shared_sign_total,
            "writhe_total": self.writhe_total,
            "writhe_base": self.writhe_base,
            "writhe_identity_ok": self.writhe_identity_ok,
            "v_cutoff": self.v_cutoff.to_json_obj(),
            "v_base": self.v_base.to_json_obj(),
            "state_term": self.state_term.to_json_obj(),
            "lambda_tilde": self.lambda_tilde.to_json_obj(),
            "states_enumerated": self.states_enumerated,
            "disconnecting_unique_ok": self.disconnecting_unique_ok,
            "state_oracle_ok": self.state_oracle_ok,
            "sum_identity_ok": self.sum_identity_ok,
            "factorization_ok": self.factorization_ok,
        }


def verify_cutoff_factorization(system: PBCSystem, n_copies: int, xi=None,
                                tol: float = 1e-9, retries: int = 100,
                                enumerate_cap: int = 16,
                                crossing_cap: int = 48) -> CutoffReport:
    """Check the cutoff factorization along one projection direction.

    All identities are exact polynomial equalities:
      - total writhe = N * base writhe + (N-1) * slk_p
      - the oriented state evaluates to one loop factor per extra copy
        times the base bracket to the N-th power
      - V(cutoff) = (-A^2)^(-(N-1)*slk_p) * d^(N-1) * V(base)^N plus the
        remainder enumerated over every other shared-crossing state
    """
    if xi is None:
        xi = sample_directions(1, "random", seed=0)[0]
    cut = build_cutoff(system, n_copies)
    curves = cut.all_curves()
    diagram, xi_used, _ = project_generic(curves, xi, tol, retries)
    copy_of = cut.copy_of_curve()
    owner = diagram.passage_owner()

    def crossing_copies(cid: str) -> Tuple[int, int]:
        a = copy_of[owner[(cid, "o")]]
        b = copy_of[owner[(cid, "u")]]
        return (a, b) if a <= b else (b, a)

    shared = sorted(c for c in diagram.crossings if len(set(crossing_copies(c))) > 1)
    if len(shared) > enumerate_cap:
        raise PbcJonesError(
            f"{len(shared)} copy-to-copy crossings exceed the enumeration cap {enumerate_cap}"
        )

    base_diagram, _, _ = project_generic(cut.copy_curves(0), xi_used, tol, retries)
    bracket_base = bracket(base_diagram, crossing_cap).poly
    v_base = _writhe_prefactor(base_diagram.writhe) * bracket_base

    slk = slk_p(system, xi_used, link=cut.link, axis=cut.axis, tol=tol, retries=retries)
    n = n_copies
    shared_sign_total = sum(diagram.crossings[c] for c in shared)
    slk_term = (n - 1) * slk
    writhe_ok = (Fraction(shared_sign_total) == slk_term
                 and diagram.writhe == n * base_diagram.writhe + shared_sign_total)
    if slk_term.denominator != 1:
        raise PbcJonesError("copy-to-copy self-linking must be an integer for the factorization")
    m = -int(slk_term)
    state_term = (LaurentPoly.monomial(-1 if m % 2 else 1, 2 * m)
                  * d_power(n - 1) * v_base ** n)

    bracket_total = bracket(diagram, crossing_cap).poly
    v_cutoff = _writhe_prefactor(diagram.writhe) * bracket_total

    # oriented smoothing of every shared crossing disconnects the copies
    s_diag = diagram
    for cid in shared:
        s_diag = s_diag.oriented_smooth(cid)
    target = d_power(n - 1) * bracket_base ** n
    state_oracle_ok = split_bracket(s_diag, crossing_cap) == target

    # enumerate every shared-crossing state
    states_sum = LaurentPoly.zero()
    lambda_bracket = LaurentPoly.zero()
    disconnecting: List[Tuple[str, ...]] = []
    oriented_kinds = tuple("A" if diagram.crossings[c] > 0 else "B" for c in shared)
    for kinds in product("AB", repeat=len(shared)):
        d_state = diagram
        exp = 0
        for cid, kind in zip(shared, kinds):
            d_state = d_state.smooth(cid, kind)
            exp += 1 if kind == "A" else -1
        value = LaurentPoly.monomial(1, exp) * split_bracket(d_state, crossing_cap)
        states_sum = states_sum + value
        if kinds != oriented_kinds:
            lambda_bracket = lambda_bracket + value
        if _is_disconnecting(d_state, cut, copy_of, owner):
            disconnecting.append(kinds)
    sum_ok = states_sum == bracket_total
    unique_ok = disconnecting == [oriented_kinds]
    lambda_tilde = _writhe_prefactor(diagram.writhe) * lambda_bracket
    factorization_ok = (state_term + lambda_tilde).approx_eq(v_cutoff, 0.0) \
        if state_term.mode == "float" else (state_term + lambda_tilde) == v_cutoff

    return CutoffReport(
        n_copies=n,
        axis=cut.axis,
        period_cells=cut.period_cells,
        cell_count=cut.cell_count,
        component_count=sum(len(c) for c in cut.copies),
        shared_crossings=len(shared),
        slk=slk,
        shared_sign_total=shared_sign_total,
        writhe_total=diagram.writhe,
        writhe_base=base_diagram.writhe,
        writhe_identity_ok=writhe_ok,
        v_cutoff=v_cutoff,
        v_base=v_base,
        state_term=state_term,
        lambda_tilde=lambda_tilde,
        states_enumerated=2 ** len(shared),
        disconnecting_unique_ok=unique_ok,
        state_oracle_ok=state_oracle_ok,
        sum_identity_ok=sum_ok,
        factorization_ok=factorization_ok,
    )


def _is_disconnecting(d_state: Diagram, cut: CutoffLink, copy_of, owner_orig) -> bool:
    """True when every piece of the smoothed diagram carries crossings of
    at most one copy and the pieces realize all copies separately."""
    owner = d_state.passage_owner()
    comp_ids = [c.id for c in d_state.components]
    parent = {cid: cid for cid in comp_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for cid in d_state.crossings:
        union(owner[(cid, "o")], owner[(cid, "u")])
    copies_of_group: Dict[str, set] = {}
    for cid in d_state.crossings:
        root = find(owner[(cid, "o")])
        a = copy_of[owner_orig[(cid, "o")]]
        b = copy_of[owner_orig[(cid, "u")]]
        copies_of_group.setdefault(root, set()).update((a, b))
    if any(len(s) > 1 for s in copies_of_group.values()):
        return False
    seen = set()
    for s in copies_of_group.values():
        seen.update(s)
    return seen == set(range(cut.n_copies))
