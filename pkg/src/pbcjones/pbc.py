"""Periodic systems: cells, generating chains, unfoldings, periodic links.

Geometry lives in Cartesian coordinates; every membership or clipping
decision happens in fractional coordinates, where the cell is the unit
cube and lattice translates are integer vectors.  A chain is given as
arcs inside one cell; its physical component is the union of all lattice
translates of those arcs.  Unfolding walks arc translates end to end to
recover one connected image per chain.

Cell membership of a polyline is by positive clipped length: grazing a
box at isolated points does not count as presence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import AmbiguousMatchError, ChainConnectivityError, PbcJonesError
from .geometry import Curve
from .jones3d import JonesResult, SamplingConfig, jones, project_generic
from .laurent import DivisionResult, LaurentPoly, divide_by_d_power

MATCH_TOL = 1e-6  # fractional-coordinate tolerance for arc end matching
PRESENCE_TOL = 1e-9  # fractional length below which box presence is ignored

Vec3 = Tuple[int, int, int]


class Cell:
    """Parallelepiped cell with per-axis periodic flags."""

    __slots__ = ("basis", "periodic", "origin", "_inv")

    def __init__(self, basis, periodic: Sequence[bool], origin=(0.0, 0.0, 0.0)):
        b = np.asarray(basis, dtype=float)
        if b.shape != (3, 3):
            raise PbcJonesError("cell basis must be a 3x3 matrix (rows are cell vectors)")
        if abs(np.linalg.det(b)) < 1e-12:
            raise PbcJonesError("cell basis is singular")
        if len(periodic) != 3:
            raise PbcJonesError("periodic flags must have length 3")
        self.basis = b
        self.periodic = tuple(bool(p) for p in periodic)
        self.origin = np.asarray(origin, dtype=float)
        self._inv = np.linalg.inv(b)

    def to_fractional(self, points) -> np.ndarray:
        return (np.asarray(points, dtype=float) - self.origin) @ self._inv

    def from_fractional(self, frac) -> np.ndarray:
        return np.asarray(frac, dtype=float) @ self.basis + self.origin

    def translation(self, v) -> np.ndarray:
        return np.asarray(v, dtype=float) @ self.basis

    def to_json_obj(self) -> dict:
        return {
            "basis": self.basis.tolist(),
            "periodic": list(self.periodic),
            "origin": self.origin.tolist(),
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Cell":
        return cls(obj["basis"], obj["periodic"], obj.get("origin", (0.0, 0.0, 0.0)))


TOPOLOGIES = ("closed", "open", "infinite")


class GeneratingChain:
    """One chain, given as arcs inside the cell.

    ``basepoint`` is an (arc index, vertex index) pair; the arc it names
    anchors the unfolded image at its as-given placement.  Arc
    orientations must already be consistent: the walk matches the first
    vertex of a candidate arc translate against the current end, never
    reversing an arc.
    """

    __slots__ = ("id", "arcs", "topology", "basepoint")

    def __init__(self, id: str, arcs, topology: str,
                 basepoint: Tuple[int, int] = (0, 0)):
        if topology not in TOPOLOGIES:
            raise PbcJonesError(f"chain {id!r}: unknown topology {topology!r}")
        arrs = []
        for k, a in enumerate(arcs):
            a = np.asarray(a, dtype=float)
            if a.ndim != 2 or a.shape[1] != 3 or a.shape[0] < 2:
                raise PbcJonesError(f"chain {id!r}: arc {k} must have shape (n>=2, 3)")
            arrs.append(a)
        if not arrs:
            raise PbcJonesError(f"chain {id!r}: needs at least one arc")
        ai, vi = (int(basepoint[0]), int(basepoint[1]))
        if not 0 <= ai < len(arrs):
            raise PbcJonesError(f"chain {id!r}: basepoint arc out of range")
        if not 0 <= vi < len(arrs[ai]):
            raise PbcJonesError(f"chain {id!r}: basepoint vertex out of range")
        self.id = id
        self.arcs = tuple(arrs)
        self.topology = topology
        self.basepoint = (ai, vi)

    @property
    def basepoint_arc(self) -> int:
        return self.basepoint[0]

    def to_json_obj(self) -> dict:
        return {
            "id": self.id,
            "topology": self.topology,
            "basepoint": list(self.basepoint),
            "arcs": [a.tolist() for a in self.arcs],
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "GeneratingChain":
        bp = obj.get("basepoint", (0, 0))
        return cls(obj["id"], obj["arcs"], obj["topology"], tuple(bp))


class PBCSystem:
    __slots__ = ("cell", "chains")

    def __init__(self, cell: Cell, chains: Sequence[GeneratingChain]):
        ids = [c.id for c in chains]
        if len(set(ids)) != len(ids):
            raise PbcJonesError("chain ids must be unique")
        self.cell = cell
        self.chains = tuple(chains)

    def chain(self, chain_id: str) -> GeneratingChain:
        for c in self.chains:
            if c.id == chain_id:
                return c
        raise KeyError(chain_id)

    def to_json_obj(self) -> dict:
        return {
            "cell": self.cell.to_json_obj(),
            "chains": [c.to_json_obj() for c in self.chains],
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "PBCSystem":
        cell = Cell.from_json_obj(obj["cell"])
        chains = [GeneratingChain.from_json_obj(c) for c in obj["chains"]]
        return cls(cell, chains)


# -- unfolding ----------------------------------------------------------


@dataclass(frozen=True)
class Image:
    """One connected unfolded copy of a chain, each arc placed once."""

    chain_id: str
    closed: bool
    polyline: np.ndarray
    placements: Tuple[Tuple[int, Vec3], ...]  # (arc index, lattice translate)
    advance: Optional[Vec3]  # period of an infinite chain, in cell units


def _lattice_match(cell: Cell, target_frac, point_frac) -> Optional[Vec3]:
    """Translate v with point + v == target within tolerance, None if none.

    Non-periodic axes admit only v = 0.
    """
    diff = target_frac - point_frac
    v = np.rint(diff)
    for ax in range(3):
        if not cell.periodic[ax]:
            v[ax] = 0.0
    if np.max(np.abs(diff - v)) <= MATCH_TOL:
        return (int(v[0]), int(v[1]), int(v[2]))
    return None


def unfold_image(system: PBCSystem, chain: GeneratingChain) -> Image:
    cell = system.cell
    frac_arcs = [cell.to_fractional(a) for a in chain.arcs]
    n = len(chain.arcs)
    used = [False] * n

    def candidates_forward(end_frac):
        found = []
        for j in range(n):
            if used[j]:
                continue
            v = _lattice_match(cell, end_frac, frac_arcs[j][0])
            if v is not None:
                found.append((j, v))
        return found

    def candidates_backward(start_frac):
        found = []
        for j in range(n):
            if used[j]:
                continue
            v = _lattice_match(cell, start_frac, frac_arcs[j][-1])
            if v is not None:
                found.append((j, v))
        return found

    base = chain.basepoint_arc
    used[base] = True
    placements: List[Tuple[int, Vec3]] = [(base, (0, 0, 0))]
    head = frac_arcs[base][-1].copy()
    tail = frac_arcs[base][0].copy()

    def step(found, where):
        if len(found) > 1:
            raise AmbiguousMatchError(
                f"chain {chain.id!r}: {len(found)} arc translates continue the {where}"
            )
        return found[0]

    # forward walk from the head
    closing_v: Optional[Vec3] = None
    while True:
        if chain.topology == "closed":
            closing_v = _lattice_match(cell, head, frac_arcs[base][0])
            if closing_v == (0, 0, 0):
                break
        found = candidates_forward(head)
        if not found:
            break
        j, v = step(found, "head")
        used[j] = True
        placements.append((j, v))
        head = frac_arcs[j][-1] + np.asarray(v, dtype=float)

    if chain.topology == "open":
        while True:
            found = candidates_backward(tail)
            if not found:
                break
            j, v = step(found, "tail")
            used[j] = True
            placements.insert(0, (j, v))
            tail = frac_arcs[j][0] + np.asarray(v, dtype=float)

    if not all(used):
        raise ChainConnectivityError(
            f"chain {chain.id!r}: {used.count(False)} arc(s) not reachable from the basepoint"
        )

    advance: Optional[Vec3] = None
    if chain.topology == "closed":
        if _lattice_match(cell, head, frac_arcs[base][0]) != (0, 0, 0):
            raise ChainConnectivityError(
                f"chain {chain.id!r}: closed chain does not return to its start"
            )
    elif chain.topology == "infinite":
        adv = _lattice_match(cell, head, frac_arcs[base][0])
        if adv is None or adv == (0, 0, 0):
            raise ChainConnectivityError(
                f"chain {chain.id!r}: infinite chain must advance by a nonzero translate"
            )
        advance = adv

    pts: List[np.ndarray] = []
    for j, v in placements:
        seg = chain.arcs[j] + cell.translation(v)
        if pts and np.linalg.norm(pts[-1][-1] - seg[0]) <= MATCH_TOL * 10:
            seg = seg[1:]  # shared junction vertex
        pts.append(seg)
    poly = np.concatenate(pts)
    closed = chain.topology == "closed"
    if closed and np.linalg.norm(poly[0] - poly[-1]) <= MATCH_TOL * 10:
        poly = poly[:-1]
    return Image(chain.id, closed, poly, tuple(placements), advance)


# -- cell decomposition of a polyline ----------------------------------


def _segment_iter(poly: np.ndarray, closed: bool):
    m = poly.shape[0]
    last = m if closed else m - 1
    for i in range(last):
        yield poly[i], poly[(i + 1) % m]


def polyline_cells(frac_poly: np.ndarray, closed: bool) -> Dict[Vec3, float]:
    """Fractional length of a polyline inside each unit lattice cell."""
    out: Dict[Vec3, float] = {}
    for a, b in _segment_iter(frac_poly, closed):
        d = b - a
        L = float(np.linalg.norm(d))
        if L == 0.0:
            continue
        cuts = {0.0, 1.0}
        for ax in range(3):
            if abs(d[ax]) < 1e-15:
                continue
            lo = math.floor(min(a[ax], b[ax]))
            hi = math.ceil(max(a[ax], b[ax]))
            for plane in range(lo, hi + 1):
                t = (plane - a[ax]) / d[ax]
                if 1e-12 < t < 1.0 - 1e-12:
                    cuts.add(t)
        ts = sorted(cuts)
        for t0, t1 in zip(ts, ts[1:]):
            if t1 - t0 <= 1e-12:
                continue
            mid = a + ((t0 + t1) / 2.0) * d
            cellv = (int(math.floor(mid[0])), int(math.floor(mid[1])), int(math.floor(mid[2])))
            out[cellv] = out.get(cellv, 0.0) + L * (t1 - t0)
    return {c: l for c, l in out.items() if l > PRESENCE_TOL}


def _box_interval(a: np.ndarray, b: np.ndarray, lo, hi) -> Tuple[float, float]:
    """Liang-Barsky parameter interval of segment a->b inside box [lo, hi]."""
    t0, t1 = 0.0, 1.0
    d = b - a
    for ax in range(3):
        if abs(d[ax]) < 1e-15:
            if a[ax] < lo[ax] or a[ax] > hi[ax]:
                return 1.0, 0.0
            continue
        ta = (lo[ax] - a[ax]) / d[ax]
        tb = (hi[ax] - a[ax]) / d[ax]
        if ta > tb:
            ta, tb = tb, ta
        t0 = max(t0, ta)
        t1 = min(t1, tb)
        if t0 >= t1:
            return 1.0, 0.0
    return t0, t1


def box_presence(frac_poly: np.ndarray, closed: bool, lo, hi) -> float:
    """Fractional length of the polyline inside the box [lo, hi]."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    total = 0.0
    for a, b in _segment_iter(frac_poly, closed):
        t0, t1 = _box_interval(a, b, lo, hi)
        if t1 > t0:
            total += float(np.linalg.norm(b - a)) * (t1 - t0)
    return total


# -- minimal unfoldings -------------------------------------------------


@dataclass(frozen=True)
class MinimalUnfolding:
    cells: Tuple[Vec3, ...]
    anchor: Vec3
    dims: Vec3


def minimal_unfolding(system: PBCSystem, image: Image) -> MinimalUnfolding:
    frac = system.cell.to_fractional(image.polyline)
    cells = sorted(polyline_cells(frac, image.closed))
    if not cells:
        raise PbcJonesError(f"image of chain {image.chain_id!r} has no cell presence")
    arr = np.asarray(cells)
    anchor = tuple(int(x) for x in arr.min(axis=0))
    dims = tuple(int(x) for x in (arr.max(axis=0) - arr.min(axis=0) + 1))
    return MinimalUnfolding(tuple(cells), anchor, dims)


@dataclass(frozen=True)
class MinimalCollectiveUnfolding:
    anchor: Vec3
    dims: Vec3

    @property
    def lo(self) -> np.ndarray:
        return np.asarray(self.anchor, dtype=float)

    @property
    def hi(self) -> np.ndarray:
        return np.asarray(self.anchor, dtype=float) + np.asarray(self.dims, dtype=float)

    @property
    def cell_count(self) -> int:
        return self.dims[0] * self.dims[1] * self.dims[2]


def minimal_collective_unfolding(system: PBCSystem):
    """Per-chain unfoldings plus the collective bounding box.

    Returns (images by chain id, unfoldings by chain id, the collective box).
    """
    images: Dict[str, Image] = {}
    mus: Dict[str, MinimalUnfolding] = {}
    for chain in system.chains:
        img = unfold_image(system, chain)
        images[chain.id] = img
        mus[chain.id] = minimal_unfolding(system, img)
    anchor = tuple(int(min(mu.anchor[ax] for mu in mus.values())) for ax in range(3))
    dims = tuple(int(max(mu.dims[ax] for mu in mus.values())) for ax in range(3))
    return images, mus, MinimalCollectiveUnfolding(anchor, dims)


# -- minimal periodic link ----------------------------------------------


@dataclass(frozen=True)
class PlacedImage:
    chain_id: str
    translate: Vec3
    closed: bool
    polyline: np.ndarray

    @property
    def curve_id(self) -> str:
        v = self.translate
        return f"{self.chain_id}@{v[0]},{v[1]},{v[2]}"


@dataclass(frozen=True)
class MinimalPeriodicLink:
    images: Tuple[PlacedImage, ...]
    mcu: MinimalCollectiveUnfolding
    unfoldings: Mapping[str, MinimalUnfolding]
    base_images: Mapping[str, Image]

    @property
    def component_count(self) -> int:
        return len(self.images)

    @property
    def composition(self) -> Dict[str, List[Vec3]]:
        out: Dict[str, List[Vec3]] = {}
        for im in self.images:
            out.setdefault(im.chain_id, []).append(im.translate)
        return out


def _translate_range(cell: Cell, frac_poly: np.ndarray, lo, hi) -> List[Vec3]:
    """Lattice translates that could put the polyline inside [lo, hi]."""
    bmin = frac_poly.min(axis=0)
    bmax = frac_poly.max(axis=0)
    ranges = []
    for ax in range(3):
        if cell.periodic[ax]:
            a = int(math.floor(lo[ax] - bmax[ax])) - 1
            b = int(math.ceil(hi[ax] - bmin[ax])) + 1
            ranges.append(range(a, b + 1))
        else:
            ranges.append(range(0, 1))
    return [v for v in product(*ranges)]


def minimal_periodic_link(system: PBCSystem) -> MinimalPeriodicLink:
    """All image translates with positive presence in the collective box."""
    images, mus, mcu = minimal_collective_unfolding(system)
    placed: List[PlacedImage] = []
    for chain in system.chains:
        img = images[chain.id]
        frac = system.cell.to_fractional(img.polyline)
        for v in _translate_range(system.cell, frac, mcu.lo, mcu.hi):
            shifted = frac + np.asarray(v, dtype=float)
            if box_presence(shifted, img.closed, mcu.lo, mcu.hi) > PRESENCE_TOL:
                poly = img.polyline + system.cell.translation(v)
                placed.append(PlacedImage(chain.id, v, img.closed, poly))
    return MinimalPeriodicLink(tuple(placed), mcu, mus, images)


def search_basepoint(system: PBCSystem, chain_id: str) -> Tuple[int, int]:
    """Basepoint maximizing the periodic-link component count.

    Only the basepoint arc changes the image of an infinite chain, so
    candidates are tried per arc; ties resolve to the lowest (arc,
    vertex) index, hence vertex 0 of the winning arc.
    """
    chain = system.chain(chain_id)
    best: Optional[Tuple[int, int]] = None
    for ai in range(len(chain.arcs)):
        trial = with_basepoint(system, chain_id, (ai, 0))
        count = minimal_periodic_link(trial).component_count
        if best is None or count > best[0]:
            best = (count, ai)
    return (best[1], 0)


def with_basepoint(system: PBCSystem, chain_id: str, basepoint: Tuple[int, int]) -> PBCSystem:
    chains = [
        GeneratingChain(c.id, c.arcs, c.topology, basepoint) if c.id == chain_id else c
        for c in system.chains
    ]
    return PBCSystem(system.cell, chains)


def rebuild_link(system: PBCSystem, composition: Mapping[str, Sequence[Sequence[int]]]) -> MinimalPeriodicLink:
    """Place images at previously captured translates (frozen components)."""
    images, mus, mcu = minimal_collective_unfolding(system)
    placed: List[PlacedImage] = []
    for chain in system.chains:
        if chain.id not in composition:
            continue
        img = images[chain.id]
        for v in composition[chain.id]:
            v = (int(v[0]), int(v[1]), int(v[2]))
            for ax in range(3):
                if v[ax] and not system.cell.periodic[ax]:
                    raise PbcJonesError(f"translate {v} moves along a non-periodic axis")
            poly = img.polyline + system.cell.translation(v)
            placed.append(PlacedImage(chain.id, v, img.closed, poly))
    return MinimalPeriodicLink(tuple(placed), mcu, mus, images)


def link_curves(link: MinimalPeriodicLink) -> List[Curve]:
    return [Curve(im.curve_id, im.polyline, im.closed) for im in link.images]


# -- cell link ----------------------------------------------------------


def cell_curves(system: PBCSystem, tol: float = 1e-9) -> List[Curve]:
    """Arc pieces inside the base cell, with whole interior loops kept closed.

    Each chain's arcs are clipped against the cell box (inflated by tol so
    grazing contact does not split pieces).  A closed chain entirely inside
    the cell stays one closed curve.
    """
    cell = system.cell
    lo = np.full(3, -tol)
    hi = np.full(3, 1.0 + tol)
    curves: List[Curve] = []
    for chain in system.chains:
        for ai, arc in enumerate(chain.arcs):
            frac = cell.to_fractional(arc)
            closed_arc = False
            if chain.topology == "closed" and len(chain.arcs) == 1:
                closed_arc = np.linalg.norm(frac[0] - frac[-1]) <= MATCH_TOL
                if closed_arc:
                    # clip on the open representative; the closing segment
                    # is re-added by the clipper
                    arc = arc[:-1]
                    frac = frac[:-1]
            pieces = _clip_pieces(arc, frac, lo, hi, tol, closed_arc)
            if closed_arc and len(pieces) == 1:
                piece = pieces[0]
                if np.linalg.norm(piece[0] - piece[-1]) <= MATCH_TOL:
                    curves.append(Curve(f"{chain.id}/a{ai}", piece[:-1], True))
                    continue
            for k, piece in enumerate(pieces):
                name = f"{chain.id}/a{ai}" if len(pieces) == 1 else f"{chain.id}/a{ai}/p{k}"
                curves.append(Curve(name, piece, False))
    return curves


def _clip_pieces(cart: np.ndarray, frac: np.ndarray, lo, hi, tol: float,
                 closed: bool) -> List[np.ndarray]:
    """Split a polyline into maximal pieces inside the box [lo, hi]."""
    m = frac.shape[0]
    if closed:
        # start the walk at a vertex outside the box, if there is one, so
        # no piece is split across the wrap
        outside = [i for i in range(m) if np.any(frac[i] < lo) or np.any(frac[i] > hi)]
        if not outside:
            ring = np.vstack([cart, cart[:1]])
            return [ring]
        s = outside[0]
        cart = np.vstack([cart[s:], cart[:s + 1]])
        frac = np.vstack([frac[s:], frac[:s + 1]])
        m = frac.shape[0]
    pieces: List[List[np.ndarray]] = []
    current: List[np.ndarray] = []
    for i in range(m - 1):
        a, b = frac[i], frac[i + 1]
        ca, cb = cart[i], cart[i + 1]
        t0, t1 = _box_interval(a, b, lo, hi)
        if t1 <= t0:
            if current:
                pieces.append(current)
                current = []
            continue
        pa = ca if t0 <= 0.0 else ca + t0 * (cb - ca)
        pb = cb if t1 >= 1.0 else ca + t1 * (cb - ca)
        if not current:
            current.append(pa)
        current.append(pb)
        if t1 < 1.0:
            pieces.append(current)
            current = []
    if current:
        pieces.append(current)
    out = []
    for p in pieces:
        arr = np.asarray(p)
        keep = [0]
        for i in range(1, arr.shape[0]):
            if np.linalg.norm(arr[i] - arr[keep[-1]]) > 1e-12:
                keep.append(i)
        arr = arr[keep]
        if arr.shape[0] < 2:
            continue
        if float(np.sum(np.linalg.norm(np.diff(arr, axis=0), axis=1))) <= 10 * tol:
            continue
        out.append(arr)
    return out


# -- top-level polynomials ----------------------------------------------


def cell_jones(system: PBCSystem, cfg: Optional[SamplingConfig] = None) -> JonesResult:
    cfg = cfg or SamplingConfig()
    return jones(cell_curves(system, cfg.tolerance), cfg)


def periodic_jones(system: PBCSystem, cfg: Optional[SamplingConfig] = None,
                   frozen: Optional[Mapping] = None) -> Tuple[JonesResult, MinimalPeriodicLink]:
    cfg = cfg or SamplingConfig()
    link = rebuild_link(system, frozen) if frozen is not None else minimal_periodic_link(system)
    return jones(link_curves(link), cfg), link


def normalized(poly: LaurentPoly, component_count: int, zero_tol: float = 1e-9) -> DivisionResult:
    """Divide by the loop value to the (component count - 1) power."""
    if component_count < 1:
        raise ValueError("component count must be positive")
    return divide_by_d_power(poly, component_count - 1, zero_tol)


# -- periodic self-linking ----------------------------------------------


def single_periodic_axis(cell: Cell) -> int:
    axes = [ax for ax in range(3) if cell.periodic[ax]]
    if len(axes) != 1:
        raise PbcJonesError("axis must be given explicitly unless exactly one axis is periodic")
    return axes[0]


def slk_p(system: PBCSystem, xi, link: Optional[MinimalPeriodicLink] = None,
          axis: Optional[int] = None, tol: float = 1e-9,
          retries: int = 100) -> Fraction:
    """Periodic self-linking: half the signed shared crossings between the
    periodic link and its translates by the copy period, summed over all
    nonzero translates.

    The copy period along each axis is 2*dims - 1 cells, the smallest
    translate whose image set is disjoint from the original.  Translates
    run over every periodic axis unless ``axis`` restricts them to one.
    """
    if link is None:
        link = minimal_periodic_link(system)
    if axis is None:
        axes = [ax for ax in range(3) if system.cell.periodic[ax]]
        if not axes:
            raise PbcJonesError("no periodic axis")
    else:
        if not system.cell.periodic[axis]:
            raise PbcJonesError(f"axis {axis} is not periodic")
        axes = [axis]

    base: List[Curve] = []
    for im in link.images:
        base.append(Curve(f"L|{im.curve_id}", im.polyline, im.closed))
    frac_all = np.concatenate([system.cell.to_fractional(im.polyline) for im in link.images])

    period = {}
    ranges = []
    for ax in axes:
        period[ax] = 2 * link.mcu.dims[ax] - 1
        span = float(frac_all[:, ax].max() - frac_all[:, ax].min())
        vmax = int(math.ceil(span / period[ax])) + 1
        ranges.append(range(-vmax, vmax + 1))

    total = Fraction(0)
    for combo in product(*ranges):
        if not any(combo):
            continue
        cells = np.zeros(3)
        for ax, v in zip(axes, combo):
            cells[ax] = v * period[ax]
        offset = system.cell.translation(cells)
        shifted = [Curve(f"T|{im.curve_id}", im.polyline + offset, im.closed)
                   for im in link.images]
        diagram, _, _ = project_generic(base + shifted, xi, tol, retries)
        total += diagram.inter_linking([c.id for c in base], [c.id for c in shifted])
    return total
