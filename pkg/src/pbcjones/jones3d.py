"""Jones polynomials of curves in 3-space.

Collections that are entirely closed have a projection-independent
polynomial, computed exactly from one generic direction.  Collections
with open curves depend on the direction, and the result is the average
over a deterministic direction sample; the average of exact integer
polynomials is formed with rational arithmetic and converted to float
once at the end, so results do not depend on worker count or summation
order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bracket import DEFAULT_CROSSING_CAP, bracket
from .errors import NonGenericDirectionError, StateSumTooLargeError
from .geometry import Curve, perturbed_direction, project, sample_directions
from .laurent import EXACT, FLOAT, LaurentPoly


@dataclass(frozen=True)
class SamplingConfig:
    directions: int = 500
    mode: str = "fibonacci"  # or "random"
    seed: int = 0
    tolerance: float = 1e-9
    crossing_cap: int = DEFAULT_CROSSING_CAP
    prune: float = 1e-12
    workers: int = 1
    genericity_retries: int = 100
    on_cap: str = "error"  # or "skip": drop capped directions from the average

    def __post_init__(self):
        if self.mode not in ("fibonacci", "random"):
            raise ValueError(f"unknown sampling mode {self.mode!r}")
        if self.on_cap not in ("error", "skip"):
            raise ValueError(f"on_cap must be 'error' or 'skip', got {self.on_cap!r}")


@dataclass(frozen=True)
class JonesResult:
    poly: LaurentPoly
    exact: bool
    directions_used: int
    directions_skipped: int
    retries: int
    max_crossings: int
    states_expanded: int
    cache_hits: int

    def to_json_obj(self) -> dict:
        return {
            "polynomial": self.poly.to_json_obj(),
            "exact": self.exact,
            "directions_used": self.directions_used,
            "directions_skipped": self.directions_skipped,
            "retries": self.retries,
            "max_crossings": self.max_crossings,
            "states_expanded": self.states_expanded,
            "cache_hits": self.cache_hits,
        }


def project_generic(curves: Sequence[Curve], xi, tol: float, retries: int):
    """Project along xi, nudging the direction until generic.

    Returns (diagram, direction_used, retries_needed).
    """
    xi0 = np.asarray(xi, dtype=float)
    last: Optional[NonGenericDirectionError] = None
    for attempt in range(retries + 1):
        cand = xi0 if attempt == 0 else perturbed_direction(xi0, attempt)
        try:
            return project(curves, cand, tol), cand, attempt
        except NonGenericDirectionError as err:
            last = err
    raise last


def _direction_term(curves, xi, cfg: SamplingConfig):
    """Exact Jones for one direction as an int coefficient dict.

    Returns (coeffs or None when capped and skipping, retries, crossings,
    states_expanded, cache_hits).
    """
    diagram, _, tries = project_generic(curves, xi, cfg.tolerance, cfg.genericity_retries)
    n_cross = len(diagram.crossings)
    try:
        res = bracket(diagram, cfg.crossing_cap)
    except StateSumTooLargeError:
        if cfg.on_cap == "skip":
            return None, tries, n_cross, 0, 0
        raise
    w = diagram.writhe
    neg = bool(w % 2)
    coeffs = {e - 3 * w: (-c if neg else c) for e, c in res.poly._c.items()}
    return coeffs, tries, n_cross, res.states_expanded, res.cache_hits


def _chunk_sum(args) -> Tuple[Dict[int, int], int, int, int, int, int]:
    curves, dirs, cfg = args
    total: Dict[int, int] = {}
    used = retries = max_cross = expanded = hits = 0
    for xi in dirs:
        coeffs, tries, n_cross, st, ch = _direction_term(curves, xi, cfg)
        retries += tries
        max_cross = max(max_cross, n_cross)
        if coeffs is None:
            continue
        used += 1
        expanded += st
        hits += ch
        for e, c in coeffs.items():
            nc = total.get(e, 0) + c
            if nc:
                total[e] = nc
            else:
                del total[e]
    return total, used, retries, max_cross, expanded, hits


def jones_single_direction(curves: Sequence[Curve], xi, cfg: Optional[SamplingConfig] = None) -> JonesResult:
    """Exact Jones polynomial of the diagram seen along one direction."""
    cfg = cfg or SamplingConfig()
    coeffs, tries, n_cross, st, ch = _direction_term(curves, np.asarray(xi, dtype=float), cfg)
    if coeffs is None:
        raise StateSumTooLargeError(n_cross, cfg.crossing_cap)
    return JonesResult(LaurentPoly(coeffs), True, 1, 0, tries, n_cross, st, ch)


def jones(curves: Sequence[Curve], cfg: Optional[SamplingConfig] = None) -> JonesResult:
    """Jones polynomial of a curve collection.

    All-closed collections use one generic direction and give an exact
    answer; otherwise the polynomial is the direction average in float
    mode.
    """
    cfg = cfg or SamplingConfig()
    if not curves:
        return JonesResult(LaurentPoly.one(), True, 0, 0, 0, 0, 0, 0)
    dirs = sample_directions(cfg.directions, cfg.mode, cfg.seed)
    if all(c.closed for c in curves):
        return jones_single_direction(curves, dirs[0], cfg)

    if cfg.workers > 1:
        chunks = [c for c in np.array_split(dirs, cfg.workers) if len(c)]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_chunk_sum, [(tuple(curves), chunk, cfg) for chunk in chunks]))
    else:
        parts = [_chunk_sum((tuple(curves), dirs, cfg))]

    total: Dict[int, int] = {}
    used = retries = max_cross = expanded = hits = 0
    for part, u, r, mc, st, ch in parts:
        used += u
        retries += r
        max_cross = max(max_cross, mc)
        expanded += st
        hits += ch
        for e, c in part.items():
            nc = total.get(e, 0) + c
            if nc:
                total[e] = nc
            else:
                del total[e]
    if used == 0:
        raise StateSumTooLargeError(max_cross, cfg.crossing_cap)
    avg = LaurentPoly({e: Fraction(c, used) for e, c in total.items()}, EXACT)
    poly = avg.to_float().pruned(cfg.prune)
    skipped = cfg.directions - used
    return JonesResult(poly, False, used, skipped, retries, max_cross, expanded, hits)
