"""Command-line interface.

Every subcommand emits an analysis report, as canonical JSON or
indented text.  Reports embed the input path and every sampling knob,
so a run can be reproduced from its own output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from .errors import PbcJonesError
from .io_formats import (
    AnalysisReport,
    TRAJECTORY_FORMATS,
    read_curves,
    read_system,
    read_trajectory,
    report_text,
    select_interior_chains,
    write_system,
)
from .bracket import DEFAULT_CROSSING_CAP
from .jones3d import JonesResult, SamplingConfig, jones
from .laurent import LaurentPoly
from .pbc import (
    cell_curves,
    link_curves,
    minimal_periodic_link,
    normalized,
    rebuild_link,
    search_basepoint,
    slk_p,
    with_basepoint,
)
from .cutoff import verify_cutoff_factorization


def _add_sampling_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--directions", type=int, default=500,
                   help="number of projection directions (default 500)")
    p.add_argument("--mode", choices=("fibonacci", "random"), default="fibonacci",
                   help="direction sampling scheme")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    p.add_argument("--tolerance", type=float, default=1e-9,
                   help="genericity tolerance for projections")
    p.add_argument("--crossing-cap", type=int, default=DEFAULT_CROSSING_CAP,
                   help="refuse diagrams with more crossings than this")
    p.add_argument("--on-cap", choices=("error", "skip"), default="error",
                   help="what to do when a diagram exceeds the crossing cap")
    p.add_argument("--prune", type=float, default=1e-12,
                   help="drop averaged coefficients below this magnitude")
    p.add_argument("--workers", type=int, default=1,
                   help="worker processes for direction averaging")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", choices=("json", "text"), default="json")
    p.add_argument("--out", metavar="FILE", default=None,
                   help="write the report here instead of stdout")


def _config(args) -> SamplingConfig:
    return SamplingConfig(
        directions=args.directions, mode=args.mode, seed=args.seed,
        tolerance=args.tolerance, crossing_cap=args.crossing_cap,
        prune=args.prune, workers=args.workers, on_cap=args.on_cap,
    )


def _sampling_params(args, path: str) -> Dict[str, object]:
    return {
        "input": path,
        "directions": args.directions,
        "mode": args.mode,
        "seed": args.seed,
        "tolerance": args.tolerance,
        "crossing_cap": args.crossing_cap,
        "on_cap": args.on_cap,
        "prune": args.prune,
        "workers": args.workers,
    }


def _poly_results(res: JonesResult) -> Dict[str, object]:
    return {
        "polynomial": res.poly.to_json_obj(),
        "polynomial_str": str(res.poly),
        "exact": res.exact,
        "span": res.poly.span,
        "min_exp": res.poly.min_exp,
        "max_exp": res.poly.max_exp,
        "directions_used": res.directions_used,
        "directions_skipped": res.directions_skipped,
        "retries": res.retries,
        "max_crossings": res.max_crossings,
        "states_expanded": res.states_expanded,
        "cache_hits": res.cache_hits,
    }


def _normalization_results(poly: LaurentPoly, n_components: int,
                           tol: float = 1e-9) -> Dict[str, object]:
    div = normalized(poly, n_components, zero_tol=tol)
    # float-mode division leaves sub-tolerance dust; report the cleaned form
    quot = div.quotient.pruned(tol) if poly.mode == "float" else div.quotient
    rem = div.remainder.pruned(tol) if poly.mode == "float" else div.remainder
    return {
        "components": n_components,
        "quotient": quot.to_json_obj(),
        "quotient_str": str(quot),
        "remainder": rem.to_json_obj(),
        "remainder_str": str(rem),
        "remainder_span": div.remainder_span,
        "remainder_is_zero": div.remainder_is_zero,
    }


def _emit(report: AnalysisReport, args) -> None:
    text = report.to_json() if args.output == "json" else report_text(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_direction(text: str) -> np.ndarray:
    parts = [float(x) for x in text.replace(",", " ").split()]
    if len(parts) != 3:
        raise PbcJonesError("--direction needs three components, e.g. '0.23,1,0.4'")
    return np.asarray(parts)


def _load_composition(path: str) -> Dict[str, List[List[int]]]:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if isinstance(obj, dict) and "results" in obj:
        obj = obj["results"].get("composition")
    if isinstance(obj, dict) and "composition" in obj:
        obj = obj["composition"]
    if not isinstance(obj, dict):
        raise PbcJonesError(f"{path}: no composition found")
    return obj


# -- subcommands --------------------------------------------------------


def _cmd_jones(args) -> None:
    curves = read_curves(args.input)
    res = jones(curves, _config(args))
    report = AnalysisReport("jones", _sampling_params(args, args.input), {
        **_poly_results(res),
        "component_count": len(curves),
        "closed_components": sum(c.closed for c in curves),
    })
    _emit(report, args)


def _cmd_cell_jones(args) -> None:
    system = read_system(args.input)
    curves = cell_curves(system, tol=args.tolerance)
    res = jones(curves, _config(args))
    report = AnalysisReport("cell-jones", _sampling_params(args, args.input), {
        **_poly_results(res),
        "component_count": len(curves),
        "normalization": _normalization_results(res.poly, len(curves), args.tolerance),
    })
    _emit(report, args)


def _cmd_periodic_jones(args) -> None:
    system = read_system(args.input)
    if args.basepoint_search:
        for chain in system.chains:
            if chain.topology == "infinite":
                system = with_basepoint(system, chain.id, search_basepoint(system, chain.id))
    if args.frozen_components:
        link = rebuild_link(system, _load_composition(args.frozen_components))
    else:
        link = minimal_periodic_link(system)
    curves = link_curves(link)
    res = jones(curves, _config(args))
    params = _sampling_params(args, args.input)
    params["frozen_components"] = args.frozen_components
    params["basepoint_search"] = bool(args.basepoint_search)
    report = AnalysisReport("periodic-jones", params, {
        **_poly_results(res),
        "component_count": link.component_count,
        "composition": {k: [list(v) for v in vs] for k, vs in link.composition.items()},
        "collective_unfolding": {
            "anchor": list(link.mcu.anchor),
            "dims": list(link.mcu.dims),
        },
        "normalization": _normalization_results(res.poly, link.component_count,
                                                args.tolerance),
    })
    _emit(report, args)


def _cmd_normalize(args) -> None:
    with open(args.input, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    components = args.components
    if isinstance(obj, dict) and "results" in obj:
        res = obj["results"]
        if components is None:
            components = res.get("component_count")
        obj = res.get("polynomial", obj)
    if isinstance(obj, dict) and "polynomial" in obj:
        obj = obj["polynomial"]
    poly = LaurentPoly.from_json_obj(obj)
    if components is None:
        raise PbcJonesError("--components is required when the input carries no count")
    report = AnalysisReport("normalize", {
        "input": args.input,
        "components": components,
        "tolerance": args.tolerance,
    }, {
        "polynomial": poly.to_json_obj(),
        "polynomial_str": str(poly),
        **_normalization_results(poly, components, args.tolerance),
    })
    _emit(report, args)


def _cmd_slk(args) -> None:
    system = read_system(args.input)
    if args.direction:
        xi = _parse_direction(args.direction)
    else:
        rng = np.random.default_rng(args.seed)
        xi = rng.normal(size=3)
        xi /= np.linalg.norm(xi)
    link = minimal_periodic_link(system)
    value = slk_p(system, xi, link, axis=args.axis, tol=args.tolerance)
    report = AnalysisReport("slk", {
        "input": args.input,
        "direction": [float(c) for c in xi],
        "axis": args.axis,
        "seed": args.seed,
        "tolerance": args.tolerance,
    }, {
        "slk": str(value),
        "slk_float": float(value),
        "component_count": link.component_count,
        "unfolding_dims": list(link.mcu.dims),
    })
    _emit(report, args)


def _cmd_cutoff_verify(args) -> None:
    system = read_system(args.input)
    xi = _parse_direction(args.direction) if args.direction else None
    rep = verify_cutoff_factorization(
        system, args.copies, xi=xi, tol=args.tolerance,
        enumerate_cap=args.enumerate_cap, crossing_cap=args.crossing_cap,
    )
    report = AnalysisReport("cutoff-verify", {
        "input": args.input,
        "copies": args.copies,
        "direction": None if xi is None else [float(c) for c in xi],
        "tolerance": args.tolerance,
        "enumerate_cap": args.enumerate_cap,
        "crossing_cap": args.crossing_cap,
    }, rep.to_json_obj())
    _emit(report, args)
    if not (rep.writhe_identity_ok and rep.state_oracle_ok
            and rep.sum_identity_ok and rep.factorization_ok):
        sys.exit(1)


def _cmd_ingest(args) -> None:
    frames = read_trajectory(args.input, args.format)
    if not 0 <= args.frame < len(frames):
        raise PbcJonesError(f"frame {args.frame} out of range (file has {len(frames)})")
    frame = frames[args.frame]
    system = select_interior_chains(frame)
    write_system(args.system_out, system)
    report = AnalysisReport("ingest", {
        "input": args.input,
        "format": args.format,
        "frame": args.frame,
        "system_out": args.system_out,
    }, {
        "timestep": frame.timestep,
        "box": [[float(b) for b in row] for row in frame.bounds],
        "molecules": int(len(frame.chains())),
        "chains_kept": len(system.chains),
        "chain_ids": [c.id for c in system.chains],
    })
    _emit(report, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pbcjones",
        description="Jones polynomials of open/closed curves and periodic systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jones", help="Jones polynomial of a curve collection")
    p.add_argument("input", help="curves JSON file")
    _add_sampling_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_jones)

    p = sub.add_parser("cell-jones", help="Jones polynomial of the arcs in the base cell")
    p.add_argument("input", help="system JSON file")
    _add_sampling_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_cell_jones)

    p = sub.add_parser("periodic-jones", help="Jones polynomial of the minimal periodic link")
    p.add_argument("input", help="system JSON file")
    _add_sampling_flags(p)
    _add_output_flags(p)
    p.add_argument("--frozen-components", metavar="FILE", default=None,
                   help="reuse the link composition from a previous report")
    p.add_argument("--basepoint-search", action="store_true",
                   help="pick infinite-chain basepoints maximizing component count")
    p.set_defaults(func=_cmd_periodic_jones)

    p = sub.add_parser("normalize", help="divide a polynomial by the trivial-link value")
    p.add_argument("input", help="polynomial or report JSON file")
    p.add_argument("--components", type=int, default=None,
                   help="component count n; divides by the (n-1)-th power")
    p.add_argument("--tolerance", type=float, default=1e-9)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("slk", help="periodic self-linking number")
    p.add_argument("input", help="system JSON file")
    p.add_argument("--direction", default=None, help="projection direction 'x,y,z'")
    p.add_argument("--axis", type=int, default=None,
                   help="restrict translates to one axis (0, 1 or 2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-9)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_slk)

    p = sub.add_parser("cutoff-verify", help="check the cutoff factorization identity")
    p.add_argument("input", help="system JSON file (single closed chain, one periodic axis)")
    p.add_argument("--copies", type=int, required=True, help="number of stacked copies N")
    p.add_argument("--direction", default=None, help="projection direction 'x,y,z'")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--enumerate-cap", type=int, default=16,
                   help="max shared crossings for full state enumeration")
    p.add_argument("--crossing-cap", type=int, default=48)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_cutoff_verify)

    p = sub.add_parser("ingest", help="extract interior chains from a trajectory frame")
    p.add_argument("input", help="trajectory file")
    p.add_argument("--format", choices=TRAJECTORY_FORMATS, default="lammps-dump")
    p.add_argument("--frame", type=int, default=0)
    p.add_argument("--system-out", metavar="FILE", required=True,
                   help="write the resulting system JSON here")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_ingest)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except PbcJonesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
