"""chaincli: command-line front end.

Subcommands: bands, negbands, flatbands, prob, sweep, oracle-check.
Lengths accept plain floats or exact multiples of pi ("2pi/3").  Output is
CSV (header row, 17 significant digits, LF, UTF-8) or JSON (one document
with metadata); files are written atomically.  Exit codes: 0 success,
1 invalid flags, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from typing import List, Optional, Sequence

from . import __version__
from .bands import (Band, BandKind, NegativeBandCountError, detect_flat_bands,
                    find_negative_bands, predict_flat_bands, scan_bands)
from .model import ChainSpec, Variant
from .oracle import equivalence_report
from .probability import (ProbabilityEstimate, closed_form_probability,
                          periodic_probability, scan_probability, torus_probability)
from .rational import parse_length

TWO_PI = 2.0 * math.pi


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".chaincli-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, columns: List[str], rows: List[list], meta: dict) -> None:
    if args.format == "json":
        doc = {
            "tool": "ringchain",
            "version": __version__,
            "subcommand": args.command,
            "seed": getattr(args, "seed", None),
            "tolerances": meta.get("tolerances", {}),
            "params": meta.get("params", {}),
            "columns": columns,
            "rows": [[_fmt(v) if isinstance(v, float) else v for v in row]
                     for row in rows],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [",".join(columns)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    if args.out:
        _atomic_write(args.out, text)
        if getattr(args, "gnuplot", False):
            _atomic_write(args.out + ".gp", _gnuplot_script(args, columns))
    else:
        sys.stdout.write(text)


def _gnuplot_script(args, columns: List[str]) -> str:
    src = os.path.basename(args.out)
    head = (f'# gnuplot script generated by chaincli {args.command}\n'
            f'set datafile separator ","\n')
    if args.command == "bands":
        return head + (f'set xlabel "k"; set ylabel ""\n'
                       f'plot "{src}" skip 1 using 3:(0):($4-$3):(0) '
                       f'with vectors nohead lw 4 title "bands"\n')
    if args.command == "negbands":
        return head + (f'set xlabel "kappa"\n'
                       f'plot "{src}" skip 1 using 3:(0):($4-$3):(0) '
                       f'with vectors nohead lw 4 title "negative bands"\n')
    if args.command == "sweep":
        return head + (f'set xlabel "{args.axis}"; set ylabel "k"\n'
                       f'plot "{src}" skip 1 using 2:5:(0):($6-$5) '
                       f'with vectors nohead title "bands"\n')
    return head + f'plot "{src}" skip 1 using 1:2 with points title "{args.command}"\n'


def _add_spec_flags(p: argparse.ArgumentParser, need_variant: bool = True) -> None:
    p.add_argument("--variant", choices=[v.value for v in Variant],
                   required=need_variant)
    p.add_argument("--ell", type=parse_length, default=1.0)
    p.add_argument("--l1", type=parse_length, default=None)
    p.add_argument("--l3", type=parse_length, default=None)
    p.add_argument("--A", type=float, default=0.0)


def _spec_from(args) -> ChainSpec:
    v = Variant(args.variant)
    if v == Variant.LOOSE:
        if args.l1 is None or args.l3 is None:
            raise ValueError("loose variant needs --l1 and --l3")
        return ChainSpec.loose(args.ell, args.l1, args.l3, args.A)
    if v == Variant.TIGHT:
        if args.l3 is None:
            raise ValueError("tight variant needs --l3")
        if args.l1 not in (None, 0.0):
            raise ValueError("tight variant has l1 = 0")
        return ChainSpec.tight(args.ell, args.l3, args.A)
    if args.l1 is None:
        raise ValueError("merged variant needs --l1")
    if args.l3 is not None and args.l3 != TWO_PI:
        raise ValueError("merged variant has l3 = 2*pi")
    return ChainSpec.merged(args.ell, args.l1, args.A)


def _band_rows(bands: Sequence[Band], negative: bool = False) -> List[list]:
    rows = []
    for i, b in enumerate(bands):
        if negative:
            rows.append([i, b.kind.value, b.lo, b.hi, -b.hi * b.hi, -b.lo * b.lo,
                         b.width, b.edge_tol, int(b.truncated_hi)])
        else:
            rows.append([i, b.kind.value, b.lo, b.hi, b.lo * b.lo, b.hi * b.hi,
                         b.width, b.edge_tol])
    return rows


def _cmd_bands(args) -> int:
    spec = _spec_from(args)
    bands = scan_bands(spec, args.kmax, grid_points=args.grid,
                       edge_tol=args.edge_tol, k_min=args.kmin)
    _emit(args, ["index", "kind", "k_lo", "k_hi", "energy_lo", "energy_hi",
                 "width_k", "edge_tol"], _band_rows(bands),
          {"params": _spec_params(spec), "tolerances": {"edge_tol": args.edge_tol}})
    return 0


def _cmd_negbands(args) -> int:
    spec = _spec_from(args)
    bands = find_negative_bands(spec, args.kappamax, grid_points=args.grid,
                                edge_tol=args.edge_tol)
    _emit(args, ["index", "kind", "kappa_lo", "kappa_hi", "energy_lo", "energy_hi",
                 "width_kappa", "edge_tol", "truncated"],
          _band_rows(bands, negative=True),
          {"params": _spec_params(spec), "tolerances": {"edge_tol": args.edge_tol}})
    return 0


def _cmd_flatbands(args) -> int:
    spec = _spec_from(args)
    hits = detect_flat_bands(spec, args.kmax)
    preds = predict_flat_bands(spec, args.kmax)
    rows = []
    for h in hits:
        mech = ";".join(sorted({p.mechanism.value for p in preds
                                if abs(p.k_value - h.k) < 1e-8})) or "unexplained"
        rows.append([h.k, h.k * h.k, h.abs_a, h.abs_b, h.abs_c, h.scale, mech])
    _emit(args, ["k", "energy", "abs_a", "abs_b", "abs_c", "scale", "mechanisms"],
          rows, {"params": _spec_params(spec)})
    return 0


def _cmd_prob(args) -> int:
    variant = Variant(args.variant)
    est: ProbabilityEstimate
    if args.mode == "scan":
        est = scan_probability(_spec_from(args), args.K, grid_points=args.grid)
        detail = f"K={args.K}"
    elif args.mode == "torus":
        est = torus_probability(variant, args.A, resolution=args.resolution,
                                mc_samples=args.mc_samples, seed=args.seed)
        detail = f"resolution={args.resolution}"
    elif args.mode == "periodic":
        if not args.ratio:
            raise ValueError("periodic mode needs --ratio p/q")
        p, q = args.ratio.split("/")
        est = periodic_probability(variant, args.A, (int(p), int(q)))
        detail = f"ratio={args.ratio}"
    else:  # closed-form
        if variant != Variant.LOOSE and not args.symmetric and not args.incommensurate:
            raise ValueError(
                "closed forms presuppose incommensurate lengths; pass "
                "--incommensurate to declare that (or --symmetric for the "
                "symmetric tight chain)")
        est = closed_form_probability(variant, args.A, symmetric=args.symmetric)
        detail = est.params.get("formula", "")
    row = [variant.value, args.mode, args.A, est.value, est.error_bound, detail]
    print(f"P_sigma = {_fmt(est.value)}  (method {est.method.value}, "
          f"error bound {_fmt(est.error_bound)})")
    if args.out:
        _emit(args, ["variant", "mode", "A", "value", "error_bound", "detail"],
              [row], {"params": {"A": args.A}, "tolerances": {}})
    return 0


def _cmd_sweep(args) -> int:
    lo_s, hi_s, n_s = args.range.split(":")
    n = int(n_s)
    if n < 1:
        raise ValueError("sweep needs at least one sample")
    if args.axis == "A":
        lo, hi = float(lo_s), float(hi_s)
    else:
        lo, hi = parse_length(lo_s), parse_length(hi_s)
    rows = []
    for i in range(n):
        val = lo + (hi - lo) * i / max(n - 1, 1)
        a = argparse.Namespace(**vars(args))
        setattr(a, args.axis, val)
        spec = _spec_from(a)
        bands = scan_bands(spec, args.kmax, grid_points=args.grid,
                           edge_tol=args.edge_tol, detect_flats=False)
        for j, b in enumerate(bands):
            rows.append([args.axis, val, j, b.kind.value, b.lo, b.hi])
    _emit(args, ["axis", "axis_value", "band_index", "kind", "k_lo", "k_hi"],
          rows, {"params": {"axis": args.axis, "range": args.range},
                 "tolerances": {"edge_tol": args.edge_tol}})
    return 0


def _cmd_oracle_check(args) -> int:
    rep = equivalence_report(None, k_samples=args.samples, seed=args.seed,
                             tol=args.tol)
    cols = ["samples", "mismatches", "max_theta_distance", "max_root_residual",
            "max_structure_residual", "eq6_ratio_min", "eq6_ratio_max",
            "factor_abs_min", "factor_abs_max", "resampled"]
    fr = rep.factor_magnitude_range or (float("nan"), float("nan"))
    row = [rep.n_samples, rep.mismatches, rep.max_theta_distance,
           rep.max_root_residual, rep.max_structure_residual,
           rep.eq6_ratio_min if rep.eq6_ratio_min is not None else float("nan"),
           rep.eq6_ratio_max if rep.eq6_ratio_max is not None else float("nan"),
           fr[0], fr[1], rep.resampled]
    print(f"oracle-check: {rep.n_samples} samples, {rep.mismatches} mismatches, "
          f"max theta distance {_fmt(rep.max_theta_distance)}, "
          f"eq6 ratio in [{_fmt(row[5])}, {_fmt(row[6])}]")
    if args.out:
        _emit(args, cols, [row], {"params": {"samples": args.samples},
                                  "tolerances": {"tol": args.tol}})
    if not rep.ok:
        print("oracle-check: FAILURE (zero-set disagreement)", file=sys.stderr)
        return 2
    return 0


def _spec_params(spec: ChainSpec) -> dict:
    return {"variant": spec.variant.value, "ell": spec.ell, "l1": spec.l1,
            "l3": spec.l3, "A": spec.A}


def build_parser() -> _Parser:
    p = _Parser(prog="chaincli",
                description="spectra of periodic magnetic ring chains")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, variant=True):
        _add_spec_flags(sp, need_variant=variant)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--gnuplot", action="store_true")
        sp.add_argument("--seed", type=int, default=20240817)

    sp = sub.add_parser("bands", help="positive-spectrum bands")
    common(sp)
    sp.add_argument("--kmax", type=float, required=True)
    sp.add_argument("--kmin", type=float, default=None)
    sp.add_argument("--grid", type=int, default=None)
    sp.add_argument("--edge-tol", type=float, default=1e-10)
    sp.set_defaults(fn=_cmd_bands)

    sp = sub.add_parser("negbands", help="negative-spectrum bands")
    common(sp)
    sp.add_argument("--kappamax", type=float, required=True)
    sp.add_argument("--grid", type=int, default=None)
    sp.add_argument("--edge-tol", type=float, default=1e-10)
    sp.set_defaults(fn=_cmd_negbands)

    sp = sub.add_parser("flatbands", help="flat-band detection and mechanisms")
    common(sp)
    sp.add_argument("--kmax", type=float, required=True)
    sp.set_defaults(fn=_cmd_flatbands)

    sp = sub.add_parser("prob", help="probability of belonging to the spectrum")
    common(sp)
    sp.add_argument("--mode", choices=["scan", "periodic", "torus", "closed-form"],
                    required=True)
    sp.add_argument("--K", type=float, default=1000.0)
    sp.add_argument("--grid", type=int, default=None)
    sp.add_argument("--resolution", type=int, default=4000)
    sp.add_argument("--mc-samples", type=int, default=10_000_000)
    sp.add_argument("--ratio", default=None)
    sp.add_argument("--symmetric", action="store_true")
    sp.add_argument("--incommensurate", action="store_true")
    sp.set_defaults(fn=_cmd_prob)

    sp = sub.add_parser("sweep", help="band structure along a parameter sweep")
    common(sp)
    sp.add_argument("--axis", choices=["l1", "l3", "A", "ell"], required=True)
    sp.add_argument("--range", required=True, metavar="LO:HI:N")
    sp.add_argument("--kmax", type=float, required=True)
    sp.add_argument("--grid", type=int, default=None)
    sp.add_argument("--edge-tol", type=float, default=1e-10)
    sp.set_defaults(fn=_cmd_sweep)

    sp = sub.add_parser("oracle-check",
                        help="validate coefficients against the 12x12 system")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=20240817)
    sp.add_argument("--tol", type=float, default=1e-7)
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--gnuplot", action="store_true")
    sp.set_defaults(fn=_cmd_oracle_check)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"chaincli: error: {exc}", file=sys.stderr)
        return 1
    except NegativeBandCountError as exc:
        print(f"chaincli: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
