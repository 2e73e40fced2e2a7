"""
Command-line entry point.

Exit codes: 0 success, 2 config error, 3 genericity failure,
4 verification mismatch.
"""
from __future__ import annotations

import argparse
import re
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .classify import classify_alpha_point, diagram_for, diagram_raster
from .config import FORMATS, ConfigError, RunConfig, load_config
from .emit import (
    curves_csv, diagram_svg, fmt_sig, json_text, orbit_csv, orbit_svg, region_grid_csv, write_text,
)
from .normal_form import ChencinerError, GenericityError, invariant_circles, origin_stability, validate
from .reproduce import DELTA_TOL, reproduce_paper, summary_text
from .series import format_series
from .simulate import Probe, iterate_orbit, verify_portrait
from .transform import build_transform

EXIT_OK, EXIT_CONFIG, EXIT_GENERICITY, EXIT_MISMATCH = 0, 2, 3, 4

_PAIR_FLAGS = ("--alpha", "--start")
_NUMLIKE = re.compile(r"^-\d|^-\.\d")


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse reads "-0.017,0.015" as an option; glue it to its flag
    out: list[str] = []
    it = iter(range(len(argv)))
    argv = list(argv)
    for i in it:
        a = argv[i]
        if a in _PAIR_FLAGS and i + 1 < len(argv) and _NUMLIKE.match(argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            next(it, None)
        else:
            out.append(a)
    return out


def _pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration (default: built-in example)")
    common.add_argument("--sign-tol", type=float, help="zero band for sign tests")
    common.add_argument("--delta-tol", type=float, help="zero band for the discriminant (default: --sign-tol)")
    common.add_argument("--order", type=int, help="inversion order k of the parameter change")
    common.add_argument("--theta0", type=float, help="override the rotation angle")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--format", action="append", choices=FORMATS,
                        help="artifact format to write (repeatable; default: all)")

    parser = argparse.ArgumentParser(prog="chenciner", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check Chenciner / degeneracy / regularity")
    sub.add_parser("transform", parents=[common], help="forward, inverse and hat series")
    p = sub.add_parser("classify", parents=[common], help="region of one parameter point")
    p.add_argument("--alpha", type=_pair, required=True, metavar="A1,A2")
    p = sub.add_parser("diagram", parents=[common], help="rasterised region map with B1/B2")
    p.add_argument("--window", type=float, nargs=4, metavar=("MU1_LO", "MU1_HI", "MU2_LO", "MU2_HI"))
    p.add_argument("--resolution", type=int, nargs=2, metavar=("NX", "NY"))
    p = sub.add_parser("simulate", parents=[common], help="iterate one orbit")
    p.add_argument("--alpha", type=_pair, required=True, metavar="A1,A2")
    p.add_argument("--start", type=_pair, required=True, metavar="RHO,PHI")
    p.add_argument("-n", "--n-max", type=int)
    p = sub.add_parser("verify", parents=[common], help="check simulated orbits against the region")
    p.add_argument("--alpha", type=_pair, required=True, metavar="A1,A2")
    p.add_argument("--probe", type=float, action="append", metavar="RHO", help="probe start radius (repeatable)")
    p.add_argument("-n", "--n-max", type=int)
    sub.add_parser("reproduce-paper", parents=[common], help="run the built-in example against published values")
    return parser


def _settings(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.sign_tol is not None:
        cfg.sign_tol = args.sign_tol
    if args.delta_tol is not None:
        cfg.delta_tol = args.delta_tol
    if args.order is not None:
        cfg.k = args.order
    if args.theta0 is not None:
        try:
            cfg.system = cfg.system.replace(theta0=args.theta0)
        except ValueError as exc:
            raise ConfigError("--theta0", str(exc)) from None
    if args.out is not None:
        cfg.out_dir = args.out
    if args.format:
        cfg.formats = tuple(dict.fromkeys(args.format))
    cfg.thresholds = replace(cfg.thresholds, sign_tol=cfg.sign_tol, delta_tol=cfg.delta_tol)
    return cfg


def _require_generic(cfg: RunConfig):
    rep = validate(cfg.system)
    if rep.L0 == 0:
        raise GenericityError("L0 != 0", "L2(0) vanishes")
    if not rep.chenciner_ok:
        raise GenericityError("Chenciner conditions", "; ".join(rep.notes))
    if not rep.new_regular:
        raise GenericityError("(newt)", "c1*l2 - c2*l1 = 0")
    return rep


def cmd_validate(cfg: RunConfig, args) -> int:
    rep = validate(cfg.system)
    d = rep.as_dict()
    for key in ("chenciner_ok", "degenerate", "new_regular", "c_nonzero", "d_nonzero",
                "L0", "c1", "c2", "d1", "d2", "l1", "l2", "c1d2-c2d1", "c1l2-c2l1"):
        print(f"{key}: {d[key]}")
    for note in rep.notes:
        print(f"note: {note}")
    if rep.L0 == 0:
        print("genericity failure: L0 != 0", file=sys.stderr)
        return EXIT_GENERICITY
    if not rep.chenciner_ok:
        print("genericity failure: Chenciner conditions beta1(0) = beta2(0) = 0", file=sys.stderr)
        return EXIT_GENERICITY
    if not rep.degenerate:
        print("genericity failure: (dc1) c1*d2 - c2*d1 = 0 does not hold", file=sys.stderr)
        return EXIT_GENERICITY
    if not rep.new_regular:
        print("genericity failure: (newt) c1*l2 - c2*l1 != 0 does not hold", file=sys.stderr)
        return EXIT_GENERICITY
    return EXIT_OK


def cmd_transform(cfg: RunConfig, args) -> int:
    _require_generic(cfg)
    t = build_transform(cfg.system, cfg.k)
    mu = ("mu1", "mu2")
    print(f"mu1 = {format_series(t.forward[0])}")
    print(f"mu2 = {format_series(t.forward[1])}")
    print(f"alpha1 = {format_series(t.inverse[0], mu)}")
    print(f"alpha2 = {format_series(t.inverse[1], mu)}")
    print(f"L2_hat = {format_series(t.hat.l2, mu)}")
    print(f"beta2_hat = {format_series(t.hat.beta2, mu)}")
    print(f"beta1_hat = {format_series(t.hat.beta1, mu)}")
    rep = t.report()
    print("constants: " + ", ".join(f"{k}={v}" for k, v in rep["constants"].items()))
    print(f"det A0 = {rep['jacobian_det0']}")
    if not t.degenerate:
        print("note: (dc1) does not hold; the classical parameter change is already regular")
    if "json" in cfg.formats:
        path = write_text(cfg.out_dir / "transform.json", json_text(rep))
        print(f"wrote {path}")
    return EXIT_OK


def cmd_classify(cfg: RunConfig, args) -> int:
    _require_generic(cfg)
    t = build_transform(cfg.system, cfg.k)
    r = classify_alpha_point(cfg.system, t, args.alpha, cfg.sign_tol, cfg.delta_tol)
    print(f"mu=({fmt_sig(r.mu[0], 5)}, {fmt_sig(r.mu[1], 5)}) region={r.label}")
    signs = dict(zip(("L0", "Delta", "beta1", "beta2"), r.label.signs))
    print("signs: " + " ".join(f"{k}={'+' if v > 0 else '-' if v < 0 else '0'}" for k, v in signs.items()))
    print(f"beta1={fmt_sig(r.beta1)} beta2={fmt_sig(r.beta2)} L2={fmt_sig(r.l2)} Delta={fmt_sig(r.delta)}")
    print(f"hat: beta1={fmt_sig(r.hat_beta1)} beta2={fmt_sig(r.hat_beta2)} region={r.hat_label}")
    o = origin_stability(cfg.system, r.alpha, cfg.sign_tol)
    print(f"origin: {o.label} ({o.tier})")
    census = invariant_circles(cfg.system, r.alpha, cfg.sign_tol, cfg.delta_tol)
    for c in census.circles:
        print(f"circle: radius={fmt_sig(c.radius)} {c.stability}")
    return EXIT_OK


def cmd_diagram(cfg: RunConfig, args) -> int:
    _require_generic(cfg)
    t = build_transform(cfg.system, cfg.k)
    if not t.m2:
        raise GenericityError("m2 != 0", "m2 vanishes; boundary curves degenerate")
    window = cfg.window
    if args.window:
        window = ((args.window[0], args.window[1]), (args.window[2], args.window[3]))
    resolution = tuple(args.resolution) if args.resolution else cfg.resolution
    raster = diagram_raster(t, window, resolution, cfg.sign_tol)
    label = diagram_for(t)
    print(f"diagram={label.diagram} L0={t.L0} m2={t.m2} k1={t.k1}")
    print("regions present: " + ", ".join(str(r) for r in sorted(raster.labels_present())))
    if raster.curves is not None:
        print(f"B1: mu1 = {t.m2 ** 2} mu2^4 ({raster.curves.facts['B1_side']}); "
              f"B2: mu1 = {t.k1} mu2^2 ({raster.curves.facts['B2_side']})")
    if "csv" in cfg.formats:
        print(f"wrote {write_text(cfg.out_dir / 'regions.csv', region_grid_csv(raster))}")
        if raster.curves is not None:
            print(f"wrote {write_text(cfg.out_dir / 'curves.csv', curves_csv(raster.curves))}")
    if "svg" in cfg.formats:
        svg = diagram_svg(raster, f"bifurcation diagram {label.diagram}")
        print(f"wrote {write_text(cfg.out_dir / 'diagram.svg', svg)}")
    return EXIT_OK


def cmd_simulate(cfg: RunConfig, args) -> int:
    rho1, phi1 = args.start
    if rho1 < 0:
        raise ConfigError("--start", "rho must be nonnegative")
    rec = iterate_orbit(cfg.system, args.alpha, rho1, phi1, args.n_max, cfg.thresholds)
    print(f"outcome={rec.outcome} decided_by={rec.outcome.decided_by} steps={rec.n_steps} "
          f"final_rho={fmt_sig(float(rec.rho[-1]))}")
    try:
        radii = invariant_circles(cfg.system, args.alpha, cfg.sign_tol, cfg.delta_tol).radii
    except ChencinerError:
        radii = ()
    if "csv" in cfg.formats:
        print(f"wrote {write_text(cfg.out_dir / 'orbit.csv', orbit_csv(rec))}")
    if "svg" in cfg.formats:
        print(f"wrote {write_text(cfg.out_dir / 'orbit.svg', orbit_svg([rec], radii))}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args) -> int:
    _require_generic(cfg)
    t = build_transform(cfg.system, cfg.k)
    probes = cfg.probes
    if args.probe:
        probes = [Probe(r, 0.0, args.n_max) for r in args.probe]
    elif probes is None and args.n_max is not None:
        probes = None
    th = cfg.thresholds if args.n_max is None else replace(cfg.thresholds, n_max=args.n_max)
    report = verify_portrait(cfg.system, t, args.alpha, probes, th)
    print(f"region={report.region} status={report.status} census_ok={report.census_ok}")
    for pr in report.probes:
        exp = " | ".join(str(e) for e in pr.expected) or "-"
        print(f"probe rho1={fmt_sig(pr.probe.rho)}: expected {exp}; observed {pr.observed}")
    if "json" in cfg.formats:
        print(f"wrote {write_text(cfg.out_dir / 'portrait.json', json_text(report.as_dict()))}")
    return EXIT_MISMATCH if report.status == "fail" else EXIT_OK


def cmd_reproduce(cfg: RunConfig, args) -> int:
    delta_tol = cfg.delta_tol if cfg.delta_tol is not None else DELTA_TOL
    th = replace(cfg.thresholds, delta_tol=delta_tol)
    checks = reproduce_paper(th)
    text = summary_text(checks)
    print(text, end="")
    if "json" in cfg.formats:
        doc = [{"name": c.name, "expected": c.expected, "observed": c.observed, "ok": c.ok} for c in checks]
        print(f"wrote {write_text(cfg.out_dir / 'reproduce.json', json_text(doc))}")
    write_text(cfg.out_dir / "reproduce.txt", text)
    return EXIT_OK if all(c.ok for c in checks) else EXIT_MISMATCH


COMMANDS = {
    "validate": cmd_validate,
    "transform": cmd_transform,
    "classify": cmd_classify,
    "diagram": cmd_diagram,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "reproduce-paper": cmd_reproduce,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = _settings(args)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GenericityError as exc:
        print(f"genericity failure: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    except ChencinerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERICITY


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
