"""Command-line entry point: verification campaigns with JSON reports and
CSV outputs.

Subcommands: verify-algebra, gauge-scan, reproduce-tables, classical-sim,
basis-change, heisenberg-demo.  Exit code 0 if and only if every check of
the campaign passed.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import campaigns as cp
from . import classical as cl
from . import waves as wv
from .params import GaugeChoice, PhysicalParams, parse_poly

__all__ = ["main", "build_parser"]


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated reals")
    return float(parts[0]), float(parts[1])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    phys = common.add_argument_group("physical parameters")
    phys.add_argument("--mass", type=float, default=1.0)
    phys.add_argument("--charge", type=float, default=1.0)
    phys.add_argument("--bfield", type=float, default=1.0)
    phys.add_argument("--hbar", type=float, default=1.0)
    gauge = common.add_argument_group("gauge choice")
    gauge.add_argument("--alpha", type=float, default=0.0,
                       help="shear parameter of the gauge family")
    gauge.add_argument("--phi", type=str, default="0",
                       help="polynomial gauge function in u1, u2")
    gauge.add_argument("--x0", type=_pair, default=(0.0, 0.0),
                       help="plane origin 'x1,x2'")
    num = common.add_argument_group("numerics")
    num.add_argument("--nmax", type=int, default=16,
                     help="Fock truncation per sector")
    num.add_argument("--margin", type=int, default=3,
                     help="interior margin for truncated-operator checks")
    num.add_argument("--grid", type=int, default=80,
                     help="quadrature nodes per axis")
    num.add_argument("--scheme", choices=["gh", "simpson"], default="gh")
    num.add_argument("--tol", type=float, default=None,
                     help="override the campaign's primary tolerance")
    num.add_argument("--seed", type=int, default=7)
    out = common.add_argument_group("output")
    out.add_argument("--json-out", type=str, default=None)
    out.add_argument("--csv-out", type=str, default=None)
    out.add_argument("--no-timestamp", action="store_true",
                     help="omit the timestamp for byte-reproducible reports")
    out.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(
        prog="landaulab",
        description="Numerical verification of planar charged-particle "
                    "dynamics in a uniform magnetic field across a general "
                    "family of gauge choices.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify-algebra", parents=[common],
                   help="commutator suite and charge relation on the "
                        "truncated Fock space")
    scan = sub.add_parser("gauge-scan", parents=[common],
                          help="cross-gauge invariance of physical matrix "
                               "elements; canonical-operator decompositions")
    scan.add_argument("--dump-grid", action="store_true",
                      help="write a sampled wave function to --csv-out")
    scan.add_argument("--scan-levels", type=int, default=4,
                      help="largest level and angular index in the scan")
    sub.add_parser("reproduce-tables", parents=[common],
                   help="closed form vs operator matrices vs quadrature for "
                        "both eigenbasis tables")
    sim = sub.add_parser("classical-sim", parents=[common],
                         help="integrate an orbit and track the conserved "
                              "charges")
    sim.add_argument("--energy", type=float, default=None)
    sim.add_argument("--centre", type=_pair, default=None,
                     help="guiding centre 'x1,x2'")
    sim.add_argument("--dt", type=float, default=None)
    sim.add_argument("--steps", type=int, default=None)
    sim.add_argument("--method", choices=["boris", "rk4"], default="boris")
    bc = sub.add_parser("basis-change", parents=[common],
                        help="basis-change coefficients: closed form, "
                             "orthonormality, reconstruction")
    bc.add_argument("--dump-grid", action="store_true",
                    help="write a sampled wave function to --csv-out")
    sub.add_parser("heisenberg-demo", parents=[common],
                   help="flat-connection representation conjugation demo")
    return parser


def _physical(args) -> PhysicalParams:
    return PhysicalParams(m=args.mass, q=args.charge, B=args.bfield,
                          hbar=args.hbar)


def _gauge(args) -> GaugeChoice:
    return GaugeChoice(alpha=args.alpha, x0=args.x0,
                       phi=parse_poly(args.phi))


def _scheme(args) -> str:
    return "gauss_hermite" if args.scheme == "gh" else "simpson"


def _write_csv(path: str, header: list[str], rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _dump_grid_rows(psi: wv.WaveForm, extent: float, n: int = 41):
    xs = np.linspace(psi.origin[0] - extent, psi.origin[0] + extent, n)
    ys = np.linspace(psi.origin[1] - extent, psi.origin[1] + extent, n)
    rows = []
    for x in xs:
        vals = psi.value(x, ys)
        rows.extend((repr(float(x)), repr(float(y)),
                     repr(float(v.real)), repr(float(v.imag)))
                    for y, v in zip(ys, vals))
    return rows


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    p = _physical(args)
    g = _gauge(args)
    scheme = _scheme(args)
    rows = None
    csv_header = None

    if args.command == "verify-algebra":
        tol = args.tol if args.tol is not None else cp.ALGEBRA_TOL
        report = cp.run_verify_algebra(p, nmax=args.nmax, margin=args.margin,
                                       tol=tol, x0=args.x0)
    elif args.command == "gauge-scan":
        tol = args.tol if args.tol is not None else cp.QUAD_TOL
        gauges = cp.default_gauges(args.seed, x0=args.x0)
        report = cp.run_gauge_scan(p, gauges, nmax=args.nmax,
                                   grid_k=args.grid, scheme=scheme,
                                   seed=args.seed, tol_inv=tol, tol_dec=tol,
                                   n_top=args.scan_levels,
                                   l_top=args.scan_levels)
        if args.dump_grid:
            csv_header = ["x1", "x2", "re", "im"]
            rows = _dump_grid_rows(wv.fock_state(g, p, 1, 0),
                                   4.0 * p.magnetic_length)
    elif args.command == "reproduce-tables":
        tol = args.tol if args.tol is not None else cp.QUAD_TOL
        report, table_rows = cp.run_reproduce_tables(
            p, nmax=args.nmax, grid_k=args.grid, scheme=scheme, gauge=g,
            tol_quad=tol)
        csv_header = ["basis", "operator", "indices", "closed_form_re",
                      "closed_form_im", "computed_re", "computed_im",
                      "abs_error"]
        rows = [(basis, op, "/".join(str(i) for i in idx),
                 repr(complex(closed).real), repr(complex(closed).imag),
                 repr(complex(val).real), repr(complex(val).imag), repr(err))
                for basis, op, idx, closed, val, err in table_rows]
    elif args.command == "classical-sim":
        tol = args.tol if args.tol is not None else cp.DRIFT_TOL
        tp = None
        if args.energy is not None or args.centre is not None:
            tp = cl.TrajectoryParams(
                E=args.energy if args.energy is not None else 0.5,
                xc=args.centre if args.centre is not None else (0.0, 0.0))
        report, sim_rows = cp.run_classical_sim(
            p, tp, dt=args.dt, steps=args.steps, method=args.method,
            x0=args.x0, seed=args.seed, drift_tol=tol)
        csv_header = ["t", "x1", "x2", "p1", "p2", "E", "T1", "T2", "M3"]
        rows = [tuple(repr(float(v)) for v in r) for r in sim_rows]
    elif args.command == "basis-change":
        tol = args.tol if args.tol is not None else cp.QUAD_TOL
        report = cp.run_basis_change(p, gauge=g, grid_k=args.grid,
                                     scheme=scheme, seed=args.seed,
                                     tol_quad=tol)
        if args.dump_grid:
            csv_header = ["x1", "x2", "re", "im"]
            rows = _dump_grid_rows(wv.fock_state(g, p, 2, 1),
                                   4.0 * p.magnetic_length)
    elif args.command == "heisenberg-demo":
        tol = args.tol if args.tol is not None else 1e-10
        report = cp.run_heisenberg_demo(p, grid_k=args.grid, scheme=scheme,
                                        tol=tol)
    else:  # pragma: no cover - argparse enforces the choices
        raise SystemExit(2)

    if not args.no_timestamp:
        report.stamp()
    if not args.quiet:
        for line in report.summary_lines():
            print(line)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(report.to_json())
    if args.csv_out and rows is not None:
        _write_csv(args.csv_out, csv_header, rows)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
