"""Command-line surface.

Subcommands:

  eval     evaluate W at one phase-space point (closed form, quadrature, or both)
  grid     evaluate W on a grid and emit CSV, JSON, or a PGM heatmap
  check    run normalization / marginal / realness / oracle comparisons
  builtin  list built-in systems or emit one as an editable spec file

Wavefunction spec files are JSON:

  {"hbar": 1.0, "a": 0.5,
   "terms": [{"coeff": [re, im], "power": m, "rate": [re, im]}, ...]}

Exit codes: 0 success, 1 failed check or runtime failure, 2 rejected input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import oracle
from .engine import (
    GaussExpPolyWavefunction,
    analytic_integral,
    marginal_q,
    norm_squared,
    wigner_closed_form,
)
from .errors import (
    DegreeCapExceeded,
    FractionalPowerUnsupported,
    InvalidWavefunction,
    NoConvergence,
    RealnessViolation,
    WigfreeError,
)
from .systems import (
    PacketParams,
    SingularParams,
    gaussian_packet,
    harmonic_oscillator_state,
    singular_oscillator_state,
)

BUILTIN_NAMES = ("ho", "packet", "singular", "anyon")


class SpecFormatError(WigfreeError, ValueError):
    """A wavefunction spec file failed to parse or validate."""


# --------------------------------------------------------------------------
# Spec file handling


def spec_to_dict(psi: GaussExpPolyWavefunction) -> dict:
    return {
        "hbar": psi.hbar,
        "a": psi.a,
        "terms": [
            {
                "coeff": [t.coeff.real, t.coeff.imag],
                "power": t.power,
                "rate": [t.rate.real, t.rate.imag],
            }
            for t in psi.terms
        ],
    }


def _pair(value, where: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise SpecFormatError(f"{where} must be a [re, im] pair of numbers")
    return complex(float(value[0]), float(value[1]))


def spec_from_dict(data, where: str = "<spec>") -> GaussExpPolyWavefunction:
    if not isinstance(data, dict):
        raise SpecFormatError(f"{where}: top level must be an object")
    unknown = set(data) - {"hbar", "a", "terms"}
    if unknown:
        raise SpecFormatError(f"{where}: unknown fields {sorted(unknown)}")
    if "a" not in data:
        raise SpecFormatError(f"{where}: missing required field 'a'")
    a = data["a"]
    if not isinstance(a, (int, float)) or isinstance(a, bool):
        raise SpecFormatError(f"{where}: 'a' must be a number")
    hbar = data.get("hbar", 1.0)
    if not isinstance(hbar, (int, float)) or isinstance(hbar, bool):
        raise SpecFormatError(f"{where}: 'hbar' must be a number")
    terms_raw = data.get("terms")
    if not isinstance(terms_raw, list) or not terms_raw:
        raise SpecFormatError(f"{where}: 'terms' must be a nonempty list")
    terms = []
    for i, t in enumerate(terms_raw):
        label = f"{where}: terms[{i}]"
        if not isinstance(t, dict):
            raise SpecFormatError(f"{label} must be an object")
        extra = set(t) - {"coeff", "power", "rate"}
        if extra:
            raise SpecFormatError(f"{label} has unknown fields {sorted(extra)}")
        if "coeff" not in t or "power" not in t:
            raise SpecFormatError(f"{label} needs 'coeff' and 'power'")
        coeff = _pair(t["coeff"], f"{label}.coeff")
        power = t["power"]
        if isinstance(power, bool) or not isinstance(power, (int, float)):
            raise SpecFormatError(f"{label}.power must be a number")
        rate = _pair(t.get("rate", [0.0, 0.0]), f"{label}.rate")
        # power passes through untouched so fractional values surface the
        # smoothness diagnostic from the wavefunction constructor
        terms.append((coeff, power, rate))
    return GaussExpPolyWavefunction(a, terms, hbar)


def load_spec_file(path: str) -> GaussExpPolyWavefunction:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecFormatError(f"{path}: cannot read spec file ({exc})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"
        ) from None
    return spec_from_dict(data, where=path)


# --------------------------------------------------------------------------
# Grid plumbing


@dataclass(frozen=True)
class GridSpec:
    q_min: float = -4.0
    q_max: float = 4.0
    p_min: float = -4.0
    p_max: float = 4.0
    nq: int = 17
    np: int = 17

    def __post_init__(self):
        if not self.q_min < self.q_max:
            raise ValueError("grid needs q_min < q_max")
        if not self.p_min < self.p_max:
            raise ValueError("grid needs p_min < p_max")
        if self.nq < 2 or self.np < 2:
            raise ValueError("grid needs nq >= 2 and np >= 2")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.q_min, self.q_max, self.nq),
            np.linspace(self.p_min, self.p_max, self.np),
        )


def _fmt(x: float) -> str:
    # 17 significant digits round-trips doubles exactly
    return f"{x:.17g}"


def render_csv(qs, ps, values) -> str:
    lines = ["q,p,W"]
    for i, q in enumerate(qs):
        for j, p in enumerate(ps):
            lines.append(f"{_fmt(q)},{_fmt(p)},{_fmt(values[i][j])}")
    return "\n".join(lines) + "\n"


def render_json(grid: GridSpec, mode: str, values) -> str:
    doc = {
        "grid": {
            "q_min": grid.q_min,
            "q_max": grid.q_max,
            "p_min": grid.p_min,
            "p_max": grid.p_max,
            "nq": grid.nq,
            "np": grid.np,
        },
        "mode": mode,
        "values": [[float(v) for v in row] for row in values],
    }
    return json.dumps(doc, indent=2) + "\n"


def render_pgm(grid: GridSpec, values) -> str:
    arr = np.asarray(values, dtype=float)
    lo = float(arr.min())
    hi = float(arr.max())
    if hi > lo:
        pixels = np.rint((arr - lo) / (hi - lo) * 255).astype(int)
    else:
        pixels = np.zeros(arr.shape, dtype=int)
    lines = [
        "P2",
        f"# W range [{_fmt(lo)}, {_fmt(hi)}] mapped linearly to [0, 255]",
        "# rows: p from p_max (top) to p_min; columns: q from q_min to q_max",
        f"{grid.nq} {grid.np}",
        "255",
    ]
    for j in range(grid.np - 1, -1, -1):
        lines.append(" ".join(str(int(pixels[i, j])) for i in range(grid.nq)))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Input resolution


def resolve_wavefunction(args) -> GaussExpPolyWavefunction:
    if args.spec is not None and args.builtin is not None:
        raise SpecFormatError("give either a spec file or --builtin, not both")
    if args.spec is not None:
        return load_spec_file(args.spec)
    if args.builtin is not None:
        return builtin_wavefunction(args)
    raise SpecFormatError("a spec file or --builtin NAME is required")


def builtin_wavefunction(args) -> GaussExpPolyWavefunction:
    name = args.builtin
    if name == "ho":
        return harmonic_oscillator_state(args.n, args.hbar)
    if name == "packet":
        return gaussian_packet(
            PacketParams(args.q0, args.p0, args.dq, args.hbar)
        )
    if name == "singular":
        return singular_oscillator_state(
            SingularParams(args.n, args.alpha, args.hbar)
        )
    if name == "anyon":
        raise FractionalPowerUnsupported(
            "the anyon state carries a q^(1/2) factor, which violates the "
            "smoothness condition the closed-form construction requires; "
            "no spec can be emitted for it"
        )
    raise SpecFormatError(f"unknown builtin {name!r}")


def _add_source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("spec", nargs="?", default=None, help="wavefunction spec file (JSON)")
    p.add_argument(
        "--builtin",
        choices=BUILTIN_NAMES,
        default=None,
        help="use a built-in system instead of a spec file",
    )
    _add_builtin_params(p)


def _add_builtin_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=0, help="quantum number (ho, singular)")
    p.add_argument(
        "--alpha",
        type=float,
        default=1.0,
        help="singular-oscillator exponent (integer; fractional is rejected)",
    )
    p.add_argument("--q0", type=float, default=0.0, help="packet center position")
    p.add_argument("--p0", type=float, default=0.0, help="packet center momentum")
    p.add_argument("--dq", type=float, default=1.0, help="packet width")
    p.add_argument("--hbar", type=float, default=1.0, help="hbar for built-ins")


# --------------------------------------------------------------------------
# Subcommands


def cmd_eval(args) -> int:
    psi = resolve_wavefunction(args)
    out = []
    if args.mode in ("closed", "both"):
        w = wigner_closed_form(psi)
        closed = w.evaluate(args.q, args.p)
        out.append(f"closed {_fmt(closed)}")
    if args.mode in ("quad", "both"):
        quad = oracle.wigner_quadrature(psi, args.q, args.p, order=args.order)
        out.append(f"quad {_fmt(quad)}")
    if args.mode == "both":
        out.append(f"diff {abs(closed - quad):.3e}")
    print("\n".join(out))
    return 0


def cmd_grid(args) -> int:
    psi = resolve_wavefunction(args)
    grid = GridSpec(
        args.q_min, args.q_max, args.p_min, args.p_max, args.nq, args.np
    )
    qs, ps = grid.axes()
    if args.mode == "closed":
        values = wigner_closed_form(psi).evaluate_grid(qs, ps)
    else:
        values = oracle.wigner_quadrature_grid(psi, qs, ps, order=args.order)
    if args.format == "csv":
        text = render_csv(qs, ps, values)
    elif args.format == "json":
        text = render_json(grid, args.mode, values)
    else:
        text = render_pgm(grid, values)
    if args.output is None:
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    return 0


def cmd_check(args) -> int:
    psi = resolve_wavefunction(args)
    tol = args.tol
    w = wigner_closed_form(psi)
    rows: list[tuple[str, float, float]] = []

    ni = analytic_integral(w)
    ns = norm_squared(psi)
    rows.append(
        ("normalization", abs(ni - ns) / max(1.0, abs(ns)), tol)
    )

    worst = 0.0
    for q in (-2.0, -1.0, 0.0, 1.0, 2.0):
        worst = max(worst, abs(marginal_q(w, q) - abs(psi.psi(q)) ** 2))
    rows.append(("q-marginal", worst, tol))

    axis = np.linspace(-3.0, 3.0, 5)
    qq, pp = np.meshgrid(axis, axis, indexing="ij")
    vals = w.evaluate_points_complex(qq.ravel(), pp.ravel())
    residue = float(
        np.max(np.abs(vals.imag) / (1.0 + np.abs(vals.real)))
    )
    rows.append(("realness", residue, 1e-10))

    qs, ps = np.linspace(-4.0, 4.0, 17), np.linspace(-4.0, 4.0, 17)
    closed = w.evaluate_grid(qs, ps)
    quad = oracle.wigner_quadrature_grid(psi, qs, ps, order=args.order)
    dev = float(np.max(np.abs(closed - quad) / np.maximum(1.0, np.abs(closed))))
    rows.append(("oracle-equivalence", dev, tol))

    if args.builtin == "packet":
        centered = wigner_closed_form(
            gaussian_packet(PacketParams(0.0, 0.0, args.dq, args.hbar))
        )
        moved = w.evaluate_grid(qs, ps)
        ref = centered.evaluate_grid(qs - args.q0, ps - args.p0)
        rows.append(
            ("translation-covariance", float(np.max(np.abs(moved - ref))), tol)
        )

    ok = True
    for name, err, bound in rows:
        good = err <= bound
        ok = ok and good
        print(f"{'PASS' if good else 'FAIL'} {name:24s} max_err={err:.3e} (tol {bound:g})")
    print(f"overall: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_builtin(args) -> int:
    if args.action == "list":
        print("ho       harmonic-oscillator eigenstate (--n, --hbar)")
        print("packet   Gaussian packet (--q0, --p0, --dq, --hbar)")
        print("singular singular-oscillator eigenstate (--alpha, --n, --hbar)")
        print("anyon    q^(1/2) state; emit refuses (outside the smooth class)")
        return 0
    # emit
    psi = builtin_wavefunction(args)
    print(json.dumps(spec_to_dict(psi), indent=2))
    return 0


# --------------------------------------------------------------------------
# Parser assembly


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wigfree",
        description="Closed-form Wigner functions with a quadrature cross-check.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate W at one point")
    _add_source_args(p_eval)
    p_eval.add_argument("--q", type=float, required=True)
    p_eval.add_argument("--p", type=float, required=True)
    p_eval.add_argument(
        "--mode", choices=("closed", "quad", "both"), default="closed"
    )
    p_eval.add_argument("--order", type=int, default=64, help="quadrature order")
    p_eval.set_defaults(func=cmd_eval)

    p_grid = sub.add_parser("grid", help="evaluate W on a grid")
    _add_source_args(p_grid)
    p_grid.add_argument("--q-min", type=float, default=-4.0)
    p_grid.add_argument("--q-max", type=float, default=4.0)
    p_grid.add_argument("--p-min", type=float, default=-4.0)
    p_grid.add_argument("--p-max", type=float, default=4.0)
    p_grid.add_argument("--nq", type=int, default=17)
    p_grid.add_argument("--np", type=int, default=17)
    p_grid.add_argument(
        "--format", choices=("csv", "json", "pgm"), default="csv"
    )
    p_grid.add_argument("--mode", choices=("closed", "quad"), default="closed")
    p_grid.add_argument("--order", type=int, default=64, help="quadrature order")
    p_grid.add_argument("--output", default=None, help="output file (default stdout)")
    p_grid.set_defaults(func=cmd_grid)

    p_check = sub.add_parser("check", help="run consistency checks")
    _add_source_args(p_check)
    p_check.add_argument("--tol", type=float, default=1e-8)
    p_check.add_argument("--order", type=int, default=256, help="oracle order")
    p_check.set_defaults(func=cmd_check)

    p_b = sub.add_parser("builtin", help="list or emit built-in systems")
    p_b.add_argument("action", choices=("list", "emit"))
    p_b.add_argument(
        "builtin", nargs="?", choices=BUILTIN_NAMES, default=None,
        metavar="name",
    )
    _add_builtin_params(p_b)
    p_b.set_defaults(func=cmd_builtin)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.func is cmd_builtin and args.action == "emit" and args.builtin is None:
        parser.error("builtin emit requires a system name")
    try:
        return args.func(args)
    except (SpecFormatError, InvalidWavefunction, DegreeCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoConvergence, RealnessViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())
