"""Acceptance gate: one criterion per test, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines.
Tolerances are pinned here on purpose; loosening them is not a fix.
"""

import json
import math
import os
import subprocess
import sys
import time

import numpy as np

from wigfree import (
    GaussExpPolyWavefunction,
    PacketParams,
    SingularParams,
    WavefunctionTerm,
    analytic_integral,
    gaussian_packet,
    harmonic_oscillator_reference,
    harmonic_oscillator_state,
    hermite_product_identity_check,
    marginal_q,
    norm_squared,
    packet_reference,
    singular_oscillator_state,
    wigner_closed_form,
    wigner_quadrature_grid,
)
from wigfree.engine import PState, apply_operator, groups_allclose, substitute_operator
from wigfree.oracle import chi_quadrature
from wigfree import chi_closed_form
from wigfree.polyalg import ComplexPolynomial, hermite_to_monomial, monomial_to_hermite
from wigfree.engine import wavefunction_from_polynomial, phase_space_allclose
from conftest import FAMILY_SEED, random_wavefunction

GRID = np.linspace(-4.0, 4.0, 17)


def _verdict(name: str, ok: bool, detail: str):
    print(f"{'PASS' if ok else 'FAIL'} {name:32s} {detail}")
    assert ok, f"{name}: {detail}"


def test_criterion_oscillator_family():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(9):
        w = wigner_closed_form(harmonic_oscillator_state(n))
        for q in GRID:
            for p in GRID:
                ref = harmonic_oscillator_reference(n, q, p)
                err = abs(w.evaluate(q, p) - ref) / (1.0 + abs(ref))
                worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed <= 5.0
    _verdict(
        "oscillator-family",
        ok,
        f"n<=8 vs textbook reference: max_err={worst:.3e} (tol 1e-10), {elapsed:.2f}s (budget 5s)",
    )


def test_criterion_coherent_packets():
    t0 = time.perf_counter()
    worst = 0.0
    peak_err = 0.0
    for q0, p0, dq in [(0.0, 0.0, 1.0), (1.0, 2.0, 0.7), (-2.0, 0.5, 1.3)]:
        params = PacketParams(q0=q0, p0=p0, dq=dq)
        w = wigner_closed_form(gaussian_packet(params))
        for q in np.linspace(q0 - 3, q0 + 3, 13):
            for p in np.linspace(p0 - 3, p0 + 3, 13):
                ref = packet_reference(params, q, p)
                worst = max(worst, abs(w.evaluate(q, p) - ref) / (1.0 + abs(ref)))
        peak_err = max(peak_err, abs(w.evaluate(q0, p0) - 1.0 / math.pi))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and peak_err <= 1e-12 and elapsed <= 2.0
    _verdict(
        "coherent-packets",
        ok,
        f"max_err={worst:.3e} (tol 1e-10), peak_err={peak_err:.3e} (tol 1e-12), {elapsed:.2f}s (budget 2s)",
    )


def test_criterion_oracle_equivalence():
    t0 = time.perf_counter()
    states = [harmonic_oscillator_state(n) for n in range(9)]
    states += [
        gaussian_packet(PacketParams(0.0, 0.0, 1.0)),
        gaussian_packet(PacketParams(1.0, 2.0, 0.7)),
        gaussian_packet(PacketParams(-2.0, 0.5, 1.3)),
    ]
    states += [
        singular_oscillator_state(SingularParams(n=n, alpha=alpha))
        for alpha in (1, 2, 3)
        for n in range(4)
    ]
    rng = np.random.default_rng(FAMILY_SEED)
    states += [random_wavefunction(rng) for _ in range(20)]
    worst = 0.0
    for psi in states:
        w = wigner_closed_form(psi)
        closed = w.evaluate_grid(GRID, GRID)
        quad = wigner_quadrature_grid(psi, GRID, GRID, order=256)
        scale = np.maximum(1.0, np.abs(quad))
        worst = max(worst, float(np.max(np.abs(closed - quad) / scale)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed <= 60.0
    _verdict(
        "oracle-equivalence",
        ok,
        f"{len(states)} states, order 256: max_err={worst:.3e} (tol 1e-8), {elapsed:.1f}s (budget 60s)",
    )


def test_criterion_product_identity():
    worst = 0.0
    for n in range(7):
        worst = max(worst, hermite_product_identity_check(n))
    ok = worst <= 1e-8
    _verdict(
        "product-identity",
        ok,
        f"n<=6 operator vs closed form: max_err={worst:.3e} (tol 1e-8)",
    )


def test_criterion_kernel_moments():
    worst_rel = 0.0
    worst_abs = 0.0
    for k in range(9):
        for a in (0.5, 1.0, 2.0):
            for hbar in (0.5, 1.0):
                for p in (0.0, 1.0, -1.0, 2.5, -2.5):
                    closed = chi_closed_form(k, p, a, hbar)
                    quad = chi_quadrature(k, p, a, hbar, order=128)
                    if abs(closed) > 1e-8:
                        worst_rel = max(worst_rel, abs(quad - closed) / abs(closed))
                    else:
                        worst_abs = max(worst_abs, abs(quad - closed))
    ok = worst_rel <= 1e-9 and worst_abs <= 1e-12
    _verdict(
        "kernel-moments",
        ok,
        f"k<=8: rel={worst_rel:.3e} (tol 1e-9), parity_zero={worst_abs:.3e} (tol 1e-12)",
    )


def test_criterion_random_family_invariants():
    rng = np.random.default_rng(FAMILY_SEED)
    probe = np.linspace(-3.0, 3.0, 5)
    qq, pp = np.meshgrid(probe, probe, indexing="ij")
    worst_norm = worst_marg = worst_imag = 0.0
    commute_ok = True
    for _ in range(50):
        psi = random_wavefunction(rng)
        w = wigner_closed_form(psi)
        n1 = norm_squared(psi)
        n2 = analytic_integral(w)
        worst_norm = max(worst_norm, abs(n1 - n2) / max(abs(n1), 1e-300))
        for q in (-1.0, 0.0, 1.5):
            want = abs(psi.psi(q)) ** 2
            worst_marg = max(worst_marg, abs(marginal_q(w, q) - want) / (1.0 + want))
        vals = w.evaluate_points_complex(qq.ravel(), pp.ravel())
        scale = max(1.0, float(np.max(np.abs(vals))))
        worst_imag = max(worst_imag, float(np.max(np.abs(vals.imag))) / scale)
        fwd = substitute_operator(psi.terms, +1, hbar=psi.hbar)
        bwd = substitute_operator(psi.terms, -1, hbar=psi.hbar, conjugated=True)
        seed = PState.seed(psi.a, psi.hbar)
        ab = apply_operator(bwd, apply_operator(fwd, seed))
        ba = apply_operator(fwd, apply_operator(bwd, seed))
        commute_ok = commute_ok and groups_allclose(ab.groups, ba.groups, rtol=1e-12)
    ok = (
        worst_norm <= 1e-12
        and worst_marg <= 1e-10
        and worst_imag <= 1e-10
        and commute_ok
    )
    _verdict(
        "random-family-invariants",
        ok,
        f"50 states: norm={worst_norm:.3e} (tol 1e-12), marginal={worst_marg:.3e} "
        f"(tol 1e-10), imag={worst_imag:.3e} (tol 1e-10), commute={commute_ok}",
    )


def test_criterion_cli_smoothness_rejection(tmp_path):
    anyon = subprocess.run(
        [sys.executable, "-m", "wigfree", "eval", "--builtin", "anyon", "--q", "0", "--p", "0"],
        capture_output=True,
        text=True,
        env=dict(os.environ),
    )
    frac = subprocess.run(
        [
            sys.executable, "-m", "wigfree", "eval", "--builtin", "singular",
            "--alpha", "1.5", "--q", "0", "--p", "0",
        ],
        capture_output=True,
        text=True,
        env=dict(os.environ),
    )
    spec = tmp_path / "frac.json"
    spec.write_text(json.dumps({"a": 1.0, "terms": [{"coeff": [1, 0], "power": 0.5}]}))
    spec_run = subprocess.run(
        [sys.executable, "-m", "wigfree", "eval", str(spec), "--q", "0", "--p", "0"],
        capture_output=True,
        text=True,
        env=dict(os.environ),
    )
    ok = (
        anyon.returncode == 2
        and "smoothness condition" in anyon.stderr
        and frac.returncode == 2
        and "smoothness condition" in frac.stderr
        and spec_run.returncode == 2
        and "smoothness" in spec_run.stderr
    )
    _verdict(
        "cli-smoothness-rejection",
        ok,
        f"anyon rc={anyon.returncode}, alpha=1.5 rc={frac.returncode}, "
        f"spec rc={spec_run.returncode} (want 2 + smoothness diagnostic)",
    )


def test_criterion_basis_round_trip():
    rng = np.random.default_rng(FAMILY_SEED + 1)
    worst_coeff = 0.0
    invariant_ok = True
    for _ in range(25):
        deg = int(rng.integers(0, 13))
        coeffs = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        poly = ComplexPolynomial(coeffs)
        back = hermite_to_monomial(monomial_to_hermite(poly))
        scale = max(1.0, float(np.max(np.abs(coeffs))))
        n = max(len(back.coeffs), len(poly.coeffs), 1)
        diff = np.zeros(n, dtype=complex)
        diff[: len(back.coeffs)] = back.coeffs
        diff[: len(poly.coeffs)] -= poly.coeffs
        worst_coeff = max(worst_coeff, float(np.max(np.abs(diff))) / scale)
        if deg <= 6:
            w1 = wigner_closed_form(wavefunction_from_polynomial(0.8, poly))
            w2 = wigner_closed_form(wavefunction_from_polynomial(0.8, back))
            invariant_ok = invariant_ok and phase_space_allclose(w1, w2, rtol=1e-12)
    ok = worst_coeff <= 1e-12 and invariant_ok
    _verdict(
        "basis-round-trip",
        ok,
        f"coeff_err={worst_coeff:.3e} (tol 1e-12), transform invariant={invariant_ok}",
    )
