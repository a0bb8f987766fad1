"""Compare the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--points N] [--repeats R]

Times the two hot paths (closed-form grid evaluation and the quadrature
oracle) on identical inputs and reports best-of-R wall times plus the
worst numerical deviation between backends.
"""

import argparse
import time

import numpy as np

from wigfree import harmonic_oscillator_state, wigner_closed_form
from wigfree.kernels import available_backends, get_backend
from wigfree.oracle import _term_arrays, gauss_hermite_rule


def best_of(fn, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--order", type=int, default=128)
    args = ap.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    if "compiled" not in backends:
        print("compiled backend not built; nothing to compare")
        return

    psi = harmonic_oscillator_state(6)
    w = wigner_closed_form(psi)
    rng = np.random.default_rng(0)
    qs = np.ascontiguousarray(rng.uniform(-4, 4, args.points))
    ps = np.ascontiguousarray(rng.uniform(-4, 4, args.points))

    coeffs, s, mu = w._arrays
    inv_two_var = 1.0 / (2.0 * w.variance)
    results = {}
    for name in ("python", "compiled"):
        mod = get_backend(name)
        t, out = best_of(
            lambda: mod.eval_groups(qs, ps, coeffs, s, mu, inv_two_var, 2.0 * w.a, w.prefactor),
            args.repeats,
        )
        results[name] = (t, out)
        print(f"eval_groups  {name:8s} {args.points} pts: {t * 1e3:8.2f} ms")
    dev = float(np.max(np.abs(results["python"][1] - results["compiled"][1])))
    print(
        f"eval_groups  speedup x{results['python'][0] / results['compiled'][0]:.1f}, "
        f"max deviation {dev:.3e}"
    )

    t_nodes, t_weights = gauss_hermite_rule(args.order)
    c, m, b = _term_arrays(psi)
    cbar, bbar = np.conj(c), np.conj(b)
    results = {}
    for name in ("python", "compiled"):
        mod = get_backend(name)
        t, out = best_of(
            lambda: mod.quad_points(
                qs, ps, t_nodes, t_weights, c, m, b, cbar, bbar, psi.a, psi.hbar
            ),
            args.repeats,
        )
        results[name] = (t, out)
        print(f"quad_points  {name:8s} {args.points} pts x {args.order}: {t * 1e3:8.2f} ms")
    dev = float(np.max(np.abs(results["python"][1] - results["compiled"][1])))
    print(
        f"quad_points  speedup x{results['python'][0] / results['compiled'][0]:.1f}, "
        f"max deviation {dev:.3e}"
    )

    # single-point calls, the shape wigner_quadrature actually issues: here
    # per-call overhead dominates and the compiled path pulls far ahead
    q1 = np.array([0.7])
    p1 = np.array([-1.1])
    for name in ("python", "compiled"):
        mod = get_backend(name)

        def single(mod=mod):
            for _ in range(200):
                mod.quad_points(q1, p1, t_nodes, t_weights, c, m, b, cbar, bbar, psi.a, psi.hbar)

        t, _ = best_of(single, args.repeats)
        print(f"quad_points  {name:8s} 200 single-point calls: {t * 1e3:8.2f} ms")


if __name__ == "__main__":
    main()
