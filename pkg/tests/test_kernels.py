"""Backend parity between the compiled kernels and the numpy fallback."""

import os
import subprocess
import sys

import numpy as np
import pytest

from wigfree import kernels
from wigfree.oracle import gauss_hermite_rule

HAVE_COMPILED = "compiled" in kernels.available_backends()


def _random_group_problem(rng, n_groups=3, n_points=40):
    nx, ny = 4, 5
    coeffs = rng.standard_normal((n_groups, nx, ny)) + 1j * rng.standard_normal((n_groups, nx, ny))
    s = rng.standard_normal(n_groups) + 1j * rng.standard_normal(n_groups)
    mu = rng.standard_normal(n_groups) + 1j * rng.standard_normal(n_groups)
    qs = np.ascontiguousarray(rng.uniform(-3, 3, n_points))
    ps = np.ascontiguousarray(rng.uniform(-3, 3, n_points))
    return qs, ps, np.ascontiguousarray(coeffs), np.ascontiguousarray(s), np.ascontiguousarray(mu)


def test_python_backend_always_present():
    assert "python" in kernels.available_backends()
    assert kernels.get_backend("python").BACKEND_NAME == "python"
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernels not built")
def test_eval_groups_backends_agree():
    rng = np.random.default_rng(11)
    py = kernels.get_backend("python")
    cc = kernels.get_backend("compiled")
    for _ in range(5):
        qs, ps, coeffs, s, mu = _random_group_problem(rng)
        args = (qs, ps, coeffs, s, mu, 0.45, 1.6, 0.37)
        a = py.eval_groups(*args)
        b = cc.eval_groups(*args)
        scale = max(1.0, float(np.max(np.abs(a))))
        assert np.max(np.abs(a - b)) < 1e-12 * scale


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernels not built")
def test_quad_points_backends_agree():
    rng = np.random.default_rng(12)
    py = kernels.get_backend("python")
    cc = kernels.get_backend("compiled")
    t, w = gauss_hermite_rule(48)
    for _ in range(4):
        nt = 3
        c = rng.standard_normal(nt) + 1j * rng.standard_normal(nt)
        m = rng.integers(0, 5, nt).astype(np.int64)
        b = rng.standard_normal(nt) * 0.8 + 1j * rng.standard_normal(nt) * 0.8
        qs = np.ascontiguousarray(rng.uniform(-2, 2, 25))
        ps = np.ascontiguousarray(rng.uniform(-2, 2, 25))
        args = (qs, ps, t, w, np.ascontiguousarray(c), np.ascontiguousarray(m),
                np.ascontiguousarray(b), np.ascontiguousarray(np.conj(c)),
                np.ascontiguousarray(np.conj(b)), 0.9, 1.0)
        a = py.quad_points(*args)
        bvals = cc.quad_points(*args)
        scale = max(1.0, float(np.max(np.abs(a))))
        assert np.max(np.abs(a - bvals)) < 1e-12 * scale


def test_env_dispatch_python():
    env = dict(os.environ, WIGFREE_KERNELS="python")
    out = subprocess.run(
        [sys.executable, "-c", "from wigfree import kernels; print(kernels.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert out.returncode == 0
    assert out.stdout.strip() == "python"


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernels not built")
def test_env_dispatch_compiled():
    env = dict(os.environ, WIGFREE_KERNELS="compiled")
    out = subprocess.run(
        [sys.executable, "-c", "from wigfree import kernels; print(kernels.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert out.returncode == 0
    assert out.stdout.strip() == "compiled"


def test_env_dispatch_rejects_unknown():
    env = dict(os.environ, WIGFREE_KERNELS="cuda")
    out = subprocess.run(
        [sys.executable, "-c", "import wigfree.kernels"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert out.returncode != 0
