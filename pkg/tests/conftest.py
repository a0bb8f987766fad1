"""Shared fixtures and the frozen random-state family used across the suite."""

import numpy as np
import pytest

from wigfree import GaussExpPolyWavefunction, WavefunctionTerm

# Frozen sampling distribution for randomized cross-checks.  Kept mild on
# purpose: |b| <= ~1.7 and powers <= 4 keep the quadrature oracle firmly
# inside its comfort zone so disagreement means a real bug, not ill
# conditioning.
FAMILY_SEED = 20260822


def random_wavefunction(rng, n_terms=3):
    a = float(rng.uniform(0.4, 1.2))
    terms = []
    for _ in range(n_terms):
        c = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        m = int(rng.integers(0, 5))
        b = complex(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2))
        terms.append(WavefunctionTerm(c, m, b))
    return GaussExpPolyWavefunction(a=a, terms=terms)


@pytest.fixture
def rng():
    return np.random.default_rng(FAMILY_SEED)


@pytest.fixture
def random_states(rng):
    return [random_wavefunction(rng) for _ in range(20)]
