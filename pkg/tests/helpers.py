"""Shared strategies and small builders for the test suite."""

from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from inertia_lab.hermitian import HermitianMatrix
from inertia_lab.scalars import GaussianRational

small_ints = st.integers(min_value=-5, max_value=5)


@st.composite
def exact_hermitian(draw, min_dim=1, max_dim=6, dim=None):
    d = dim if dim is not None else draw(st.integers(min_dim, max_dim))
    arr = np.empty((d, d), dtype=object)
    for i in range(d):
        arr[i, i] = GaussianRational(draw(small_ints))
        for j in range(i + 1, d):
            z = GaussianRational(Fraction(draw(small_ints), draw(st.integers(1, 3))), draw(small_ints))
            arr[i, j] = z
            arr[j, i] = z.conjugate()
    return HermitianMatrix(arr)


@st.composite
def exact_invertible(draw, dim):
    """Unit lower-triangular times permutation: always invertible over Q[i]."""
    L = np.eye(dim, dtype=int).astype(object)
    for i in range(dim):
        for j in range(i):
            L[i, j] = draw(small_ints)
    perm = draw(st.permutations(range(dim)))
    return L[list(perm)]


def random_hermitian(rng, d, scale=1.0):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return HermitianMatrix(scale * (G + G.conj().T))


def random_state(rng, d):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return HermitianMatrix(G @ G.conj().T)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


# PASS/FAIL lines from the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []
