import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import exact_invertible, random_state, seeds
from inertia_lab.bipartite import BipartiteShape, local_conjugate, partial_transpose
from inertia_lab.constructors import bell, paper_examples_2x3
from inertia_lab.errors import BadSpec, NotNPT
from inertia_lab.generators import enumerate_N2n, expected_N2n
from inertia_lab.hermitian import HermitianMatrix, Inertia
from inertia_lab.slocc import (
    COND_CAP,
    classify,
    pt_equivariance_check,
    random_local_invertible,
    strong_inequivalence,
)

S22, S23 = BipartiteShape(2, 2), BipartiteShape(2, 3)


def test_random_local_invertible_deterministic():
    L1, R1 = random_local_invertible(S23, 42)
    L2, R2 = random_local_invertible(S23, 42)
    np.testing.assert_array_equal(L1, L2)
    np.testing.assert_array_equal(R1, R2)
    assert L1.shape == (2, 2) and R1.shape == (3, 3)
    assert np.linalg.cond(L1) < COND_CAP and np.linalg.cond(R1) < COND_CAP


def test_generator_advances():
    rng = np.random.default_rng(0)
    L1, _ = random_local_invertible(S22, rng)
    L2, _ = random_local_invertible(S22, rng)
    assert not np.allclose(L1, L2)


def test_bell_label_stable_under_100_draws():
    rho, shape = bell()
    rng = np.random.default_rng(1)
    for _ in range(100):
        L, R = random_local_invertible(shape, rng)
        assert classify(local_conjugate(rho, shape, L, R), shape).pt_inertia == (1, 0, 3)


@settings(max_examples=40)
@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 3)]))
def test_equivariance_float(seed, mn):
    shape = BipartiteShape(*mn)
    rng = np.random.default_rng(seed)
    rho = random_state(rng, shape.dim)
    L, R = random_local_invertible(shape, rng)
    assert pt_equivariance_check(rho, shape, L, R)


def test_equivariance_needs_conjugate():
    # with complex L the plain (not conjugated) form generally fails
    rho = random_state(np.random.default_rng(2), 4)
    L, R = random_local_invertible(S22, 3)
    lhs = partial_transpose(local_conjugate(rho, S22, L, R), S22).to_numpy()
    wrong = local_conjugate(partial_transpose(rho, S22), S22, L, R).to_numpy()
    assert np.abs(lhs - wrong).max() > 1e-3


@settings(max_examples=20)
@given(st.data())
def test_equivariance_exact(data):
    rho, In = paper_examples_2x3()[data.draw(st.integers(0, 3))]
    L = data.draw(exact_invertible(2))
    R = data.draw(exact_invertible(3))
    assert pt_equivariance_check(rho, S23, L, R)
    assert classify(local_conjugate(rho, S23, L, R), S23).pt_inertia == In


def test_classify():
    for rho, In in paper_examples_2x3():
        c = classify(rho, S23)
        assert c.pt_inertia == In
        assert c.to_dict() == {"label": list(In), "shape": [2, 3]}
    with pytest.raises(NotNPT):
        classify(HermitianMatrix.identity(4), S22)


def test_classify_enumerated_under_conjugation():
    rng = np.random.default_rng(4)
    for cert in enumerate_N2n(4):
        for _ in range(5):
            L, R = random_local_invertible(cert.shape, rng)
            got = classify(local_conjugate(cert.state.to_float(), cert.shape, L, R), cert.shape)
            assert got.pt_inertia == cert.claimed


# strong inequivalence


def test_strong_inequivalence_examples():
    assert strong_inequivalence(Inertia(1, 2, 3), Inertia(2, 0, 4), N=2)
    assert strong_inequivalence(Inertia(1, 2, 3), Inertia(1, 1, 4))
    assert not strong_inequivalence(Inertia(1, 0, 3), Inertia(1, 0, 3), N=3)
    assert strong_inequivalence(Inertia(1, 0, 3), Inertia(1, 2, 3))


def test_strong_inequivalence_shapes():
    assert not strong_inequivalence(Inertia(1, 2, 3), Inertia(1, 2, 3), S23, S23)
    assert strong_inequivalence(Inertia(1, 0, 3), Inertia(1, 0, 3), S22, BipartiteShape(2, 2)) is False


@pytest.mark.parametrize(
    "args",
    [
        (Inertia(1, 0, 8), Inertia(2, 0, 7), BipartiteShape(3, 3), BipartiteShape(3, 3)),
        (Inertia(2, 0, 2), Inertia(1, 0, 3)),
        (Inertia(1, 2, 3), Inertia(1, 1, 4), BipartiteShape(2, 2), S23),
        (Inertia(1, 0, 4), Inertia(1, 0, 3)),
    ],
)
def test_strong_inequivalence_bad_input(args):
    with pytest.raises(BadSpec):
        strong_inequivalence(*args)


def test_strong_inequivalence_needs_positive_N():
    with pytest.raises(BadSpec):
        strong_inequivalence(Inertia(1, 0, 3), Inertia(1, 0, 3), N=0)


@given(st.integers(2, 7), st.data())
def test_distinct_labels_stay_distinct(n, data):
    labels = expected_N2n(n)
    i = data.draw(st.integers(0, len(labels) - 1))
    j = data.draw(st.integers(0, len(labels) - 1))
    N = data.draw(st.integers(1, 5))
    assert strong_inequivalence(labels[i], labels[j], N=N) == (i != j)
