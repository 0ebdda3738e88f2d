from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import seeds
from inertia_lab.bipartite import BipartiteShape, is_psd, partial_transpose
from inertia_lab.constructors import (
    SchmidtSpec,
    XStateParams,
    bell,
    diagonal_separable,
    paper_examples_2x3,
    pure_state,
    pure_state_inertia,
    two_qubit_double_ew,
    xstate,
    xstate_eigenvalues,
    xstate_pt_spectrum,
    xstate_with_k_negatives,
)
from inertia_lab.errors import BadSpec, ConstraintViolated, NotPSD
from inertia_lab.hermitian import HermitianMatrix, eig_hermitian, inertia, inertia_exact


def _gamma_inertia(rho, shape):
    return inertia(partial_transpose(rho, shape))


def test_pure_state_examples():
    rho, shape = pure_state(SchmidtSpec.unit(1, 2, 3))
    assert partial_transpose(rho, shape) == rho
    assert _gamma_inertia(rho, shape) == (0, 5, 1)
    rho, shape = pure_state(SchmidtSpec.unit(2, 2, 2))
    assert rho == bell()[0]
    rho, shape = pure_state(SchmidtSpec.unit(3, 3, 3))
    assert _gamma_inertia(rho, shape) == (3, 0, 6)


def test_pure_state_trace_and_rank():
    rho, shape = pure_state(SchmidtSpec((Fraction(1, 2), 2, 3), 3, 4))
    assert rho.is_exact
    assert rho.trace() == Fraction(1, 4) + 4 + 9
    assert inertia_exact(rho) == (0, 11, 1)
    assert _gamma_inertia(rho, shape) == pure_state_inertia(3, 3, 4)


def test_pure_state_inertia_formula():
    assert pure_state_inertia(2, 2, 2) == (1, 0, 3)
    assert pure_state_inertia(1, 4, 5) == (0, 19, 1)
    assert pure_state_inertia(3, 3, 4) == (3, 3, 6)
    with pytest.raises(BadSpec):
        pure_state_inertia(3, 2, 4)


def test_schmidt_spec_validation():
    with pytest.raises(BadSpec):
        SchmidtSpec((1, 1, 1), 2, 3)
    with pytest.raises(BadSpec):
        SchmidtSpec((1, 0), 2, 2)
    with pytest.raises(BadSpec):
        SchmidtSpec((), 2, 2)


@given(st.integers(1, 4), st.integers(1, 4), st.floats(0.2, 3.0), seeds)
def test_float_coefficients_match_formula(m, extra, scale, seed):
    n = m + extra - 1
    r = int(np.random.default_rng(seed).integers(1, m + 1))
    coeffs = tuple(scale * (1 + i) for i in range(r))
    rho, shape = pure_state(SchmidtSpec(coeffs, m, n))
    assert not rho.is_exact
    assert _gamma_inertia(rho, shape) == pure_state_inertia(r, m, n)


def test_xstate_examples():
    rho, shape = xstate(XStateParams(3, [1, 2, 3], [4, 5, 6], [0, 0, 0]))
    assert rho == HermitianMatrix.diag([1, 2, 3, 6, 5, 4])
    # r_1 = sqrt(a_2 b_2) sits on the boundary: Bell plus |01><01| + |10><10| is PPT
    rho, shape = xstate(XStateParams(2, [1, 1], [1, 1], [1, 0]))
    assert _gamma_inertia(rho, shape) == (0, 1, 3)
    np.testing.assert_allclose(np.linalg.eigvalsh(partial_transpose(rho, shape).to_numpy()), [0, 1, 1, 2], atol=1e-12)
    half = Fraction(1, 2)
    rho, shape = xstate(XStateParams(2, [1, half], [1, half], [1, 0]))
    assert _gamma_inertia(rho, shape) == (1, 0, 3)
    with pytest.raises(NotPSD):
        xstate(XStateParams(2, [1, 1], [1, 1], [2, 0]))


def test_xstate_layout_matches_block_form():
    p = XStateParams(3, [1, 2, 3], [4, 5, 6], [1, Fraction(1, 2), 2])
    rho, _ = xstate(p)
    d = rho.data
    # first block diag(a), second block diag(b reversed), antidiagonal coupling
    assert [d[i, i].re for i in range(3)] == [1, 2, 3]
    assert [d[3 + i, 3 + i].re for i in range(3)] == [6, 5, 4]
    assert d[0, 5].re == 1 and d[1, 4].re == Fraction(1, 2) and d[2, 3].re == 2


def test_xstate_params_json_round_trip():
    p = XStateParams(2, [Fraction(1, 3), 1], [1, 2], [0, Fraction(1, 5)])
    q = XStateParams.from_dict(p.to_dict())
    assert q == p
    assert p.to_dict()["a"][0] == "1/3"


def _random_params(rng, n, theta=True):
    a = rng.uniform(0.05, 1.0, n)
    b = rng.uniform(0.05, 1.0, n)
    r = np.sqrt(a * b) * rng.uniform(0, 1, n)
    th = rng.uniform(0, 2 * np.pi, n).tolist() if theta else None
    return XStateParams(n, a.tolist(), b.tolist(), r.tolist(), th)


@given(seeds, st.integers(1, 9))
def test_xstate_spectra_closed_form(seed, n):
    p = _random_params(np.random.default_rng(seed), n)
    rho, shape = xstate(p)
    np.testing.assert_allclose(eig_hermitian(rho).eigenvalues, xstate_eigenvalues(p), atol=1e-9)
    mu = eig_hermitian(partial_transpose(rho, shape)).eigenvalues
    np.testing.assert_allclose(mu, xstate_pt_spectrum(p), atol=1e-9)
    assert np.count_nonzero(mu < -1e-9) <= n // 2
    assert is_psd(rho)


def test_xstate_pt_spectrum_without_coherence():
    p = XStateParams(3, [1, 2, 3], [4, 5, 6], [0, 0, 0])
    np.testing.assert_allclose(xstate_pt_spectrum(p), [1, 2, 3, 4, 5, 6])


def test_one_violated_slot_gives_one_negative():
    # r_3 exceeds sqrt(a_1 b_1) but stays within sqrt(a_3 b_3)
    p = XStateParams(3, [1, 1, 4], [1, 1, 4], [0, 0, 2])
    assert np.count_nonzero(xstate_pt_spectrum(p) < 0) == 1


@pytest.mark.parametrize("n", range(2, 10))
def test_xstate_with_k_negatives(n):
    for k in range(n // 2 + 1):
        p = xstate_with_k_negatives(n, k)
        assert p.exact
        rho, shape = xstate(p)
        assert inertia_exact(partial_transpose(rho, shape)).neg == k
        assert np.count_nonzero(xstate_pt_spectrum(p) < 0) == k
    with pytest.raises(BadSpec):
        xstate_with_k_negatives(n, n // 2 + 1)


def test_paper_examples_2x3():
    shape = BipartiteShape(2, 3)
    got = [inertia_exact(partial_transpose(rho, shape)) for rho, _ in paper_examples_2x3()]
    assert got == [(1, 2, 3), (1, 1, 4), (1, 0, 5), (2, 0, 4)]
    assert [want for _, want in paper_examples_2x3()] == got
    rho3 = paper_examples_2x3()[2][0]
    assert rho3.data[1, 1].re == Fraction(1, 10)


@pytest.mark.parametrize("m,n,p,want", [(2, 3, 6, (0, 0, 6)), (2, 3, 1, (0, 5, 1)), (2, 3, 4, (0, 2, 4)), (3, 3, 9, (0, 0, 9))])
def test_diagonal_separable(m, n, p, want):
    rho = diagonal_separable(m, n, p)
    shape = BipartiteShape(m, n)
    assert partial_transpose(rho, shape) == rho
    assert inertia_exact(partial_transpose(rho, shape)) == want


def test_diagonal_separable_bounds():
    with pytest.raises(BadSpec):
        diagonal_separable(2, 2, 5)
    with pytest.raises(BadSpec):
        diagonal_separable(2, 2, 0)


def test_double_ew_default():
    W = two_qubit_double_ew()
    assert W.is_exact
    shape = BipartiteShape(2, 2)
    assert inertia(W).neg >= 1
    assert inertia(partial_transpose(W, shape)).neg >= 1
    assert inertia(W) == (1, 0, 3)


@pytest.mark.parametrize(
    "args,message",
    [
        ((1, 0.1, 0.4), "2(1 + a) - (1 + b - c)^2 < 0"),
        ((0, 4, Fraction(1, 4)), "a > 0"),
        ((1, -1, Fraction(1, 4)), "b > 0"),
        ((1, 4, Fraction(1, 2)), "c in (0, 1/2)"),
    ],
)
def test_double_ew_constraints(args, message):
    with pytest.raises(ConstraintViolated, match=message.replace("(", r"\(").replace(")", r"\)").replace("^", r"\^").replace("+", r"\+")):
        two_qubit_double_ew(*args)


def test_double_ew_float_parameters():
    W = two_qubit_double_ew(1.0, 4.0, 0.25)
    assert not W.is_exact
    np.testing.assert_allclose(W.to_numpy(), two_qubit_double_ew().to_numpy())
