"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line, repeated in the terminal summary.
Runtime limits are checked where a criterion states one.
"""

import json
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import product

import numpy as np

from helpers import ACCEPTANCE_LINES
from inertia_lab.bipartite import BipartiteShape, MultiShape, kron_bipartite, local_conjugate, partial_trace, partial_transpose
from inertia_lab.cli import main
from inertia_lab.constructors import SchmidtSpec, XStateParams, pure_state, two_qubit_double_ew, xstate, xstate_pt_spectrum, xstate_with_k_negatives
from inertia_lab.generators import EXACT_VERIFIED, enumerate_N2n, kron_inertia, ncopy_inertia, shift_to_full_rank
from inertia_lab.hermitian import HermitianMatrix, exact_rank, inertia, inertia_exact
from inertia_lab.sampling import random_npt_states
from inertia_lab.separability import SEPARABLE_BY_CRITERION, rank_pt_all_bipartitions
from inertia_lab.slocc import classify, pt_equivariance_check, random_local_invertible
from inertia_lab.witness import ENTANGLEMENT_WITNESS, is_entanglement_witness, reduce_2xn, two_qubit_block_positive


@contextmanager
def criterion(num, title, limit=None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = limit is None or elapsed < limit
        timing = f"{elapsed:.2f}s" + (f", limit {limit}s" if limit is not None else "")
        line = f"{'PASS' if ok and within else 'FAIL'} criterion {num:>2}: {title} ({timing})"
        print(line)
        ACCEPTANCE_LINES.append(line)
    assert within, f"criterion {num} took {elapsed:.2f}s, limit {limit}s"


def rows_2xn(n):
    """Rows (j-1, 2(n-j)-l, j+1+l) written out independently of the library."""
    return {(j - 1, 2 * (n - j) - l, j + 1 + l) for j in range(2, n + 1) for l in range(0, 2 * (n - j) + 1)}


def test_criterion_01_n23_reproduction(capsys):
    with criterion(1, "N_{2,3} reproduced through the CLI", limit=1.0):
        code = main(["enumerate", "3"])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        got = [tuple(c["claimed"]) for c in out["certificates"]]
        assert len(got) == 4
        assert set(got) == {(1, 2, 3), (1, 1, 4), (1, 0, 5), (2, 0, 4)}
        assert all(c["verified"] == EXACT_VERIFIED for c in out["certificates"])


def test_criterion_02_n2n_at_scale(capsys):
    with criterion(2, "N_{2,n} for n = 2..8 has (n-1)^2 exact rows", limit=60.0):
        for n in range(2, 9):
            code = main(["enumerate", str(n)])
            out = json.loads(capsys.readouterr().out)
            assert code == 0
            got = [tuple(c["claimed"]) for c in out["certificates"]]
            assert len(set(got)) == len(got) == (n - 1) ** 2
            assert set(got) == rows_2xn(n)
            assert all(c["verified"] == EXACT_VERIFIED for c in out["certificates"])


def test_criterion_03_two_qubit_inertia():
    with criterion(3, "10^4 two-qubit NPT states have inertia (1,0,3); spectral rejections", limit=30.0):
        _, ins, _ = random_npt_states(2, 2, 10_000, seed=2024)
        assert len(ins) == 10_000
        assert (ins == [1, 0, 3]).all()
        rng = np.random.default_rng(3)
        for _ in range(10_000):
            mu1, mu2 = np.sort(rng.uniform(0, 10, 2))[::-1]
            mu4 = -rng.uniform(1e-9, 10)
            assert not two_qubit_block_positive((mu1, mu2, 0.0, mu4))
        assert not two_qubit_block_positive((1, 1, 0, -1e-300))


def test_criterion_04_pure_states():
    with criterion(4, "pure-state inertia ((r^2-r)/2, mn-r^2, (r^2+r)/2) for r <= m <= n <= 6"):
        for m in range(1, 7):
            for n in range(m, 7):
                for r in range(1, m + 1):
                    rho, shape = pure_state(SchmidtSpec.unit(r, m, n))
                    got = inertia_exact(partial_transpose(rho, shape))
                    assert got == ((r * r - r) // 2, m * n - r * r, (r * r + r) // 2), (r, m, n)


def test_criterion_05_xstates():
    with criterion(5, "X-states: k negatives realised, closed-form spectra within 1e-9"):
        rng = np.random.default_rng(5)
        for n in range(2, 10):
            for k in range(0, n // 2 + 1):
                rho, shape = xstate(xstate_with_k_negatives(n, k))
                assert inertia(partial_transpose(rho, shape)).neg == k
            for _ in range(200):
                a = rng.uniform(0.01, 1, n)
                b = rng.uniform(0.01, 1, n)
                r = np.sqrt(a * b) * rng.uniform(0, 1, n)
                p = XStateParams(n, a.tolist(), b.tolist(), r.tolist(), rng.uniform(0, 2 * np.pi, n).tolist())
                rho, shape = xstate(p)
                eigs = np.linalg.eigvalsh(partial_transpose(rho, shape).to_numpy())
                np.testing.assert_allclose(np.sort(xstate_pt_spectrum(p)), eigs, rtol=0, atol=1e-9)
                assert np.count_nonzero(eigs < -1e-9) <= n // 2


def test_criterion_06_kron_and_ncopy():
    with criterion(6, "Kronecker and N-copy inertias agree with measurement"):
        certs = enumerate_N2n(2) + enumerate_N2n(3)
        for c1, c2 in product(certs, repeat=2):
            rho, shape = kron_bipartite(c1.state, c1.shape, c2.state, c2.shape)
            measured = inertia_exact(partial_transpose(rho, shape))
            assert measured == kron_inertia(c1.claimed, c1.shape, c2.claimed, c2.shape)
        for n in (2, 3):
            for cert in enumerate_N2n(n):
                rho, shape = kron_bipartite(cert.state, cert.shape, cert.state, cert.shape)
                assert shape.dim == (2 * n) ** 2
                measured = inertia_exact(partial_transpose(rho, shape))
                assert (measured.neg, measured.pos) == ncopy_inertia(cert.claimed, 2)


def test_criterion_07_shift():
    with criterion(7, "shift_to_full_rank gives (a,0,b+c) on N_{2,5}"):
        seen = 0
        for cert in enumerate_N2n(5):
            a, b, c = cert.claimed
            if b == 0:
                continue
            out = shift_to_full_rank(cert)
            assert inertia_exact(partial_transpose(out.state, out.shape)) == (a, 0, b + c)
            seen += 1
        assert seen > 0


def test_criterion_08_rank_bounds_and_diagonal():
    with criterion(8, "NPT rank bounds on 10^4 draws per shape; diagonal tripartite verdicts", limit=300.0):
        for m in range(2, 5):
            for n in range(m, 5):
                states, ins, _ = random_npt_states(m, n, 10_000, seed=100 * m + n)
                assert len(states) == 10_000
                assert ((ins[:, 0] >= 1) & (ins[:, 0] <= (m - 1) * (n - 1))).all(), (m, n)
                assert (ins[:, 2] >= 3).all(), (m, n)
                assert (ins[:, 0] + ins[:, 2] >= 4).all(), (m, n)
        rng = np.random.default_rng(8)
        for _ in range(1000):
            dims = tuple(int(d) for d in rng.integers(2, 4, size=3))
            d = int(np.prod(dims))
            support = rng.choice(d, size=int(rng.integers(1, 4)), replace=False)
            diag = [0] * d
            for cell in support:
                diag[int(cell)] = Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 20)))
            rep = rank_pt_all_bipartitions(HermitianMatrix.diag(diag, exact=True), MultiShape(dims))
            assert rep.verdict == SEPARABLE_BY_CRITERION


def test_criterion_09_staircase_rows():
    with criterion(9, "rows (j, 2(n-1-j), j+2): partial-trace rank j+1 and reduction to (j,0,j+2)"):
        checked = 0
        for n in range(2, 7):
            for cert in enumerate_N2n(n):
                j, b, c = cert.claimed
                if (b, c) != (2 * (n - 1 - j), j + 2):
                    continue
                assert exact_rank(partial_trace(cert.state, cert.shape, keep="second").data) == j + 1
                rho, shape = cert.state, cert.shape
                while shape.n > j + 1:
                    red = reduce_2xn(rho, shape)
                    assert red.state.is_exact
                    rho, shape = red.state, red.shape
                assert shape == BipartiteShape(2, j + 1)
                assert inertia_exact(partial_transpose(rho, shape)) == (j, 0, j + 2)
                checked += 1
        assert checked == sum(n - 1 for n in range(2, 7))


def test_criterion_10_double_witness():
    with criterion(10, "double witness and its partial transpose are both witnesses"):
        W = two_qubit_double_ew(1, 4, Fraction(1, 4))
        shape = BipartiteShape(2, 2)
        for M in (W, partial_transpose(W, shape)):
            assert inertia_exact(M).neg >= 1
            verdict = is_entanglement_witness(M, shape, restarts=64)
            assert verdict.classification == ENTANGLEMENT_WITNESS
            assert verdict.min_value >= -1e-9


def test_criterion_11_equivariance_and_invariance():
    with criterion(11, "partial-transpose equivariance and SLOCC label invariance"):
        rng = np.random.default_rng(11)
        for m, n in [(2, 2), (2, 3), (3, 2), (3, 3)]:
            shape = BipartiteShape(m, n)
            for _ in range(1000):
                G = rng.standard_normal((shape.dim, shape.dim)) + 1j * rng.standard_normal((shape.dim, shape.dim))
                rho = HermitianMatrix(G @ G.conj().T)
                L, R = random_local_invertible(shape, rng)
                assert pt_equivariance_check(rho, shape, L, R, rtol=1e-10)
        for cert in enumerate_N2n(5):
            state = cert.state.to_float()
            for _ in range(200):
                L, R = random_local_invertible(cert.shape, rng)
                assert classify(local_conjugate(state, cert.shape, L, R), cert.shape).pt_inertia == cert.claimed
