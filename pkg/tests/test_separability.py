import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_state, seeds
from inertia_lab.bipartite import BipartiteShape, MultiShape, kron, partial_transpose_multi
from inertia_lab.constructors import bell, diagonal_separable
from inertia_lab.errors import NotAState, NotExact, NotNPT, ShapeMismatch
from inertia_lab.generators import enumerate_N2n
from inertia_lab.hermitian import HermitianMatrix, inertia
from inertia_lab.sampling import random_npt_states
from inertia_lab.separability import (
    CRITERION_INAPPLICABLE,
    SEPARABLE_BY_CRITERION,
    bipartition_subsets,
    npt_rank_bound_check,
    rank_pt_all_bipartitions,
)

ket0 = HermitianMatrix.diag([1, 0], exact=True)


def test_bipartition_subsets():
    assert bipartition_subsets(2) == [(1,)]
    assert bipartition_subsets(3) == [(1,), (1, 2), (1, 3)]
    assert len(bipartition_subsets(4)) == 2**3 - 1


def test_product_of_zeros_is_separable():
    rho = HermitianMatrix.diag([1] + [0] * 7, exact=True)
    rep = rank_pt_all_bipartitions(rho, MultiShape([2, 2, 2]))
    assert rep.verdict == SEPARABLE_BY_CRITERION
    assert [r.rank for r in rep.rows] == [1, 1, 1]


def test_diagonal_rank_three_is_separable():
    rep = rank_pt_all_bipartitions(diagonal_separable(2, 2, 3), MultiShape([2, 2]))
    assert rep.verdict == SEPARABLE_BY_CRITERION
    assert rep.rows[0].rank == 3 and rep.rows[0].neg == 0


def test_bell_times_zero_is_inapplicable():
    rho, _ = bell()
    rep = rank_pt_all_bipartitions(kron(rho, ket0), MultiShape([2, 2, 2]))
    assert rep.verdict == CRITERION_INAPPLICABLE
    rows = {r.subset: r for r in rep.rows}
    assert rows[(1,)].rank == 4 and rows[(1,)].neg == 1
    assert rows[(1, 2)].rank == 1


def test_float_mode_reports_margin():
    rho, _ = bell()
    rep = rank_pt_all_bipartitions(kron(rho, ket0).to_float(), MultiShape([2, 2, 2]))
    assert rep.verdict == CRITERION_INAPPLICABLE
    assert rep.rows[0].margin == pytest.approx(1.0)
    exact = rank_pt_all_bipartitions(kron(rho, ket0), MultiShape([2, 2, 2]))
    assert all(r.margin is None for r in exact.rows)
    assert [r.rank for r in rep.rows] == [r.rank for r in exact.rows]


def test_errors():
    with pytest.raises(NotAState):
        rank_pt_all_bipartitions(HermitianMatrix.diag([1, -1, 0, 0], exact=True), MultiShape([2, 2]))
    with pytest.raises(NotExact):
        rank_pt_all_bipartitions(HermitianMatrix.identity(4).to_float(), MultiShape([2, 2]), exact=True)
    with pytest.raises(ShapeMismatch):
        rank_pt_all_bipartitions(HermitianMatrix.identity(4), MultiShape([2, 3]))


def test_report_dict():
    d = rank_pt_all_bipartitions(diagonal_separable(2, 2, 2), MultiShape([2, 2])).to_dict()
    assert d["verdict"] == SEPARABLE_BY_CRITERION
    assert d["rows"][0]["subset"] == [1]


@settings(max_examples=20)
@given(seeds, st.sampled_from([(2, 2, 2), (2, 3, 2), (2, 2, 2, 2)]))
def test_complement_symmetry(seed, dims):
    rng = np.random.default_rng(seed)
    shape = MultiShape(dims)
    rho = random_state(rng, shape.dim)
    full = set(range(1, shape.k + 1))
    for subset in bipartition_subsets(shape.k):
        comp = sorted(full - set(subset))
        a = np.linalg.eigvalsh(partial_transpose_multi(rho, shape, subset).to_numpy())
        b = np.linalg.eigvalsh(partial_transpose_multi(rho, shape, comp).to_numpy())
        np.testing.assert_allclose(a, b, atol=1e-10)


@settings(max_examples=25)
@given(seeds, st.integers(1, 3))
def test_separable_verdict_implies_ppt(seed, rank):
    # low-rank states pass the criterion; then every cut must be PPT
    rng = np.random.default_rng(seed)
    shape = MultiShape([2, 2, 2])
    vecs = []
    for _ in range(rank):
        parts = [rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(3)]
        vecs.append(np.kron(np.kron(parts[0], parts[1]), parts[2]))
    rho = HermitianMatrix(sum(np.outer(v, v.conj()) for v in vecs))
    rep = rank_pt_all_bipartitions(rho, shape)
    assert rep.verdict == SEPARABLE_BY_CRITERION
    assert all(r.neg == 0 for r in rep.rows)


@settings(max_examples=25)
@given(seeds)
def test_random_diagonal_tripartite(seed):
    rng = np.random.default_rng(seed)
    d = np.zeros(8)
    support = rng.choice(8, size=rng.integers(1, 4), replace=False)
    d[support] = rng.uniform(0.1, 1, len(support))
    rep = rank_pt_all_bipartitions(HermitianMatrix.diag(d), MultiShape([2, 2, 2]))
    assert rep.verdict == SEPARABLE_BY_CRITERION


# rank lower bound for NPT states


def test_bound_on_bell():
    rho, shape = bell()
    assert npt_rank_bound_check(rho, shape)


def test_bound_on_enumerated():
    for cert in enumerate_N2n(6):
        assert npt_rank_bound_check(cert.state, cert.shape)


def test_bound_errors():
    with pytest.raises(NotNPT):
        npt_rank_bound_check(HermitianMatrix.identity(4), BipartiteShape(2, 2))
    with pytest.raises(NotAState):
        npt_rank_bound_check(HermitianMatrix.diag([1, -1, 0, 0]), BipartiteShape(2, 2))


@pytest.mark.parametrize("m, n", [(2, 2), (2, 3), (3, 3), (2, 4), (3, 4), (4, 4)])
def test_bound_on_induced_samples(m, n):
    states, _, _ = random_npt_states(m, n, 100, seed=m * 10 + n, measure="induced-4")
    shape = BipartiteShape(m, n)
    for s in states:
        assert npt_rank_bound_check(HermitianMatrix(s), shape)
        In = inertia(HermitianMatrix(s))
        assert In.neg == 0 and In.rank <= 4


def test_full_support_diagonal_is_inapplicable():
    # separable, yet every cut has rank 8, so the criterion says nothing
    rep = rank_pt_all_bipartitions(HermitianMatrix.diag(list(range(1, 9)), exact=True), MultiShape([2, 2, 2]))
    assert rep.verdict == CRITERION_INAPPLICABLE
    assert all(r.rank == 8 and r.neg == 0 for r in rep.rows)
