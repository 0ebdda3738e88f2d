"""Rank-based separability criterion and the NPT rank lower bound."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .bipartite import BipartiteShape, MultiShape, is_psd, partial_transpose, partial_transpose_multi
from .errors import NotAState, NotExact, NotNPT
from .hermitian import DEFAULT_TOL, HermitianMatrix, eig_hermitian, inertia_exact, inertia_from_eigenvalues

__all__ = [
    "SEPARABLE_BY_CRITERION",
    "CRITERION_INAPPLICABLE",
    "BipartitionRow",
    "BipartitionRankReport",
    "bipartition_subsets",
    "rank_pt_all_bipartitions",
    "npt_rank_bound_check",
]

SEPARABLE_BY_CRITERION = "SeparableByCriterion"
CRITERION_INAPPLICABLE = "CriterionInapplicable"


@dataclass(frozen=True)
class BipartitionRow:
    subset: tuple[int, ...]
    rank: int
    neg: int
    margin: Optional[float] = None  # 4th largest |eigenvalue|, float mode only

    def to_dict(self) -> dict:
        return {"subset": list(self.subset), "rank": self.rank, "neg": self.neg, "margin": self.margin}


@dataclass(frozen=True)
class BipartitionRankReport:
    shape: MultiShape
    rows: tuple[BipartitionRow, ...]
    verdict: str

    def to_dict(self) -> dict:
        return {"shape": self.shape.to_dict(), "rows": [r.to_dict() for r in self.rows], "verdict": self.verdict}


def bipartition_subsets(k: int) -> list[tuple[int, ...]]:
    """One subset per bipartition: those containing factor 1, full set excluded.

    ``S`` and its complement give partial transposes that differ by a global
    transpose, so they share the spectrum.
    """
    rest = range(2, k + 1)
    out = [(1,) + c for size in range(0, k - 1) for c in combinations(rest, size)]
    return sorted(out)


def rank_pt_all_bipartitions(
    rho: HermitianMatrix, shape: MultiShape, tol: float = DEFAULT_TOL, exact: Optional[bool] = None
) -> BipartitionRankReport:
    """Rank and negative count of every bipartite partial transpose.

    The verdict is SeparableByCriterion iff every rank is at most three; the
    criterion only ever certifies separability.
    """
    shape.check(rho)
    if exact is None:
        exact = rho.is_exact
    if exact and not rho.is_exact:
        raise NotExact("exact ranks need an exact state")
    if not is_psd(rho, tol):
        raise NotAState("input has a negative eigenvalue")
    rows = []
    for subset in bipartition_subsets(shape.k):
        g = partial_transpose_multi(rho, shape, subset)
        if exact:
            In = inertia_exact(g)
            margin = None
        else:
            eigs = eig_hermitian(g).eigenvalues
            In = inertia_from_eigenvalues(eigs, tol)
            mags = np.sort(np.abs(eigs))[::-1]
            margin = float(mags[3]) if len(mags) > 3 else 0.0
        rows.append(BipartitionRow(subset, In.rank, In.neg, margin))
    verdict = SEPARABLE_BY_CRITERION if all(r.rank <= 3 for r in rows) else CRITERION_INAPPLICABLE
    return BipartitionRankReport(shape, tuple(rows), verdict)


def npt_rank_bound_check(rho: HermitianMatrix, shape: BipartiteShape, tol: float = DEFAULT_TOL) -> bool:
    """True iff the partial transpose has rank >= 4 and at least three positive eigenvalues.

    This holds for every NPT state; the function exists to test that on
    samples and should never return False.
    """
    shape.check(rho)
    if not is_psd(rho, tol):
        raise NotAState("input has a negative eigenvalue")
    g = partial_transpose(rho, shape)
    In = inertia_exact(g) if g.is_exact else inertia_from_eigenvalues(eig_hermitian(g).eigenvalues, tol)
    if In.neg == 0:
        raise NotNPT("partial transpose has no negative eigenvalue")
    return In.rank >= 4 and In.pos >= 3
