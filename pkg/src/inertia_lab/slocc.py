"""SLOCC utilities: random local operations, equivariance and class labels.

The partial-transpose inertia is invariant under invertible local
operations, so differing labels prove two states SLOCC-inequivalent.
Equal labels prove nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bipartite import BipartiteShape, local_conjugate, partial_transpose
from .errors import BadSpec, CertificateMismatch, NotNPT
from .generators import ncopy_inertia
from .hermitian import DEFAULT_TOL, HermitianMatrix, Inertia, as_array, inertia

__all__ = [
    "COND_CAP",
    "SloccClass",
    "random_local_invertible",
    "pt_equivariance_check",
    "classify",
    "strong_inequivalence",
]

COND_CAP = 1e4


def _ginibre(rng: np.random.Generator, k: int) -> np.ndarray:
    return rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))


def random_local_invertible(shape: BipartiteShape, seed=None) -> tuple[np.ndarray, np.ndarray]:
    """Complex Gaussian ``(L, R)``, redrawn until both condition numbers are below 1e4.

    ``seed`` may be an int or a ``numpy.random.Generator`` (which advances).
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    while True:
        L = _ginibre(rng, shape.m)
        R = _ginibre(rng, shape.n)
        if np.linalg.cond(L) < COND_CAP and np.linalg.cond(R) < COND_CAP:
            return L, R


def pt_equivariance_check(rho: HermitianMatrix, shape: BipartiteShape, L, R, rtol: float = 1e-10) -> bool:
    """Check ``((L(x)R) rho (L(x)R)^+)^Gamma == (conj(L)(x)R) rho^Gamma (conj(L)(x)R)^+``.

    Exact operands are compared exactly.  Float comparisons allow
    ``rtol * max(1, max|entry|)``, since local operations rescale entries.
    """
    L = as_array(L)
    R = as_array(R)
    lhs = partial_transpose(local_conjugate(rho, shape, L, R), shape)
    rhs = local_conjugate(partial_transpose(rho, shape), shape, np.conj(L), R)
    if lhs.is_exact and rhs.is_exact:
        return lhs == rhs
    a, b = lhs.to_numpy(), rhs.to_numpy()
    return bool(np.abs(a - b).max() <= rtol * max(1.0, float(np.abs(a).max())))


@dataclass(frozen=True)
class SloccClass:
    shape: BipartiteShape
    pt_inertia: Inertia

    def to_dict(self) -> dict:
        return {"label": list(self.pt_inertia), "shape": [self.shape.m, self.shape.n]}


def classify(rho: HermitianMatrix, shape: BipartiteShape, tol: float = DEFAULT_TOL) -> SloccClass:
    """Label an NPT state by the inertia of its partial transpose."""
    shape.check(rho)
    In = inertia(partial_transpose(rho, shape), tol)
    if In.neg == 0:
        raise NotNPT("state has a positive partial transpose")
    return SloccClass(shape, In)


def _ncopy_triple(In: Inertia, dim: int, N: int) -> tuple[int, int, int]:
    neg, pos = ncopy_inertia(In, N)
    return neg, dim**N - neg - pos, pos


def _infer_2xn(In) -> BipartiteShape:
    d = sum(In)
    if d % 2 or d < 4:
        raise BadSpec(f"inertia {tuple(In)} is not a 2 x n inertia")
    return BipartiteShape(2, d // 2)


def strong_inequivalence(
    in1: Inertia, in2: Inertia, shape1: BipartiteShape | None = None, shape2: BipartiteShape | None = None, N: int = 1
) -> bool:
    """Whether two ``2 x n`` labels stay distinct for any number of copies.

    For ``a < c`` the map ``(a, c) -> ((a+c)^N -+ (c-a)^N) / 2`` is
    injective, so distinct labels give distinct ``N``-copy inertias.  The
    answer is cross-checked against the explicit ``N``-copy counts for
    ``N <= 3``.  Shapes with ``m != 2`` are refused: the inequality
    ``a < c`` is only established for qubit-qudit states.  Missing shapes
    are read off as ``2 x (a+b+c)/2``.
    """
    shape1 = shape1 or _infer_2xn(in1)
    shape2 = shape2 or (shape1 if sum(in2) == sum(in1) else _infer_2xn(in2))
    for shape in (shape1, shape2):
        if shape.m != 2:
            raise BadSpec(f"strong inequivalence is only established for 2 x n shapes, got {shape}")
    for In, shape in ((in1, shape1), (in2, shape2)):
        if sum(In) != shape.m * shape.n:
            raise BadSpec(f"inertia {tuple(In)} does not match shape {shape}")
        if In[0] >= In[2]:
            raise BadSpec(f"inertia {tuple(In)} has a >= c")
    if N < 1:
        raise BadSpec("N must be at least 1")
    distinct = tuple(in1) != tuple(in2) or shape1 != shape2
    for k in range(1, min(N, 3) + 1):
        t1 = _ncopy_triple(in1, shape1.m * shape1.n, k)
        t2 = _ncopy_triple(in2, shape2.m * shape2.n, k)
        if (t1 != t2 or shape1 != shape2) != distinct:
            raise CertificateMismatch(f"{k}-copy inertias {t1} and {t2} contradict the closed form")
    return distinct
