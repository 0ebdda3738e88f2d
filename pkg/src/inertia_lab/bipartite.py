"""Tensor-structure operations on bipartite and multipartite matrices.

Index convention: ``|i, j>`` of an ``m x n`` system is row ``i*n + j``
(first factor slowest).  Every call takes its shape explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import BadSubset, NotAState, ShapeMismatch
from .hermitian import (
    DEFAULT_TOL,
    HermitianMatrix,
    as_array,
    inertia,
    is_exact_array,
)
from .scalars import GaussianRational

__all__ = [
    "BipartiteShape",
    "MultiShape",
    "partial_transpose",
    "partial_transpose_multi",
    "partial_trace",
    "kron",
    "kron_arrays",
    "kron_bipartite",
    "embed",
    "local_conjugate",
    "reorder_factors",
    "is_ppt",
    "is_psd",
]


@dataclass(frozen=True)
class BipartiteShape:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ShapeMismatch(f"local dimensions must be positive, got {self.m}x{self.n}")

    @property
    def dim(self) -> int:
        return self.m * self.n

    def check(self, A: HermitianMatrix) -> None:
        if A.dim != self.dim:
            raise ShapeMismatch(f"matrix of dim {A.dim} does not match shape {self.m}x{self.n}")

    def index(self, i: int, j: int) -> int:
        return i * self.n + j

    def to_dict(self) -> dict:
        return {"dims": [self.m, self.n]}

    @classmethod
    def from_dict(cls, obj: dict) -> "BipartiteShape":
        dims = obj["dims"]
        if len(dims) != 2:
            raise ShapeMismatch(f"bipartite shape needs two dims, got {dims}")
        return cls(int(dims[0]), int(dims[1]))

    def __str__(self) -> str:
        return f"{self.m}x{self.n}"


@dataclass(frozen=True)
class MultiShape:
    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if len(dims) < 2:
            raise ShapeMismatch("a multipartite shape needs at least two factors")
        if any(d < 1 for d in dims):
            raise ShapeMismatch(f"local dimensions must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def k(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def check(self, A: HermitianMatrix) -> None:
        if A.dim != self.dim:
            raise ShapeMismatch(f"matrix of dim {A.dim} does not match shape {self.dims}")

    def to_dict(self) -> dict:
        return {"dims": list(self.dims)}

    @classmethod
    def from_dict(cls, obj: dict) -> "MultiShape":
        return cls(obj["dims"])


def _permute_axes(arr: np.ndarray, dims: Sequence[int], out_axes: Sequence[int]) -> np.ndarray:
    d = int(np.prod(dims))
    return arr.reshape(tuple(dims) * 2).transpose(out_axes).reshape(d, d)


def partial_transpose(A: HermitianMatrix, shape: BipartiteShape) -> HermitianMatrix:
    """Transpose the first tensor factor: block (i, j) of the m x m grid of
    n x n blocks moves to (j, i)."""
    shape.check(A)
    out = _permute_axes(A.data, (shape.m, shape.n), (2, 1, 0, 3))
    return HermitianMatrix._wrap(out)


def partial_transpose_multi(A: HermitianMatrix, shape: MultiShape, subset: Iterable[int]) -> HermitianMatrix:
    """Transpose the factors listed in ``subset`` (1-based indices)."""
    shape.check(A)
    subset = sorted(set(int(s) for s in subset))
    if any(s < 1 or s > shape.k for s in subset):
        raise BadSubset(f"subset {subset} out of range for {shape.k} factors")
    k = shape.k
    axes = list(range(2 * k))
    for s in subset:
        axes[s - 1], axes[k + s - 1] = axes[k + s - 1], axes[s - 1]
    return HermitianMatrix._wrap(_permute_axes(A.data, shape.dims, axes))


def reorder_factors(A, shape: MultiShape, permutation: Sequence[int]):
    """Reorder tensor factors: factor ``permutation[t]`` (0-based) becomes
    factor ``t`` of the result.  Returns the new matrix and its shape."""
    if isinstance(A, HermitianMatrix):
        shape.check(A)
    perm = [int(p) for p in permutation]
    if sorted(perm) != list(range(shape.k)):
        raise BadSubset(f"{perm} is not a permutation of {shape.k} factors")
    axes = perm + [shape.k + p for p in perm]
    data = A.data if isinstance(A, HermitianMatrix) else np.asarray(A)
    out = _permute_axes(data, shape.dims, axes)
    new_shape = MultiShape(shape.dims[p] for p in perm)
    if isinstance(A, HermitianMatrix):
        return HermitianMatrix._wrap(out), new_shape
    return out, new_shape


def partial_trace(A: HermitianMatrix, shape: BipartiteShape, keep: str = "second") -> HermitianMatrix:
    """Reduced matrix on the kept factor (``"first"`` or ``"second"``)."""
    shape.check(A)
    t = A.data.reshape(shape.m, shape.n, shape.m, shape.n)
    keep = keep.lower()
    if keep == "second":
        out = sum((t[i, :, i, :] for i in range(1, shape.m)), start=t[0, :, 0, :].copy())
    elif keep == "first":
        out = sum((t[:, j, :, j] for j in range(1, shape.n)), start=t[:, 0, :, 0].copy())
    else:
        raise ValueError("keep must be 'first' or 'second'")
    return HermitianMatrix._wrap(np.asarray(out))


def kron_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if is_exact_array(a) != is_exact_array(b):
        a = as_array(a, exact=False)
        b = as_array(b, exact=False)
    return np.kron(a, b)


def kron(A: HermitianMatrix, B: HermitianMatrix) -> HermitianMatrix:
    return HermitianMatrix._wrap(kron_arrays(A.data, B.data))


def kron_bipartite(
    A: HermitianMatrix, shape_a: BipartiteShape, B: HermitianMatrix, shape_b: BipartiteShape
) -> tuple[HermitianMatrix, BipartiteShape]:
    """``A_{XY} (x) B_{ZW}`` regrouped as the bipartite ``(XZ):(YW)`` operator.

    The plain Kronecker product orders factors X, Y, Z, W; swapping the
    middle two lets ``partial_transpose`` act on X and Z together, so the
    result's partial transpose equals ``A^Gamma (x) B^Gamma`` regrouped.
    """
    shape_a.check(A)
    shape_b.check(B)
    multi = MultiShape((shape_a.m, shape_a.n, shape_b.m, shape_b.n))
    out, _ = reorder_factors(kron(A, B), multi, (0, 2, 1, 3))
    return out, BipartiteShape(shape_a.m * shape_b.m, shape_a.n * shape_b.n)


def embed(A: HermitianMatrix, source: BipartiteShape, target: BipartiteShape) -> HermitianMatrix:
    """Zero-pad an ``m1 x n1`` matrix into ``m2 x n2`` keeping ``|i,j> -> |i,j>``."""
    source.check(A)
    if target.m < source.m or target.n < source.n:
        raise ShapeMismatch(f"cannot embed {source} into smaller {target}")
    idx = np.array([target.index(i, j) for i, j in product(range(source.m), range(source.n))], dtype=np.intp)
    if A.is_exact:
        out = np.full((target.dim, target.dim), GaussianRational(0), dtype=object)
    else:
        out = np.zeros((target.dim, target.dim), dtype=complex)
    out[np.ix_(idx, idx)] = A.data
    return HermitianMatrix._wrap(out)


def local_conjugate(A: HermitianMatrix, shape: BipartiteShape, L, R) -> HermitianMatrix:
    """``(L (x) R) A (L (x) R)^dagger``."""
    shape.check(A)
    L = as_array(L)
    R = as_array(R)
    if L.shape != (shape.m, shape.m) or R.shape != (shape.n, shape.n):
        raise ShapeMismatch(f"local operators must be {shape.m}x{shape.m} and {shape.n}x{shape.n}")
    X = kron_arrays(L, R)
    a = A.data
    if is_exact_array(X) != is_exact_array(a):
        X = as_array(X, exact=False)
        a = as_array(a, exact=False)
    return HermitianMatrix._wrap(X @ a @ np.conj(X).T)


def is_psd(A: HermitianMatrix, tol: float = DEFAULT_TOL) -> bool:
    return inertia(A, tol).neg == 0


def is_ppt(A: HermitianMatrix, shape: BipartiteShape, tol: float = DEFAULT_TOL) -> bool:
    """True iff the partial transpose has no negative eigenvalue.

    Exact matrices are decided exactly; float ones at relative ``tol``.
    Raises :class:`NotAState` if ``A`` itself is not positive semidefinite.
    """
    shape.check(A)
    if not is_psd(A, tol):
        raise NotAState("matrix has a negative eigenvalue")
    return inertia(partial_transpose(A, shape), tol).neg == 0
