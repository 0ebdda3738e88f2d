"""Inertia generators, certificates and the full N_{2,n} enumeration.

A :class:`WitnessCertificate` carries a state together with the recipe that
built it.  Verification means recomputing the partial-transpose inertia
(exactly, whenever the state is exact) and comparing it with the claim.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import constructors as C
from .bipartite import BipartiteShape, embed, is_psd, partial_transpose
from .errors import (
    BadSpec,
    CertificateMismatch,
    NotAState,
    ShapeMismatch,
    TooManyProducts,
)
from .hermitian import (
    DEFAULT_TOL,
    HermitianMatrix,
    Inertia,
    eig_hermitian,
    inertia,
    inertia_exact,
    inertia_float,
)
from .scalars import GaussianRational, format_fraction

__all__ = [
    "UNVERIFIED",
    "EXACT_VERIFIED",
    "FLOAT_VERIFIED",
    "WitnessCertificate",
    "replay",
    "certify",
    "shift_to_full_rank",
    "pad_and_add_products",
    "staircase",
    "enumerate_N2n",
    "expected_N2n",
    "kron_inertia",
    "ncopy_inertia",
]

UNVERIFIED = "none"
EXACT_VERIFIED = "exact"
FLOAT_VERIFIED = "float"


# --------------------------------------------------------------------------
# recipe encoding


def _enc(x):
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, (list, tuple)):
        return [_enc(v) for v in x]
    return x


def _dec(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, list):
        return [_dec(v) for v in x]
    return x


def _source(step: dict) -> tuple[HermitianMatrix, BipartiteShape]:
    kind = step["kind"]
    if kind == "given":
        return HermitianMatrix.from_dict(step["state"]), BipartiteShape.from_dict({"dims": step["dims"]})
    if kind == "pure":
        return C.pure_state(C.SchmidtSpec(_dec(step["coefficients"]), step["m"], step["n"]))
    if kind == "xstate":
        return C.xstate(C.XStateParams.from_dict(step))
    if kind == "paper2x3":
        idx = int(step["index"])
        if not 1 <= idx <= 4:
            raise BadSpec("paper2x3 index must be 1..4")
        return C.paper_examples_2x3()[idx - 1][0], BipartiteShape(2, 3)
    if kind == "diag":
        return C.diagonal_separable(step["m"], step["n"], step["p"]), BipartiteShape(step["m"], step["n"])
    if kind == "doubleEW":
        args = {k: _dec(step[k]) for k in ("a", "b", "c") if k in step}
        return C.two_qubit_double_ew(**args), BipartiteShape(2, 2)
    if kind == "staircase":
        return _staircase_state(int(step["j"])), BipartiteShape(2, int(step["j"]))
    raise BadSpec(f"unknown source kind {kind!r}")


def _apply(step: dict, rho: HermitianMatrix, shape: BipartiteShape):
    kind = step["kind"]
    if kind == "embed":
        target = BipartiteShape(*step["to"])
        return embed(rho, shape, target), target
    if kind == "add_products":
        return _add_cells(rho, shape, [tuple(c) for c in step["cells"]]), shape
    if kind == "shift":
        x = _dec(step["x"])
        return rho + HermitianMatrix.identity(rho.dim, exact=rho.is_exact) * x, shape
    raise BadSpec(f"unknown recipe step {kind!r}")


def replay(recipe: Sequence[dict]) -> tuple[HermitianMatrix, BipartiteShape]:
    """Rebuild a state from its recipe: one source step, then transformations."""
    if not recipe:
        raise BadSpec("empty recipe")
    rho, shape = _source(recipe[0])
    for step in recipe[1:]:
        rho, shape = _apply(step, rho, shape)
    return rho, shape


def source_recipe(kind: str, **params) -> list[dict]:
    step = {"kind": kind}
    step.update({k: _enc(v) for k, v in params.items()})
    return [step]


def _given_recipe(rho: HermitianMatrix, shape: BipartiteShape) -> list[dict]:
    return [{"kind": "given", "dims": [shape.m, shape.n], "state": rho.to_dict()}]


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessCertificate:
    state: HermitianMatrix
    shape: BipartiteShape
    claimed: Inertia
    recipe: tuple = field(default=())
    verified: str = UNVERIFIED

    def replay(self) -> HermitianMatrix:
        rho, shape = replay(self.recipe)
        if shape != self.shape or not rho == self.state:
            raise CertificateMismatch("recipe replay does not reproduce the stored state")
        return rho

    def measure(self, tol: float = DEFAULT_TOL) -> Inertia:
        return inertia(partial_transpose(self.state, self.shape), tol)

    def to_dict(self, with_state: bool = False) -> dict:
        out = {
            "shape": [self.shape.m, self.shape.n],
            "claimed": list(self.claimed),
            "recipe": list(self.recipe),
            "verified": self.verified,
        }
        if with_state:
            out["state"] = self.state.to_dict()
        return out

    def to_json(self, with_state: bool = False) -> str:
        return json.dumps(self.to_dict(with_state))

    @classmethod
    def from_dict(cls, obj: dict) -> "WitnessCertificate":
        recipe = tuple(obj["recipe"])
        if "state" in obj:
            state = HermitianMatrix.from_dict(obj["state"])
            shape = BipartiteShape(*obj["shape"])
        else:
            state, shape = replay(recipe)
        return cls(state, shape, Inertia(*obj["claimed"]), recipe, obj.get("verified", UNVERIFIED))


def certify(state: HermitianMatrix, shape: BipartiteShape, claimed: Inertia, recipe, tol=DEFAULT_TOL) -> WitnessCertificate:
    """Measure the partial-transpose inertia and attach the verification level.

    Raises :class:`CertificateMismatch` when the measurement disagrees.
    """
    shape.check(state)
    gamma = partial_transpose(state, shape)
    if state.is_exact:
        got, level = inertia_exact(gamma), EXACT_VERIFIED
    else:
        got, level = inertia_float(gamma, tol), FLOAT_VERIFIED
    if got != tuple(claimed):
        raise CertificateMismatch(f"claimed inertia {tuple(claimed)} but measured {tuple(got)}")
    return WitnessCertificate(state, shape, Inertia(*claimed), tuple(recipe), level)


def _as_input(rho, shape):
    """Accept a certificate or a bare (matrix, shape) pair."""
    if isinstance(rho, WitnessCertificate):
        return rho.state, rho.shape, list(rho.recipe)
    if shape is None:
        raise ShapeMismatch("a shape is required for a bare matrix")
    shape.check(rho)
    return rho, shape, _given_recipe(rho, shape)


# --------------------------------------------------------------------------
# generators


_MAX_SHIFT_TRIES = 60


def shift_to_full_rank(rho, shape: BipartiteShape | None = None, tol: float = DEFAULT_TOL) -> WitnessCertificate:
    """Add ``x I`` so that the partial transpose loses its kernel.

    With ``In(rho^Gamma) = (a, b, c)`` the result has ``(a, 0, b + c)``.  For
    ``a > 0`` the shift is half the smallest negative eigenvalue magnitude
    (rounded down to a power of two in exact mode, then certified), else 1.
    """
    rho, shape, recipe = _as_input(rho, shape)
    if not is_psd(rho, tol):
        raise NotAState("shift_to_full_rank needs a positive semidefinite input")
    gamma = partial_transpose(rho, shape)
    a, b, c = inertia(gamma, tol)
    claimed = Inertia(a, 0, b + c)
    if a == 0:
        candidates = [1]
    else:
        eigs = eig_hermitian(gamma).eigenvalues
        scale = max(1.0, float(np.abs(eigs).max()))
        gap = -float(eigs[eigs < -tol * scale].max())
        x = gap / 2
        if rho.is_exact:
            # largest power of two <= x; certify() has the final word
            q = Fraction(2) ** math.floor(math.log2(x))
            candidates = [q / 2**t for t in range(_MAX_SHIFT_TRIES)]
        else:
            candidates = [x]
    last = None
    for x in candidates:
        sigma = rho + HermitianMatrix.identity(rho.dim, exact=rho.is_exact) * x
        try:
            return certify(sigma, shape, claimed, recipe + [{"kind": "shift", "x": _enc(x)}], tol)
        except CertificateMismatch as exc:
            last = exc
    raise last


def _outside_cells(small: BipartiteShape, big: BipartiteShape) -> list[tuple[int, int]]:
    return [(i, k) for i in range(big.m) for k in range(big.n) if i >= small.m or k >= small.n]


def _add_cells(rho: HermitianMatrix, shape: BipartiteShape, cells) -> HermitianMatrix:
    data = np.array(rho.data)
    one = GaussianRational(1) if rho.is_exact else 1.0
    for i, k in cells:
        if not (0 <= i < shape.m and 0 <= k < shape.n):
            raise ShapeMismatch(f"cell {(i, k)} outside {shape}")
        idx = shape.index(i, k)
        data[idx, idx] = data[idx, idx] + one
    return HermitianMatrix._wrap(data)


def pad_and_add_products(rho, source: BipartiteShape | None, target: BipartiteShape, l: int, tol=DEFAULT_TOL) -> WitnessCertificate:
    """Embed into a larger space and add ``l`` basis product projectors there.

    The new cells are taken in row-major order among those outside the
    embedded block.  They are fixed by the partial transpose and orthogonal
    to the embedded support, so ``(a, b, c)`` becomes ``(a, b + D - l, c + l)``
    with ``D`` the number of new cells.
    """
    rho, source, recipe = _as_input(rho, source)
    if target.m < source.m or target.n < source.n:
        raise ShapeMismatch(f"cannot embed {source} into smaller {target}")
    cells = _outside_cells(source, target)
    D = len(cells)
    if not 0 <= l <= D:
        raise TooManyProducts(f"l={l} but only {D} cells lie outside the embedded block")
    a, b, c = inertia(partial_transpose(rho, source), tol)
    chosen = cells[:l]
    sigma = _add_cells(embed(rho, source, target), target, chosen)
    steps = [{"kind": "embed", "to": [target.m, target.n]}]
    if chosen:
        steps.append({"kind": "add_products", "cells": [list(cell) for cell in chosen]})
    return certify(sigma, target, Inertia(a, b + D - l, c + l), recipe + steps, tol)


def _staircase_state(j: int) -> HermitianMatrix:
    if j < 2:
        raise BadSpec("staircase needs j >= 2")
    shape = BipartiteShape(2, j)
    out = HermitianMatrix.zeros(2 * j)
    for i in range(1, j):
        v = [0] * (2 * j)
        v[shape.index(0, i - 1)] = 1
        v[shape.index(1, i)] = i
        out = out + HermitianMatrix.projector(v)
    return out


def staircase(j: int) -> WitnessCertificate:
    """Rank ``j-1`` state ``sum_i (|0,i-1> + i|1,i>)(h.c.)`` on ``2 x j``.

    The partial transpose splits into the singlets ``|0,0>``, ``|1,j-1>``
    and the 2x2 blocks on ``{|0,i>, |1,i-1>}`` with determinant
    ``(i-1)^2 - i^2 < 0``, so its inertia is ``(j-1, 0, j+1)``.  With unit
    weights the interior blocks would be singular.  The claim is re-checked
    exactly every time the seed is built.
    """
    return certify(_staircase_state(j), BipartiteShape(2, j), Inertia(j - 1, 0, j + 1), [{"kind": "staircase", "j": j}])


def _n2n_task(args) -> WitnessCertificate:
    j, l, n = args
    return pad_and_add_products(staircase(j), None, BipartiteShape(2, n), l)


def expected_N2n(n: int) -> list[Inertia]:
    """Closed-form list of the (n-1)^2 inertias, ordered by (j, l)."""
    if n < 2:
        raise BadSpec("n must be at least 2")
    return [Inertia(j - 1, 2 * (n - j) - l, j + 1 + l) for j in range(2, n + 1) for l in range(2 * (n - j) + 1)]


def enumerate_N2n(n: int, jobs: int = 1) -> list[WitnessCertificate]:
    """One exactly verified witness state for every element of N_{2,n}."""
    if n < 2:
        raise BadSpec("n must be at least 2")
    tasks = [(j, l, n) for j in range(2, n + 1) for l in range(2 * (n - j) + 1)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_n2n_task, tasks))
    return [_n2n_task(t) for t in tasks]


# --------------------------------------------------------------------------
# inertia arithmetic


def _dims(shape) -> tuple[int, int]:
    if isinstance(shape, BipartiteShape):
        return shape.m, shape.n
    m, n = shape
    return int(m), int(n)


def kron_inertia(in1: Inertia, shape1, in2: Inertia, shape2) -> Inertia:
    """Partial-transpose inertia of ``alpha (x) beta`` regrouped as ``(AC):(BD)``."""
    m1, n1 = _dims(shape1)
    m2, n2 = _dims(shape2)
    a1, b1, c1 = in1
    a2, b2, c2 = in2
    if min(in1) < 0 or min(in2) < 0:
        raise BadSpec("inertia components must be non-negative")
    if a1 + b1 + c1 != m1 * n1 or a2 + b2 + c2 != m2 * n2:
        raise BadSpec("inertia does not sum to the shape's dimension")
    return Inertia(a1 * c2 + a2 * c1, b1 * m2 * n2 + b2 * m1 * n1 - b1 * b2, a1 * a2 + c1 * c2)


def ncopy_inertia(in_: Inertia, N: int) -> tuple[int, int]:
    """``(nu_-, nu_+)`` of the ``N``-fold tensor power's partial transpose.

    A product of eigenvalues is negative iff it has an odd number of
    negative factors, so ``nu_- = sum_{k odd} C(N,k) a^k c^(N-k)``, which is
    ``((a+c)^N - (c-a)^N) / 2``.
    """
    if N < 1:
        raise BadSpec("N must be at least 1")
    a, _, c = in_
    s, d = (a + c) ** N, (c - a) ** N
    return (s - d) // 2, (s + d) // 2
