"""Builders for the concrete state and witness families.

Everything built from integers or fractions is exact, so the resulting
inertias can be certified without a tolerance.  Unnormalised states are
the norm here: coefficients default to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bipartite import BipartiteShape, partial_transpose
from .errors import BadSpec, ConstraintViolated, NotPSD
from .hermitian import HermitianMatrix, Inertia, as_array
from .scalars import GaussianRational

__all__ = [
    "SchmidtSpec",
    "XStateParams",
    "pure_state",
    "pure_state_inertia",
    "xstate",
    "xstate_pt_spectrum",
    "xstate_eigenvalues",
    "xstate_with_k_negatives",
    "bell",
    "paper_examples_2x3",
    "diagonal_separable",
    "two_qubit_double_ew",
]

_RATIONAL = (int, Fraction)


def _is_rational(x) -> bool:
    return isinstance(x, _RATIONAL) and not isinstance(x, bool)


def _zeros(dim: int, exact: bool) -> np.ndarray:
    if exact:
        return np.full((dim, dim), GaussianRational(0), dtype=object)
    return np.zeros((dim, dim), dtype=complex)


@dataclass(frozen=True)
class SchmidtSpec:
    coefficients: tuple
    m: int
    n: int

    def __init__(self, coefficients: Sequence, m: int, n: int):
        coeffs = tuple(coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "n", int(n))
        if not coeffs:
            raise BadSpec("Schmidt rank must be at least 1")
        if any(not (c > 0) for c in coeffs):
            raise BadSpec("Schmidt coefficients must be positive")
        if not len(coeffs) <= self.m <= self.n:
            raise BadSpec(f"need r <= m <= n, got r={len(coeffs)}, m={self.m}, n={self.n}")

    @classmethod
    def unit(cls, r: int, m: int, n: int) -> "SchmidtSpec":
        return cls([1] * r, m, n)

    @property
    def r(self) -> int:
        return len(self.coefficients)


def pure_state(spec: SchmidtSpec) -> tuple[HermitianMatrix, BipartiteShape]:
    """``|psi><psi|`` with ``|psi> = sum_i s_i |i,i>`` in an ``m x n`` space."""
    shape = BipartiteShape(spec.m, spec.n)
    exact = all(_is_rational(c) for c in spec.coefficients)
    psi = as_array([0] * shape.dim, exact=exact)
    for i, s in enumerate(spec.coefficients):
        psi[shape.index(i, i)] = GaussianRational(s) if exact else complex(s)
    return HermitianMatrix.projector(psi), shape


def pure_state_inertia(r: int, m: int, n: int) -> Inertia:
    """Closed-form partial-transpose inertia of a Schmidt-rank-``r`` pure state."""
    if not 1 <= r <= m <= n:
        raise BadSpec(f"need 1 <= r <= m <= n, got r={r}, m={m}, n={n}")
    return Inertia((r * r - r) // 2, m * n - r * r, (r * r + r) // 2)


def bell() -> tuple[HermitianMatrix, BipartiteShape]:
    """Unnormalised ``(|00> + |11>)(<00| + <11|)``."""
    return pure_state(SchmidtSpec.unit(2, 2, 2))


# --------------------------------------------------------------------------
# 2 x n X-states


@dataclass(frozen=True)
class XStateParams:
    """Parameters of a ``2 x n`` X-state.

    Slot ``j`` couples ``|0, j-1>`` (weight ``a_j``) with ``|1, n-j>``
    (weight ``b_j``) through ``r_j exp(i theta_j)``.
    """

    n: int
    a: tuple
    b: tuple
    r: tuple
    theta: tuple = field(default=None)

    def __post_init__(self):
        n = int(self.n)
        theta = self.theta if self.theta is not None else (0,) * n
        object.__setattr__(self, "n", n)
        for name, val in (("a", self.a), ("b", self.b), ("r", self.r), ("theta", theta)):
            val = tuple(val)
            if len(val) != n:
                raise BadSpec(f"{name} must have length n={n}, got {len(val)}")
            object.__setattr__(self, name, val)
        if n < 1:
            raise BadSpec("n must be positive")
        if any(x < 0 for x in self.a + self.b + self.r):
            raise BadSpec("a, b, r must be non-negative")

    @property
    def exact(self) -> bool:
        return all(_is_rational(x) for x in self.a + self.b + self.r) and all(t == 0 for t in self.theta)

    def violations(self) -> list[int]:
        """1-based slots with ``r_j > sqrt(a_j b_j)``."""
        return [j + 1 for j in range(self.n) if self.r[j] * self.r[j] > self.a[j] * self.b[j]]

    def to_dict(self) -> dict:
        def enc(x):
            return f"{x.numerator}/{x.denominator}" if isinstance(x, Fraction) else x

        return {
            "n": self.n,
            "a": [enc(x) for x in self.a],
            "b": [enc(x) for x in self.b],
            "r": [enc(x) for x in self.r],
            "theta": [enc(x) for x in self.theta],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "XStateParams":
        def dec(x):
            return Fraction(x) if isinstance(x, str) else x

        n = int(obj["n"])
        theta = obj.get("theta")
        return cls(
            n,
            [dec(x) for x in obj["a"]],
            [dec(x) for x in obj["b"]],
            [dec(x) for x in obj["r"]],
            None if theta is None else [dec(x) for x in theta],
        )


def xstate(params: XStateParams) -> tuple[HermitianMatrix, BipartiteShape]:
    bad = params.violations()
    if bad:
        raise NotPSD(f"r_j > sqrt(a_j b_j) at slot(s) {bad}")
    n = params.n
    shape = BipartiteShape(2, n)
    exact = params.exact
    rho = _zeros(2 * n, exact)
    conv = GaussianRational if exact else complex
    for k in range(n):
        rho[k, k] = conv(params.a[k])
        rho[n + (n - 1 - k), n + (n - 1 - k)] = conv(params.b[k])
        if exact:
            z = GaussianRational(params.r[k])
        else:
            z = complex(params.r[k]) * complex(math.cos(params.theta[k]), math.sin(params.theta[k]))
        rho[k, n + (n - 1 - k)] = z
        rho[n + (n - 1 - k), k] = z.conjugate()
    return HermitianMatrix._wrap(rho), shape


def _pair_spectrum(a, b, r) -> tuple[float, float]:
    mid = 0.5 * (float(a) + float(b))
    rad = math.hypot(float(r), 0.5 * (float(a) - float(b)))
    return mid - rad, mid + rad


def xstate_eigenvalues(params: XStateParams) -> np.ndarray:
    """Closed-form eigenvalues of the X-state itself, ascending."""
    vals = [v for j in range(params.n) for v in _pair_spectrum(params.a[j], params.b[j], params.r[j])]
    return np.sort(np.array(vals))


def xstate_pt_spectrum(params: XStateParams) -> np.ndarray:
    """Closed-form eigenvalues of the partial transpose, ascending.

    Transposing the first factor re-pairs slot ``j`` diagonals with the
    coherence of slot ``n+1-j``, hence ``mu_j = (a_j+b_j)/2 +- sqrt(r_{n+1-j}^2 + d_j^2)``.
    """
    n = params.n
    vals = [v for j in range(n) for v in _pair_spectrum(params.a[j], params.b[j], params.r[n - 1 - j])]
    return np.sort(np.array(vals))


def xstate_with_k_negatives(n: int, k: int) -> XStateParams:
    """Deterministic exact X-state whose partial transpose has ``k`` negatives.

    For ``j <= k``: ``a_j = b_j = 1`` and ``a_{n+1-j} = b_{n+1-j} = 4`` with
    ``r_{n+1-j} = 2``, so ``sqrt(a_j b_j) = 1 < 2 <= 4``.  Every other slot
    has unit diagonal and no coherence.
    """
    if n < 1 or k < 0 or k > n // 2:
        raise BadSpec(f"need 0 <= k <= floor(n/2), got n={n}, k={k}")
    a = [1] * n
    b = [1] * n
    r = [0] * n
    for j in range(k):
        a[n - 1 - j] = b[n - 1 - j] = 4
        r[n - 1 - j] = 2
    return XStateParams(n, a, b, r)


# --------------------------------------------------------------------------
# small fixed families


def paper_examples_2x3() -> list[tuple[HermitianMatrix, Inertia]]:
    """The four exact ``2 x 3`` states realising every element of N_{2,3}."""
    shape = BipartiteShape(2, 3)

    def proj(*cells):
        v = as_array([0] * 6, exact=True)
        for i, j in cells:
            v[shape.index(i, j)] = GaussianRational(1)
        return HermitianMatrix.projector(v)

    rho1 = proj((0, 0), (1, 1))
    rho2 = rho1 + proj((0, 2))
    rho3 = rho1 + HermitianMatrix.identity(6) * Fraction(1, 10)
    rho4 = rho1 + proj((0, 1), (1, 2))
    return [
        (rho1, Inertia(1, 2, 3)),
        (rho2, Inertia(1, 1, 4)),
        (rho3, Inertia(1, 0, 5)),
        (rho4, Inertia(2, 0, 4)),
    ]


def diagonal_cells(m: int, n: int, p: int) -> list[tuple[int, int]]:
    return [(c // n, c % n) for c in range(p)]


def diagonal_separable(m: int, n: int, p: int) -> HermitianMatrix:
    """Sum of the first ``p`` computational-basis projectors (row-major)."""
    if m < 1 or n < 1 or not 1 <= p <= m * n:
        raise BadSpec(f"need 1 <= p <= mn, got m={m}, n={n}, p={p}")
    diag = [1] * p + [0] * (m * n - p)
    return HermitianMatrix.diag(diag, exact=True)


def two_qubit_double_ew(a=1, b=4, c=Fraction(1, 4)) -> HermitianMatrix:
    """``W = alpha^Gamma + beta`` where both ``W`` and ``W^Gamma`` are witnesses.

    ``alpha`` is the Bell projector and
    ``beta = |00><00| + a|11><11| + b P(|01>+|10>) + c P(|01>-|10>)``
    with ``P(v) = v v^dagger``.
    """
    if not a > 0:
        raise ConstraintViolated("a > 0 violated")
    if not b > 0:
        raise ConstraintViolated("b > 0 violated")
    if not 0 < c < Fraction(1, 2):
        raise ConstraintViolated("c in (0, 1/2) violated")
    if not 2 * (1 + a) - (1 + b - c) ** 2 < 0:
        raise ConstraintViolated("2(1 + a) - (1 + b - c)^2 < 0 violated")
    exact = all(_is_rational(x) for x in (a, b, c))
    shape = BipartiteShape(2, 2)
    alpha, _ = bell()
    if not exact:
        alpha = alpha.to_float()
    conv = GaussianRational if exact else complex
    beta = _zeros(4, exact)
    # basis order 00, 01, 10, 11
    beta[0, 0] = conv(1)
    beta[3, 3] = conv(a)
    beta[1, 1] = beta[2, 2] = conv(b + c)
    beta[1, 2] = beta[2, 1] = conv(b - c)
    return partial_transpose(alpha, shape) + HermitianMatrix._wrap(beta)
