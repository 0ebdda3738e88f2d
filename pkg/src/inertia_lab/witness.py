"""Entanglement-witness checks, kernel product vectors and the 2 x n reduction.

Block positivity beyond two qubits is only sampled: the see-saw can miss a
negative product expectation, but any violating vector it returns is a
genuine certificate.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .bipartite import BipartiteShape, local_conjugate, partial_transpose
from .errors import (
    NoKernel,
    NoKernelProduct,
    NotAWitness,
    SearchIncomplete,
    ShapeMismatch,
    Unsorted,
)
from .hermitian import (
    DEFAULT_TOL,
    HermitianMatrix,
    Inertia,
    as_array,
    eig_hermitian,
    exact_nullspace,
    inertia,
    inertia_from_eigenvalues,
)
from .scalars import GaussianRational

__all__ = [
    "PSD",
    "ENTANGLEMENT_WITNESS",
    "NOT_BLOCK_POSITIVE",
    "INCONCLUSIVE",
    "NPT_STATE",
    "DEFAULT_SEED",
    "two_qubit_block_positive",
    "ProductVector",
    "EwVerdict",
    "ClosureReport",
    "Reduction",
    "is_entanglement_witness",
    "ew_or_npt_closure_check",
    "bound_check",
    "find_product_in_kernel",
    "reduce_2xn",
    "PROJECTED_OUT",
    "CONGRUENCE_REDUCED",
]

PSD = "PSD"
ENTANGLEMENT_WITNESS = "EntanglementWitness"
NOT_BLOCK_POSITIVE = "NotBlockPositive"
INCONCLUSIVE = "Inconclusive"
NPT_STATE = "NPTState"

PROJECTED_OUT = "ProjectedOut"
CONGRUENCE_REDUCED = "CongruenceReduced"

DEFAULT_SEED = 0xC0FFEE
SEESAW_MAX_ITER = 200
SEESAW_CHANGE = 1e-12
PRODUCT_SV_RTOL = 1e-8


def two_qubit_block_positive(eigs, tol: float = 0.0) -> bool:
    """Spectral condition for two-qubit block positivity.

    ``eigs`` are the four eigenvalues sorted descending.  True iff
    ``mu3 >= 0``, ``mu4 >= -mu2`` and ``mu4 >= -sqrt(mu1 mu3)``; ``tol``
    relaxes each inequality by that absolute amount.

    The condition characterises which spectra some block-positive operator
    has.  For a given operator it is necessary only: eigenvectors matter, so
    a True answer does not make that operator block-positive.
    """
    mu = [float(x) for x in eigs]
    if len(mu) != 4:
        raise ShapeMismatch("two-qubit test needs exactly four eigenvalues")
    if any(mu[i] < mu[i + 1] for i in range(3)):
        raise Unsorted("eigenvalues must be sorted in descending order")
    mu1, mu2, mu3, mu4 = mu
    if mu3 < -tol:
        return False
    if mu4 < -mu2 - tol:
        return False
    return bool(mu4 >= -np.sqrt(max(mu1 * mu3, 0.0)) - tol)


# --------------------------------------------------------------------------


def _is_exact_vec(v: np.ndarray) -> bool:
    return v.dtype == object


@dataclass(frozen=True, eq=False)
class ProductVector:
    """``|a> (x) |b>``; float vectors are stored normalised."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = as_array(self.a)
        b = as_array(self.b)
        if _is_exact_vec(a) != _is_exact_vec(b):
            a, b = as_array(a, exact=False), as_array(b, exact=False)
        if a.ndim != 1 or b.ndim != 1:
            raise ShapeMismatch("product factors must be vectors")
        if _is_exact_vec(a):
            if not any(a) or not any(b):
                raise ValueError("product factors must be non-zero")
        else:
            na, nb = np.linalg.norm(a), np.linalg.norm(b)
            if na == 0 or nb == 0:
                raise ValueError("product factors must be non-zero")
            a, b = a / na, b / nb
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def is_exact(self) -> bool:
        return _is_exact_vec(self.a)

    def vector(self) -> np.ndarray:
        return np.kron(self.a, self.b)

    def to_float(self) -> "ProductVector":
        return ProductVector(as_array(self.a, exact=False), as_array(self.b, exact=False))

    def expectation(self, W: HermitianMatrix) -> float:
        """``<a,b|W|a,b> / (<a|a><b|b>)`` in floating point."""
        v = self.to_float().vector()
        return float(np.real(np.conj(v) @ W.to_numpy() @ v))

    def to_dict(self) -> dict:
        def enc(vec):
            if _is_exact_vec(vec):
                return [[f"{x.re.numerator}/{x.re.denominator}", f"{x.im.numerator}/{x.im.denominator}"] for x in vec]
            return [[float(x.real), float(x.imag)] for x in vec]

        return {"a": enc(self.a), "b": enc(self.b)}


@dataclass(frozen=True)
class EwVerdict:
    classification: str
    vector: Optional[ProductVector]
    min_value: Optional[float]
    restarts_used: int
    seed: int

    def to_dict(self) -> dict:
        out = {
            "class": self.classification,
            "min_value": self.min_value,
            "restarts": self.restarts_used,
            "seed": self.seed,
        }
        if self.vector is not None:
            out["vector"] = self.vector.to_dict()
        return out


# --------------------------------------------------------------------------
# see-saw


def _seesaw(T: np.ndarray, a: np.ndarray, b: np.ndarray, max_iter: int, change: float):
    """Batched alternating minimisation of ``<a,b|W|a,b>``.

    ``T`` is ``W`` reshaped to ``(m, n, m, n)``; ``a`` and ``b`` hold one
    start per row.  Each half-step replaces one factor by the lowest
    eigenvector of the partial contraction, so the value never increases.
    """
    prev = None
    vals = None
    for _ in range(max_iter):
        Ma = np.einsum("rk,ikjl,rl->rij", b.conj(), T, b, optimize=True)
        _, va = np.linalg.eigh(Ma)
        a = va[:, :, 0]
        Mb = np.einsum("ri,ikjl,rj->rkl", a.conj(), T, a, optimize=True)
        wb, vb = np.linalg.eigh(Mb)
        b = vb[:, :, 0]
        vals = wb[:, 0]
        if prev is not None and np.max(np.abs(vals - prev)) < change:
            break
        prev = vals
    return vals, a, b


def _random_starts(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _min_product_expectation(Wf: np.ndarray, shape: BipartiteShape, restarts: int, seed: int, max_iter: int):
    m, n = shape.m, shape.n
    rng = np.random.default_rng(seed)
    a0 = _random_starts(rng, restarts, m)
    b0 = _random_starts(rng, restarts, n)
    scale = max(1.0, float(np.abs(Wf).max()))
    vals, a, b = _seesaw(Wf.reshape(m, n, m, n), a0, b0, max_iter, SEESAW_CHANGE * scale)
    best = int(np.argmin(vals))  # first index on ties
    return float(vals[best]), ProductVector(a[best], b[best])


def is_entanglement_witness(
    W: HermitianMatrix,
    shape: BipartiteShape,
    restarts: int = 64,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
    max_iter: int = SEESAW_MAX_ITER,
) -> EwVerdict:
    """Classify ``W`` as PSD, a witness, or not block-positive.

    The witness verdict is sampling-based: no violating product vector was
    found in ``restarts`` see-saw runs.  A NotBlockPositive verdict always
    carries a vector whose recomputed expectation is below ``-tol * ||W||``.
    """
    shape.check(W)
    spectrum = eig_hermitian(W).eigenvalues
    norm = float(np.abs(spectrum).max())
    neg = inertia(W, tol).neg if W.is_exact else inertia_from_eigenvalues(spectrum, tol).neg
    if neg == 0:
        return EwVerdict(PSD, None, None, 0, seed)
    value, vec = _min_product_expectation(W.to_numpy(), shape, restarts, seed, max_iter)
    recomputed = vec.expectation(W)
    if recomputed < -tol * norm:
        return EwVerdict(NOT_BLOCK_POSITIVE, vec, recomputed, restarts, seed)
    return EwVerdict(ENTANGLEMENT_WITNESS, None, value, restarts, seed)


@dataclass(frozen=True)
class ClosureReport:
    """Outcome of checking that ``W^Gamma`` is again a witness or an NPT state."""

    witness: EwVerdict
    gamma_class: str
    gamma_inertia: Inertia
    gamma_verdict: Optional[EwVerdict]

    @property
    def holds(self) -> Optional[bool]:
        """True when confirmed; None when the sampled check is inconclusive."""
        if self.gamma_class in (NPT_STATE, ENTANGLEMENT_WITNESS):
            return True
        return None

    def to_dict(self) -> dict:
        return {
            "witness": self.witness.to_dict(),
            "gamma_class": self.gamma_class,
            "gamma_inertia": list(self.gamma_inertia),
            "gamma_verdict": None if self.gamma_verdict is None else self.gamma_verdict.to_dict(),
            "holds": self.holds,
        }


def ew_or_npt_closure_check(
    W: HermitianMatrix, shape: BipartiteShape, restarts: int = 64, seed: int = DEFAULT_SEED, tol: float = DEFAULT_TOL
) -> ClosureReport:
    """Classify ``W^Gamma`` for a witness ``W``.

    If ``W^Gamma`` is PSD it is an NPT state, since its own partial
    transpose is ``W``.  Otherwise it should again be a witness; a sampled
    violation can only mean the see-saw missed something for ``W`` itself,
    so it is reported as Inconclusive.
    """
    verdict = is_entanglement_witness(W, shape, restarts, seed, tol)
    if verdict.classification != ENTANGLEMENT_WITNESS:
        raise NotAWitness(f"W classified as {verdict.classification}")
    Wg = partial_transpose(W, shape)
    gin = inertia(Wg, tol)
    if gin.neg == 0:
        return ClosureReport(verdict, NPT_STATE, gin, None)
    gv = is_entanglement_witness(Wg, shape, restarts, seed, tol)
    cls = ENTANGLEMENT_WITNESS if gv.classification == ENTANGLEMENT_WITNESS else INCONCLUSIVE
    return ClosureReport(verdict, cls, gin, gv)


def bound_check(W: Optional[HermitianMatrix], shape: BipartiteShape, In: Optional[Inertia] = None, npt_gamma: bool = False, tol: float = DEFAULT_TOL) -> list[str]:
    """Inertia bounds that every witness obeys; returns the violated ones.

    With ``npt_gamma=True`` the operator is the partial transpose of an NPT
    state, which additionally needs three positive eigenvalues and rank 4.
    """
    if In is None:
        if W is None:
            raise ValueError("need W or its inertia")
        In = inertia(W, tol)
    a, b, c = In
    m, n = shape.m, shape.n
    if a + b + c != m * n:
        raise ShapeMismatch(f"inertia {tuple(In)} does not sum to {m * n}")
    out = []
    if a < 1:
        out.append("nu_- >= 1")
    if a > (m - 1) * (n - 1):
        out.append(f"nu_- <= (m-1)(n-1) = {(m - 1) * (n - 1)}")
    if c < 2:
        out.append("nu_+ >= 2")
    if c > m * n - 1:
        out.append(f"nu_+ <= mn-1 = {m * n - 1}")
    if npt_gamma:
        if c < 3:
            out.append("nu_+ >= 3")
        if a + c < 4:
            out.append("rank >= 4")
    return out


# --------------------------------------------------------------------------
# kernel product vectors


def _rank_one_split(v: np.ndarray, m: int, n: int):
    """Best rank-one factors of ``v`` reshaped ``m x n`` and the relative ``sigma_2``."""
    M = v.reshape(m, n)
    U, S, Vh = np.linalg.svd(M)
    if S[0] == 0:
        return None, None, np.inf
    rel = S[1] / S[0] if len(S) > 1 else 0.0
    return U[:, 0] * S[0], Vh[0, :], rel


def _pencil_candidates(K: np.ndarray, m: int, n: int) -> list[np.ndarray]:
    """Product vectors in a kernel of dimension one or two.

    In the two-dimensional case ``A + tB`` is rank one iff every 2x2 minor,
    a quadratic in ``t``, vanishes; the roots of one such quadratic are the
    only candidates.  ``B`` alone is the ``t = inf`` member.
    """
    cols = [K[:, i] for i in range(K.shape[1])]
    if len(cols) == 1:
        return cols
    A, B = (c.reshape(m, n) for c in cols)
    coeffs = []
    for p in range(m):
        for q in range(p + 1, m):
            for k in range(n):
                for l in range(k + 1, n):
                    c0 = A[p, k] * A[q, l] - A[p, l] * A[q, k]
                    c2 = B[p, k] * B[q, l] - B[p, l] * B[q, k]
                    c1 = A[p, k] * B[q, l] + B[p, k] * A[q, l] - A[p, l] * B[q, k] - B[p, l] * A[q, k]
                    coeffs.append((c2, c1, c0))
    out = [cols[1]]
    if not coeffs:
        return [cols[0], cols[1]]
    coeffs = np.array(coeffs)
    row = coeffs[int(np.argmax(np.linalg.norm(coeffs, axis=1)))]
    if np.linalg.norm(row) < 1e-14:
        # every member of the pencil is a product vector
        return [cols[0], cols[1]]
    lead = np.flatnonzero(np.abs(row) > 1e-12 * np.abs(row).max())[0]
    for t in np.roots(row[lead:]):
        out.append(cols[0] + t * cols[1])
    return out


def _search_subspace(K: np.ndarray, shape: BipartiteShape, starts: int, rng: np.random.Generator):
    """Multi-start see-saw maximising ``<a,b|P|a,b>`` with ``P = K K^dagger``."""
    m, n = shape.m, shape.n
    P = K @ K.conj().T
    a0 = _random_starts(rng, starts, m)
    b0 = _random_starts(rng, starts, n)
    vals, a, b = _seesaw(-P.reshape(m, n, m, n), a0, b0, 500, 1e-15)
    order = np.argsort(vals, kind="stable")
    return [np.kron(a[i], b[i]) for i in order[:8]]


def _rationalise(vec: np.ndarray, limit: int = 10**4) -> np.ndarray:
    vec = vec / vec[int(np.argmax(np.abs(vec)))]
    out = np.empty(len(vec), dtype=object)
    for i, z in enumerate(vec):
        out[i] = GaussianRational(
            Fraction(float(z.real)).limit_denominator(limit), Fraction(float(z.imag)).limit_denominator(limit)
        )
    return out


def _exact_product(Wg: HermitianMatrix, shape: BipartiteShape, pv: ProductVector, basis) -> Optional[ProductVector]:
    """Exact kernel product near a float one, or None.

    One factor is rounded to a rational vector; the other is then an exact
    null vector of the linear map ``x -> Wg (a (x) x)`` (or the mirrored
    map).  Within a continuous product family this picks a rational member
    instead of the irrational one the float search happened to land on.
    """
    m, n = shape.m, shape.n
    prior = np.array(basis).T if basis else np.zeros((m * n, 0))

    def independent(v) -> bool:
        stack = np.column_stack([prior, as_array(v, exact=False)])
        return np.linalg.matrix_rank(stack, tol=1e-9) == stack.shape[1]

    def closest(null, target):
        def overlap(v):
            f = as_array(v, exact=False)
            return abs(np.vdot(f, target)) / np.linalg.norm(f)

        return max(null, key=overlap)

    ra = _rationalise(pv.a)
    eye_n = as_array(np.eye(n, dtype=int).tolist(), exact=True)
    null = exact_nullspace(Wg.data @ np.kron(ra.reshape(m, 1), eye_n))
    if null:
        cand = ProductVector(ra, closest(null, pv.b))
        if independent(cand.vector()):
            return cand
    rb = _rationalise(pv.b)
    eye_m = as_array(np.eye(m, dtype=int).tolist(), exact=True)
    null = exact_nullspace(Wg.data @ np.kron(eye_m, rb.reshape(n, 1)))
    if null:
        cand = ProductVector(closest(null, pv.a), rb)
        if independent(cand.vector()):
            return cand
    return None


def _exact_kernel_cells(Wg: HermitianMatrix) -> list[int]:
    data = Wg.data
    return [i for i in range(Wg.dim) if not any(data[:, i])]


def find_product_in_kernel(
    Wg: HermitianMatrix,
    shape: BipartiteShape,
    tol: float = DEFAULT_TOL,
    starts: int = 128,
    seed: int = DEFAULT_SEED,
) -> list[ProductVector]:
    """Linearly independent product vectors in the kernel of ``Wg``.

    Computational-basis cells in the kernel are taken first.  The search
    then continues in the part of the kernel orthogonal to everything found
    so far, which keeps the results independent: by closed-form minors when
    that part has dimension at most two, else by multi-start see-saw.  When
    ``Wg`` has ``k`` negative eigenvalues and a ``d``-dimensional kernel, at
    least ``l = d + k - (m-1)(n-1)`` products exist; finding fewer emits
    :class:`SearchIncomplete`.  For exact ``Wg`` every returned vector with
    a rational representative is verified exactly.
    """
    shape.check(Wg)
    m, n = shape.m, shape.n
    decomp = eig_hermitian(Wg)
    w, V = decomp.eigenvalues, decomp.eigenvectors
    In = inertia(Wg, tol) if Wg.is_exact else inertia_from_eigenvalues(w, tol)
    d = In.zero
    if d == 0:
        raise NoKernel("the matrix has trivial kernel")
    need = d + In.neg - (m - 1) * (n - 1)
    order = np.argsort(np.abs(w), kind="stable")
    K = V[:, order[:d]]

    Wf = Wg.to_numpy()
    scale = max(1.0, float(np.abs(w).max()))
    found: list[ProductVector] = []
    basis: list[np.ndarray] = []

    if Wg.is_exact:
        cells = _exact_kernel_cells(Wg)
    else:
        cells = [i for i in range(Wg.dim) if np.linalg.norm(Wf[:, i]) <= tol * scale]
    for idx in cells[:d]:
        ea = [0] * m
        eb = [0] * n
        ea[idx // n] = 1
        eb[idx % n] = 1
        found.append(ProductVector(as_array(ea, exact=Wg.is_exact), as_array(eb, exact=Wg.is_exact)))
        e = np.zeros(Wg.dim, dtype=complex)
        e[idx] = 1
        basis.append(e)

    rng = np.random.default_rng(seed)
    while len(found) < d:
        if basis:
            Q, _ = np.linalg.qr(np.array(basis).T)
            rest = K - Q @ (Q.conj().T @ K)
            U, S, _ = np.linalg.svd(rest, full_matrices=False)
            Kt = U[:, : d - len(basis)]
        else:
            Kt = K
        if Kt.shape[1] <= 2:
            candidates = _pencil_candidates(Kt, m, n)
        else:
            candidates = _search_subspace(Kt, shape, starts, rng)
        hit = None
        for v in candidates:
            proj = Kt @ (Kt.conj().T @ v)
            a, b, rel = _rank_one_split(proj, m, n)
            if a is not None and rel < PRODUCT_SV_RTOL:
                hit = (a, b)
                break
        if hit is None:
            break
        a, b = hit
        pv = ProductVector(a, b)
        if Wg.is_exact:
            pv = _exact_product(Wg, shape, pv, basis) or pv
        found.append(pv)
        basis.append(pv.to_float().vector())

    if need > 0 and len(found) < need:
        warnings.warn(
            SearchIncomplete(f"found {len(found)} kernel product vectors, at least {need} exist"), stacklevel=2
        )
    return found


# --------------------------------------------------------------------------
# 2 x n reduction


class Reduction(NamedTuple):
    state: HermitianMatrix
    shape: BipartiteShape
    mode: str


def _completion(first: np.ndarray, exact: bool) -> np.ndarray:
    """Invertible matrix whose first row is ``first``; other rows are unit vectors."""
    k = len(first)
    pivot = int(np.argmax([abs(complex(x)) for x in first]))
    rows = [list(first)]
    for i in range(k):
        if i != pivot:
            e = [0] * k
            e[i] = 1
            rows.append(e)
    return as_array(rows, exact=exact) if exact else as_array(rows, exact=False)


def _row_is_zero(row: np.ndarray, exact: bool, cut: float) -> bool:
    if exact:
        return not any(row)
    return float(np.linalg.norm(row)) <= cut


def reduce_2xn(
    rho: HermitianMatrix,
    shape: BipartiteShape,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
) -> Reduction:
    """Shrink a ``2 x n`` state to ``2 x (n-1)`` using a kernel product vector.

    A local invertible operation moves a product vector of the partial
    transpose's kernel to ``|0,0>``, which makes row ``|0,0>`` of the state
    vanish.  If row ``|1,0>`` vanishes too, second-factor index 0 is simply
    dropped (ProjectedOut, inertia ``(a, b-2, c)``).  Otherwise ``I (x) V``
    clears the coupling of ``|1,0>`` to ``|1,l>`` and the isolated positive
    pivot is dropped (CongruenceReduced, inertia ``(a, b-1, c-1)``).
    """
    shape.check(rho)
    if shape.m != 2 or shape.n < 2:
        raise ShapeMismatch(f"reduce_2xn needs a 2 x n shape with n >= 2, got {shape}")
    n = shape.n
    gamma = partial_transpose(rho, shape)
    try:
        products = find_product_in_kernel(gamma, shape, tol, seed=seed)
    except NoKernel as exc:
        raise NoKernelProduct(str(exc)) from exc
    if not products:
        raise NoKernelProduct("no product vector found in the kernel")
    pv = products[0]
    exact = rho.is_exact and pv.is_exact
    if not exact:
        rho = rho.to_float()
        pv = pv.to_float()
    L = _completion(pv.a, exact)
    R = _completion(np.conj(pv.b), exact)
    r1 = local_conjugate(rho, shape, L, R)
    data = r1.data
    cut = tol * max(1.0, r1.max_abs())
    keep = [i * n + k for i in range(2) for k in range(1, n)]
    small = BipartiteShape(2, n - 1)
    if _row_is_zero(data[n], exact, cut):
        return Reduction(HermitianMatrix._wrap(data[np.ix_(keep, keep)]), small, PROJECTED_OUT)
    pivot = data[n, n]
    V = as_array(np.eye(n, dtype=int).tolist(), exact=exact)
    for l in range(1, n):
        V[l, 0] = -data[n + l, n] / pivot
    I2 = as_array([[1, 0], [0, 1]], exact=exact)
    r2 = local_conjugate(r1, shape, I2, V)
    return Reduction(HermitianMatrix._wrap(r2.data[np.ix_(keep, keep)]), small, CONGRUENCE_REDUCED)
