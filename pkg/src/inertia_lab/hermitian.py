"""Dense Hermitian matrices, the Jacobi eigensolver and two inertia routines.

Exact matrices are numpy ``object`` arrays of :class:`GaussianRational`;
float matrices are ``complex128`` arrays.  :func:`inertia_exact` never
looks at a floating-point number, so it can certify a zero count, which no
tolerance-based count can.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import NonConvergence, NotExact, NotHermitian, ShapeMismatch, Singular
from .scalars import GaussianRational, format_fraction, parse_fraction, to_exact

__all__ = [
    "Inertia",
    "Spectrum",
    "HermitianMatrix",
    "eig_hermitian",
    "eigvalsh_stack",
    "inertia_float",
    "inertia_exact",
    "inertia",
    "inertia_from_eigenvalues",
    "congruence",
    "as_array",
    "is_exact_array",
    "exact_rank",
    "exact_nullspace",
    "DEFAULT_TOL",
    "MAX_SWEEPS",
]

DEFAULT_TOL = 1e-9
MAX_SWEEPS = 100
_HERMITIAN_RTOL = 1e-12
_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)


class Inertia(NamedTuple):
    """Counts of negative, zero and positive eigenvalues."""

    neg: int
    zero: int
    pos: int

    @property
    def dim(self) -> int:
        return self.neg + self.zero + self.pos

    @property
    def rank(self) -> int:
        return self.neg + self.pos

    def __str__(self) -> str:
        return f"({self.neg},{self.zero},{self.pos})"


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # columns, orthonormal


# --------------------------------------------------------------------------
# array helpers


def is_exact_array(arr: np.ndarray) -> bool:
    return arr.dtype == object


def _exactify(arr: np.ndarray) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.ravel()
    flat_out = out.ravel()
    for i, x in enumerate(flat_in):
        flat_out[i] = x if isinstance(x, GaussianRational) else to_exact(x)
    return out


def _floatify(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return np.array([complex(x) for x in arr.ravel()], dtype=complex).reshape(arr.shape)
    return np.asarray(arr, dtype=complex)


def as_array(x, exact: bool | None = None) -> np.ndarray:
    """Normalise matrices, nested lists or HermitianMatrix into an ndarray.

    Integer and rational input becomes an exact object array unless
    ``exact=False``; anything holding floats becomes ``complex128``.
    """
    if isinstance(x, HermitianMatrix):
        arr = x.data
    else:
        arr = np.asarray(x)
    if exact is None:
        if arr.dtype == object:
            exact = all(isinstance(v, (GaussianRational, int, Fraction)) for v in arr.ravel())
        else:
            exact = np.issubdtype(arr.dtype, np.integer) or arr.dtype == bool
    if exact:
        if arr.dtype != object and not (np.issubdtype(arr.dtype, np.integer) or arr.dtype == bool):
            raise NotExact("floating-point entries cannot be used in exact mode")
        return _exactify(arr)
    return _floatify(arr)


def _common_mode(*arrays: np.ndarray) -> tuple[np.ndarray, ...]:
    """Promote to float if any operand is float."""
    if all(is_exact_array(a) for a in arrays):
        return arrays
    return tuple(_floatify(a) for a in arrays)


# --------------------------------------------------------------------------


class HermitianMatrix:
    """Immutable dense Hermitian matrix, exact or double precision.

    Parameters
    ----------
    data : array_like
        Square matrix.  Integer, :class:`~fractions.Fraction` and
        :class:`GaussianRational` entries give an exact matrix; float or
        complex entries give a float matrix.
    exact : bool, optional
        Force the mode.  Exact mode rejects floating-point entries.
    check : bool
        Validate Hermiticity (exact equality, or ``1e-12 * max|A|`` in float
        mode).  Float input is symmetrised after the check.
    """

    __slots__ = ("_data",)

    def __init__(self, data, exact: bool | None = None, *, check: bool = True):
        arr = as_array(data, exact)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ShapeMismatch(f"expected a non-empty square matrix, got shape {arr.shape}")
        if is_exact_array(arr):
            if check:
                d = arr.shape[0]
                for i in range(d):
                    if arr[i, i].im:
                        raise NotHermitian(f"diagonal entry {i} has non-zero imaginary part")
                    for j in range(i + 1, d):
                        if arr[i, j] != arr[j, i].conjugate():
                            raise NotHermitian(f"entries ({i},{j}) and ({j},{i}) are not conjugate")
        else:
            if check:
                scale = max(np.abs(arr).max(), np.finfo(float).tiny)
                if np.abs(arr - arr.conj().T).max() > _HERMITIAN_RTOL * scale:
                    raise NotHermitian("matrix is not Hermitian within 1e-12 relative")
            arr = 0.5 * (arr + arr.conj().T)
        arr.flags.writeable = False
        self._data = arr

    # construction -----------------------------------------------------
    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "HermitianMatrix":
        """Internal constructor for arrays already known to be Hermitian."""
        obj = cls.__new__(cls)
        if not is_exact_array(arr):
            arr = 0.5 * (arr + arr.conj().T)
        else:
            arr = np.array(arr, dtype=object)
        arr.flags.writeable = False
        obj._data = arr
        return obj

    @classmethod
    def identity(cls, dim: int, exact: bool = True) -> "HermitianMatrix":
        if exact:
            arr = np.full((dim, dim), _ZERO, dtype=object)
            for i in range(dim):
                arr[i, i] = _ONE
            return cls._wrap(arr)
        return cls._wrap(np.eye(dim, dtype=complex))

    @classmethod
    def zeros(cls, dim: int, exact: bool = True) -> "HermitianMatrix":
        if exact:
            return cls._wrap(np.full((dim, dim), _ZERO, dtype=object))
        return cls._wrap(np.zeros((dim, dim), dtype=complex))

    @classmethod
    def diag(cls, values, exact: bool | None = None) -> "HermitianMatrix":
        vals = as_array(list(values), exact)
        d = len(vals)
        if is_exact_array(vals):
            arr = np.full((d, d), _ZERO, dtype=object)
        else:
            arr = np.zeros((d, d), dtype=complex)
        for i, v in enumerate(vals):
            arr[i, i] = v
        return cls(arr)

    @classmethod
    def projector(cls, vec, exact: bool | None = None) -> "HermitianMatrix":
        """``|v><v|`` for an (unnormalised) column vector."""
        v = as_array(list(vec), exact)
        return cls._wrap(np.outer(v, np.conj(v)))

    # accessors --------------------------------------------------------
    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def is_exact(self) -> bool:
        return is_exact_array(self._data)

    @property
    def mode(self) -> str:
        return "exact" if self.is_exact else "float"

    def to_float(self) -> "HermitianMatrix":
        if not self.is_exact:
            return self
        return HermitianMatrix._wrap(_floatify(self._data))

    def to_numpy(self) -> np.ndarray:
        """Writable complex128 copy."""
        return _floatify(self._data).copy()

    def trace(self):
        t = self._data.trace()
        return t.re if self.is_exact else float(np.real(t))

    def max_abs(self) -> float:
        return float(np.abs(_floatify(self._data)).max())

    def __getitem__(self, idx):
        return self._data[idx]

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim}, mode={self.mode})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        if self.dim != other.dim or self.is_exact != other.is_exact:
            return False
        if self.is_exact:
            return bool(np.all(self._data == other._data))
        return bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def __reduce__(self):
        return (HermitianMatrix._wrap, (np.array(self._data),))

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        if self.dim != other.dim:
            raise ShapeMismatch("dimension mismatch")
        a, b = _common_mode(self._data, other._data)
        return HermitianMatrix._wrap(a + b)

    def __sub__(self, other):
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        if self.dim != other.dim:
            raise ShapeMismatch("dimension mismatch")
        a, b = _common_mode(self._data, other._data)
        return HermitianMatrix._wrap(a - b)

    def __neg__(self):
        return HermitianMatrix._wrap(-self._data)

    def __mul__(self, scalar):
        if isinstance(scalar, complex) and scalar.imag:
            raise NotHermitian("only real scalars keep a matrix Hermitian")
        if self.is_exact and isinstance(scalar, (int, Fraction)):
            return HermitianMatrix._wrap(self._data * GaussianRational(scalar))
        return HermitianMatrix._wrap(_floatify(self._data) * float(np.real(scalar)))

    __rmul__ = __mul__

    # serialisation ----------------------------------------------------
    def to_dict(self) -> dict:
        if self.is_exact:
            entries = [[[format_fraction(x.re), format_fraction(x.im)] for x in row] for row in self._data]
        else:
            entries = [[[float(x.real), float(x.imag)] for x in row] for row in self._data]
        return {"dim": self.dim, "mode": self.mode, "entries": entries}

    @classmethod
    def from_dict(cls, obj: dict) -> "HermitianMatrix":
        dim = int(obj["dim"])
        mode = obj["mode"]
        rows = obj["entries"]
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise ShapeMismatch("entries do not match declared dim")
        if mode == "exact":
            arr = np.empty((dim, dim), dtype=object)
            for i, row in enumerate(rows):
                for j, (re, im) in enumerate(row):
                    arr[i, j] = GaussianRational(parse_fraction(str(re)), parse_fraction(str(im)))
            return cls(arr)
        if mode == "float":
            arr = np.array([[complex(float(re), float(im)) for re, im in row] for row in rows], dtype=complex)
            return cls(arr, exact=False)
        raise ValueError(f"unknown matrix mode {mode!r}")

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "HermitianMatrix":
        return cls.from_dict(json.loads(text))


# --------------------------------------------------------------------------
# Jacobi eigensolver


@lru_cache(maxsize=None)
def _round_robin(d: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Tournament ordering: every index pair appears once per sweep and the
    pairs inside a round are disjoint, so a round can be applied at once."""
    n = d + (d % 2)
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        pairs = []
        for i in range(n // 2):
            p, q = players[i], players[n - 1 - i]
            if p < d and q < d:
                pairs.append((min(p, q), max(p, q)))
        if pairs:
            P = np.array([p for p, _ in pairs], dtype=np.intp)
            Q = np.array([q for _, q in pairs], dtype=np.intp)
            rounds.append((P, Q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _jacobi(stack: np.ndarray, want_vectors: bool, max_sweeps: int = MAX_SWEEPS):
    """Cyclic complex Jacobi on a (B, d, d) stack of Hermitian matrices."""
    A = np.array(stack, dtype=complex, copy=True)
    B, d, _ = A.shape
    V = np.broadcast_to(np.eye(d, dtype=complex), (B, d, d)).copy() if want_vectors else None
    if d == 1:
        return A[:, :, 0].real.copy(), V
    rounds = _round_robin(d)
    offmask = ~np.eye(d, dtype=bool)
    fro = np.sqrt(np.sum(np.abs(A) ** 2, axis=(1, 2)))
    eps = np.finfo(float).eps
    thresh = 8.0 * d * eps * fro
    bidx = np.arange(B)[:, None]
    for _sweep in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(A[:, offmask]) ** 2, axis=1))
        if np.all(off <= thresh):
            return np.real(np.diagonal(A, axis1=1, axis2=2)).copy(), V
        for P, Q in rounds:
            app = A[:, P, P].real
            aqq = A[:, Q, Q].real
            apq = A[:, P, Q]
            g = np.abs(apq)
            # apq / |apq| overflows for subnormal apq; the angle does not
            phase = np.exp(1j * np.angle(apq))
            theta = 0.5 * np.arctan2(2.0 * g, aqq - app)
            c = np.cos(theta)
            s = np.sin(theta)
            # U restricted to (p, q): [[c, s], [-s*conj(phase), c*conj(phase)]]
            u_pp = c
            u_pq = s
            u_qp = -s * np.conj(phase)
            u_qq = c * np.conj(phase)
            # columns: A <- A U
            colp = A[:, :, P]
            colq = A[:, :, Q]
            A[:, :, P] = colp * u_pp[:, None, :] + colq * u_qp[:, None, :]
            A[:, :, Q] = colp * u_pq[:, None, :] + colq * u_qq[:, None, :]
            # rows: A <- U^H A
            rowp = A[:, P, :]
            rowq = A[:, Q, :]
            A[:, P, :] = np.conj(u_pp)[:, :, None] * rowp + np.conj(u_qp)[:, :, None] * rowq
            A[:, Q, :] = np.conj(u_pq)[:, :, None] * rowp + np.conj(u_qq)[:, :, None] * rowq
            A[bidx, P, Q] = 0.0
            A[bidx, Q, P] = 0.0
            if want_vectors:
                vp = V[:, :, P]
                vq = V[:, :, Q]
                V[:, :, P] = vp * u_pp[:, None, :] + vq * u_qp[:, None, :]
                V[:, :, Q] = vp * u_pq[:, None, :] + vq * u_qq[:, None, :]
    raise NonConvergence(f"Jacobi did not converge within {max_sweeps} sweeps")


def eig_hermitian(A: HermitianMatrix) -> Spectrum:
    """Eigen-decomposition by cyclic complex Jacobi rotations.

    Exact input is converted to float first.  Eigenvalues come back in
    ascending order with matching orthonormal eigenvector columns.
    """
    arr = A.to_float().data if isinstance(A, HermitianMatrix) else np.asarray(A, dtype=complex)
    w, V = _jacobi(arr[None, :, :], want_vectors=True)
    order = np.argsort(w[0], kind="stable")
    return Spectrum(eigenvalues=w[0][order], eigenvectors=V[0][:, order])


def eigvalsh_stack(stack) -> np.ndarray:
    """Ascending eigenvalues of every matrix in a (B, d, d) stack."""
    arr = np.asarray(stack, dtype=complex)
    if arr.ndim == 2:
        arr = arr[None]
    w, _ = _jacobi(arr, want_vectors=False)
    return np.sort(w, axis=1)


def inertia_from_eigenvalues(eigs, tol: float = DEFAULT_TOL) -> Inertia:
    eigs = np.asarray(eigs, dtype=float)
    scale = max(1.0, float(np.abs(eigs).max())) if eigs.size else 1.0
    cut = tol * scale
    neg = int(np.count_nonzero(eigs < -cut))
    pos = int(np.count_nonzero(eigs > cut))
    return Inertia(neg, eigs.size - neg - pos, pos)


def inertia_float(A: HermitianMatrix, tol: float = DEFAULT_TOL) -> Inertia:
    """Sign counts of the Jacobi eigenvalues.

    An eigenvalue counts as zero when ``|lambda| <= tol * max(1, rho(A))``
    with ``rho`` the spectral radius; states here are unnormalised, so the
    threshold has to scale with the matrix.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    return inertia_from_eigenvalues(eig_hermitian(A).eigenvalues, tol)


# --------------------------------------------------------------------------
# exact congruence diagonalisation


def _exact_rows(A) -> list[list[GaussianRational]]:
    if isinstance(A, HermitianMatrix):
        if not A.is_exact:
            raise NotExact("inertia_exact needs exact entries")
        arr = A.data
    else:
        arr = np.asarray(A)
        if arr.dtype != object:
            raise NotExact("inertia_exact needs exact entries")
    return [list(row) for row in arr]


def inertia_exact(A: HermitianMatrix) -> Inertia:
    """Inertia by Hermitian congruence diagonalisation over Q(i).

    Repeatedly take the largest-magnitude non-zero diagonal pivot and clear
    its row and column.  When the remaining diagonal is zero but some
    ``a_ij`` is not, the congruence ``row_i += a_ij * row_j`` (and the
    conjugate column operation) puts ``2|a_ij|^2`` on the diagonal, after
    which the 2x2 block splits into one positive and one negative pivot.
    """
    a = _exact_rows(A)
    n = len(a)
    active = list(range(n))
    neg = pos = 0
    while active:
        pivot = None
        best = Fraction(0)
        for k in active:
            dk = a[k][k].re
            if dk and abs(dk) > best:
                best = abs(dk)
                pivot = k
        if pivot is None:
            pair = next(((i, j) for ii, i in enumerate(active) for j in active[ii + 1:] if a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            z = a[i][j]
            zc = z.conjugate()
            for k in active:
                if a[j][k]:
                    a[i][k] = a[i][k] + z * a[j][k]
            for k in active:
                if a[k][j]:
                    a[k][i] = a[k][i] + a[k][j] * zc
            pivot = i
        d = a[pivot][pivot].re
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest = [k for k in active if k != pivot]
        col = [(i, a[i][pivot]) for i in rest if a[i][pivot]]
        for idx, (i, aip) in enumerate(col):
            f = aip / d
            row_i = a[i]
            for j, ajp in col[idx:]:
                # a_ij -= a_ip * a_pj / d with a_pj = conj(a_jp)
                new = row_i[j] - f * ajp.conjugate()
                row_i[j] = new
                if j != i:
                    a[j][i] = new.conjugate()
                else:
                    row_i[i] = GaussianRational(new.re)
        active = rest
    return Inertia(neg, n - neg - pos, pos)


def inertia(A: HermitianMatrix, tol: float = DEFAULT_TOL) -> Inertia:
    """Exact inertia for exact matrices, Jacobi sign counts otherwise."""
    return inertia_exact(A) if A.is_exact else inertia_float(A, tol)


def _rref(S) -> tuple[list[list[GaussianRational]], list[int]]:
    """Reduced row echelon form over Q(i) and the pivot columns."""
    rows = [list(r) for r in _exactify(np.asarray(S, dtype=object))]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


def exact_rank(S) -> int:
    """Rank of a general exact matrix by Gaussian elimination."""
    return len(_rref(S)[1])


def exact_nullspace(S) -> list[np.ndarray]:
    """Basis of the right null space of an exact matrix, one vector per free column."""
    arr = np.asarray(S, dtype=object)
    ncols = arr.shape[1]
    rows, pivots = _rref(arr)
    out = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = np.full(ncols, _ZERO, dtype=object)
        v[free] = _ONE
        for row, pc in zip(rows, pivots):
            v[pc] = -row[free]
        out.append(v)
    return out


_COND_LIMIT = 1e12


def congruence(A: HermitianMatrix, S) -> HermitianMatrix:
    """Return ``S A S^dagger`` after checking that ``S`` is invertible.

    Invertibility is decided by exact rank when both operands are exact and
    by a condition-number bound of 1e12 otherwise.
    """
    s = as_array(S)
    if s.ndim != 2 or s.shape != (A.dim, A.dim):
        raise ShapeMismatch(f"S must be {A.dim}x{A.dim}, got {s.shape}")
    a, s = _common_mode(A.data, s)
    if is_exact_array(s):
        if exact_rank(s) < A.dim:
            raise Singular("S is singular")
        return HermitianMatrix._wrap(s @ a @ np.conj(s).T)
    if not np.all(np.isfinite(s)) or np.linalg.cond(s) > _COND_LIMIT:
        raise Singular("S is singular or too ill-conditioned")
    return HermitianMatrix._wrap(s @ a @ s.conj().T)
