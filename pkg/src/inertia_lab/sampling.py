"""Random density matrices and batched partial-transpose inertias.

States are ``G G^dagger`` with ``G`` a ``d x k`` complex Ginibre matrix:
``k = d`` is the Hilbert-Schmidt measure, smaller ``k`` the induced
measure of rank ``k``.  Everything works on ``(B, d, d)`` stacks so the
Jacobi solver can process a whole batch at once.
"""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .hermitian import DEFAULT_TOL, eigvalsh_stack

__all__ = [
    "parse_measure",
    "random_states",
    "partial_transpose_stack",
    "inertia_stack",
    "random_npt_states",
    "tabulate_pt_inertias",
]

_INDUCED = re.compile(r"^induced-(\d+)$")


def parse_measure(measure: str, dim: int) -> int:
    """Ginibre column count for ``"hilbert-schmidt"`` or ``"induced-k"``."""
    if measure == "hilbert-schmidt":
        return dim
    match = _INDUCED.match(measure)
    if match and int(match.group(1)) >= 1:
        return int(match.group(1))
    raise ValueError(f"unknown measure {measure!r}; use 'hilbert-schmidt' or 'induced-k'")


def random_states(m: int, n: int, count: int, rng: np.random.Generator, measure: str = "hilbert-schmidt") -> np.ndarray:
    """``count`` unit-trace random states on ``m x n`` as a complex stack."""
    d = m * n
    k = parse_measure(measure, d)
    G = rng.standard_normal((count, d, k)) + 1j * rng.standard_normal((count, d, k))
    rho = G @ np.conj(np.swapaxes(G, 1, 2))
    tr = np.real(np.trace(rho, axis1=1, axis2=2))
    return rho / tr[:, None, None]


def partial_transpose_stack(stack: np.ndarray, m: int, n: int) -> np.ndarray:
    B = stack.shape[0]
    return stack.reshape(B, m, n, m, n).transpose(0, 3, 2, 1, 4).reshape(B, m * n, m * n)


def inertia_stack(eigs: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``(B, 3)`` array of (neg, zero, pos) with the relative zero threshold."""
    scale = np.maximum(1.0, np.abs(eigs).max(axis=1))
    cut = (tol * scale)[:, None]
    neg = np.count_nonzero(eigs < -cut, axis=1)
    pos = np.count_nonzero(eigs > cut, axis=1)
    return np.stack([neg, eigs.shape[1] - neg - pos, pos], axis=1)


def random_npt_states(
    m: int,
    n: int,
    count: int,
    seed: int,
    measure: str = "hilbert-schmidt",
    tol: float = DEFAULT_TOL,
    batch: int = 2048,
    max_draws: int | None = None,
):
    """Draw until ``count`` NPT states are found.

    Returns the states, their partial-transpose inertias and the total
    number of draws.  The draw sequence depends only on ``seed``.
    """
    rng = np.random.default_rng(seed)
    limit = max_draws if max_draws is not None else 1000 * count
    states, inertias = [], []
    found = drawn = 0
    while found < count:
        if drawn >= limit:
            raise RuntimeError(f"only {found} NPT states in {drawn} draws")
        rho = random_states(m, n, batch, rng, measure)
        drawn += batch
        ins = inertia_stack(eigvalsh_stack(partial_transpose_stack(rho, m, n)), tol)
        keep = ins[:, 0] > 0
        states.append(rho[keep])
        inertias.append(ins[keep])
        found += int(keep.sum())
    states = np.concatenate(states)[:count]
    inertias = np.concatenate(inertias)[:count]
    return states, inertias, drawn


def _tabulate_chunk(args) -> dict[tuple[int, int, int], int]:
    m, n, size, seed_seq, measure, tol = args
    rng = np.random.default_rng(seed_seq)
    ins = inertia_stack(eigvalsh_stack(partial_transpose_stack(random_states(m, n, size, rng, measure), m, n)), tol)
    table: dict[tuple[int, int, int], int] = {}
    for row in ins[ins[:, 0] > 0]:
        key = (int(row[0]), int(row[1]), int(row[2]))
        table[key] = table.get(key, 0) + 1
    return table


def tabulate_pt_inertias(
    m: int,
    n: int,
    count: int,
    seed: int,
    measure: str = "hilbert-schmidt",
    tol: float = DEFAULT_TOL,
    batch: int = 2048,
    jobs: int = 1,
) -> tuple[dict[tuple[int, int, int], int], int]:
    """Frequencies of partial-transpose inertias among the NPT draws out of ``count``.

    Draws come in fixed chunks of ``batch`` with child seeds spawned from
    ``seed``, so the table does not depend on ``jobs``.
    """
    parse_measure(measure, m * n)
    sizes = [batch] * (count // batch) + ([count % batch] if count % batch else [])
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    tasks = [(m, n, size, child, measure, tol) for size, child in zip(sizes, children)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_tabulate_chunk, tasks))
    else:
        parts = [_tabulate_chunk(t) for t in tasks]
    table: dict[tuple[int, int, int], int] = {}
    for part in parts:
        for key, value in part.items():
            table[key] = table.get(key, 0) + value
    return dict(sorted(table.items())), sum(table.values())
