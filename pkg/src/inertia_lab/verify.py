"""Property suites behind ``inertia-lab verify``.

Each suite runs one family of claims at a chosen scale and returns a
:class:`VerifyReport` listing every check with the values it saw.
Failing checks carry a counterexample under ``values["counterexample"]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

import numpy as np

from .bipartite import (
    BipartiteShape,
    MultiShape,
    embed,
    kron_bipartite,
    local_conjugate,
    partial_trace,
    partial_transpose,
    partial_transpose_multi,
)
from .constructors import (
    SchmidtSpec,
    XStateParams,
    bell,
    pure_state,
    pure_state_inertia,
    two_qubit_double_ew,
    xstate,
    xstate_pt_spectrum,
    xstate_with_k_negatives,
)
from .generators import (
    EXACT_VERIFIED,
    enumerate_N2n,
    expected_N2n,
    kron_inertia,
    ncopy_inertia,
    pad_and_add_products,
    shift_to_full_rank,
)
from .hermitian import HermitianMatrix, eig_hermitian, exact_rank, inertia, inertia_exact
from .sampling import random_npt_states
from .separability import SEPARABLE_BY_CRITERION, rank_pt_all_bipartitions
from .slocc import classify, pt_equivariance_check, random_local_invertible, strong_inequivalence
from .witness import PROJECTED_OUT, find_product_in_kernel, reduce_2xn, two_qubit_block_positive

__all__ = ["Check", "VerifyReport", "SUITES", "run_suite"]


@dataclass
class Check:
    name: str
    passed: bool
    values: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "values": self.values}


@dataclass
class VerifyReport:
    suite: str
    params: dict
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, **values) -> None:
        self.checks.append(Check(name, bool(passed), values))

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def _tri(x) -> list[int]:
    return [int(v) for v in x]


def _first_bad(items, pred):
    for item in items:
        if not pred(item):
            return item
    return None


# --------------------------------------------------------------------------


def suite_thm1(rep: VerifyReport, samples: int = 1000, seed: int = 0, **_) -> None:
    _, ins, drawn = random_npt_states(2, 2, samples, seed)
    bad = [_tri(r) for r in ins if tuple(r) != (1, 0, 3)]
    rep.add("random 2x2 NPT states have inertia (1,0,3)", not bad, samples=samples, draws=drawn, counterexample=bad[:1] or None)

    rng = np.random.default_rng(seed)
    tuples = []
    for _ in range(samples):
        top = np.sort(rng.uniform(0.01, 2.0, 2))[::-1]
        tuples.append([float(top[0]), float(top[1]), 0.0, -float(rng.uniform(1e-3, 2.0))])
    accepted = [t for t in tuples if two_qubit_block_positive(t)]
    rep.add("spectral test rejects every (m1, m2, 0, m4<0)", not accepted, tuples=len(tuples), counterexample=accepted[:1] or None)

    rho, shape = bell()
    rep.add("Bell partial transpose", inertia(partial_transpose(rho, shape)) == (1, 0, 3), inertia=_tri(inertia(partial_transpose(rho, shape))))
    W = two_qubit_double_ew()
    rep.add("double-EW example has inertia (1,0,3)", inertia(W) == (1, 0, 3), inertia=_tri(inertia(W)))


def suite_thm2(rep: VerifyReport, n: int = 4, seed: int = 0, **_) -> None:
    if n < 3:
        raise ValueError("thm2 needs n >= 3")
    big = {tuple(x) for x in expected_N2n(n)}
    small = {tuple(x) for x in expected_N2n(n - 1)}
    bad = []
    tested = 0
    for a in range(1, 2 * n + 1):
        for b in range(0, 2 * n - a + 1):
            c = 2 * n - a - b
            if a + b <= n - 1:
                continue
            tested += 1
            outside = (a, b - 2, c) not in small and (a, b - 1, c - 1) not in small
            if ((a, b, c) not in big) != outside:
                bad.append([a, b, c])
    rep.add("membership criterion in terms of N_{2,n-1}", not bad, n=n, triples=tested, counterexample=bad[:1] or None)

    steps = []
    for cert in enumerate_N2n(n):
        a, b, c = cert.claimed
        if a + b <= n - 1:
            continue
        red = reduce_2xn(cert.state, cert.shape, seed=seed)
        got = tuple(inertia(partial_transpose(red.state, red.shape)))
        want = (a, b - 2, c) if red.mode == PROJECTED_OUT else (a, b - 1, c - 1)
        steps.append({"from": [a, b, c], "mode": red.mode, "to": list(got), "ok": got == want and got in small})
    bad = [s for s in steps if not s["ok"]]
    rep.add("reduce_2xn lands in N_{2,n-1} with the predicted inertia", not bad, reductions=len(steps), counterexample=bad[:1] or None)

    ranks = []
    for cert in enumerate_N2n(n):
        j, b, c = cert.claimed
        if b == 2 * (n - 1 - j) and c == j + 2:
            ranks.append({"inertia": [j, b, c], "rank": exact_rank(partial_trace(cert.state, cert.shape).data), "want": j + 1})
    bad = [r for r in ranks if r["rank"] != r["want"]]
    rep.add("(j, 2(n-1-j), j+2) forces rank j+1 on the second factor", not bad, cases=len(ranks), counterexample=bad[:1] or None)


def suite_thm3(rep: VerifyReport, n: int = 5, jobs: int = 1, **_) -> None:
    certs = enumerate_N2n(n, jobs=jobs)
    got = [tuple(c.claimed) for c in certs]
    want = [tuple(x) for x in expected_N2n(n)]
    rep.add("count is (n-1)^2", len(set(got)) == (n - 1) ** 2, n=n, distinct=len(set(got)), expected=(n - 1) ** 2)
    rep.add("inertias equal the closed form", got == want, missing=[list(x) for x in set(want) - set(got)])
    levels = {c.verified for c in certs}
    rep.add("all certificates exactly verified", levels == {EXACT_VERIFIED}, levels=sorted(levels))
    remeasured = _first_bad(certs, lambda c: inertia_exact(partial_transpose(c.state, c.shape)) == c.claimed)
    rep.add("independent re-measurement", remeasured is None, counterexample=None if remeasured is None else remeasured.to_dict())


def _random_diagonal(rng, dims, max_support=3):
    d = int(np.prod(dims))
    k = int(rng.integers(1, max_support + 1))
    cells = rng.choice(d, size=k, replace=False)
    values = [0] * d
    for cell in cells:
        values[int(cell)] = Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 10)))
    return HermitianMatrix.diag(values, exact=True)


def suite_thm4(rep: VerifyReport, samples: int = 200, seed: int = 0, **_) -> None:
    rng = np.random.default_rng(seed)
    bad = None
    for _ in range(samples):
        dims = tuple(int(x) for x in rng.integers(2, 4, size=3))
        rho = _random_diagonal(rng, dims)
        report = rank_pt_all_bipartitions(rho, MultiShape(dims))
        if report.verdict != SEPARABLE_BY_CRITERION:
            bad = report.to_dict()
            break
    rep.add("diagonal tripartite states of rank <= 3 pass the criterion", bad is None, samples=samples, counterexample=bad)

    b, _ = bell()
    ket0 = HermitianMatrix.diag([1, 0])
    state = HermitianMatrix._wrap(np.kron(b.data, ket0.data))
    verdict = rank_pt_all_bipartitions(state, MultiShape((2, 2, 2))).verdict
    rep.add("Bell (x) |0><0| is outside the criterion", verdict != SEPARABLE_BY_CRITERION, verdict=verdict)

    mismatched = 0
    for _ in range(min(samples, 50)):
        dims = (2, 2, 2)
        G = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        rho = HermitianMatrix(G @ G.conj().T)
        for size in (1, 2):
            for S in combinations((1, 2, 3), size):
                Sc = tuple(i for i in (1, 2, 3) if i not in S)
                e1 = eig_hermitian(partial_transpose_multi(rho, MultiShape(dims), S)).eigenvalues
                e2 = eig_hermitian(partial_transpose_multi(rho, MultiShape(dims), Sc)).eigenvalues
                mismatched += not np.allclose(e1, e2, atol=1e-9 * max(1.0, np.abs(e1).max()))
    rep.add("complement subsets share the spectrum", mismatched == 0, mismatches=mismatched)


def _random_xstate(rng, n: int) -> XStateParams:
    a = rng.uniform(0.05, 1.0, n)
    b = rng.uniform(0.05, 1.0, n)
    r = np.sqrt(a * b) * rng.uniform(0.0, 1.0, n)
    return XStateParams(n, a.tolist(), b.tolist(), r.tolist(), rng.uniform(0, 2 * np.pi, n).tolist())


def suite_thm5(rep: VerifyReport, n: int = 9, samples: int = 200, seed: int = 0, **_) -> None:
    rng = np.random.default_rng(seed)
    for size in range(2, n + 1):
        counts = []
        for k in range(0, size // 2 + 1):
            rho, shape = xstate(xstate_with_k_negatives(size, k))
            counts.append(inertia(partial_transpose(rho, shape)).neg)
        rep.add(f"n={size}: k negatives realised for k <= n/2", counts == list(range(size // 2 + 1)), counts=counts)
        worst = 0.0
        max_neg = 0
        for _ in range(samples):
            p = _random_xstate(rng, size)
            rho, shape = xstate(p)
            eigs = eig_hermitian(partial_transpose(rho, shape)).eigenvalues
            worst = max(worst, float(np.abs(np.sort(eigs) - np.sort(xstate_pt_spectrum(p))).max()))
            max_neg = max(max_neg, int(np.count_nonzero(eigs < -1e-9)))
        rep.add(f"n={size}: closed-form spectra match", worst <= 1e-9, max_error=worst, samples=samples)
        rep.add(f"n={size}: at most n/2 negatives", max_neg <= size // 2, max_neg=max_neg)


def suite_lem1iv(rep: VerifyReport, max_dim: int = 6, **_) -> None:
    bad = []
    cases = 0
    for m in range(1, max_dim + 1):
        for n in range(m, max_dim + 1):
            for r in range(1, m + 1):
                rho, shape = pure_state(SchmidtSpec.unit(r, m, n))
                got = inertia_exact(partial_transpose(rho, shape))
                cases += 1
                if got != pure_state_inertia(r, m, n):
                    bad.append({"r": r, "m": m, "n": n, "got": list(got)})
    rep.add("pure-state inertia formula", not bad, cases=cases, counterexample=bad[:1] or None)


def suite_lem4(rep: VerifyReport, n: int = 5, **_) -> None:
    shifted = []
    for cert in enumerate_N2n(n):
        a, b, c = cert.claimed
        if b == 0:
            continue
        out = shift_to_full_rank(cert)
        shifted.append({"from": [a, b, c], "to": list(out.claimed), "ok": tuple(out.claimed) == (a, 0, b + c) and out.verified == EXACT_VERIFIED})
    bad = [s for s in shifted if not s["ok"]]
    rep.add("shift gives (a, 0, b+c)", not bad, n=n, shifted=len(shifted), counterexample=bad[:1] or None)

    rho, shape = bell()
    pads = [pad_and_add_products(rho, shape, BipartiteShape(2, 3), l).claimed for l in range(3)]
    rep.add("padding Bell into 2x3", [tuple(p) for p in pads] == [(1, 2, 3), (1, 1, 4), (1, 0, 5)], inertias=[list(p) for p in pads])


def suite_lem5(rep: VerifyReport, n: int = 4, seed: int = 0, **_) -> None:
    rows = []
    for cert in enumerate_N2n(n):
        a, b, c = cert.claimed
        l = b + a - (n - 1)
        if b == 0 or l <= 0:
            continue
        found = find_product_in_kernel(partial_transpose(cert.state, cert.shape), cert.shape, seed=seed)
        rows.append({"inertia": [a, b, c], "guaranteed": l, "found": len(found), "ok": len(found) >= l})
    bad = [r for r in rows if not r["ok"]]
    rep.add("kernel holds at least l independent products", not bad, n=n, cases=len(rows), counterexample=bad[:1] or None)


def suite_lem6(rep: VerifyReport, m: int = 3, n: int = 3, samples: int = 1000, seed: int = 7, measure: str = "hilbert-schmidt", **_) -> None:
    _, ins, drawn = random_npt_states(m, n, samples, seed, measure)
    ranks = ins[:, 0] + ins[:, 2]
    min_rank = int(ranks.min())
    min_pos = int(ins[:, 2].min())
    max_neg = int(ins[:, 0].max())
    rep.add("rank >= 4", min_rank >= 4, min_rank_seen=min_rank, samples=samples, draws=drawn)
    rep.add("nu_+ >= 3", min_pos >= 3, min_pos_seen=min_pos)
    rep.add("nu_- <= (m-1)(n-1)", max_neg <= (m - 1) * (n - 1), max_neg_seen=max_neg)

    # generic samples sit far above the bound; the embedded Bell state attains it
    b, bs = bell()
    shape = BipartiteShape(m, n)
    edge = inertia_exact(partial_transpose(embed(b, bs, shape), shape))
    rep.add("(1, mn-4, 3) is attained", edge == (1, m * n - 4, 3), inertia=_tri(edge))


def suite_lemC1(rep: VerifyReport, samples: int = 200, seed: int = 0, n: int = 4, **_) -> None:
    rng = np.random.default_rng(seed)
    for m_, n_ in ((2, 2), (2, 3), (3, 3)):
        shape = BipartiteShape(m_, n_)
        fails = 0
        for _ in range(samples):
            d = shape.dim
            G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            L, R = random_local_invertible(shape, rng)
            fails += not pt_equivariance_check(HermitianMatrix(G @ G.conj().T), shape, L, R)
        rep.add(f"equivariance on {shape}", fails == 0, trials=samples, failures=fails)

    certs = enumerate_N2n(n)
    changed = 0
    for cert in certs:
        label = classify(cert.state, cert.shape).pt_inertia
        for _ in range(max(1, samples // 20)):
            L, R = random_local_invertible(cert.shape, rng)
            changed += classify(local_conjugate(cert.state.to_float(), cert.shape, L, R), cert.shape).pt_inertia != label
    rep.add("label invariant under local operations", changed == 0, certificates=len(certs), changes=changed)

    disagreements = 0
    pairs = 0
    ins = [c.claimed for c in certs]
    for i1 in ins:
        for i2 in ins:
            for N in (1, 2, 3):
                pairs += 1
                direct = ncopy_inertia(i1, N) != ncopy_inertia(i2, N)
                disagreements += strong_inequivalence(i1, i2, N=N) != direct
    rep.add("strong inequivalence agrees with N-copy counts", disagreements == 0, comparisons=pairs)


def _all_certs():
    return enumerate_N2n(2) + enumerate_N2n(3)


def suite_kron(rep: VerifyReport, **_) -> None:
    certs = _all_certs()
    bad = []
    for c1 in certs:
        for c2 in certs:
            big, shape = kron_bipartite(c1.state, c1.shape, c2.state, c2.shape)
            got = inertia_exact(partial_transpose(big, shape))
            want = kron_inertia(c1.claimed, c1.shape, c2.claimed, c2.shape)
            if got != want:
                bad.append({"in1": list(c1.claimed), "in2": list(c2.claimed), "got": list(got), "want": list(want)})
    rep.add("kron prediction equals measured inertia", not bad, pairs=len(certs) ** 2, counterexample=bad[:1] or None)


def suite_ncopy(rep: VerifyReport, **_) -> None:
    rows = []
    for cert in _all_certs():
        big, shape = kron_bipartite(cert.state, cert.shape, cert.state, cert.shape)
        got = inertia_exact(partial_transpose(big, shape))
        want = ncopy_inertia(cert.claimed, 2)
        rows.append({"seed": list(cert.claimed), "dim": shape.dim, "got": [got.neg, got.pos], "want": list(want)})
    bad = [r for r in rows if r["got"] != r["want"]]
    rep.add("two-copy inertia matches the closed form", not bad, seeds=len(rows), counterexample=bad[:1] or None)


SUITES: dict[str, Callable] = {
    "thm1": suite_thm1,
    "thm2": suite_thm2,
    "thm3": suite_thm3,
    "thm4": suite_thm4,
    "thm5": suite_thm5,
    "lem1iv": suite_lem1iv,
    "lem4": suite_lem4,
    "lem5": suite_lem5,
    "lem6": suite_lem6,
    "lemC1": suite_lemC1,
    "kron": suite_kron,
    "ncopy": suite_ncopy,
}


def run_suite(suite: str, **params) -> VerifyReport:
    """Run one suite; unknown ids raise ``KeyError``."""
    fn = SUITES[suite]
    rep = VerifyReport(suite, {k: v for k, v in params.items() if v is not None})
    fn(rep, **rep.params)
    return rep
