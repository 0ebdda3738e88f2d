"""``inertia-lab`` command line.

Every command prints JSON (``sample`` prints CSV) with an embedded run
manifest.  Exit codes: 0 pass, 1 failed assertion, 2 usage error,
3 data error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from importlib import metadata

from .bipartite import BipartiteShape, MultiShape, partial_transpose
from .errors import CertificateMismatch, InertiaLabError, NoKernelProduct
from .generators import enumerate_N2n, replay
from .hermitian import DEFAULT_TOL, HermitianMatrix, inertia, inertia_exact
from .sampling import parse_measure, tabulate_pt_inertias
from .separability import rank_pt_all_bipartitions
from .slocc import classify
from .verify import SUITES, run_suite
from .witness import DEFAULT_SEED, is_entanglement_witness, reduce_2xn

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3
SEED_ENV = "INERTIA_LAB_SEED"


class UsageError(Exception):
    pass


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


@dataclass
class RunManifest:
    command: list
    seed: int | None
    tol: float
    mode: str
    version: str
    wall_time: float = 0.0


def resolve_seed(flag: int | None) -> int:
    """``--seed`` beats ``INERTIA_LAB_SEED``, which beats the built-in default."""
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env, 0)
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


# --------------------------------------------------------------------------
# input helpers


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def _load(path: str, dims: list[int] | None):
    """Matrix plus optional dims from a matrix, certificate or construct file."""
    obj = _read_json(path)
    file_dims = None
    if isinstance(obj, dict) and "state" in obj and isinstance(obj["state"], dict):
        file_dims = obj.get("shape") or obj.get("dims")
        if isinstance(file_dims, dict):
            file_dims = file_dims.get("dims")
        obj = obj["state"]
    if isinstance(obj, dict) and "dims" in obj and "matrix" in obj:
        file_dims, obj = obj["dims"], obj["matrix"]
    try:
        matrix = HermitianMatrix.from_dict(obj)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InertiaLabError):
            raise
        raise UsageError(f"{path} is not a matrix JSON: {exc}") from exc
    return matrix, dims or file_dims


def _bipartite(dims) -> BipartiteShape:
    if not dims or len(dims) != 2:
        raise UsageError("a bipartite shape is required: --shape M N")
    return BipartiteShape(int(dims[0]), int(dims[1]))


def _matrix_mode(A: HermitianMatrix, exact_flag: bool) -> str:
    return "exact" if (exact_flag or A.is_exact) else "float"


# --------------------------------------------------------------------------
# commands; each returns (payload, manifest fields, exit code)


def cmd_inertia(args):
    A, dims = _load(args.file, args.shape)
    if args.gamma:
        A = partial_transpose(A, _bipartite(dims))
    In = inertia_exact(A) if args.exact else inertia(A, args.tol)
    return {"inertia": list(In), "of": "gamma" if args.gamma else "raw"}, dict(mode=_matrix_mode(A, args.exact)), EXIT_OK


def cmd_enumerate(args):
    if args.n < 2:
        raise UsageError("n must be at least 2")
    certs = enumerate_N2n(args.n, jobs=args.jobs)
    payload = {"n": args.n, "count": len(certs), "certificates": [c.to_dict(args.with_states) for c in certs]}
    return payload, dict(mode="exact"), EXIT_OK


def cmd_construct(args):
    text = args.recipe
    recipe = json.loads(text) if text.lstrip().startswith(("{", "[")) else _read_json(text)
    if isinstance(recipe, dict):
        recipe = [recipe]
    try:
        rho, shape = replay(recipe)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed recipe: {exc}") from exc
    In = inertia(partial_transpose(rho, shape), args.tol)
    payload = {"shape": [shape.m, shape.n], "recipe": recipe, "gamma_inertia": list(In), "state": rho.to_dict()}
    return payload, dict(mode=rho.mode), EXIT_OK


def cmd_verify(args):
    params = {"n": args.n, "samples": args.samples, "seed": args.seed, "jobs": args.jobs, "max_dim": args.max_dim, "measure": args.measure}
    if args.dims:
        params["m"], params["n"] = args.dims
    if args.seed is not None or os.environ.get(SEED_ENV):
        params["seed"] = args.seed_resolved
    report = run_suite(args.suite, **params)
    return report.to_dict(), dict(mode="mixed", seed=params.get("seed")), EXIT_OK if report.passed else EXIT_FAIL


def cmd_sample(args):
    if max(args.m, args.n) > 6 or min(args.m, args.n) < 1:
        raise UsageError("sample supports dimensions 1..6")
    try:
        parse_measure(args.measure, args.m * args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    table, npt = tabulate_pt_inertias(args.m, args.n, args.count, args.seed_resolved, args.measure, args.tol, jobs=args.jobs)
    return {"table": table, "npt": npt, "draws": args.count}, dict(mode="float"), EXIT_OK


def cmd_classify(args):
    A, dims = _load(args.file, args.shape)
    label = classify(A, _bipartite(dims), args.tol)
    return label.to_dict(), dict(mode=A.mode), EXIT_OK


def cmd_reduce(args):
    A, dims = _load(args.file, args.shape)
    shape = _bipartite(dims)
    steps = []
    while True:
        try:
            red = reduce_2xn(A, shape, args.tol, args.seed_resolved)
        except NoKernelProduct:
            if not steps:
                raise
            break
        A, shape = red.state, red.shape
        steps.append({"mode": red.mode, "shape": [shape.m, shape.n], "gamma_inertia": list(inertia(partial_transpose(A, shape), args.tol))})
        if not args.chain or shape.n < 2:
            break
    payload = {"steps": steps, "state": A.to_dict(), "shape": [shape.m, shape.n]}
    return payload, dict(mode=A.mode), EXIT_OK


def cmd_separability(args):
    A, dims = _load(args.file, args.dims)
    if not dims:
        raise UsageError("factor dimensions are required: --dims D1 D2 ...")
    report = rank_pt_all_bipartitions(A, MultiShape(tuple(int(d) for d in dims)), args.tol, exact=True if args.exact else None)
    return report.to_dict(), dict(mode=_matrix_mode(A, args.exact)), EXIT_OK


def cmd_witness(args):
    A, dims = _load(args.file, args.shape)
    verdict = is_entanglement_witness(A, _bipartite(dims), args.restarts, args.seed_resolved, args.tol)
    return verdict.to_dict(), dict(mode="float"), EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="inertia-lab", description="Partial-transpose inertia toolkit.")
    p.add_argument("--version", action="version", version=tool_version())
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, seed=False, tol=True):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("-o", "--output", help="write the result here instead of stdout")
        if tol:
            sp.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative zero threshold")
        if seed:
            sp.add_argument("--seed", type=lambda s: int(s, 0), default=None)
        return sp

    def shape_arg(sp):
        sp.add_argument("--shape", type=int, nargs=2, metavar=("M", "N"))

    sp = add("inertia", cmd_inertia, "inertia of a matrix or its partial transpose")
    sp.add_argument("file", help="matrix JSON, or '-' for stdin")
    shape_arg(sp)
    sp.add_argument("--gamma", action="store_true", help="take the partial transpose first")
    sp.add_argument("--exact", action="store_true", help="exact congruence (needs exact entries)")

    sp = add("enumerate", cmd_enumerate, "certified witnesses for every element of N_{2,n}", tol=False)
    sp.add_argument("n", type=int)
    sp.add_argument("--with-states", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)

    sp = add("construct", cmd_construct, "build a state from a recipe")
    sp.add_argument("recipe", help="recipe JSON file or inline JSON")

    sp = add("verify", cmd_verify, "run a property suite", seed=True, tol=False)
    sp.add_argument("suite", choices=sorted(SUITES))
    sp.add_argument("--n", type=int)
    sp.add_argument("--dims", type=int, nargs=2, metavar=("M", "N"))
    sp.add_argument("--samples", type=int)
    sp.add_argument("--max-dim", type=int)
    sp.add_argument("--measure")
    sp.add_argument("--jobs", type=int)

    sp = add("sample", cmd_sample, "tabulate partial-transpose inertias of random NPT states", seed=True)
    sp.add_argument("m", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("--count", type=int, default=10000)
    sp.add_argument("--measure", default="hilbert-schmidt", help="'hilbert-schmidt' or 'induced-k'")
    sp.add_argument("--jobs", type=int, default=1)

    sp = add("classify", cmd_classify, "SLOCC label of an NPT state")
    sp.add_argument("file")
    shape_arg(sp)

    sp = add("reduce", cmd_reduce, "shrink a 2 x n state using a kernel product vector", seed=True)
    sp.add_argument("file")
    shape_arg(sp)
    sp.add_argument("--chain", action="store_true", help="repeat until no kernel product remains")

    sp = add("separability", cmd_separability, "rank criterion over all bipartitions")
    sp.add_argument("file")
    sp.add_argument("--dims", type=int, nargs="+")
    sp.add_argument("--exact", action="store_true", help="force exact ranks")

    sp = add("witness", cmd_witness, "see-saw entanglement-witness check", seed=True)
    sp.add_argument("file")
    shape_arg(sp)
    sp.add_argument("--restarts", type=int, default=64)
    return p


def _render_csv(payload: dict, manifest: RunManifest) -> str:
    buf = io.StringIO()
    buf.write("# empirical, not a claim\n")
    buf.write("# manifest: " + json.dumps(asdict(manifest), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["neg", "zero", "pos", "count", "fraction"])
    npt = payload["npt"]
    for (neg, zero, pos), count in payload["table"].items():
        writer.writerow([neg, zero, pos, count, f"{count / npt:.6f}"])
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        args.seed_resolved = resolve_seed(getattr(args, "seed", None)) if hasattr(args, "seed") else None
        payload, extra, code = args.func(args)
    except UsageError as exc:
        print(f"inertia-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificateMismatch as exc:
        print(f"inertia-lab: assertion failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InertiaLabError, ValueError, TypeError) as exc:
        print(f"inertia-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    manifest = RunManifest(
        command=["inertia-lab", *argv],
        seed=extra.get("seed", args.seed_resolved),
        tol=getattr(args, "tol", DEFAULT_TOL),
        mode=extra.get("mode", "float"),
        version=tool_version(),
        wall_time=round(time.perf_counter() - start, 6),
    )
    if args.command == "sample":
        text = _render_csv(payload, manifest)
    else:
        text = json.dumps({**payload, "manifest": asdict(manifest)}, indent=1) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def _entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    _entry()
