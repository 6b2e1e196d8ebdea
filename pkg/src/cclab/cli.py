"""Command-line front end.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or input
error, 3 budget or consistency abort.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .ar import max_projective_summand, tau_power
from .catalog import CatalogError, build_catalog, decompose, kronecker_regular
from .cc import cc_module
from .grassmannian import DEFAULT_BUDGET, euler_grassmannian, grassmannian_profile
from .interpolate import DEFAULT_PRIMES, BudgetExceeded, NonPolynomialCount
from .laurent import LaurentError
from .quiver import (
    Quiver,
    QuiverError,
    admissible_order,
    d4_quiver,
    dynkin_type,
    is_kronecker,
    kronecker_quiver,
    linear_quiver,
    load_quiver,
)
from .rep import (
    BadPrimeError,
    Representation,
    RepresentationError,
    direct_sum,
    injective,
    load_rep,
    projective,
    simple,
)
from . import verify as V

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3


class SpecError(ValueError):
    """Malformed module specification."""


# --- inputs -------------------------------------------------------------------

BUILTIN_QUIVERS = {
    "kronecker": kronecker_quiver,
    "d4": d4_quiver,
}


def resolve_quiver(ref: str) -> Quiver:
    """A quiver file, or one of the names A<n>, D4, kronecker."""
    path = Path(ref)
    if path.exists():
        return load_quiver(path)
    low = ref.lower()
    if low in BUILTIN_QUIVERS:
        return BUILTIN_QUIVERS[low]()
    m = re.fullmatch(r"a(\d+)", low)
    if m and int(m.group(1)) >= 1:
        return linear_quiver(int(m.group(1)))
    raise SpecError(f"no quiver file or built-in quiver named {ref!r}")


_TERM = re.compile(r"^(?:(\d+)\s*\*\s*)?(tau(?:\^(-?\d+))?\s+)?(.+)$")
_ATOM_U = re.compile(r"^u\[(0|1|inf)\](?:\((\d+)\))?$")
_ATOM_SPI = re.compile(r"^([SPI])(\d+)$")


def _atom(Q: Quiver, text: str) -> Representation:
    m = _ATOM_SPI.match(text)
    if m:
        kind, i = m.group(1), int(m.group(2))
        if not 1 <= i <= Q.n:
            raise SpecError(f"vertex {i} out of range 1..{Q.n}")
        build = {"S": simple, "P": projective, "I": injective}[kind]
        return build(Q, i - 1).with_label(text)
    m = _ATOM_U.match(text)
    if m:
        if not is_kronecker(Q):
            raise SpecError("regular modules u[...] need the Kronecker quiver")
        return kronecker_regular(Q, m.group(1), int(m.group(2) or 1))
    if text in ("u0", "u_0"):
        if not is_kronecker(Q):
            raise SpecError("regular modules need the Kronecker quiver")
        return kronecker_regular(Q, "0", 1)
    if text.endswith(".json") and Path(text).exists():
        return load_rep(text, Q)
    raise SpecError(f"cannot parse module {text!r}")


def parse_module(Q: Quiver, spec: str) -> Representation:
    """Direct sums of ``[k*][tau^j ]ATOM`` where ATOM is S<i>, P<i>, I<i>,
    ``u[lam](n)`` or a JSON file."""
    parts = []
    for raw in spec.split("+"):
        term = raw.strip()
        if not term:
            raise SpecError(f"empty summand in {spec!r}")
        m = _TERM.match(term)
        mult = int(m.group(1) or 1)
        M = _atom(Q, m.group(4).strip())
        if m.group(2):
            M = tau_power(M, int(m.group(3) or 1))
        parts.extend([M.with_label(term)] * mult)
    if len(parts) == 1:
        return parts[0]
    return direct_sum(*parts).with_label(spec)


def parse_primes(text: str) -> tuple[int, ...]:
    try:
        ps = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise SpecError(f"bad prime list {text!r}") from None
    if len(ps) < 2:
        raise SpecError("at least two primes are required")
    for p in ps:
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise SpecError(f"{p} is not a prime")
    return ps


def _env(name: str, default):
    return os.environ.get(f"CCLAB_{name}", default)


# --- output -------------------------------------------------------------------

def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=1, default=str))
    else:
        print(text)


def _rep_text(M: Representation) -> str:
    lines = [f"dims: {list(M.dims)}"]
    for a, mat in zip(M.quiver.arrows, M.mats):
        lines.append(f"arrow {a.name} ({a.source + 1} -> {a.target + 1}): {M.to_json()['matrices'][a.name]}")
    return "\n".join(lines)


# --- commands -----------------------------------------------------------------

def cmd_quiver_check(args) -> int:
    Q = resolve_quiver(args.quiver)
    R = Q.ext_matrix()
    data = {
        "name": Q.name,
        "vertices": Q.n,
        "arrows": [{"name": a.name, "source": a.source + 1, "target": a.target + 1} for a in Q.arrows],
        "admissible_order": [v + 1 for v in admissible_order(Q)],
        "type": "kronecker" if is_kronecker(Q) else dynkin_type(Q) or "other",
        "ext_matrix": [list(R.row_times([int(i == j) for j in Q.vertices])) for i in Q.vertices],
    }
    text = "\n".join([
        f"quiver {Q.name}: {Q.n} vertices, {len(Q.arrows)} arrows, acyclic",
        f"admissible order (sinks first): {data['admissible_order']}",
        f"type: {data['type']}",
        "Ext matrix R:",
        *("  " + " ".join(str(x) for x in row) for row in data["ext_matrix"]),
    ])
    _emit(args, text, data)
    return EXIT_OK


def cmd_cc(args) -> int:
    Q = resolve_quiver(args.quiver)
    M = parse_module(Q, _need(args.module, "--module"))
    X = cc_module(M, args.primes, args.engine, args.budget)
    _emit(args, str(X), {"module": args.module, "dims": list(M.dims), "laurent": str(X), "terms": X.to_json()})
    return EXIT_OK


def cmd_catalog(args) -> int:
    Q = resolve_quiver(args.quiver)
    cat = build_catalog(Q)
    if args.export:
        cat.save(args.export)
    data = [{"label": m.label, "kind": m.kind, "dims": list(m.dims)} for m in cat.members]
    text = "\n".join(f"{m.label:<14} {m.kind:<14} {list(m.dims)}" for m in cat.members)
    _emit(args, text + f"\n{len(cat)} members", {"quiver": Q.name, "members": data})
    return EXIT_OK


def cmd_tau(args) -> int:
    Q = resolve_quiver(args.quiver)
    M = parse_module(Q, _need(args.module, "--module"))
    T = tau_power(M, -args.times if args.inverse else args.times)
    data = T.to_json()
    text = _rep_text(T)
    try:
        dec = decompose(T)
        data["decomposition"] = dec.parts
        text += f"\niso type: {dec}"
    except CatalogError:
        pass
    _emit(args, text, data)
    return EXIT_OK


def cmd_grassmannian(args) -> int:
    Q = resolve_quiver(args.quiver)
    M = parse_module(Q, _need(args.module, "--module"))
    if args.e:
        e = tuple(int(x) for x in args.e.split(","))
        prof = euler_grassmannian(M, e, args.primes, args.engine, args.budget)
        _emit(args, f"chi(Gr_{e}) = {prof.euler}  poly {prof.poly}  counts {prof.counts}", prof.to_json())
        return EXIT_OK
    gp = grassmannian_profile(M, args.primes, args.engine, args.budget)
    lines = [f"e={list(e)} chi={cp.euler} poly={cp.poly}" for e, cp in sorted(gp.details.items())]
    _emit(args, "\n".join(lines), gp.to_json())
    return EXIT_OK


def _verify_job(payload):
    kind, qref, a, b, primes, budget = payload
    Q = resolve_quiver(qref)
    A = parse_module(Q, a)
    B = parse_module(Q, b) if b is not None else None
    if kind == "thm1":
        rep = V.verify_theorem_part1(A, B, primes, budget)
    elif kind == "thm2":
        rep = V.verify_theorem_part2(A, B, primes, budget)
    elif kind == "ar":
        rep = V.verify_ar_identity(A, primes, budget)
    else:
        rep = V.verify_high_order_assoc(A, B, None, primes, budget)
    return rep.verdict, rep.to_json(), rep.to_text()


def _catalog_specs(Q: Quiver) -> list[tuple[str, Representation]]:
    cat = build_catalog(Q)
    # catalog labels double as module specs
    return [(m.label, m.rep) for m in cat.members]


def _sweep(kind: str, Q: Quiver) -> list[tuple[str, str | None]]:
    specs = _catalog_specs(Q)
    nonproj = [(s, M) for s, M in specs if not any(max_projective_summand(M)[1])]
    if kind in ("thm1", "hoa"):
        return [(a, b) for a, _ in nonproj for b, _ in specs]
    if kind == "thm2":
        return [(f"P{i + 1}", b) for i in Q.vertices for b, _ in specs]
    return [(a, None) for a, _ in nonproj]


def cmd_verify(args) -> int:
    Q = resolve_quiver(args.quiver)
    kinds = ["thm1", "thm2", "ar", "hoa"] if args.identity == "all" else [args.identity]
    jobs = []
    for kind in kinds:
        if args.module is not None:
            other = args.other
            if kind != "ar" and other is None:
                raise SpecError(f"verify {kind} needs --with for the second module")
            jobs.append((kind, args.quiver, args.module, other if kind != "ar" else None))
        else:
            if is_kronecker(Q):
                raise SpecError("sweeps need a Dynkin quiver; give --module (and --with) for Kronecker")
            jobs.extend((kind, args.quiver, a, b) for a, b in _sweep(kind, Q))
    if args.sample and args.sample < len(jobs):
        rng = random.Random(args.seed)
        jobs = sorted(rng.sample(jobs, args.sample), key=jobs.index)
    payloads = [(k, q, a, b, args.primes, args.budget) for k, q, a, b in jobs]
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_verify_job, payloads))
    else:
        results = [_verify_job(p) for p in payloads]
    ok = all(r[0] for r in results)
    if args.format == "json":
        print(json.dumps({"passed": ok, "reports": [r[1] for r in results]}, indent=1, default=str))
    else:
        for _, _, text in results:
            print(text)
        print(f"{sum(r[0] for r in results)}/{len(results)} passed")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_kronecker_demo(args) -> int:
    rep = V.kronecker_demo(args.nmax, args.primes, args.budget)
    n = rep.notes
    lines = [f"x0 = X_S2 = {n['x0 = X_S2']}", f"x3 = X_S1 = {n['x3 = X_S1']}", f"X_u0 = r1 = {n['X_u0']}"]
    for name, good in n["checks"].items():
        lines.append(f"{'PASS' if good else 'FAIL'}  {name}")
    lines.append("r1*rn = r(n+1) " + ", ".join(f"{s} r({k - 1}) [n={k}]" for k, s in n["sign"].items()))
    _emit(args, "\n".join(lines), rep.to_json())
    return EXIT_OK if rep.verdict else EXIT_FAIL


def _need(value, flag: str):
    if value is None:
        raise SpecError(f"{flag} is required")
    return value


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", default=_env("QUIVER", None), help="quiver file or A<n>/D4/kronecker")
    common.add_argument("--module", default=_env("MODULE", None), help="module spec, e.g. 'S1 + u[0](2)'")
    common.add_argument("--primes", default=_env("PRIMES", None), help="comma-separated primes")
    common.add_argument("--budget", type=int, default=int(_env("BUDGET", DEFAULT_BUDGET)))
    common.add_argument("--engine", choices=("auto", "enumerate", "split", "tube", "torus"), default=_env("ENGINE", "auto"),
                        help="how Grassmannian Euler characteristics are obtained")
    common.add_argument("--format", choices=("text", "json"), default=_env("FORMAT", "text"))
    common.add_argument("--jobs", type=int, default=int(_env("JOBS", 1)))
    common.add_argument("--seed", type=int, default=int(_env("SEED", 0)))

    p = argparse.ArgumentParser(prog="cclab", description="Cluster characters of quiver representations.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("quiver-check", parents=[common], help="validate a quiver file").set_defaults(func=cmd_quiver_check)
    sub.add_parser("cc", parents=[common], help="cluster character of a module").set_defaults(func=cmd_cc)
    s = sub.add_parser("catalog", parents=[common], help="list indecomposables")
    s.add_argument("--export", help="write catalog.json here")
    s.set_defaults(func=cmd_catalog)
    s = sub.add_parser("tau", parents=[common], help="Auslander-Reiten translate")
    s.add_argument("--inverse", action="store_true")
    s.add_argument("--times", type=int, default=1)
    s.set_defaults(func=cmd_tau)
    s = sub.add_parser("grassmannian", parents=[common], help="Euler characteristics of quiver Grassmannians")
    s.add_argument("--e", help="one dimension vector, e.g. 1,0")
    s.set_defaults(func=cmd_grassmannian)
    s = sub.add_parser("verify", parents=[common], help="check an identity")
    s.add_argument("identity", choices=("thm1", "thm2", "ar", "hoa", "all"))
    s.add_argument("--with", dest="other", help="second module spec")
    s.add_argument("--sample", type=int, default=0, help="check only this many random cases (uses --seed)")
    s.set_defaults(func=cmd_verify)
    s = sub.add_parser("kronecker-demo", parents=[common], help="the Kronecker example end to end")
    s.add_argument("--nmax", type=int, default=4)
    s.set_defaults(func=cmd_kronecker_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.primes = parse_primes(args.primes) if args.primes else DEFAULT_PRIMES
        if args.budget <= 0 or args.jobs <= 0:
            raise SpecError("--budget and --jobs must be positive")
        if args.command != "kronecker-demo" and args.quiver is None:
            raise SpecError("--quiver is required")
        return args.func(args)
    except (SpecError, QuiverError, RepresentationError, CatalogError, LaurentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceeded, NonPolynomialCount, BadPrimeError, V.VerificationError) as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
