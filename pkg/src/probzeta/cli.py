"""Command-line front end: ``probzeta <command> ...``.

Exit codes: 0 success, 2 hypotheses not met, 3 verification failure,
4 size refusal.  Errors are also written to stderr as one JSON record.
"""

from __future__ import annotations

import argparse
import json
import sys

from .dirichlet import HYPOTHESES_NOT_MET, IRREDUCIBLE, DirichletPoly, evaluate, project, render, shift
from .lattice import FULL_LATTICE_BOUND, chief_series, minimal_normal_subgroups
from .numtheory import zsigmondy
from .permgroup import PermGroup, SizeRefusal, builtin, load_group
from .verifier import IrredCertificate, recheck, verify_irreducible, verify_pgl_identity
from .zeta import (
    chief_factorization,
    compare_groups,
    generation_probability,
    p_g,
    p_gn,
    seral_check,
    socle,
)

OK, HYPOTHESES, FAILED, REFUSED = 0, 2, 3, 4


def _write_json(path: str | None, payload) -> None:
    if path:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _load_poly(path: str) -> DirichletPoly:
    with open(path) as fh:
        return DirichletPoly.from_records(json.load(fh))


def _normal_subgroup(G: PermGroup, spec: str) -> int:
    """Normal subgroup from a keyword (socle, minimal, trivial, whole, chief:i) or a group spec."""
    D = G.dense()
    if spec in ("whole", "G"):
        return D.full_bits
    if spec in ("trivial", "1"):
        return 1
    if spec == "socle":
        return socle(G)
    if spec == "minimal":
        return minimal_normal_subgroups(G)[0]
    if spec.startswith("chief:"):
        return chief_series(G)[int(spec.split(":", 1)[1])]
    H = load_group(spec)
    if H.degree != G.degree:
        raise ValueError("normal subgroup must act on the same points as the group")
    return D.to_bits(D.closure([D.index(h) for h in H.generators]))


def cmd_pg(args) -> int:
    G = load_group(args.group)
    P = p_g(G, engine=args.engine, bound=args.lattice_bound)
    print(render(P))
    _write_json(args.out, P.to_records())
    return OK


def cmd_pgn(args) -> int:
    G = load_group(args.group)
    P = p_gn(G, _normal_subgroup(G, args.normal))
    print(render(P))
    _write_json(args.out, P.to_records())
    return OK


def cmd_factorize(args) -> int:
    G = load_group(args.group)
    F = chief_factorization(G)
    for f in F.factors:
        body = "Frattini, no factor" if f.frattini else render(f.poly)
        print(f"{f.descriptor}: {body}")
    print(f"product equals P_G: {F.verified}")
    _write_json(args.out, F.to_dict())
    return OK if F.verified else FAILED


def cmd_project(args) -> int:
    P = project(_load_poly(args.poly), [int(x) for x in args.pi.split(",")])
    print(render(P))
    _write_json(args.out, P.to_records())
    return OK


def cmd_shift(args) -> int:
    P = shift(_load_poly(args.poly), args.n)
    print(render(P))
    _write_json(args.out, P.to_records())
    return OK


def cmd_eval(args) -> int:
    print(evaluate(_load_poly(args.poly), args.s))
    return OK


def cmd_verify_irreducible(args) -> int:
    cert = verify_irreducible(args.p, args.n, args.variant)
    problems = recheck(cert)
    print(cert.summary())
    if problems:
        print("recheck failed: " + "; ".join(problems))
    _write_json(args.cert, cert.to_dict())
    if cert.verdict == HYPOTHESES_NOT_MET:
        return HYPOTHESES
    return OK if cert.verdict == IRREDUCIBLE and not problems else FAILED


def cmd_recheck(args) -> int:
    with open(args.cert) as fh:
        cert = IrredCertificate.from_json(fh.read())
    problems = recheck(cert)
    print("recheck passed" if not problems else "recheck failed: " + "; ".join(problems))
    return OK if not problems else FAILED


def cmd_seral(args) -> int:
    name = f"PSL(2,{args.p})" + (f" wr C({args.n})" if args.n > 1 else "")
    report = seral_check(builtin(name))
    for row in report.rows:
        print(f"r={row.r}: {'equal' if row.equal else 'DIFFER'}  {render(row.left)}")
    _write_json(args.out, report.to_dict())
    return OK if report.holds else FAILED


def cmd_pgl_identity(args) -> int:
    report = verify_pgl_identity(args.p)
    print(f"P_(X,S) = {render(report.left)}")
    print(f"-sum mu_X(H)/|S:H|^s = {render(report.right)}")
    print("equal" if report.equal else "DIFFER")
    return OK if report.equal else FAILED


def cmd_montecarlo(args) -> int:
    G = load_group(args.group)
    res = generation_probability(
        G, args.s, "monte-carlo", samples=args.samples, seed=args.seed, threads=args.threads
    )
    exact = evaluate(p_g(G, bound=args.lattice_bound), args.s)
    z = (res.estimate - float(exact)) / res.stderr if res.stderr else 0.0
    print(f"estimate {res.estimate:.6f} +- {res.stderr:.6f} ({res.hits}/{res.samples}, seed {res.seed})")
    print(f"exact    {float(exact):.6f} = {exact}")
    print(f"z = {z:.3f}")
    _write_json(args.out, {**res.to_dict(), "exact": str(exact), "z": z})
    return OK if abs(z) <= 4 else FAILED


def cmd_compare(args) -> int:
    cmp = compare_groups(load_group(args.group1), load_group(args.group2))
    print(cmp.summary())
    _write_json(args.out, cmp.to_dict())
    return OK


def cmd_zsigmondy(args) -> int:
    q = zsigmondy(args.a, args.n)
    print(q if q is not None else "none (Zsigmondy exception)")
    return OK


def build_parser() -> argparse.ArgumentParser:
    # shared flags work before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads for sampling")
    common.add_argument("--lattice-bound", type=int, default=argparse.SUPPRESS, help="largest order for full lattices")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    ap = argparse.ArgumentParser(
        prog="probzeta", description="Probabilistic zeta functions of finite groups.", parents=[common]
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func)
        return p

    p = add("pg", cmd_pg, "compute P_G")
    p.add_argument("group")
    p.add_argument("--engine", default="auto", choices=["auto", "full", "supplements"])
    p.add_argument("--out")

    p = add("pgn", cmd_pgn, "compute P_{G,N}")
    p.add_argument("group")
    p.add_argument("--normal", required=True, help="socle, minimal, trivial, whole, chief:i, or a group spec")
    p.add_argument("--out")

    p = add("factorize", cmd_factorize, "chief-series factorization")
    p.add_argument("group")
    p.add_argument("--out")

    p = add("project", cmd_project, "drop terms divisible by the given primes")
    p.add_argument("poly")
    p.add_argument("--pi", required=True)
    p.add_argument("--out")

    p = add("shift", cmd_shift, "substitute s -> ns - n + 1")
    p.add_argument("poly")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")

    p = add("eval", cmd_eval, "exact value at a positive integer")
    p.add_argument("poly")
    p.add_argument("-s", type=int, required=True)

    p = add("verify-irreducible", cmd_verify_irreducible, "irreducibility certificate")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--variant", default="psl", type=str.upper, choices=["PSL", "PGL"])
    p.add_argument("--cert")

    p = add("recheck", cmd_recheck, "re-validate a stored certificate")
    p.add_argument("cert")

    p = add("seral", cmd_seral, "projection identity for PSL(2,p) wr C(n)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--out")

    p = add("pgl-identity", cmd_pgl_identity, "P_{PGL,PSL} as a sum over subgroups of PSL")
    p.add_argument("--p", type=int, required=True)

    p = add("montecarlo", cmd_montecarlo, "sampled generation probability")
    p.add_argument("group")
    p.add_argument("-s", type=int, default=2)
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--out")

    p = add("compare", cmd_compare, "compare P and chief factors of two groups")
    p.add_argument("group1")
    p.add_argument("group2")
    p.add_argument("--out")

    p = add("zsigmondy", cmd_zsigmondy, "smallest primitive prime divisor of a^n - 1")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    return ap


def _error(kind: str, exc: Exception) -> None:
    print(json.dumps({"error": kind, "message": str(exc)}), file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for key, val in (("threads", 1), ("lattice_bound", FULL_LATTICE_BOUND), ("seed", 0)):
        if not hasattr(args, key):
            setattr(args, key, val)
    try:
        return args.func(args)
    except SizeRefusal as exc:
        _error("size-refusal", exc)
        return REFUSED
    except (ValueError, KeyError, FileNotFoundError) as exc:
        _error("invalid-input", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
