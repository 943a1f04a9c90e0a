"""Command line entry point.

Every subcommand reads JSON, calls one library routine and writes JSON.
Errors go to stderr as a JSON object; exit codes are 0 (ok), 2 (input),
3 (mathematical check failed) and 4 (resource cap).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .arithio import (dump_json, load_json, print_canonical, qp_from_json, qp_to_json,
                      quiver_from_json, quiver_to_json, rep_from_json, rep_to_json,
                      seed_from_json, seed_to_json)
from .config import load_config
from .errors import MutationDomainError, ParseError, QPMutError, RankError

EXIT_OK, EXIT_INPUT, EXIT_CHECK, EXIT_CAP = 0, 2, 3, 4


def _seq(text):
    if text is None or text == "":
        return []
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParseError(f"--at expects comma separated vertices, got {text!r}") from None


def _primes(text, cfg):
    if text is None:
        return cfg.primes
    if text == "auto":
        return "auto"
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise ParseError(f"--primes expects 'auto' or a comma separated list, got {text!r}") from None


def _load_qp(path, trunc):
    doc = load_json(path)
    if "quiver" not in doc:
        # a bare quiver is a QP with zero potential
        doc = {"quiver": doc, "potential": []}
    return qp_from_json(doc, trunc)


def _load_rep(args, cfg):
    doc = load_json(args.rep)
    qp = _load_qp(args.qp, args.trunc or cfg.trunc) if args.qp else None
    if qp is None and "qp" in doc and args.trunc:
        qp = qp_from_json(doc["qp"], args.trunc)
    return rep_from_json(doc, qp)


def cmd_mutate_quiver(args, cfg):
    from .quiver import mutate_quiver
    q = quiver_from_json(load_json(args.input))
    for step, i in enumerate(_seq(args.at)):
        try:
            q = mutate_quiver(q, i)
        except MutationDomainError as exc:
            raise MutationDomainError(f"step {step}: {exc}") from None
    return quiver_to_json(q)


def cmd_mutate_seed(args, cfg):
    from .seedengine import mutate_seed_sequence
    s = seed_from_json(load_json(args.input))
    return seed_to_json(mutate_seed_sequence(s, _seq(args.at)))


def cmd_mutate_qp(args, cfg):
    from .qpalg import mutate_qp_sequence
    qp = _load_qp(args.input or args.qp, args.trunc or cfg.trunc)
    return qp_to_json(mutate_qp_sequence(qp, _seq(args.at)))


def cmd_mutate_rep(args, cfg):
    from .decrep import mutate_rep_sequence
    m = _load_rep(args, cfg)
    return rep_to_json(mutate_rep_sequence(m, _seq(args.at)), include_qp=True)


def cmd_invariants(args, cfg):
    from .decrep import e_invariant, g_vector_rep, h_vector_rep
    from .grassmann import f_polynomial_rep
    m = _load_rep(args, cfg)
    F = f_polynomial_rep(m, _primes(args.primes, cfg), max_total_dim=cfg.max_total_dim)
    return {"dims": list(m.dims), "vdims": list(m.vdims), "g": list(g_vector_rep(m)),
            "h": list(h_vector_rep(m)), "E": e_invariant(m), "F": print_canonical(F, "u")}


def cmd_fpoly(args, cfg):
    from .grassmann import f_polynomial_rep
    m = _load_rep(args, cfg)
    F = f_polynomial_rep(m, _primes(args.primes, cfg), max_total_dim=cfg.max_total_dim)
    return {"F": print_canonical(F, "u")}


def cmd_cc(args, cfg):
    from .grassmann import cluster_character
    m = _load_rep(args, cfg)
    if not args.quiver:
        raise ParseError("cc needs --quiver for the initial ice quiver")
    q = quiver_from_json(load_json(args.quiver))
    return {"cc": print_canonical(cluster_character(m, q))}


def cmd_explore(args, cfg):
    from .seedengine import explore, f_polynomial_of_variable, g_vector_direct, is_principal
    path = args.quiver or args.input
    if not path:
        raise ParseError("explore needs --quiver (or --in) with a quiver or seed document")
    s = seed_from_json(load_json(path))
    depth = 10 if args.depth is None else args.depth
    g = explore(s, depth, cfg.max_seeds, cfg.max_terms)
    q0 = s.quiver
    nodes = []
    for k, (seed, p) in enumerate(zip(g.seeds, g.paths)):
        vs = []
        for v in seed.cluster:
            entry = {"value": print_canonical(v)}
            try:
                entry["g"] = list(g_vector_direct(v, q0))
            except RankError:
                entry["g"] = None
            if is_principal(q0):
                entry["F"] = print_canonical(f_polynomial_of_variable(v, q0.r), "u")
            vs.append(entry)
        nodes.append({"id": k, "path": list(p), "cluster": vs})
    return {"clusters": g.num_clusters, "closure": g.closure, "truncated": g.truncated,
            "depth": depth, "variables": len(g.variables), "notes": g.notes, "nodes": nodes,
            "edges": [{"from": a, "vertex": i, "to": b} for a, i, b in g.edges]}


def cmd_verify(args, cfg):
    from .verify import CORPUS, Report, run_full
    names = CORPUS if args.scenario == "all" else [args.scenario]
    iso_seed = cfg.iso_seed if args.seed is None else args.seed
    reports = [run_full(n, args.depth, args.checks, args.jobs, args.trunc or cfg.trunc,
                        cfg.iso_draws, iso_seed) for n in names]
    if len(reports) == 1:
        rep = reports[0]
    else:
        rep = Report("all", args.depth or 0)
        for r in reports:
            rep.merge(r)
        rep.timing["total_seconds"] = round(sum(r.timing.get("total_seconds", 0) for r in reports), 3)
    doc = rep.to_json()
    return doc, (EXIT_OK if rep.ok else EXIT_CHECK)


COMMANDS = {
    "mutate-quiver": cmd_mutate_quiver, "mutate-seed": cmd_mutate_seed, "mutate-qp": cmd_mutate_qp,
    "mutate-rep": cmd_mutate_rep, "invariants": cmd_invariants, "fpoly": cmd_fpoly, "cc": cmd_cc,
    "explore": cmd_explore, "verify": cmd_verify,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="qpmut", description="Mutation of seeds, quivers with potentials "
                                                           "and decorated representations.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--out", default=None, help="output file (stdout if omitted)")
        p.add_argument("--trunc", type=int, default=None, help="truncation degree N")
        return p

    for name, help_ in [("mutate-quiver", "mutate an ice quiver"),
                        ("mutate-seed", "mutate a seed"),
                        ("mutate-qp", "mutate a quiver with potential")]:
        p = add(name, help_)
        p.add_argument("--in", dest="input", required=name != "mutate-qp")
        p.add_argument("--qp", default=None)
        p.add_argument("--at", default="", help="vertex or comma separated sequence")
    p = add("mutate-rep", "mutate a decorated representation")
    p.add_argument("--qp", default=None)
    p.add_argument("--rep", required=True)
    p.add_argument("--at", default="")
    for name, help_ in [("invariants", "g, h, E and F of a representation"),
                        ("fpoly", "F-polynomial by point counting")]:
        p = add(name, help_)
        p.add_argument("--qp", default=None)
        p.add_argument("--rep", required=True)
        p.add_argument("--primes", default=None, help="'auto' or a comma separated list")
    p = add("cc", "cluster character of a representation")
    p.add_argument("--qp", default=None)
    p.add_argument("--rep", required=True)
    p.add_argument("--quiver", default=None, help="initial ice quiver")
    p.add_argument("--primes", default=None)
    p = add("explore", "exchange graph by breadth-first search")
    p.add_argument("--in", dest="input", default=None)
    p.add_argument("--quiver", default=None)
    p.add_argument("--depth", type=int, default=None)
    p = add("verify", "lockstep verification sweep")
    p.add_argument("--scenario", default="a2", choices=["a2", "a3", "triangle", "all"])
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--checks", default="all")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=None, help="seed for the isomorphism test")
    return ap


def _error(exc: QPMutError):
    doc = {"error": exc.code, "message": str(exc)}
    for attr in ("offset", "path", "step", "vertex"):
        v = getattr(exc, attr, None)
        if v is not None:
            doc[attr] = v
    print(json.dumps(doc), file=sys.stderr)
    return exc.exit_status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config()
        if args.trunc is not None and args.trunc < 3:
            raise ParseError(f"--trunc must be >= 3, got {args.trunc}")
        out = COMMANDS[args.command](args, cfg)
        status = EXIT_OK
        if isinstance(out, tuple):
            out, status = out
        dest = args.out
        if dest is None and cfg.out_dir:
            dest = os.path.join(cfg.out_dir, f"{args.command}.json")
        dump_json(out, dest)
        return status
    except QPMutError as exc:
        return _error(exc)


if __name__ == "__main__":
    sys.exit(main())
