"""Command-line front end.  Every subcommand prints one JSON report.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .geomlink import (OracleInconclusive, PLEmbedding, conway_gordon_invariant, gauss_linking_oracle,
                       linking_number, random_general_position_embedding, search_mod_q_link)
from .linkalg import verify_conclusion
from .pipelines import (ConstantSupplier, KeyRingInstance, KeyRingModelFailure, PipelineTrace,
                        ReplayError, SeededSupplier, StitchInput, TheoremTrace, bipartite_stage_sizes,
                        bound_bipartite, bound_key_q, bound_keydisc, keyring_search,
                        random_stitch_input, replay_stitch, replay_theorem, stitch_links,
                        synthesize_h_system, theorem_modq_orchestrate, two_component_pipeline,
                        vertex_budget_check)
from .pipelines.keyring import lemma_guarantee
from .simplicial import build_path, build_prism_sphere, extra_facet_count, load_disc, vsphere_upper


class UsageError(Exception):
    pass


class Outcome:
    def __init__(self, results: dict, ok: bool = True, seed=None):
        self.results, self.ok, self.seed = results, ok, seed


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _write_json(path: str | None, obj) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True)


def _cg_value(seed: int) -> int:
    return conway_gordon_invariant(random_general_position_embedding(6, seed))


def cmd_verify_cg(args) -> Outcome:
    seeds = list(range(args.seed, args.seed + args.seeds))
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            values = list(pool.map(_cg_value, seeds, chunksize=8))
    else:
        values = [_cg_value(s) for s in seeds]
    ok = all(v == 1 for v in values)
    return Outcome({"seeds": len(seeds), "values": values, "all_one": ok}, ok, args.seed)


def cmd_gen_embedding(args) -> Outcome:
    e = random_general_position_embedding(args.N, args.seed)
    _write_json(args.out, e.to_json())
    return Outcome({"embedding": e.to_json()}, True, args.seed)


def cmd_lk(args) -> Outcome:
    e = PLEmbedding.from_json(_read_json(args.embedding))
    lk = linking_number(e, args.c1, args.c2)
    res = {"c1": args.c1, "c2": args.c2, "lk": lk}
    ok = True
    if args.oracle:
        try:
            res["oracle"] = gauss_linking_oracle(e, args.c1, args.c2)
            ok = res["oracle"] == lk
        except OracleInconclusive:
            res["oracle"] = None
    return Outcome(res, ok)


def cmd_search_modq(args) -> Outcome:
    e = random_general_position_embedding(args.N, args.seed)
    hit = search_mod_q_link(e, args.q, args.budget)
    found = None if hit is None else {"c1": list(hit[0]), "c2": list(hit[1]), "lk": hit[2]}
    return Outcome({"N": args.N, "q": args.q, "budget": args.budget, "found": found}, True, args.seed)


def cmd_gen_path(args) -> Outcome:
    p = build_path(args.n, args.len)
    _write_json(args.out, p.to_json())
    return Outcome({"path": p.to_json(), "vertices": p.complex.num_vertices(),
                    "boundary_ridges": len(p.complex.boundary_ridges())})


def cmd_gen_prism(args) -> Outcome:
    disc = load_disc(args.disc)
    s = build_prism_sphere(disc, args.m)
    _write_json(args.out, s.complex.to_json())
    return Outcome({"sphere": s.complex.to_json(), "vertices": s.num_vertices(),
                    "vsphere_upper": vsphere_upper(disc, args.m), "extra_facets": extra_facet_count(s)},
                   extra_facet_count(s) >= args.m)


def cmd_gen_stitch_input(args) -> Outcome:
    inp = random_stitch_input(args.S, args.T, args.q, args.seed)
    _write_json(args.out, inp.to_json())
    return Outcome({"input": inp.to_json()}, True, args.seed)


def cmd_stitch(args) -> Outcome:
    inp = StitchInput.from_json(_read_json(args.input))
    if args.replay:
        trace = PipelineTrace.from_json(_read_json(args.replay))
        try:
            chain, z = replay_stitch(inp, trace)
        except ReplayError as exc:
            return Outcome({"replayed": False, "error": str(exc)}, False)
        same = dict(sorted(chain.items())) == trace.chain and list(z) == trace.z
        return Outcome({"replayed": True, "matches": same, "z": list(z)}, same)
    chain, z, trace = stitch_links(inp)
    _write_json(args.trace_out, trace.to_json())
    ok = verify_conclusion(z, inp.q)
    return Outcome({"z": list(z), "chain": dict(sorted(chain.items())), "verified": ok,
                    "trace": trace.to_json()}, ok)


def cmd_two_component(args) -> Outcome:
    if args.supplier_seed is None:
        supplier = ConstantSupplier([0])
    else:
        supplier = SeededSupplier(args.supplier_seed, 1)
    chain, lk, trace = two_component_pipeline(args.keys, args.q, supplier)
    ok = verify_conclusion([lk], args.q)
    return Outcome({"chain": dict(sorted(chain.items())), "lk": lk, "outcome": trace.outcome,
                    "trace": trace.to_json()}, ok, args.supplier_seed)


def cmd_bounds(args) -> Outcome:
    holds, margin = vertex_budget_check(args.q, args.n)
    res = {"key": bound_key_q(args.q, args.n), "budget": {"holds": holds, "margin": margin}}
    if args.r is not None:
        # disc = n-path of length q
        d, t = args.q + args.n, args.q * (args.n - 1) + 2
        res["keydisc"] = bound_keydisc(args.r, args.n, d, t)
        res["stage_sizes"] = bipartite_stage_sizes(args.r, max_bits=1 << 16)
        res["bipartite"] = bound_bipartite(args.r, args.n, d, t)
    return Outcome(res, holds)


def cmd_keyring(args) -> Outcome:
    inst = KeyRingInstance.from_json(_read_json(args.instance))
    try:
        res = keyring_search(inst)
    except KeyRingModelFailure as exc:
        return Outcome({"error": "lemma-model-failure", "message": str(exc), "instance": inst.to_json()}, False)
    return Outcome({"A": list(res.A), "I": list(res.I), "guarantee": lemma_guarantee(inst.m * inst.m)})


def cmd_theorem(args) -> Outcome:
    def provider(u, v, ell, q):
        return synthesize_h_system(u, v, ell, q, args.seed)

    def suppliers(u, dim):
        return SeededSupplier(args.seed * 1000 + u, dim)

    hs, trace = theorem_modq_orchestrate(args.r, args.v, args.ell, args.q, provider, suppliers)
    u0, v0, ell0 = trace.schedule[0]
    replayed = replay_theorem(provider(u0, v0, ell0, args.q), TheoremTrace.from_json(trace.to_json()), suppliers)
    ok = replayed.system == hs.system and verify_conclusion([p[2] for p in trace.q_pairs], args.q)
    return Outcome({"schedule": trace.schedule, "q_pairs": trace.q_pairs, "replayed": ok}, ok, args.seed)


def _threads_default() -> int:
    try:
        return max(1, int(os.environ.get("LINKFORGE_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="linkforge", description=__doc__.splitlines()[0])
    ap.add_argument("--pretty", action="store_true", help="indent the JSON report")
    ap.add_argument("--threads", type=int, default=_threads_default(),
                    help="worker processes (default from LINKFORGE_THREADS)")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-cg", help="Conway-Gordon invariant over random K6 embeddings")
    p.add_argument("--seeds", type=int, required=True)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.set_defaults(func=cmd_verify_cg)

    p = sub.add_parser("gen-embedding", help="random general-position embedding of K_N")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_embedding)

    p = sub.add_parser("lk", help="linking number of two disjoint cycles")
    p.add_argument("--embedding", required=True)
    p.add_argument("--c1", type=int, nargs="+", required=True)
    p.add_argument("--c2", type=int, nargs="+", required=True)
    p.add_argument("--oracle", action="store_true", help="cross-check with the Gauss integral")
    p.set_defaults(func=cmd_lk)

    p = sub.add_parser("search-modq", help="cycle pair linking by a nonzero multiple of q")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--budget", type=int, default=10000)
    p.set_defaults(func=cmd_search_modq)

    p = sub.add_parser("gen-path", help="stacked n-path")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--len", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_path)

    p = sub.add_parser("gen-prism", help="prism sphere over a disc file")
    p.add_argument("--disc", required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_prism)

    p = sub.add_parser("gen-stitch-input", help="random minimal-size stitching input")
    p.add_argument("--S", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_stitch_input)

    p = sub.add_parser("stitch", help="run or replay the stitching pipeline")
    p.add_argument("--input", required=True)
    p.add_argument("--replay", metavar="TRACE")
    p.add_argument("--trace-out")
    p.set_defaults(func=cmd_stitch)

    p = sub.add_parser("two-component", help="two-component link from a key ring")
    p.add_argument("--keys", type=int, nargs="+", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--supplier-seed", type=int, help="seeded segment supplier (default: all zero)")
    p.set_defaults(func=cmd_two_component)

    p = sub.add_parser("bounds", help="vertex-count bounds")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("keyring", help="solve a mod-2 key-ring instance")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_keyring)

    p = sub.add_parser("theorem", help="last induction steps on a synthesized base system")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--v", type=int, default=1)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_theorem)
    return ap


_UNDIGESTED = {"func", "pretty", "threads", "out", "trace_out"}


def _digest(args) -> str:
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in _UNDIGESTED}
    for key in ("embedding", "disc", "input", "replay", "instance"):
        path = inputs.get(key)
        if path:
            try:
                with open(path, "rb") as fh:
                    inputs[key] = hashlib.sha256(fh.read()).hexdigest()
            except OSError:
                pass
    return hashlib.sha256(json.dumps(inputs, sort_keys=True).encode()).hexdigest()


def run(argv=None) -> tuple[int, dict | None]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    start = time.perf_counter()
    try:
        out = args.func(args)
    except (UsageError, ValueError, KeyError, TypeError, OverflowError, FileNotFoundError) as exc:
        print(f"linkforge {args.command}: {exc}", file=sys.stderr)
        return 2, None
    report = {"command": args.command, "inputs_digest": _digest(args), "results": out.results,
              "timing": {"seconds": round(time.perf_counter() - start, 6)},
              "seed": out.seed, "version": __version__}
    return (0 if out.ok else 1), report


def main(argv=None) -> int:
    code, report = run(argv)
    if report is not None:
        pretty = "--pretty" in (sys.argv[1:] if argv is None else argv)
        print(json.dumps(report, sort_keys=True, indent=2 if pretty else None))
    return code


if __name__ == "__main__":
    sys.exit(main())
