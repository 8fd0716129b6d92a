"""Command line front end.

Subcommands: resolve conflicting claims from triple files, score the
source prior on its own, generate synthetic corpora, run method
comparisons, and run a single baseline.  Settings resolve in strict
precedence: command line flag, then config file entry, then built-in
default.  Output files are written atomically via rename.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys

from .baselines import (METHOD_TRUTHFINDER, METHOD_VOTE, truthfinder,
                        vote_all)
from .eval_harness import (METHOD_ENGINE, SynthConfig, SynthConfigError,
                           generate, run_benchmark)
from .graph_model import (build_sameas_graph, project_to_sbg, sbg_to_tsv)
from .pipeline import assemble, parse_files
from .prior_belief import EmptyGraphError, PriorConfig, compute_prior
from .rdf_ingest import (MalformedLineError, POLICY_HOST, POLICY_NAMED_GRAPH,
                         POLICY_PLD, load_alignment)
from .truth_engine import EngineConfig, resolve_all

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_NONCONVERGED = 2

_POLICY_FLAGS = {"host": POLICY_HOST, "pld": POLICY_PLD,
                 "graph": POLICY_NAMED_GRAPH}


def _atomic_write(path: str, text: str):
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as handle:
        handle.write(text)
    os.replace(tmp, path)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as handle:
        parser.read_file(handle)
    return {section: dict(parser.items(section))
            for section in parser.sections()}


def _pick(cli_value, filecfg: dict, section: str, key: str, cast, default):
    if cli_value is not None:
        return cli_value
    raw = filecfg.get(section, {}).get(key)
    if raw is not None:
        if cast is bool:
            return raw.strip().lower() in ("1", "true", "yes", "on")
        return cast(raw)
    return default


def _prior_config(args, filecfg) -> PriorConfig:
    base = PriorConfig()
    return PriorConfig(
        damping=_pick(getattr(args, "damping", None), filecfg, "prior",
                      "damping", float, base.damping),
        tolerance=_pick(None, filecfg, "prior", "tolerance", float,
                        base.tolerance),
        max_sweeps=_pick(None, filecfg, "prior", "max_sweeps", int,
                         base.max_sweeps))


def _engine_config(args, filecfg) -> EngineConfig:
    base = EngineConfig()
    return EngineConfig(
        t0=_pick(getattr(args, "t0", None), filecfg, "engine", "t0",
                 float, base.t0),
        outer_threshold=_pick(getattr(args, "outer_threshold", None), filecfg,
                              "engine", "outer_threshold", float,
                              base.outer_threshold),
        outer_max=_pick(getattr(args, "outer_max", None), filecfg, "engine",
                        "outer_max", int, base.outer_max),
        bp_damping=_pick(getattr(args, "bp_damping", None), filecfg, "engine",
                         "bp_damping", float, base.bp_damping),
        bp_tol=_pick(None, filecfg, "engine", "bp_tol", float, base.bp_tol),
        bp_max=_pick(None, filecfg, "engine", "bp_max", int, base.bp_max),
        edge_threshold=_pick(getattr(args, "edge_threshold", None), filecfg,
                             "engine", "edge_threshold", float,
                             base.edge_threshold),
        coupling=_pick(getattr(args, "coupling", None), filecfg, "engine",
                       "coupling", float, base.coupling),
        dissimilar_false_factor=_pick(None, filecfg, "engine",
                                      "dissimilar_false_factor", float,
                                      base.dissimilar_false_factor))


def _synth_config(args, filecfg) -> SynthConfig:
    base = SynthConfig()
    pick = lambda attr, key, cast, default: _pick(
        getattr(args, attr, None), filecfg, "synth", key, cast, default)
    rel_low = pick("rel_low", "reliability_low", float,
                   base.reliability_range[0])
    rel_high = pick("rel_high", "reliability_high", float,
                    base.reliability_range[1])
    cmin = pick("claims_min", "claims_min", int, base.claims_per_conflict[0])
    cmax = pick("claims_max", "claims_max", int, base.claims_per_conflict[1])
    return SynthConfig(
        n_sources=pick("sources", "n_sources", int, base.n_sources),
        n_entities=pick("entities", "n_entities", int, base.n_entities),
        n_conflict_predicates=pick("conflicts", "n_conflict_predicates", int,
                                   base.n_conflict_predicates),
        attachment_m=pick("attachment", "attachment_m", int, base.attachment_m),
        reliability_range=(rel_low, rel_high),
        values_per_conflict=pick("values", "values_per_conflict", int,
                                 base.values_per_conflict),
        sameas_fidelity=pick("fidelity", "sameas_fidelity", float,
                             base.sameas_fidelity),
        seed=pick("seed", "seed", int, base.seed),
        claims_per_conflict=(cmin, cmax),
        support_skew=pick("support_skew", "support_skew", float,
                          base.support_skew))


def _print_parse_warnings(tagged_diagnostics):
    for path, diag in tagged_diagnostics:
        print(f"WARN {path}:{diag.line} {diag.reason}", file=sys.stderr)


def _value_json(value) -> dict:
    return {"kind": value.kind, "value": value.render()}


def _decisions_jsonl(decisions, store, method: str, iterations=None,
                     converged=None, taus=None) -> str:
    lines = []
    for d in decisions:
        cs = store.conflict_sets[(d.entity, d.predicate)]
        tau = list(getattr(d, "tau_final", ())) or \
            (list(taus[(d.entity, d.predicate)]) if taus else None)
        objects = []
        for i, obj in enumerate(cs.objects):
            entry = {"sources": sorted(obj.sources), **_value_json(obj.value)}
            if tau:
                entry["tau"] = tau[i]
            objects.append(entry)
        record = {"entity": d.entity, "predicate": d.predicate,
                  "chosen": _value_json(d.chosen), "objects": objects,
                  "method": method}
        if iterations is not None:
            record["iterations"] = iterations
        if converged is not None:
            record["converged"] = converged
        lines.append(json.dumps(record, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def _trace_csv(trace) -> str:
    lines = ["iteration,mean_delta_tau,max_delta_tau"]
    for row in trace.rows:
        lines.append(f"{row.iteration},{row.mean_delta_tau!r},{row.max_delta_tau!r}")
    return "\n".join(lines) + "\n"


def _ingest(args, filecfg):
    policy = _POLICY_FLAGS[_pick(args.policy, filecfg, "run", "policy",
                                 str, "host")]
    mode = "strict" if args.strict else "lenient"
    threads = _pick(args.threads, filecfg, "run", "threads", int, 1)
    if threads < 1:
        raise ValueError("--threads must be at least 1")
    diagnostics = []
    statements = parse_files(args.input, fmt=args.format, mode=mode,
                             threads=threads, diagnostics=diagnostics)
    _print_parse_warnings(diagnostics)
    alignment = load_alignment(args.alignment) if args.alignment else None
    return statements, policy, alignment


def cmd_resolve(args) -> int:
    filecfg = _load_config(args.config)
    statements, policy, alignment = _ingest(args, filecfg)
    prior_cfg = _prior_config(args, filecfg)
    engine_cfg = _engine_config(args, filecfg)
    built = assemble(statements, policy=policy, alignment=alignment,
                     prior_cfg=prior_cfg)
    store = built.store
    result = resolve_all(store, built.priors, engine_cfg)

    os.makedirs(args.out, exist_ok=True)
    _atomic_write(os.path.join(args.out, "decisions.jsonl"),
                  _decisions_jsonl(result.decisions, store, METHOD_ENGINE,
                                   result.iterations, result.converged))
    _atomic_write(os.path.join(args.out, "trace.csv"),
                  _trace_csv(result.trace))
    trust_lines = ["source\tt\tt_smoothed\tnbr"]
    nbr = built.priors.nbr if built.priors else {}
    for source in sorted(result.trust.t):
        trust_lines.append(
            f"{source}\t{result.trust.t[source]!r}"
            f"\t{result.trust.t_smoothed[source]!r}"
            f"\t{nbr.get(source, 0.5)!r}")
    _atomic_write(os.path.join(args.out, "source_trust.tsv"),
                  "\n".join(trust_lines) + "\n")

    print(f"statements={len(statements)} claims={len(store.claims)} "
          f"conflict_sets={len(store.conflict_sets)} "
          f"iterations={result.iterations} converged={result.converged}",
          file=sys.stderr)
    priors_ok = built.priors is None or built.priors.converged
    if not result.converged or not priors_ok:
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_prior(args) -> int:
    filecfg = _load_config(args.config)
    statements, policy, _ = _ingest(args, filecfg)
    prior_cfg = _prior_config(args, filecfg)
    graph = build_sameas_graph(statements)
    sbg = project_to_sbg(graph, policy)
    try:
        priors = compute_prior(sbg, prior_cfg)
    except EmptyGraphError:
        print("ERROR: no usable identity links, source graph is empty",
              file=sys.stderr)
        return EXIT_FATAL
    os.makedirs(args.out, exist_ok=True)
    lines = ["source\tbr\tnbr"]
    ranked = sorted(priors.br, key=lambda s: (-priors.br[s], s))
    for source in ranked:
        lines.append(f"{source}\t{priors.br[source]!r}\t{priors.nbr[source]!r}")
    _atomic_write(os.path.join(args.out, "prior.tsv"), "\n".join(lines) + "\n")
    if args.sbg_out:
        _atomic_write(args.sbg_out, sbg_to_tsv(sbg))
    print(f"sources={len(priors.br)} sweeps={priors.sweeps_used} "
          f"converged={priors.converged}", file=sys.stderr)
    return EXIT_OK if priors.converged else EXIT_NONCONVERGED


def cmd_synth(args) -> int:
    filecfg = _load_config(args.config)
    cfg = _synth_config(args, filecfg)
    result = generate(cfg)
    os.makedirs(args.out, exist_ok=True)
    _atomic_write(os.path.join(args.out, "corpus.nt"), result.triples)
    _atomic_write(os.path.join(args.out, "gold.tsv"), result.gold.to_tsv())
    manifest = {"seed": cfg.seed, "n_sources": cfg.n_sources,
                "n_entities": cfg.n_entities,
                "n_conflict_predicates": cfg.n_conflict_predicates,
                "values_per_conflict": cfg.values_per_conflict,
                "reliability_range": list(cfg.reliability_range),
                "gold_slots": len(result.gold.truths),
                "unanimous_slots": result.unanimous_slots}
    _atomic_write(os.path.join(args.out, "manifest.json"),
                  json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"gold_slots={len(result.gold.truths)} "
          f"unanimous={result.unanimous_slots}", file=sys.stderr)
    return EXIT_OK


def cmd_eval(args) -> int:
    filecfg = _load_config(args.config)
    cfg = _synth_config(args, filecfg)
    engine_cfg = _engine_config(args, filecfg)
    seeds = [int(s) for s in args.seeds.split(",")] if args.seeds \
        else list(range(cfg.seed, cfg.seed + args.runs))
    methods = args.methods.split(",")
    rows = run_benchmark(cfg, seeds, methods, engine_cfg)
    report = {"seeds": seeds, "methods": methods, "rows": []}
    for row in rows:
        flat = {"seed": row["seed"], "conflict_sets": row["conflict_sets"]}
        for method in methods:
            entry = row["report"][method]
            flat[method] = {"accuracy": entry["accuracy"],
                            "seconds": round(entry["seconds"], 3)}
        report["rows"].append(flat)
    for method in methods:
        accs = [row["report"][method]["accuracy"] for row in rows]
        report[f"mean_{method}"] = sum(accs) / len(accs)
    os.makedirs(args.out, exist_ok=True)
    _atomic_write(os.path.join(args.out, "report.json"),
                  json.dumps(report, indent=2, sort_keys=True) + "\n")

    header = "seed  " + "".join(f"{m:>14}" for m in methods)
    print(header)
    for row in rows:
        cells = "".join(f"{row['report'][m]['accuracy']:>14.4f}"
                        for m in methods)
        print(f"{row['seed']:<6}{cells}")
    means = "".join(f"{report[f'mean_{m}']:>14.4f}" for m in methods)
    print(f"{'mean':<6}{means}")
    return EXIT_OK


def cmd_baseline(args) -> int:
    filecfg = _load_config(args.config)
    statements, policy, alignment = _ingest(args, filecfg)
    built = assemble(statements, policy=policy, alignment=alignment)
    store = built.store
    os.makedirs(args.out, exist_ok=True)
    if args.method == METHOD_VOTE:
        decisions = vote_all(store)
        text = _decisions_jsonl(decisions, store, METHOD_VOTE)
        code = EXIT_OK
    else:
        decisions, _, iterations, converged = truthfinder(store)
        text = _decisions_jsonl(decisions, store, METHOD_TRUTHFINDER,
                                iterations, converged)
        code = EXIT_OK if converged else EXIT_NONCONVERGED
    _atomic_write(os.path.join(args.out, "decisions.jsonl"), text)
    print(f"conflict_sets={len(store.conflict_sets)}", file=sys.stderr)
    return code


def _add_ingest_flags(sub):
    sub.add_argument("--input", nargs="+", required=True,
                     help="triple files (.nt/.nq, optionally .gz)")
    sub.add_argument("--format", choices=["ntriples", "nquads"], default=None)
    sub.add_argument("--policy", choices=sorted(_POLICY_FLAGS), default=None,
                     help="source granularity (default host)")
    sub.add_argument("--alignment", default=None,
                     help="TSV mapping predicate IRIs to canonical ids")
    sub.add_argument("--strict", action="store_true",
                     help="abort on the first malformed line")
    sub.add_argument("--threads", type=int, default=None,
                     help="parallel workers for file parsing")


def _add_engine_flags(sub):
    sub.add_argument("--damping", type=float, default=None,
                     help="prior damping factor")
    sub.add_argument("--t0", type=float, default=None)
    sub.add_argument("--outer-max", dest="outer_max", type=int, default=None)
    sub.add_argument("--outer-threshold", dest="outer_threshold", type=float,
                     default=None)
    sub.add_argument("--bp-damping", dest="bp_damping", type=float,
                     default=None)
    sub.add_argument("--coupling", type=float, default=None)
    sub.add_argument("--edge-threshold", dest="edge_threshold", type=float,
                     default=None)


def _add_synth_flags(sub):
    sub.add_argument("--sources", type=int, default=None)
    sub.add_argument("--entities", type=int, default=None)
    sub.add_argument("--conflicts", type=int, default=None)
    sub.add_argument("--values", type=int, default=None)
    sub.add_argument("--attachment", type=int, default=None)
    sub.add_argument("--fidelity", type=float, default=None)
    sub.add_argument("--rel-low", dest="rel_low", type=float, default=None)
    sub.add_argument("--rel-high", dest="rel_high", type=float, default=None)
    sub.add_argument("--claims-min", dest="claims_min", type=int, default=None)
    sub.add_argument("--claims-max", dest="claims_max", type=int, default=None)
    sub.add_argument("--support-skew", dest="support_skew", type=float,
                     default=None)
    sub.add_argument("--seed", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldtruth",
        description="Resolve conflicting Linked Data claims")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolve", help="run full conflict resolution")
    _add_ingest_flags(p)
    _add_engine_flags(p)
    p.add_argument("--out", default="out")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("prior", help="score sources from identity links only")
    _add_ingest_flags(p)
    p.add_argument("--damping", type=float, default=None)
    p.add_argument("--out", default="out")
    p.add_argument("--sbg-out", dest="sbg_out", default=None,
                   help="also dump the endorsement multigraph as TSV")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_prior)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    _add_synth_flags(p)
    p.add_argument("--out", default="synth")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval", help="benchmark methods on synthetic corpora")
    _add_synth_flags(p)
    _add_engine_flags(p)
    p.add_argument("--runs", type=int, default=1,
                   help="number of consecutive seeds starting at --seed")
    p.add_argument("--seeds", default=None,
                   help="explicit comma-separated seed list")
    p.add_argument("--methods", default=f"{METHOD_ENGINE},{METHOD_VOTE}")
    p.add_argument("--out", default="eval")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("baseline", help="run a single baseline method")
    _add_ingest_flags(p)
    p.add_argument("--method", choices=[METHOD_VOTE, METHOD_TRUTHFINDER],
                   default=METHOD_VOTE)
    p.add_argument("--out", default="out")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_baseline)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MalformedLineError as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except (SynthConfigError, ValueError, OSError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
