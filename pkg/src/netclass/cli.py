"""Command-line entry point: seeded, file-based runs of every pipeline.

Each subcommand is a thin shell over exactly one library operation; with the
same seed and inputs it produces byte-identical outputs. Random streams are
derived from the master seed by subcommand name, so partial pipelines can be
reproduced independently.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import classifier, distance, function_predict, generators, graph, plots
from .rng import derive_rng

log = logging.getLogger("netclass")

_KINDS = {k.lower(): k for k in generators.MECHANISMS}


def _log_config(command: str, args: argparse.Namespace) -> None:
    config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    config["command"] = command
    log.info("run config: %s", json.dumps(config, sort_keys=True, default=str))


def _write_text(path, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _write_json(path, obj) -> None:
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _read_graph(path) -> graph.Graph:
    return graph.read_edgelist(Path(path).read_text())


def _weights(args) -> distance.EnsembleWeights:
    if getattr(args, "weights", None):
        return distance.load_weights(args.weights)
    return distance.default_weights()


def _mechanism(value: str) -> str:
    kind = _KINDS.get(value.lower())
    if kind is None:
        raise argparse.ArgumentTypeError(
            f"unknown mechanism {value!r}; choose from {', '.join(_KINDS)}"
        )
    return kind


def _mechanism_list(value: str) -> tuple:
    return tuple(_mechanism(v) for v in value.split(","))


def _load_assignment(path) -> list:
    records = json.loads(Path(path).read_text())
    if not isinstance(records, list):
        raise ValueError("assignment file must hold a JSON list of {kind, param} records")
    return [
        generators.MechanismSpec(_mechanism(str(r["kind"])), float(r["param"]))
        for r in records
    ]


def _cmd_generate(args):
    spec = generators.MechanismSpec(args.mechanism, args.param)
    g = generators.grow(spec, args.nodes, derive_rng(args.seed, "generate"))
    _write_text(args.out, graph.write_edgelist(g))
    return 0


def _cmd_generate_mixture(args):
    assignment = _load_assignment(args.assignment)
    g = generators.grow_mixture(assignment, derive_rng(args.seed, "generate-mixture"))
    _write_text(args.out, graph.write_edgelist(g))
    return 0


def _cmd_stir_mixture(args):
    assignment = _load_assignment(args.assignment)
    g = generators.stir_mixture(assignment, derive_rng(args.seed, "stir-mixture"))
    _write_text(args.out, graph.write_edgelist(g))
    return 0


def _cmd_features(args):
    from .features import extract_features, feature_set_to_dict

    g = _read_graph(args.infile)
    _write_json(args.out, feature_set_to_dict(extract_features(g)))
    return 0


def _cmd_statespace(args):
    indir = Path(args.indir)
    files = sorted(p for p in indir.iterdir() if p.suffix == ".edgelist")
    if len(files) < 2:
        raise ValueError(f"need at least 2 .edgelist files in {indir}")
    graphs = [_read_graph(p) for p in files]
    ids = [p.stem for p in files]
    # a filename like `er__run3.edgelist` carries its label before `__`
    labels = [stem.split("__")[0] if "__" in stem else None for stem in ids]
    weights = distance.load_weights(args.weights) if args.weights else None
    space = distance.build_state_space(graphs, weights=weights, labels=labels,
                                       ids=ids, threads=args.threads)
    coords = distance.mds_project(space)
    _write_json(args.out, {
        "ids": list(space.ids),
        "labels": list(space.labels),
        "distances": [[float(v) for v in row] for row in space.matrix],
        "mds": [[float(v) for v in row] for row in coords],
        "weights": distance.weights_to_dict(space.weights),
    })
    if args.svg:
        _write_text(args.svg, plots.scatter_svg(coords, labels, title="network state space"))
    return 0


def _cmd_classify(args):
    g = _read_graph(args.infile)
    report = classifier.classify(
        g, candidates=args.mechanisms, alpha=args.alpha, seed=args.seed,
        weights=_weights(args), null_size=args.null_size, threads=args.threads,
    )
    payload = classifier.report_to_dict(report)
    payload["seed"] = args.seed
    _write_json(args.out, payload)
    return 0


def _cmd_estimate_param(args):
    g = _read_graph(args.infile)
    estimate = classifier.estimate_param(
        g, args.mechanism, seed=args.seed, weights=_weights(args)
    )
    _write_json(args.out, {"mechanism": args.mechanism, "estimate": estimate,
                           "seed": args.seed})
    return 0


def _cmd_roc(args):
    result = classifier.roc_evaluate(
        per_mechanism=args.per_mechanism, n_nodes=args.nodes, seed=args.seed,
        weights=_weights(args), null_size=args.null_size, threads=args.threads,
    )
    lines = ["mechanism,threshold,fpr,tpr,auc"]
    for curve in result.curves:
        thresholds = np.concatenate([[np.inf], curve.thresholds])
        for t, f, tp in zip(thresholds, curve.fpr, curve.tpr):
            lines.append(f"{curve.kind},{t:.10g},{f:.10g},{tp:.10g},{curve.auc:.10g}")
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.svg:
        curves = {c.kind: (c.fpr, c.tpr, c.auc) for c in result.curves}
        _write_text(args.svg, plots.roc_svg(curves))
    return 0


def _cmd_ascendency(args):
    g = _read_graph(args.infile)
    r = function_predict.ascendency(g)
    _write_json(args.out, {"ascendency": r.ascendency, "capacity": r.capacity,
                           "normalized": r.normalized})
    return 0


def _cmd_predict(args):
    g = _read_graph(args.infile)
    panel = function_predict.panel_from_dict(json.loads(Path(args.panel).read_text()))
    value = function_predict.predict_function(g, panel, k=args.k, weights=_weights(args))
    _write_json(args.out, {"prediction": value, "k": args.k})
    return 0


def _parse_mech_range(value: str) -> list:
    if ".." in value:
        lo, hi = value.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in value.split(",")]


def _cmd_identifiability(args):
    lines = ["n_mechanisms,correlation,degenerate"]
    for n_mech in _parse_mech_range(args.mechanisms):
        r = function_predict.identifiability_experiment(
            n_mech, panel_size=args.size, seed=args.seed, n_nodes=args.nodes,
            weights=_weights(args), threads=args.threads,
        )
        lines.append(f"{r.n_mechanisms},{r.correlation:.10g},{int(r.degenerate)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netclass",
        description="Classify the generating mechanism of directed networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("generate", _cmd_generate, "grow one network under a mechanism")
    p.add_argument("--mechanism", type=_mechanism, required=True)
    p.add_argument("--param", type=float, required=True)
    p.add_argument("--nodes", type=int, default=generators.DEFAULT_NODES)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)

    p = add("generate-mixture", _cmd_generate_mixture, "grow a per-node mixture network")
    p.add_argument("--assignment", required=True, help="JSON list of {kind, param}")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)

    p = add("stir-mixture", _cmd_stir_mixture, "rewire a grown network by node mechanisms")
    p.add_argument("--assignment", required=True, help="JSON list of {kind, param}")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)

    p = add("features", _cmd_features, "extract the 18-property feature set")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)

    p = add("statespace", _cmd_statespace, "pairwise distances + MDS over a directory")
    p.add_argument("--in", dest="indir", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--weights", default=None)
    p.add_argument("--svg", default=None)
    p.add_argument("--threads", type=int, default=None)

    p = add("classify", _cmd_classify, "test a network against candidate mechanisms")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--alpha", type=float, default=classifier.DEFAULT_ALPHA)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mechanisms", type=_mechanism_list,
                   default=generators.MECHANISMS)
    p.add_argument("--null-size", type=int, default=classifier.DEFAULT_NULL_SIZE)
    p.add_argument("--weights", default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None)

    p = add("estimate-param", _cmd_estimate_param, "distance-weighted parameter estimate")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mechanism", type=_mechanism, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--weights", default=None)
    p.add_argument("--out", default=None)

    p = add("roc", _cmd_roc, "self-validation ROC/AUC on labeled simulations")
    p.add_argument("--per-mechanism", type=int, default=30)
    p.add_argument("--nodes", type=int, default=generators.DEFAULT_NODES)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--null-size", type=int, default=classifier.DEFAULT_NULL_SIZE)
    p.add_argument("--weights", default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--svg", default=None)

    p = add("ascendency", _cmd_ascendency, "flow organization of a network")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)

    p = add("predict", _cmd_predict, "predict normalized ascendency from a panel")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--panel", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--weights", default=None)
    p.add_argument("--out", default=None)

    p = add("identifiability", _cmd_identifiability, "distance vs composition correlation")
    p.add_argument("--mechanisms", default="2..5", help="range like 2..5 or list like 2,5")
    p.add_argument("--size", type=int, default=100)
    p.add_argument("--nodes", type=int, default=generators.DEFAULT_NODES)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--weights", default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    _log_config(args.command, args)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        sys.stderr.write(json.dumps({
            "error": type(exc).__name__,
            "message": str(exc),
        }) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
