"""Command-line surface: one binary exposing inference, learning, sampling,
the Monte-Carlo oracle, the route scenario, the evidential classifier demo,
the logic-program evaluator, and the local HTTP service.

Exit codes: 0 success, 1 usage error, 2 computation error.
"""

from __future__ import annotations

import argparse
import difflib
import json
import logging
import os
import sys

from . import jsonio
from .bp import EvidenceSet, check_evidence
from .errors import UamlError
from .network import (PointNetwork, learn_conditionals, mean_network,
                      network_from_dict, network_to_dict,
                      sample_instantiations)
from .oracle import OracleConfig, oracle_infer
from .session import infer_payload, load_model

log = logging.getLogger("uaml")

_ALL_OPTIONS: list[str] = []


class _Parser(argparse.ArgumentParser):
    """argparse with exit code 1 on usage errors and flag suggestions."""

    def error(self, message):
        for token in message.split():
            token = token.rstrip("',")
            if token.startswith("--"):
                close = difflib.get_close_matches(token, _ALL_OPTIONS, n=1)
                if close:
                    message += f" (did you mean {close[0]}?)"
                break
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _emit(payload, full_precision: bool):
    print(jsonio.dumps(payload, full_precision=full_precision))


def _cmd_infer(args) -> int:
    net = load_model(args.model)
    ev = EvidenceSet.from_dict(jsonio.load_path(args.evidence))
    _emit(infer_payload(net, ev, targets=args.target), args.full_precision)
    return 0


def _cmd_learn(args) -> int:
    structure = network_from_dict(jsonio.load_path(args.structure))
    records = jsonio.load_path(args.records)
    spec = learn_conditionals(structure.nodes, records)
    _emit(network_to_dict(spec), args.full_precision)
    return 0


def _cmd_sample(args) -> int:
    net = network_from_dict(jsonio.load_path(args.model))
    pn = net if isinstance(net, PointNetwork) else mean_network(net)
    records = sample_instantiations(pn, args.count, args.seed)
    _emit(records, args.full_precision)
    return 0


def _cmd_oracle(args) -> int:
    net = load_model(args.model)
    ev = EvidenceSet.from_dict(jsonio.load_path(args.evidence))
    check_evidence(net.nodes, ev)
    cfg = OracleConfig(n_samples=args.samples, seed=args.seed,
                       targets=tuple(args.target or ()))
    opinions = oracle_infer(net, ev, cfg)
    _emit({"opinions": {k: v.to_dict() for k, v in opinions.items()},
           "n_samples": args.samples, "seed": args.seed}, args.full_precision)
    return 0


def _cmd_scenario(args) -> int:
    from .scenario import ScenarioConfig, format_table, run_scenario
    if args.seed is not None and args.seeds is not None:
        raise UamlError("--seed and --seeds are mutually exclusive")
    seeds = tuple(range(args.seeds)) if args.seeds else (args.seed or 0,)
    rows = (1, 2, 3, 4, 5) if args.row == "all" else (int(args.row),)
    cfg = ScenarioConfig(seeds=seeds, n_instantiations=args.instantiations,
                         rows=rows)
    report = run_scenario(cfg)
    if args.format == "table":
        print(format_table(report))
    else:
        _emit(report.to_dict(), args.full_precision)
    return 0


def _cmd_edl_demo(args) -> int:
    from .edl import (TrainConfig, make_synthetic, probe_report, scatter_svg,
                      train_toy)
    dataset = make_synthetic(args.seed)
    cfg = TrainConfig(learning_rate=args.learning_rate, epochs=args.epochs,
                      seed=args.seed)
    model = train_toy(dataset, cfg)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(scatter_svg(dataset, model))
        log.info("wrote %s", args.svg)
    if args.model_out:
        jsonio.dump_path(model.to_dict(), args.model_out, full_precision=True)
    _emit(probe_report(model, dataset), args.full_precision)
    return 0


def _cmd_problog(args) -> int:
    from .problogmini import Query, parse_program, subjective_success, success_probability
    with open(args.program, encoding="utf-8") as fh:
        prog = parse_program(fh.read())
    evidence = []
    for spec in args.evidence or []:
        for pair in spec.split(","):
            if "=" not in pair:
                raise UamlError(f"evidence must look like atom=true, got {pair!r}")
            atom, value = pair.split("=", 1)
            if value not in ("true", "false"):
                raise UamlError(f"evidence value must be true or false, got {value!r}")
            evidence.append((atom.strip(), value == "true"))
    q = Query(args.query, tuple(evidence))
    if prog.has_beta_facts:
        op = subjective_success(prog, q, n_samples=args.samples, seed=args.seed)
        _emit(op.to_dict(), args.full_precision)
    else:
        _emit({"probability": success_probability(prog, q)}, args.full_precision)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app
    app = create_app(args.model)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="uaml", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def cmd(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        p.add_argument("--full-precision", action="store_true",
                       help="emit full float precision instead of 6 significant digits")
        return p

    p = cmd("infer", _cmd_infer, "Posterior opinions for a network and evidence")
    p.add_argument("--model", required=True, help="network JSON file")
    p.add_argument("--evidence", required=True, help="evidence JSON file")
    p.add_argument("--target", action="append", help="restrict output to this node (repeatable)")

    p = cmd("learn", _cmd_learn, "Learn conditional opinions from records")
    p.add_argument("--structure", required=True, help="network JSON file (structure only)")
    p.add_argument("--records", required=True, help="records JSON file")

    p = cmd("sample", _cmd_sample, "Sample full instantiations from a network")
    p.add_argument("--model", required=True, help="network JSON file")
    p.add_argument("-n", "--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = cmd("oracle", _cmd_oracle, "Monte-Carlo reference opinions by enumeration")
    p.add_argument("--model", required=True)
    p.add_argument("--evidence", required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target", action="append")

    p = cmd("scenario", _cmd_scenario, "Route-planning scenario against the reference table")
    p.add_argument("--seed", type=int, help="single seed")
    p.add_argument("--seeds", type=int, help="sweep seeds 0..N-1")
    p.add_argument("--row", default="all", choices=["all", "1", "2", "3", "4", "5"])
    p.add_argument("--instantiations", type=int, default=100)
    p.add_argument("--format", default="json", choices=["json", "table"])

    p = cmd("edl-demo", _cmd_edl_demo, "Train the evidential toy classifier and report probes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=800)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--svg", help="write a feature-space scatter to this SVG file")
    p.add_argument("--model-out", help="write the trained model JSON to this file")

    p = cmd("problog", _cmd_problog, "Evaluate a ground probabilistic logic program")
    p.add_argument("program", help="program file (.pl)")
    p.add_argument("--query", required=True, help="query atom")
    p.add_argument("--evidence", action="append",
                   help="comma-separated atom=true/false pairs (repeatable)")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    p = cmd("serve", _cmd_serve, "Serve the local HTTP JSON API and UI")
    p.add_argument("--model", help="network JSON file (default: learned scenario network)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    _ALL_OPTIONS.clear()
    for action in sub.choices.values():
        for opt in action._option_string_actions:
            if opt.startswith("--") and opt not in _ALL_OPTIONS:
                _ALL_OPTIONS.append(opt)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("UAML_LOG", "WARNING").upper())
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not getattr(args, "func", None):
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(f"uaml: malformed JSON in input file: line {exc.lineno}, "
              f"column {exc.colno}: {exc.msg}", file=sys.stderr)
        return 2
    except (UamlError, OSError, KeyError, ValueError) as exc:
        detail = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(detail), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
