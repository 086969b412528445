"""Command line entry points: query, experiment, serve, generate."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from .config import ConfigError, load_config
from .engine import RecommenderEngine, load_graph, load_rules, StartupError
from .experiment import (
    DEFAULT_DELTA_SPEC,
    DeltaSpecError,
    ensure_baseline,
    parse_delta_spec,
    report_to_csv,
    run_relaxation_experiment,
)
from .profiles import ProfileError, profile_from_json
from .query import QueryParseError, QueryScopeError, parse_query, evaluate
from .rdfio import serialize_term
from .rules import RuleParseError, saturate
from .synthetic import (
    SyntheticSpecError,
    generate_synthetic,
    spec_from_json,
)
from .terms import BlankNode, Iri, Literal, parse_datetime, TermError


def _term_json(term) -> dict:
    if isinstance(term, Iri):
        return {"type": "iri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.label}
    assert isinstance(term, Literal)
    out = {"type": "literal", "value": term.lexical,
           "datatype": term.datatype.value}
    if term.language:
        out["lang"] = term.language
    return out


def _load_saturated(data: str, rules: Optional[str],
                    reference_time: Optional[str]):
    graph = load_graph([data])
    moment = parse_datetime(reference_time) if reference_time else None
    ruleset = load_rules(rules, moment)
    saturate(graph, ruleset)
    return graph.freeze(), ruleset


def _cmd_query(args: argparse.Namespace) -> int:
    graph, _ = _load_saturated(args.data, args.rules, args.reference_time)
    query = parse_query(Path(args.query).read_text(encoding="utf-8"))
    rows = evaluate(graph, query, args.case_sensitive_contains)
    if query.projection is not None:
        names = [v.name for v in query.projection]
    else:
        names = sorted({name for row in rows for name in row})
    if args.format == "json-rows":
        payload = [
            {name: _term_json(row[name]) for name in names if name in row}
            for row in rows
        ]
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\t".join("?" + name for name in names))
        for row in rows:
            print("\t".join(
                serialize_term(row[name]) if name in row else ""
                for name in names))
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    graph, _ = _load_saturated(args.data, args.rules, args.reference_time)
    documents = json.loads(Path(args.profiles).read_text(encoding="utf-8"))
    if not isinstance(documents, list):
        raise ProfileError("$", "profiles file must hold a JSON array")
    profiles = []
    errors = []
    for position, document in enumerate(documents):
        try:
            profiles.append(profile_from_json(document))
        except ProfileError as exc:
            errors.append(f"profile #{position}: {exc}")
    deltas = ensure_baseline(parse_delta_spec(args.deltas))
    report = run_relaxation_experiment(
        profiles, graph, deltas,
        case_sensitive_contains=args.case_sensitive_contains,
        errors=errors)
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(report_to_csv(report), encoding="utf-8")
    for message in report.errors:
        print(f"skipped {message}", file=sys.stderr)
    print(f"report written to {out_path}")
    if not args.no_figure:
        from .report import render_histograms

        figure_path = args.figure or str(out_path.with_suffix(".png"))
        render_histograms(report, figure_path)
        print(f"figure written to {figure_path}")
    print(f"baseline solvability: {report.solvability_rate:.4f} "
          f"({report.total_users} users)")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = load_config(args.config)
    engine = RecommenderEngine.from_config(config)
    app = create_app(engine)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    spec = spec_from_json(
        json.loads(Path(args.spec).read_text(encoding="utf-8")))
    data_path, profiles_path, ledger_path = generate_synthetic(
        spec, args.out_dir)
    print(f"data:     {data_path}")
    print(f"profiles: {profiles_path}")
    print(f"ledger:   {ledger_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgrec",
        description="Constraint-based vehicle recommender over an RDF "
                    "knowledge graph")
    sub = parser.add_subparsers(dest="command", required=True)

    query = sub.add_parser("query", help="run a SELECT query over a dataset")
    query.add_argument("--data", required=True)
    query.add_argument("--rules")
    query.add_argument("--query", required=True)
    query.add_argument("--format", choices=("tsv", "json-rows"), default="tsv")
    query.add_argument("--reference-time", help="ISO-8601 'now' for rules")
    query.add_argument("--case-sensitive-contains", action="store_true")
    query.set_defaults(func=_cmd_query)

    experiment = sub.add_parser(
        "experiment", help="run the relaxation study over a population")
    experiment.add_argument("--data", required=True)
    experiment.add_argument("--rules")
    experiment.add_argument("--profiles", required=True)
    experiment.add_argument("--deltas", default=DEFAULT_DELTA_SPEC,
                            help="e.g. D3=Brand;D7=Color,Brand")
    experiment.add_argument("--out", required=True, help="report CSV path")
    experiment.add_argument("--figure", help="histogram PNG path "
                                             "(default: CSV path with .png)")
    experiment.add_argument("--no-figure", action="store_true")
    experiment.add_argument("--reference-time")
    experiment.add_argument("--case-sensitive-contains", action="store_true")
    experiment.set_defaults(func=_cmd_experiment)

    serve = sub.add_parser("serve", help="start the recommendation service")
    serve.add_argument("--config", required=True)
    serve.set_defaults(func=_cmd_serve)

    generate = sub.add_parser(
        "generate", help="generate a synthetic catalog and population")
    generate.add_argument("--spec", required=True)
    generate.add_argument("--out-dir", required=True)
    generate.set_defaults(func=_cmd_generate)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, StartupError, ProfileError, DeltaSpecError,
            SyntheticSpecError, QueryParseError, QueryScopeError,
            RuleParseError, TermError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
