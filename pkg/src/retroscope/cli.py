"""Command-line interface: ingest, filter, series, analyze, report, serve.

Exit codes: 0 success, 1 usage/configuration error, 2 data error. Every
analysis run logs its effective configuration (including the seed) and
writes stable, byte-reproducible JSON.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import ENGINE_VERSION
from .config import (
    ANALYSES,
    SINGLE_K_ANALYSES,
    RunConfig,
    config_from_mapping,
    default_config_path,
    load_config_file,
)
from .corpus import ADAPTERS, DocumentStore
from .engine import load_state, run_analysis, series_payload
from .errors import ConfigurationError, DataError
from .filtering import assignment_to_csv, layer_summary
from .report import RenderedTable, stable_json
from .synthetic import make_corpus_files
from .timeseries import series_to_csv

log = logging.getLogger("retroscope")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retroscope",
        description="Movement-discourse event-study engine",
    )
    parser.add_argument("--version", action="version", version=ENGINE_VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", type=Path, help="YAML config file (flags override)")
        p.add_argument("--corpus", type=Path, help="canonical corpus JSONL")
        p.add_argument("--events", type=Path, help="events file (JSON or CSV)")
        p.add_argument("--out", type=Path, dest="output_dir", help="output directory")
        p.add_argument("--movement", help="movement name")
        p.add_argument("--seed-keyword", action="append", dest="seed_keywords",
                       help="movement seed keyword (repeatable)")
        p.add_argument("--platform", choices=["news", "reddit", "all"])
        p.add_argument("--layer", type=int)
        p.add_argument("--mode", choices=["cumulative", "exclusive"])
        p.add_argument("--k", action="append", type=int, dest="ks",
                       help="window half-width (repeatable)")
        p.add_argument("--alpha", type=float)
        p.add_argument("--permutations", type=int)
        p.add_argument("--bootstrap-iters", type=int, dest="bootstrap_iters")
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)

    p_ingest = sub.add_parser("ingest", help="ingest an export into a corpus store")
    p_ingest.add_argument("--store", type=Path, required=True)
    p_ingest.add_argument("--input", type=Path, required=True)
    p_ingest.add_argument("--adapter", choices=sorted(ADAPTERS), default="canonical")

    p_filter = sub.add_parser("filter", help="compute layer assignment for a movement")
    add_common(p_filter)

    p_series = sub.add_parser("series", help="export the daily series of a dataset")
    add_common(p_series)

    p_analyze = sub.add_parser("analyze", help="run one hypothesis analysis")
    p_analyze.add_argument("analysis", choices=ANALYSES)
    add_common(p_analyze)

    p_report = sub.add_parser("report", help="re-render a result payload")
    p_report.add_argument("--input", type=Path, required=True)
    p_report.add_argument("--format", choices=["markdown", "csv", "json"],
                          default="markdown")
    p_report.add_argument("--out", type=Path, default=None)

    p_serve = sub.add_parser("serve", help="run the HTTP JSON service")
    add_common(p_serve)
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)

    p_synth = sub.add_parser("synth", help="generate a synthetic fixture corpus")
    p_synth.add_argument("--out", type=Path, required=True)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--docs", type=int, default=5000)
    p_synth.add_argument("--days", type=int, default=365)
    p_synth.add_argument("--events", type=int, default=6)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    config_path = getattr(args, "config", None) or default_config_path()
    if config_path is not None:
        cfg = load_config_file(config_path, cfg)
    overrides: dict = {}
    for key in ("corpus", "events", "output_dir", "platform", "layer", "mode",
                "ks", "alpha", "permutations", "bootstrap_iters", "seed", "workers"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "movement", None):
        seeds = getattr(args, "seed_keywords", None)
        if seeds:
            overrides["movement"] = {"name": args.movement, "seed_keywords": seeds}
        elif cfg.movement is not None and cfg.movement.name == args.movement:
            pass  # keep the config-file movement
        else:
            for m in cfg.all_movements():
                if m.name == args.movement:
                    overrides["movement"] = {"name": m.name,
                                             "seed_keywords": list(m.seed_keywords)}
                    break
            else:
                raise ConfigurationError(
                    f"movement {args.movement!r} needs --seed-keyword or a config entry"
                )
    return config_from_mapping(overrides, cfg).validate()


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    log.info("wrote %s", path)


def cmd_ingest(args) -> int:
    store = DocumentStore(args.store)
    report = store.ingest_file(args.input, args.adapter)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK


def cmd_filter(args) -> int:
    config = resolve_config(args)
    log.info("effective config: %s", stable_json(config.effective_dict()))
    state = load_state(config)
    if config.movement is None:
        raise ConfigurationError("filter requires a movement")
    assignment = state.assignment(config.movement.name)
    out = Path(config.output_dir)
    _write(out / "layers.csv", assignment_to_csv(assignment))
    summary = layer_summary(assignment, state.store.documents())
    _write(out / "layer_summary.json", stable_json(summary))
    print(stable_json(summary))
    return EXIT_OK


def cmd_series(args) -> int:
    config = resolve_config(args)
    log.info("effective config: %s", stable_json(config.effective_dict()))
    state = load_state(config)
    if config.movement is None:
        raise ConfigurationError("series requires a movement")
    series = state.dataset_series(
        config.movement.name, config.platform, config.layer, config.mode
    )
    out = Path(config.output_dir)
    _write(out / "series.csv", series_to_csv(series))
    _write(out / "series.json", stable_json(series_payload(series)))
    return EXIT_OK


def cmd_analyze(args) -> int:
    config = resolve_config(args)
    if args.analysis in SINGLE_K_ANALYSES and args.ks is None and len(config.ks) != 1:
        config = replace(config, ks=(7,))  # single-k analyses default to +-7
    state = load_state(config)
    log.info("effective config: %s", stable_json(config.effective_dict(args.analysis)))
    payload = run_analysis(state, args.analysis, config)
    out = Path(config.output_dir)
    _write(out / f"{args.analysis}.json", stable_json(payload))
    _write(out / f"{args.analysis}.md", _markdown_from_payload(payload))
    print(stable_json({"analysis": args.analysis, "seed": config.seed,
                       "output_dir": str(out)}))
    return EXIT_OK


def _markdown_from_payload(payload: dict) -> str:
    # Rebuild the markdown from the rendered pieces already in the payload.
    lines = [f"# Analysis {payload['analysis']}", ""]
    lines.append(f"engine {payload['engine_version']}, seed {payload['seed']}")
    lines.append("")
    lines.append("```json")
    lines.append(json.dumps(payload["config"], indent=2, sort_keys=True))
    lines.append("```")
    lines.append("")
    lines.append(_markdown_result_section(payload))
    return "\n".join(lines)


def _markdown_result_section(payload: dict) -> str:
    result = payload["result"]
    chart = payload.get("chart") or {}
    lines = []
    by_k = result.get("by_k") or {}
    if by_k:
        lines.append("| k | statistic | d | p (raw) | p (adj) | CI | % change |")
        lines.append("|---|---|---|---|---|---|---|")
        for k in sorted(by_k, key=int):
            entry = by_k[k]
            t = entry["test"]
            ci = (
                f"[{t['ci_low']:.4f}, {t['ci_high']:.4f}]"
                if t["ci_low"] is not None
                else "n/a"
            )
            d = "n/a" if t["effect_size_d"] is None else f"{t['effect_size_d']:.4f}"
            pc = entry.get("percent_change")
            pc = "n/a" if pc is None else f"{pc:.2f}%"
            lines.append(
                f"| {k} | {t['statistic']:.4f} | {d} | {t['p_raw']:.4g} "
                f"| {t['p_adjusted']:.4g} | {ci} | {pc} |"
            )
    if chart.get("chart") == "event_heat_table":
        table = RenderedTable(format="markdown", columns=chart["columns"], rows=chart["rows"])
        lines.append(table.to_markdown())
    if result.get("aggregate_test"):
        t = result["aggregate_test"]
        lines.append(
            f"aggregate = {result['aggregate']:.4f} ({result['direction']}), "
            f"p two-tailed = {t['p_raw']:.4g}, one-tailed = {result['p_one_sided']:.4g}"
        )
    if result["analysis"] == "h5":
        lines.append("| event | category | pre | post | direction | p (adj) | sig |")
        lines.append("|---|---|---|---|---|---|---|")
        for o in result["per_event"]:
            t = o["test"]
            lines.append(
                f"| {o['event']['date']} | {o['event']['category']} "
                f"| {o['detail']['pre_mean']:.4f} | {o['detail']['post_mean']:.4f} "
                f"| {o['direction']} | {t['p_adjusted']:.4g} "
                f"| {'yes' if o['significant'] else 'no'} |"
            )
    lines.append("")
    return "\n".join(lines)


def cmd_report(args) -> int:
    try:
        payload = json.loads(Path(args.input).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"cannot read {args.input}: {exc}") from exc
    chart = payload.get("chart") or {}
    if args.format == "json":
        text = stable_json(chart)
    elif chart.get("chart") == "event_heat_table":
        table = RenderedTable(format=args.format, columns=chart["columns"], rows=chart["rows"])
        text = table.render()
    else:
        text = _markdown_result_section(payload)
    if args.out:
        _write(args.out, text)
    else:
        print(text)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = resolve_config(args)
    state = load_state(config)
    app = create_app(state, config)
    host = args.host or config.service.host
    port = args.port if args.port is not None else config.service.port
    log.info("serving on http://%s:%s", host, port)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return EXIT_OK


def cmd_synth(args) -> int:
    movement, events, corpus_path, events_path = make_corpus_files(
        args.out, seed=args.seed, n_docs=args.docs, n_days=args.days,
        n_events=args.events,
    )
    print(
        stable_json(
            {
                "corpus": str(corpus_path),
                "events": str(events_path),
                "movement": {"name": movement.name,
                             "seed_keywords": list(movement.seed_keywords)},
                "n_events": len(events),
            }
        )
    )
    return EXIT_OK


COMMANDS = {
    "ingest": cmd_ingest,
    "filter": cmd_filter,
    "series": cmd_series,
    "analyze": cmd_analyze,
    "report": cmd_report,
    "serve": cmd_serve,
    "synth": cmd_synth,
}


def cli_main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
