"""Command-line entry point.

One binary, subcommands for each workflow stage; all data interchange goes
through files or stdin/stdout so any stage can be replaced by an external
tool (for example a real detector feeding ``recognize``). Exit codes: 0
success, 1 domain failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .broker_sim import EntityStore
from .errors import FoonError
from .foon import merge, parse_foon, serialize_universal, validate
from .foon.dot import export_dot
from .kb import resource_type_map
from .ngsi import (
    CORE_CONTEXT,
    BrokerConfig,
    InProcessTransport,
    foon2ont,
    publish,
    query_entities,
    unit_reference,
)
from .recognition import (
    RecognizedUnit,
    RecognizerConfig,
    read_jsonl,
    recognize_stream,
    segment_stream,
    simulate_stream,
    write_jsonl,
)
from .recognition.report import render_report

log = logging.getLogger("foonbridge")

DEFAULT_BROKER_URL = "http://127.0.0.1:1026"
KB_DATA_DIR = Path(__file__).parent / "kb" / "data"


class _JsonLogFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "level": record.levelname.lower(),
            "logger": record.name,
            "message": record.getMessage(),
        }
        return json.dumps(entry, separators=(",", ":"))


def _setup_logging(json_logs: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    if json_logs:
        handler.setFormatter(_JsonLogFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logging.basicConfig(level=logging.INFO, handlers=[handler], force=True)


def _kb_dir(args) -> Path:
    return Path(args.kb_dir) if args.kb_dir else KB_DATA_DIR


def _load_subgraph(args, ref: str):
    """Resolve a subgraph reference: a file path or a name in the KB dir."""
    path = Path(ref)
    if not path.exists():
        path = _kb_dir(args) / f"{ref}.foon"
    return parse_foon(path.read_text(encoding="utf-8"))


def _broker_config(args) -> BrokerConfig:
    base_url = args.broker_url or os.environ.get("FOON_BROKER_URL") or DEFAULT_BROKER_URL
    context_url = args.context_url or os.environ.get("FOON_CONTEXT_URL") or CORE_CONTEXT
    return BrokerConfig(
        base_url=base_url,
        context_url=context_url,
        run_id=args.run_id,
        timeout=args.timeout,
    )


def _recognizer_config(args) -> RecognizerConfig:
    return RecognizerConfig()


def _write_output(args, text: str) -> None:
    if args.output and args.output != "-":
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


# -- subcommands ---------------------------------------------------------


def cmd_validate(args) -> int:
    graph = parse_foon(Path(args.file).read_text(encoding="utf-8"))
    report = validate(graph)
    for line in report.lines():
        print(line)
    return 0 if report.ok else 1


def cmd_merge(args) -> int:
    graphs = [parse_foon(Path(f).read_text(encoding="utf-8")) for f in args.files]
    universal = merge(graphs)
    _write_output(args, serialize_universal(universal))
    return 0


def cmd_dot(args) -> int:
    graph = parse_foon(Path(args.file).read_text(encoding="utf-8"))
    _write_output(args, export_dot(graph))
    return 0


def cmd_simulate(args) -> int:
    graph = _load_subgraph(args, args.subgraph)
    frames = simulate_stream(graph, fps=args.fps, noise_sigma=args.noise, seed=args.seed)
    _write_output(args, write_jsonl(frames))
    return 0


def _recognize(args, graph, frames) -> list[RecognizedUnit]:
    return recognize_stream(frames, graph, _recognizer_config(args))


def cmd_recognize(args) -> int:
    graph = _load_subgraph(args, args.foon)
    frames = list(read_jsonl(_read_input(args.stream)))
    recognized = _recognize(args, graph, frames)
    _write_output(args, json.dumps([r.to_wire() for r in recognized], indent=2) + "\n")
    return 0


def _publish_units(recognized, graph, cfg, transport):
    receipts = []
    for unit in recognized:
        task, resources = foon2ont(
            unit,
            graph,
            cfg.wall_clock(unit.t_end),
            run_id=cfg.run_id,
            resource_types=resource_type_map(),
        )
        receipts.append(publish(task, resources, cfg, transport=transport))
    return receipts


def cmd_publish(args) -> int:
    records = json.loads(_read_input(args.units))
    recognized = [RecognizedUnit.from_wire(r) for r in records]
    if not recognized:
        print("[]")
        return 0
    graph = _load_subgraph(args, args.foon or recognized[0].subgraph)
    cfg = _broker_config(args)
    receipts = _publish_units(recognized, graph, cfg, transport=None)
    print(json.dumps([r.to_dict() for r in receipts], indent=2))
    return 0


def cmd_roundtrip(args) -> int:
    graph = _load_subgraph(args, args.subgraph)
    frames = simulate_stream(graph, fps=args.fps, noise_sigma=args.noise, seed=args.seed)
    recognized = _recognize(args, graph, frames)

    store = None
    if args.broker_url:
        cfg = _broker_config(args)
        transport = None
    else:
        store = EntityStore()
        cfg = BrokerConfig(
            base_url="http://embedded-broker-sim",
            context_url=args.context_url or CORE_CONTEXT,
            run_id=args.run_id,
        )
        transport = InProcessTransport(store)
    _publish_units(recognized, graph, cfg, transport)

    checks: list[tuple[str, bool, str]] = []
    expected_sequence = [u.unit_index for u in graph.units]
    got_sequence = [r.unit_index for r in recognized]
    checks.append(
        (
            "unit sequence recovered",
            got_sequence == expected_sequence,
            f"expected {expected_sequence}, observed {got_sequence}",
        )
    )

    tasks = query_entities(cfg, "Task", transport=transport)
    checks.append(
        ("task count", len(tasks) == len(graph.units), f"{len(tasks)} of {len(graph.units)}")
    )
    tasks_by_ref = {t["isDefinedBy"]["value"]: t for t in tasks}
    for unit in graph.units:
        ref = unit_reference(graph.name, unit.unit_index)
        task = tasks_by_ref.get(ref)
        ok = task is not None and len(task.get("involves", [])) == len(unit.outputs)
        checks.append(
            (
                f"task {ref}",
                ok,
                "missing" if task is None else f"{len(task.get('involves', []))} involves",
            )
        )

    all_ok = all(ok for _, ok, _ in checks)
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name} ({detail})")
    print(f"{'PASS' if all_ok else 'FAIL'}  roundtrip {graph.name}")
    return 0 if all_ok else 1


def cmd_report(args) -> int:
    graph = _load_subgraph(args, args.foon)
    if args.stream:
        frames = list(read_jsonl(_read_input(args.stream)))
    else:
        frames = simulate_stream(graph, fps=args.fps, noise_sigma=args.noise, seed=args.seed)
    cfg = _recognizer_config(args)
    recognized = recognize_stream(frames, graph, cfg)
    segments = segment_stream(frames, cfg)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "recognized.json").write_text(
        json.dumps([r.to_wire() for r in recognized], indent=2) + "\n", encoding="utf-8"
    )
    with (out_dir / "segments.csv").open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t_start", "t_end", "phase"])
        writer.writerows(segments)
    figures = render_report(frames, graph, cfg, recognized, segments, out_dir)
    for path in (out_dir / "recognized.json", out_dir / "segments.csv", *figures):
        print(path)
    return 0


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kb-dir", help="directory with <name>.foon knowledge files")
    common.add_argument("--broker-url", help="NGSI-LD broker base URL (env FOON_BROKER_URL)")
    common.add_argument("--context-url", help="JSON-LD @context URL (env FOON_CONTEXT_URL)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json-logs", action="store_true", help="log JSON lines to stderr")
    common.add_argument("--run-id", default="default", help="run id embedded in entity URNs")
    common.add_argument("--timeout", type=float, default=10.0)

    parser = argparse.ArgumentParser(
        prog="foonbridge",
        description="task graphs, activity recognition and NGSI-LD publishing",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("validate", parents=[common], help="check a graph file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = commands.add_parser("merge", parents=[common], help="merge graphs into a universal graph")
    p.add_argument("files", nargs="+")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_merge)

    p = commands.add_parser("dot", parents=[common], help="export a graph as DOT")
    p.add_argument("file")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_dot)

    p = commands.add_parser("simulate", parents=[common], help="synthesize a detection stream")
    p.add_argument("--subgraph", required=True, help="KB name or .foon path")
    p.add_argument("--noise", type=float, default=0.0, help="centroid jitter (normalized sigma)")
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_simulate)

    p = commands.add_parser("recognize", parents=[common], help="match a stream against a graph")
    p.add_argument("--foon", required=True, help="KB name or .foon path")
    p.add_argument("--stream", required=True, help="JSON Lines file or - for stdin")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_recognize)

    p = commands.add_parser("publish", parents=[common], help="publish recognized units")
    p.add_argument("--units", required=True, help="recognized-units JSON file or -")
    p.add_argument("--foon", help="KB name or .foon path (default: from the units)")
    p.set_defaults(func=cmd_publish)

    p = commands.add_parser(
        "roundtrip", parents=[common], help="simulate, recognize, publish and verify"
    )
    p.add_argument("--subgraph", required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--fps", type=float, default=30.0)
    p.set_defaults(func=cmd_roundtrip)

    p = commands.add_parser(
        "report", parents=[common], help="render recognition figures and data files"
    )
    p.add_argument("--foon", required=True)
    p.add_argument("--stream", help="JSON Lines file; omit to simulate")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.json_logs)
    try:
        return args.func(args)
    except FoonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
