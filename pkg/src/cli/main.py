"""
Command-line interface.

Subcommands:
    index    build and persist an index from a corpus
    ask      answer one question against a saved index
    eval     run an experiment over a dataset and write a report
    ablate   run an ablation grid and print the comparison table
    stats    entries-per-chunk or subquestions-per-query statistics

Exit codes: 0 success, 1 operational failure, 2 usage error. Results go
to stdout, diagnostics to stderr.
"""

from typing import Any, Callable, Dict, List, Optional, Sequence
from pathlib import Path
import argparse
import json
import logging
import sys

from pydantic import ValidationError as PydanticValidationError

from ..core.base import IndexMode
from ..core.config import (
    BackendConfig,
    BackendKind,
    ChunkingConfig,
    ContextOrder,
    InferenceMode,
    LogLevel,
    PipelineConfig,
    get_config,
)
from ..core.stats import format_stats_table
from ..corpus.loader import load_corpus
from ..evalkit.ablation import load_grid, run_ablation_grid
from ..evalkit.cache import IndexCache
from ..evalkit.dataset import load_dataset
from ..evalkit.experiment import ExperimentConfig, decomposition_stats, run_experiment
from ..gateway.base import Backends
from ..gateway.factory import build_backends
from ..gateway.mock import MockChatBackend
from ..index.builder import build_index
from ..index.stats import index_stats
from ..index.storage import load_index, save_index
from ..pipeline.engine import QueryPipeline
from ..transform.offline import OfflineTransformHandler
from ..utils.error_handler import AqragError, ConfigurationError, ErrorHandler, configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(ConfigurationError):
    """Invalid flag values or combinations.

    Only these exit with EXIT_USAGE; a ConfigurationError about a file the
    flags point at (dataset, grid, mock script) is an operational failure.
    """


def positive_int(value: str) -> int:
    """argparse type: integer > 0."""
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from None
    if number <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0 (got {number})")
    return number


def non_negative_int(value: str) -> int:
    """argparse type: integer >= 0."""
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from None
    if number < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0 (got {number})")
    return number


def _validated(factory: Callable[..., Any], what: str, **kwargs: Any) -> Any:
    try:
        return factory(**kwargs)
    except PydanticValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or what}: {err['msg']}" for err in e.errors()
        )
        raise UsageError(f"invalid {what}: {problems}") from e


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser."""
    engine = get_config().engine

    backend_flags = argparse.ArgumentParser(add_help=False)
    backend_flags.add_argument(
        "--backend",
        choices=[k.value for k in BackendKind],
        default=engine.backend.value,
        help="model backend: offline mocks or an OpenAI-compatible HTTP service "
        "(settings from AQRAG_* env vars) (default: %(default)s)",
    )
    backend_flags.add_argument(
        "--mock-script",
        type=Path,
        help="JSON file of scripted mock chat replies ({rules, replies})",
    )
    backend_flags.add_argument(
        "--parallelism",
        type=positive_int,
        default=engine.parallelism,
        help="maximum concurrent backend calls (default: %(default)s)",
    )
    backend_flags.add_argument(
        "--format",
        choices=["text", "record"],
        default="text",
        help="output format; 'record' emits one JSON record per line (default: %(default)s)",
    )

    retrieval_flags = argparse.ArgumentParser(add_help=False)
    retrieval_flags.add_argument(
        "--k1", type=positive_int, help="per-subquestion retrieval depth (default: 100)"
    )
    retrieval_flags.add_argument(
        "--k2", type=positive_int, help="chunks kept after reranking (default: 7)"
    )
    retrieval_flags.add_argument(
        "--mode",
        dest="inference_mode",
        choices=[m.value for m in InferenceMode],
        help="answer generation: one call over all chunks, or per-subquestion (default: unified)",
    )
    retrieval_flags.add_argument(
        "--no-decompose",
        action="store_true",
        help="retrieve with the original question instead of subquestions",
    )
    retrieval_flags.add_argument(
        "--context-order",
        choices=[o.value for o in ContextOrder],
        help="chunk order in the generation context (default: rerank)",
    )

    parser = argparse.ArgumentParser(
        prog="aqrag",
        description="Answerable-question guided retrieval-augmented generation for multihop QA.",
    )
    parser.add_argument(
        "--log-level",
        choices=[level.value for level in LogLevel],
        default=engine.log_level.value,
        help="diagnostic verbosity on stderr (default: %(default)s)",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    index_cmd = subparsers.add_parser(
        "index", parents=[backend_flags], help="build and save an index from a corpus"
    )
    index_cmd.add_argument("--corpus", type=Path, required=True, help="corpus line-record file")
    index_cmd.add_argument("--out", type=Path, required=True, help="index directory to write")
    index_cmd.add_argument(
        "--mode",
        choices=[m.value for m in IndexMode],
        default=IndexMode.AQ.value,
        help="surrogates to embed per chunk (default: %(default)s)",
    )
    index_cmd.add_argument(
        "--window", type=positive_int, default=800, help="chunk window in characters (default: %(default)s)"
    )
    index_cmd.add_argument(
        "--stride", type=positive_int, default=600, help="chunk stride in characters, must be > 0 and <= window (default: %(default)s)"
    )
    index_cmd.set_defaults(handler=cmd_index)

    ask_cmd = subparsers.add_parser(
        "ask", parents=[backend_flags, retrieval_flags], help="answer a question against an index"
    )
    ask_cmd.add_argument("--index", type=Path, required=True, help="index directory")
    ask_cmd.add_argument("--question", required=True, help="the multihop question")
    ask_cmd.add_argument("--trace", action="store_true", help="also emit the full trace record")
    ask_cmd.set_defaults(handler=cmd_ask)

    eval_cmd = subparsers.add_parser(
        "eval", parents=[backend_flags, retrieval_flags], help="evaluate on a dataset"
    )
    eval_cmd.add_argument("--dataset", type=Path, help="dataset line-record file (input, context, answers)")
    eval_cmd.add_argument("--config", type=Path, help="experiment config JSON; flags override it")
    eval_cmd.add_argument(
        "--index-mode", choices=[m.value for m in IndexMode], help="surrogates to embed (default: aq)"
    )
    eval_cmd.add_argument("--strict", action="store_true", help="abort on the first failing record")
    eval_cmd.add_argument(
        "--limit", type=non_negative_int, help="evaluate only the first N records (0 = all)"
    )
    eval_cmd.add_argument("--out", type=Path, help="report file to write")
    eval_cmd.add_argument("--cache-dir", type=Path, help="on-disk index cache directory (default: AQRAG_CACHE_DIR)")
    eval_cmd.set_defaults(handler=cmd_eval)

    ablate_cmd = subparsers.add_parser(
        "ablate", parents=[backend_flags], help="run an ablation grid"
    )
    ablate_cmd.add_argument("--grid", type=Path, required=True, help="grid JSON file")
    ablate_cmd.add_argument("--out", type=Path, help="directory for per-run reports and the table")
    ablate_cmd.add_argument("--cache-dir", type=Path, help="on-disk index cache directory (default: AQRAG_CACHE_DIR)")
    ablate_cmd.set_defaults(handler=cmd_ablate)

    stats_cmd = subparsers.add_parser(
        "stats", parents=[backend_flags], help="entries-per-chunk or decomposition statistics"
    )
    source = stats_cmd.add_mutually_exclusive_group(required=True)
    source.add_argument("--index", type=Path, help="index directory (entries per chunk)")
    source.add_argument("--dataset", type=Path, help="dataset file (subquestions per query)")
    stats_cmd.add_argument("--limit", type=non_negative_int, default=0, help="first N records only")
    stats_cmd.add_argument(
        "--max-subquestions", type=positive_int, default=8, help="decomposition cap (default: %(default)s)"
    )
    stats_cmd.set_defaults(handler=cmd_stats)

    return parser


def make_backends(args: argparse.Namespace) -> Backends:
    """Backend bundle from flags and environment."""
    kind = BackendKind(args.backend)
    if kind is BackendKind.HTTP:
        return build_backends(kind, BackendConfig(), parallelism=args.parallelism)

    handlers = [OfflineTransformHandler()]
    if args.mock_script is not None:
        chat = MockChatBackend.from_script_file(args.mock_script, handlers=handlers)
    else:
        chat = MockChatBackend(handlers=handlers)
    return build_backends(kind, get_config().backend, parallelism=args.parallelism, mock_chat=chat)


def pipeline_config(args: argparse.Namespace, base: Optional[PipelineConfig] = None) -> PipelineConfig:
    """PipelineConfig from retrieval flags over ``base``."""
    fields: Dict[str, Any] = (base or PipelineConfig()).model_dump()
    if args.k1 is not None:
        fields["k1"] = args.k1
    if args.k2 is not None:
        fields["k2"] = args.k2
    if args.inference_mode is not None:
        fields["inference_mode"] = args.inference_mode
    if args.no_decompose:
        fields["decomposition"] = False
    if args.context_order is not None:
        fields["context_order"] = args.context_order

    cfg = _validated(PipelineConfig, "pipeline settings", **fields)
    if cfg.inference_mode is InferenceMode.SEQUENTIAL and not cfg.decomposition:
        raise UsageError("--mode sequential cannot be combined with --no-decompose")
    return cfg


def emit(args: argparse.Namespace, record: Dict[str, Any], text: str) -> None:
    """Print a result in the selected format."""
    if args.format == "record":
        print(json.dumps(record, ensure_ascii=False, sort_keys=True))
    else:
        print(text)


def cmd_index(args: argparse.Namespace) -> int:
    """Build and save an index."""
    chunking = _validated(ChunkingConfig, "chunking (--window/--stride)", window=args.window, stride=args.stride)
    docs = load_corpus(args.corpus)
    if not docs:
        raise UsageError(f"--corpus {args.corpus} contains no documents")

    index = build_index(docs, IndexMode(args.mode), chunking, make_backends(args))
    save_index(index, args.out)
    stats = index_stats(index)

    emit(
        args,
        {"index": str(args.out), **index.describe(), "stats": stats.to_dict()},
        f"Indexed {len(index)} entries over {len(index.chunks)} chunks "
        f"(mode {index.mode.value}) -> {args.out}\n\n"
        + format_stats_table(stats.table_rows(f"{index.mode.value} per chunk"))
        + f"\n\nZero-entry chunks: {stats.zero_entry_chunks}",
    )
    return EXIT_OK


def cmd_ask(args: argparse.Namespace) -> int:
    """Answer one question."""
    cfg = pipeline_config(args)
    index = load_index(args.index)
    answer = QueryPipeline(index, make_backends(args), cfg).run_query(args.question)
    trace = answer.trace

    record: Dict[str, Any] = {
        "question": trace.question,
        "answer": answer.text,
        "subquestions": [s.text for s in answer.subquestions],
        "ranked_ids": list(trace.ranked_ids),
        "used_chunks": list(answer.used_chunks),
    }
    if args.trace:
        record["trace"] = trace.to_dict()

    lines = [f"Answer: {answer.text}", "Subquestions:"]
    lines.extend(f"  {s.index}. {s.text}" for s in answer.subquestions)
    lines.append("Ranked chunks: " + ", ".join(trace.ranked_ids))
    if args.trace:
        lines.append(json.dumps(trace.to_dict(), ensure_ascii=False, sort_keys=True))
    emit(args, record, "\n".join(lines))
    return EXIT_OK


def experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    """ExperimentConfig from --config plus flag overrides."""
    fields: Dict[str, Any] = {}
    if args.config is not None:
        try:
            fields = json.loads(args.config.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"--config {args.config}: {e}") from e
        if not isinstance(fields, dict):
            raise UsageError(f"--config {args.config} must hold a JSON object")

    if args.dataset is not None:
        fields["dataset"] = str(args.dataset)
    if "dataset" not in fields:
        raise UsageError("--dataset is required (or set 'dataset' in --config)")
    if args.index_mode is not None:
        fields["index_mode"] = args.index_mode
    if args.limit is not None:
        fields["limit"] = args.limit
    if args.strict:
        fields["strict"] = True
    fields["backend"] = args.backend
    fields["parallelism"] = args.parallelism

    base = _validated(ExperimentConfig, "experiment config", **fields)
    return base.model_copy(update={"pipeline": pipeline_config(args, base.pipeline)})


def cmd_eval(args: argparse.Namespace) -> int:
    """Run one experiment."""
    cfg = experiment_config(args)
    cfg.check()
    cache = IndexCache(args.cache_dir or get_config().engine.cache_dir)
    report = run_experiment(cfg, make_backends(args), cache)
    if args.out is not None:
        report.write(args.out)

    if args.format == "record":
        for line in report.to_lines():
            print(line)
    else:
        print(report.summary_line())
        print(f"Records: {len(report.records)}  Errors: {report.error_count}")
        if report.records:
            print()
            print(format_stats_table([("Subquestions per query", report.decomposition_stats)]))
    return EXIT_OK


def cmd_ablate(args: argparse.Namespace) -> int:
    """Run an ablation grid."""
    grid = load_grid(args.grid)
    if len({cfg.backend for cfg in grid}) == 1:
        grid = [cfg.model_copy(update={"backend": BackendKind(args.backend)}) for cfg in grid]
    cache = IndexCache(args.cache_dir or get_config().engine.cache_dir)
    result = run_ablation_grid(grid, make_backends(args), cache)

    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        for i, report in enumerate(result.reports, start=1):
            report.write(args.out / f"run-{i:02d}.jsonl")
        (args.out / "table.txt").write_text(result.table + "\n", encoding="utf-8")

    if args.format == "record":
        for report in result.reports:
            print(json.dumps(report.summary(), ensure_ascii=False, sort_keys=True))
    elif result.table:
        print(result.table)
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    """Print statistics in the Source | Mean | Std Dev | Min | Max shape."""
    if args.index is not None:
        index = load_index(args.index)
        stats = index_stats(index)
        emit(
            args,
            {"index": str(args.index), "mode": index.mode.value, **stats.to_dict()},
            format_stats_table(stats.table_rows(f"{index.mode.value} per chunk"))
            + f"\n\nZero-entry chunks: {stats.zero_entry_chunks}"
            + f"\nDuplicate texts: {stats.duplicate_texts}",
        )
        return EXIT_OK

    records = load_dataset(args.dataset, limit=args.limit)
    backends = make_backends(args)
    stats, _ = decomposition_stats(
        [r.question for r in records],
        backends.decomposition_chat,
        max_subquestions=args.max_subquestions,
        parallelism=args.parallelism,
    )
    emit(
        args,
        {"dataset": str(args.dataset), "subquestions_per_query": stats.to_dict()},
        format_stats_table([(args.dataset.stem, stats)]),
    )
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI.

    Args:
        argv: Arguments (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(args.log_level)

    exit_code: List[int] = [EXIT_OK]

    def report(code: int) -> Callable[[Exception], None]:
        def handle(error: Exception) -> None:
            message = error.message if isinstance(error, AqragError) else str(error)
            print(f"aqrag {args.command}: error: {message}", file=sys.stderr)
            logger.debug("Command failed", exc_info=error)
            exit_code[0] = code

        return handle

    errors = ErrorHandler(logger)
    errors.register_handler(UsageError, report(EXIT_USAGE))
    errors.register_handler(AqragError, report(EXIT_FAILURE))
    errors.register_handler(OSError, report(EXIT_FAILURE))

    try:
        return int(args.handler(args))
    except (AqragError, OSError) as e:
        errors.handle(e)
        return exit_code[0]


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())
