"""Command-line interface.

Exit codes:

    0  success
    1  other grading failure (e.g. grammar service unavailable)
    2  reference error (unknown question, no page found, network, corrupt store)
    3  configuration error
    4  input error (unreadable files, bad corpus, duplicate store id, bad usage)
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import DEFAULT_CACHE_DIR, GradingConfig, read_config_file
from .errors import ConfigError, EmptyBatch, GradingError, ReferenceLookupError
from .harness import compute_metrics, evaluate_batch, failures_table, load_corpus, render_metrics
from .scoring import grade, record_rows, render_report
from .sources import ModelAnswerStore, Question, ReferenceCache, extract_keywords, resolve_reference

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_REFERENCE = 2
EXIT_CONFIG = 3
EXIT_INPUT = 4

log = logging.getLogger("answergrader")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="key=value configuration file")
    p.add_argument("--mode", choices=["open", "closed", "closed-then-open"])
    p.add_argument("--threshold", help="pass fraction of total mark for metrics")
    p.add_argument("--weights-frequency", help="weight of the answer-analysis score")
    p.add_argument("--weights-linguistic", help="weight of the linguistic score")
    p.add_argument("--cache-dir", help="open-domain extract cache directory")
    p.add_argument("--store", help="closed-domain model-answer store directory")
    p.add_argument("--workers", help="grading threads for batch runs")
    p.add_argument("--endpoint", help="MediaWiki action API URL")
    p.add_argument("--offline", action="store_const", const="true", help="forbid network access")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


OVERRIDE_FLAGS = (
    "mode", "threshold", "weights_frequency", "weights_linguistic",
    "cache_dir", "store", "workers", "endpoint", "offline",
)


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="answergrader", description="Grade free-text answer scripts.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("grade", parents=[common], help="grade one answer file")
    g.add_argument("answer_file")
    g.add_argument("question_id")
    g.add_argument("--question", help="question text (needed for open mode if not in the store)")
    g.add_argument("--total-mark", type=float, help="maximum mark (default: from store, else 10)")

    b = sub.add_parser("batch", parents=[common], help="grade a corpus and report metrics")
    b.add_argument("corpus_file")

    f = sub.add_parser("fetch", parents=[common], help="fetch and cache an open-domain reference")
    f.add_argument("question_text")

    s = sub.add_parser("store", parents=[common], help="add a model answer to the closed store")
    s.add_argument("question_id")
    s.add_argument("answer_file")
    s.add_argument("total_mark", type=float)
    s.add_argument("--question", default="", help="question text to record")
    s.add_argument("--overwrite", action="store_true", help="replace an existing entry")

    sub.add_parser("purge-cache", parents=[common], help="delete all cached extracts")
    return parser


def _raw_values(args) -> dict:
    values = read_config_file(args.config) if args.config else {}
    for name in OVERRIDE_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value
    return values


def _load_config(args, *, without=()) -> GradingConfig:
    values = {k: v for k, v in _raw_values(args).items() if k not in without}
    return GradingConfig.from_mapping(values)


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def cmd_grade(args) -> int:
    config = _load_config(args)
    text = _read_text(args.answer_file)
    store = config.model_store()
    if store is not None and args.question_id in store:
        question = store.question(args.question_id)
        if args.question or args.total_mark:
            question = Question(
                question.id, args.question or question.text, args.total_mark or question.total_mark
            )
    else:
        question = Question(args.question_id, args.question or args.question_id, args.total_mark or 10.0)
    reference = resolve_reference(question, config.mode, store, config.mediawiki_client(), config.preprocess)
    breakdown = grade(text, reference, question, config)
    sys.stdout.write(render_report(breakdown))
    return EXIT_OK


def cmd_batch(args) -> int:
    config = _load_config(args)
    try:
        corpus = load_corpus(args.corpus_file, config.human_aggregate)
    except (OSError, UnicodeDecodeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    except GradingError as exc:
        raise InputError(str(exc)) from exc
    if not corpus:
        raise EmptyBatch("corpus is empty")
    result = evaluate_batch(corpus, config, store=config.model_store(), client=config.mediawiki_client())

    out = sys.stdout
    for b in result.breakdowns:
        out.write(render_report(b))
        out.write("\n")
    out.write("== Records ==\n")
    out.write(record_rows(result.breakdowns))
    if result.failures:
        out.write("\n== Failures ==\n")
        out.write(failures_table(result.failures))
    human = {(e.question_id, e.student_id): e for e in corpus if e.human_score is not None}
    scored = [b for b in result.breakdowns if (b.question_id, b.student_id) in human]
    if scored:
        report = compute_metrics(scored, [human[(b.question_id, b.student_id)] for b in scored], config.threshold)
        out.write("\n== Metrics ==\n")
        out.write(render_metrics(report))
    return EXIT_OK


def cmd_fetch(args) -> int:
    config = _load_config(args)
    client = config.mediawiki_client()
    keywords = extract_keywords(args.question_text, config.preprocess)
    cached = client.cache.get(keywords) is not None
    answer = client.fetch(keywords)
    sys.stdout.write(
        f"Keywords:   {', '.join(keywords)}\n"
        f"Title:      {answer.source_detail}\n"
        f"Characters: {len(answer.text)}\n"
        f"Cache:      {'hit' if cached else 'stored'} {client.cache.directory / (ReferenceCache.key(keywords) + '.txt')}\n"
    )
    return EXIT_OK


def cmd_store(args) -> int:
    values = _raw_values(args)
    root = values.get("store")
    if not root:
        raise ConfigError("store command needs --store or a store key in the config")
    _load_config(args, without=("store",))  # validate the rest
    text = _read_text(args.answer_file)
    store = ModelAnswerStore(Path(root).expanduser())
    try:
        entry = store.add(args.question_id, text, args.total_mark, args.question, overwrite=args.overwrite)
    except FileExistsError as exc:
        raise InputError(f"{exc}; pass --overwrite to replace it") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    sys.stdout.write(f"Stored {entry.question_id} -> {store.root / entry.path}\n")
    return EXIT_OK


def cmd_purge_cache(args) -> int:
    values = _raw_values(args)
    directory = Path(values.get("cache_dir") or DEFAULT_CACHE_DIR).expanduser()
    removed = ReferenceCache(directory).purge()
    sys.stdout.write(f"Removed {removed} cache files from {directory}\n")
    return EXIT_OK


COMMANDS = {
    "grade": cmd_grade,
    "batch": cmd_batch,
    "fetch": cmd_fetch,
    "store": cmd_store,
    "purge-cache": cmd_purge_cache,
}


def _fail(code: int, message: str) -> int:
    sys.stderr.write(f"answergrader: error: {message}\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, str(exc))
    except ReferenceLookupError as exc:
        return _fail(EXIT_REFERENCE, f"{type(exc).__name__}: {exc}")
    except (InputError, EmptyBatch) as exc:
        return _fail(EXIT_INPUT, str(exc))
    except GradingError as exc:
        return _fail(EXIT_FAILURE, f"{type(exc).__name__}: {exc}")


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
