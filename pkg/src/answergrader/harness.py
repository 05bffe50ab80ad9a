"""Batch grading of a corpus and agreement metrics against human marks."""
from __future__ import annotations

import csv
import logging
import statistics
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import CorpusMismatch, EmptyBatch, GradingError, UnknownQuestion
from .scoring import ScoreBreakdown, grade
from .sources import Question, ReferenceAnswer, resolve_reference

log = logging.getLogger(__name__)

CORPUS_HEADER = ("question_id", "student_id", "answer_path", "human_score")


@dataclass(frozen=True)
class CorpusEntry:
    question_id: str
    student_id: str
    answer_text: str
    human_score: float | None = None


@dataclass(frozen=True)
class FailureRecord:
    question_id: str
    student_id: str
    error: str
    message: str


@dataclass
class BatchResult:
    breakdowns: list[ScoreBreakdown]
    failures: list[FailureRecord]


def aggregate_scores(scores: Sequence[float], how: str = "mean") -> float:
    """Combine several teachers' marks for one script."""
    if not scores:
        raise ValueError("no scores to aggregate")
    if how == "mean":
        return statistics.fmean(scores)
    if how == "median":
        return statistics.median(scores)
    raise ValueError(f"unknown aggregate {how!r}")


def check_unique(entries: Sequence[CorpusEntry]) -> None:
    seen = set()
    for e in entries:
        key = (e.question_id, e.student_id)
        if key in seen:
            raise CorpusMismatch(f"duplicate corpus entry {key}")
        seen.add(key)


def load_corpus(path: str | Path, aggregate: str = "mean") -> list[CorpusEntry]:
    """Read a corpus CSV (``question_id,student_id,answer_path,human_score``).

    ``answer_path`` is resolved relative to the corpus file. ``human_score``
    may be blank, one number, or several teachers' marks joined with ``;``.
    """
    path = Path(path)
    entries = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CORPUS_HEADER:
            raise ValueError(f"{path}: header must be {','.join(CORPUS_HEADER)}")
        for lineno, row in enumerate(reader, 2):
            if not any(cell.strip() for cell in row):
                continue
            if len(row) != len(CORPUS_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(CORPUS_HEADER)} fields")
            qid, sid, answer_path, human = (cell.strip() for cell in row)
            answer_file = path.parent / answer_path
            text = answer_file.read_text(encoding="utf-8")
            score = None
            if human:
                try:
                    score = aggregate_scores([float(s) for s in human.split(";")], aggregate)
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: bad human_score {human!r}") from None
            entries.append(CorpusEntry(qid, sid, text, score))
    check_unique(entries)
    return entries


def evaluate_batch(
    corpus: Sequence[CorpusEntry],
    config,
    questions: Mapping[str, Question] | None = None,
    store=None,
    client=None,
    workers: int | None = None,
) -> BatchResult:
    """Grade every corpus entry; failures are recorded, never fatal.

    Each distinct question's reference is resolved once, sequentially (the
    network stage is rate limited); grading then fans out over a thread pool.
    """
    if not corpus:
        raise EmptyBatch("corpus is empty")
    check_unique(corpus)
    questions = dict(questions or {})
    resolved: dict[str, tuple[Question, ReferenceAnswer] | GradingError] = {}
    for entry in corpus:
        qid = entry.question_id
        if qid in resolved:
            continue
        try:
            if qid in questions:
                question = questions[qid]
            elif store is not None and qid in store:
                question = store.question(qid)
            else:
                raise UnknownQuestion(f"question {qid!r} is not defined")
            resolved[qid] = (question, resolve_reference(question, config.mode, store, client, config.preprocess))
        except (GradingError, ValueError) as exc:
            resolved[qid] = exc

    def run(entry: CorpusEntry) -> ScoreBreakdown | FailureRecord:
        target = resolved[entry.question_id]
        try:
            if isinstance(target, Exception):
                raise target
            question, reference = target
            if entry.human_score is not None and not 0 <= entry.human_score <= question.total_mark:
                raise ValueError(
                    f"human score {entry.human_score} outside [0, {question.total_mark}]"
                )
            return grade(entry.answer_text, reference, question, config, student_id=entry.student_id)
        except (GradingError, ValueError) as exc:
            log.warning("failed %s/%s: %s", entry.question_id, entry.student_id, exc)
            return FailureRecord(entry.question_id, entry.student_id, type(exc).__name__, str(exc))

    n = workers if workers is not None else config.workers
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            outcomes = list(pool.map(run, corpus))
    else:
        outcomes = [run(e) for e in corpus]

    result = BatchResult(
        [o for o in outcomes if isinstance(o, ScoreBreakdown)],
        [o for o in outcomes if isinstance(o, FailureRecord)],
    )
    if not result.breakdowns:
        raise EmptyBatch(f"all {len(corpus)} entries failed")
    return result


# -- metrics ---------------------------------------------------------------


@dataclass(frozen=True)
class MetricsReport:
    precision: float
    recall: float
    f_score: float
    threshold: float
    confusion: tuple[int, int, int, int]
    undefined: tuple[str, ...] = ()

    @property
    def exact(self) -> dict[str, Fraction]:
        tp, fp, fn, _ = self.confusion
        out = {}
        if tp + fp:
            out["precision"] = Fraction(tp, tp + fp)
        if tp + fn:
            out["recall"] = Fraction(tp, tp + fn)
        if tp:
            out["f_score"] = Fraction(2 * tp, 2 * tp + fp + fn)
        return out


def metrics_from_confusion(tp: int, fp: int, fn: int, tn: int, threshold: float = 0.5) -> MetricsReport:
    """Precision, recall and their harmonic mean.

    An undefined ratio (zero denominator) is reported as 0 and named in
    ``undefined``; F is undefined unless both precision and recall are positive.
    """
    undefined = []
    precision = Fraction(tp, tp + fp) if tp + fp else None
    recall = Fraction(tp, tp + fn) if tp + fn else None
    if precision is None:
        undefined.append("precision")
    if recall is None:
        undefined.append("recall")
    if precision and recall:
        f = 2 * precision * recall / (precision + recall)
    else:
        f = None
        undefined.append("f_score")
    return MetricsReport(
        float(precision or 0),
        float(recall or 0),
        float(f or 0),
        threshold,
        (tp, fp, fn, tn),
        tuple(undefined),
    )


def compute_metrics(
    system: Sequence[ScoreBreakdown],
    human: Sequence[CorpusEntry],
    threshold: float = 0.5,
) -> MetricsReport:
    """Binarize both sides at ``threshold * total_mark`` and count agreement."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    human_by_key = {(e.question_id, e.student_id): e for e in human}
    if len(human_by_key) != len(human):
        raise CorpusMismatch("duplicate (question_id, student_id) in human corpus")
    system_keys = [(b.question_id, b.student_id) for b in system]
    if len(set(system_keys)) != len(system_keys) or set(system_keys) != set(human_by_key):
        raise CorpusMismatch("system scores and human corpus cover different entries")

    tp = fp = fn = tn = 0
    for b in system:
        entry = human_by_key[(b.question_id, b.student_id)]
        if entry.human_score is None:
            raise CorpusMismatch(f"no human score for {b.question_id}/{b.student_id}")
        sys_pos = b.final_score / b.total_mark >= threshold
        hum_pos = entry.human_score / b.total_mark >= threshold
        if sys_pos and hum_pos:
            tp += 1
        elif sys_pos:
            fp += 1
        elif hum_pos:
            fn += 1
        else:
            tn += 1
    return metrics_from_confusion(tp, fp, fn, tn, threshold)


def render_metrics(report: MetricsReport) -> str:
    tp, fp, fn, tn = report.confusion

    def cell(name):
        value = getattr(report, name)
        return f"{value:.4f}" + (" (undefined)" if name in report.undefined else "")

    lines = [
        f"Threshold:  {report.threshold:.2f} of total mark",
        f"Precision:  {cell('precision')}",
        f"Recall:     {cell('recall')}",
        f"F-score:    {cell('f_score')}",
        f"TP/FP/FN/TN: {tp}/{fp}/{fn}/{tn}",
        "",
        "precision,recall,f_score,threshold,tp,fp,fn,tn",
        f"{report.precision:.4f},{report.recall:.4f},{report.f_score:.4f},"
        f"{report.threshold:.2f},{tp},{fp},{fn},{tn}",
    ]
    return "\n".join(lines) + "\n"


def failures_table(failures: Sequence[FailureRecord]) -> str:
    lines = ["question_id,student_id,error,message"]
    for f in failures:
        message = f.message.replace("\n", " ").replace(",", ";")
        lines.append(f"{f.question_id},{f.student_id},{f.error},{message}")
    return "\n".join(lines) + "\n"

