"""Answer-analysis comparison, final mark, and the end-to-end ``grade``."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

from .errors import EmptyAnswer, EmptyReference, EmptyStudentAnswer
from .frequency import FrequencyTable, build_frequency, weight_table
from .linguistic import LinguisticReport, analyze
from .preprocess import preprocess


def _clamp(value: float, lo: float, hi: float) -> float:
    return min(hi, max(lo, value))


@dataclass(frozen=True)
class ScoreWeights:
    frequency_weight: float = 0.7
    linguistic_weight: float = 0.3

    def __post_init__(self):
        for name in ("frequency_weight", "linguistic_weight"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        # float sums such as 0.1 + 0.9 carry representation error
        if not math.isclose(self.frequency_weight + self.linguistic_weight, 1.0, abs_tol=1e-12):
            raise ValueError(
                f"weights must sum to 1, got {self.frequency_weight} + {self.linguistic_weight}"
            )


@dataclass(frozen=True)
class ComparisonResult:
    aa_raw: float
    aa_score: float
    matched_words: tuple[tuple[str, int, int], ...] = ()
    missing_words: tuple[tuple[str, int], ...] = ()


def compare_frequencies(student: FrequencyTable, reference: FrequencyTable) -> ComparisonResult:
    """Score a student frequency table against a reference table.

    Runs four passes over a private copy of the reference counts:

    1. weight each reference word by its share of all reference tokens (percent);
    2. credit every shared word with ``weight / number_of_reference_words``;
    3. credit every shared word with ``100 * s/r + s / distinct_student_words``
       and zero the reference count;
    4. charge every reference word still nonzero (i.e. missed by the student)
       ``100 * r / distinct_student_words``.

    The raw accumulator is unbounded; ``aa_score`` is it clamped to [0, 100].
    """
    if student.distinct_count == 0:
        raise EmptyStudentAnswer("student answer has no scorable words")
    if reference.total_count == 0:
        raise EmptyReference("reference answer has no scorable words")

    ref_counts = dict(reference)
    length_swf = student.distinct_count

    weights = weight_table(reference)
    length_wrwf = len(weights)

    aa = 0.0
    for word in student:
        if word in weights:
            aa += weights[word] / length_wrwf

    matched = []
    for word in student:
        if word in ref_counts:
            s, r = student[word], ref_counts[word]
            matched.append((word, s, r))
            aa += s / r * 100 + s / length_swf
            ref_counts[word] = 0

    missing = []
    for word in sorted(ref_counts):
        if ref_counts[word] != 0:
            missing.append((word, ref_counts[word]))
            aa -= ref_counts[word] / length_swf * 100
            ref_counts[word] = 0

    return ComparisonResult(aa, _clamp(aa, 0.0, 100.0), tuple(matched), tuple(missing))


@dataclass(frozen=True)
class ScoreBreakdown:
    question_id: str
    aa_score: float
    la_score: float
    weights: ScoreWeights
    total_mark: float
    final_score: float
    aa_raw: float = 0.0
    student_id: str = ""
    comparison: ComparisonResult | None = field(default=None, compare=False)
    linguistic: LinguisticReport | None = field(default=None, compare=False)


def final_score(
    total_mark: float,
    aa_score: float,
    la_score: float,
    weights: ScoreWeights = ScoreWeights(),
    question_id: str = "",
) -> ScoreBreakdown:
    """Weighted mark: total * w_freq * aa/100 + total * w_ling * la/100."""
    if not total_mark > 0:
        raise ValueError(f"total_mark must be positive, got {total_mark}")
    for name, value in (("aa_score", aa_score), ("la_score", la_score)):
        if not 0.0 <= value <= 100.0:
            raise ValueError(f"{name} must lie in [0, 100], got {value}")
    score = (
        total_mark * weights.frequency_weight * (aa_score / 100)
        + total_mark * weights.linguistic_weight * (la_score / 100)
    )
    score = _clamp(score, 0.0, total_mark)
    return ScoreBreakdown(question_id, aa_score, la_score, weights, total_mark, score, aa_raw=aa_score)


def grade(student_text: str, reference, question, config, student_id: str = "") -> ScoreBreakdown:
    """Grade one answer script against a reference answer.

    A blank script (nothing left after preprocessing) earns zero. Problems
    with the reference propagate as exceptions.
    """
    pconf = config.preprocess
    reference_table = build_frequency(preprocess(reference.text, pconf))
    if reference_table.total_count == 0:
        raise EmptyReference(f"reference {reference.source_detail!r} has no scorable words")

    student_table = build_frequency(preprocess(student_text, pconf))
    try:
        comparison = compare_frequencies(student_table, reference_table)
    except EmptyStudentAnswer:
        return ScoreBreakdown(
            question.id, 0.0, 0.0, config.weights, question.total_mark, 0.0,
            student_id=student_id,
        )

    try:
        ling = analyze(student_text, config.spelling_dictionary(), config.grammar_backend(), pconf)
        la_score = ling.la_score
    except EmptyAnswer:
        ling, la_score = None, 0.0

    result = final_score(question.total_mark, comparison.aa_score, la_score, config.weights, question.id)
    return ScoreBreakdown(
        question.id,
        comparison.aa_score,
        la_score,
        config.weights,
        question.total_mark,
        result.final_score,
        aa_raw=comparison.aa_raw,
        student_id=student_id,
        comparison=comparison,
        linguistic=ling,
    )


# -- reports -----------------------------------------------------------------

RECORD_FIELDS = ("question_id", "aa_raw", "aa_score", "la_score", "final_score", "total_mark")


def record_rows(breakdowns) -> str:
    """Comma-separated records with a header row, numbers to 2 decimals."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RECORD_FIELDS)
    for b in breakdowns:
        writer.writerow([
            b.question_id,
            f"{b.aa_raw:.2f}",
            f"{b.aa_score:.2f}",
            f"{b.la_score:.2f}",
            f"{b.final_score:.2f}",
            f"{b.total_mark:.2f}",
        ])
    return buf.getvalue()


def render_report(b: ScoreBreakdown, max_words: int = 15) -> str:
    lines = [f"Question:          {b.question_id}"]
    if b.student_id:
        lines.append(f"Student:           {b.student_id}")
    lines.append(f"Answer analysis:   {b.aa_score:.2f} (raw {b.aa_raw:.2f})")
    if b.linguistic is not None:
        ling = b.linguistic
        lines.append(
            f"Linguistic:        {b.la_score:.2f} (spelling {ling.s_mistake}/{ling.t_word} words, "
            f"grammar {ling.g_mistake}/{ling.t_sentence} sentences, penalty {ling.penalty:.2f})"
        )
    else:
        lines.append(f"Linguistic:        {b.la_score:.2f}")
    lines.append(
        f"Weights:           frequency {b.weights.frequency_weight:.2f}, "
        f"linguistic {b.weights.linguistic_weight:.2f}"
    )
    lines.append(f"Final score:       {b.final_score:.2f} / {b.total_mark:.2f}")
    if b.comparison is not None:
        matched = b.comparison.matched_words
        missing = sorted(b.comparison.missing_words, key=lambda m: (-m[1], m[0]))
        lines.append(f"Matched words:     {len(matched)}")
        for word, s, r in matched[:max_words]:
            lines.append(f"  {word:<20} student {s:>3}  reference {r:>3}")
        lines.append(f"Missing words:     {len(missing)}")
        for word, r in missing[:max_words]:
            lines.append(f"  {word:<20} reference {r:>3}")
    lines.append("")
    return "\n".join(lines) + "\n" + record_rows([b])
