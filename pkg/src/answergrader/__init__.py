"""Automatic grading of free-text answer scripts by word-frequency
comparison against a reference answer plus a spelling/grammar score."""

from .errors import *  # noqa: F401,F403
from .frequency import FrequencyTable, build_frequency, weight_table
from .linguistic import (
    BuiltinGrammar,
    LinguisticReport,
    RemoteGrammar,
    SpellingDictionary,
    analyze,
    check_grammar,
    check_spelling,
    linguistic_score,
)
from .preprocess import (
    PreprocessConfig,
    count_words,
    normalize,
    preprocess,
    remove_stopwords,
    split_sentences,
    strip_special,
    tokenize,
)
from .scoring import (
    ComparisonResult,
    ScoreBreakdown,
    ScoreWeights,
    compare_frequencies,
    final_score,
    grade,
    render_report,
)
from .sources import (
    MediaWikiClient,
    ModelAnswerStore,
    Question,
    ReferenceAnswer,
    ReferenceCache,
    extract_keywords,
    fetch_open_domain,
    lookup_closed_domain,
    resolve_reference,
)
from .config import GradingConfig
from .harness import (
    CorpusEntry,
    MetricsReport,
    compute_metrics,
    evaluate_batch,
    load_corpus,
    metrics_from_confusion,
)

__version__ = "0.1.0"
