"""Spelling and grammar mistake counting, and the linguistic score."""
from __future__ import annotations

import logging
import threading
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .errors import EmptyAnswer, GrammarServiceUnavailable, MisconfiguredChecker
from .preprocess import (
    DEFAULT_CONFIG,
    PreprocessConfig,
    count_words,
    normalize,
    read_word_list,
    split_sentences,
    strip_special,
    tokenize,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpellingDictionary:
    words: frozenset[str]

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def from_file(cls, path: str | Path) -> SpellingDictionary:
        return cls(frozenset(w.lower() for w in read_word_list(path)))

    @classmethod
    def default(cls) -> SpellingDictionary:
        """English word list shipped with pyspellchecker (~128k alphabetic words)."""
        return _default_dictionary()


@lru_cache(maxsize=1)
def _default_dictionary() -> SpellingDictionary:
    from spellchecker import SpellChecker

    words = SpellChecker(language="en").word_frequency.keys()
    return SpellingDictionary(frozenset(w for w in words if w.isalpha()))


def check_spelling(
    text: str,
    dictionary: SpellingDictionary,
    config: PreprocessConfig = DEFAULT_CONFIG,
) -> list[tuple[str, int]]:
    """Return ``(raw_token, token_index)`` for every unknown word.

    Numbers and acronym-whitelist members are never flagged.
    """
    if not dictionary.words:
        raise MisconfiguredChecker("spelling dictionary is empty")
    mistakes = []
    for position, token in enumerate(tokenize(strip_special(text, config), config)):
        if token.isdigit() or token in config.acronym_whitelist:
            continue
        if normalize(token, config) not in dictionary:
            mistakes.append((token, position))
    return mistakes


# -- grammar ---------------------------------------------------------------

RULE_CAPITALIZATION = "sentence-start-uppercase"
RULE_AGREEMENT = "subject-verb-agreement"
RULE_DOUBLED = "doubled-word"
RULE_TERMINATOR = "missing-terminator"

THIRD_PERSON_SINGULAR = frozenset({"he", "she", "it"})

# base forms whose simple past differs, so "he <verb>" is unambiguous
BASE_VERBS = frozenset(
    """
    go do have want like make say know take come see get think need eat
    play write live work seem look give find tell become leave feel try
    call ask use begin bring buy keep hold stand understand teach study
    run speak grow show move believe happen provide include allow create
    """.split()
)

# "does he go", "let it go", "make it work": the pronoun is not a finite subject
_LICENSORS = frozenset(
    """
    do does did will would can could shall should may might must
    let make help see watch hear
    """.split()
)


class BuiltinGrammar:
    """Shallow deterministic rule set.

    Rules, applied per sentence in this order:

    * ``sentence-start-uppercase``: the first letter of the sentence is lowercase.
    * ``subject-verb-agreement``: he/she/it directly followed by a base-form
      verb from a small table, unless preceded by an auxiliary or causative.
    * ``doubled-word``: the same word twice in a row ("the the"), once per pair.
    * ``missing-terminator``: the sentence does not end with a delimiter.
    """

    def __init__(self, config: PreprocessConfig = DEFAULT_CONFIG):
        self.config = config

    def check(self, sentences: Sequence[str]) -> list[tuple[int, str]]:
        found = []
        for index, sentence in enumerate(sentences):
            found.extend((index, rule) for rule in self._check_sentence(sentence))
        return found

    def _check_sentence(self, sentence: str) -> list[str]:
        violations = []
        first_alnum = next((ch for ch in sentence if ch.isalnum()), None)
        if first_alnum is not None and first_alnum.isalpha() and first_alnum.islower():
            violations.append(RULE_CAPITALIZATION)

        words = [t.lower() for t in tokenize(strip_special(sentence, self.config), self.config)]
        for i in range(len(words) - 1):
            if (
                words[i] in THIRD_PERSON_SINGULAR
                and words[i + 1] in BASE_VERBS
                and (i == 0 or words[i - 1] not in _LICENSORS)
            ):
                violations.append(RULE_AGREEMENT)
        for a, b in zip(words, words[1:]):
            if a == b and not a.isdigit():
                violations.append(RULE_DOUBLED)

        stripped = sentence.rstrip()
        if stripped and stripped[-1] not in self.config.sentence_delimiters:
            violations.append(RULE_TERMINATOR)
        return violations


def _post_form(url: str, data: dict, timeout: float) -> dict:
    import requests

    try:
        resp = requests.post(url, data=data, timeout=timeout)
        resp.raise_for_status()
        return resp.json()
    except (requests.RequestException, ValueError) as exc:
        raise GrammarServiceUnavailable(f"{url}: {exc}") from exc


class RemoteGrammar:
    """Client for a LanguageTool-compatible ``/v2/check`` service.

    Each sentence is posted separately and every returned match becomes one
    ``(sentence_index, rule_id)`` entry. At most ``max_in_flight`` requests are
    outstanding at once across threads. With ``fallback`` set, a service
    failure degrades to that backend instead of raising.
    """

    def __init__(
        self,
        endpoint: str,
        language: str = "en-US",
        max_in_flight: int = 1,
        timeout: float = 10.0,
        fallback: BuiltinGrammar | None = None,
        transport: Callable[[str, dict, float], dict] = _post_form,
    ):
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be at least 1")
        self.url = endpoint.rstrip("/") + "/v2/check"
        self.language = language
        self.timeout = timeout
        self.fallback = fallback
        self._transport = transport
        self._slots = threading.BoundedSemaphore(max_in_flight)

    def check(self, sentences: Sequence[str]) -> list[tuple[int, str]]:
        try:
            return [
                (index, rule_id)
                for index, sentence in enumerate(sentences)
                for rule_id in self._check_one(sentence)
            ]
        except GrammarServiceUnavailable:
            if self.fallback is None:
                raise
            log.warning("grammar service unavailable, falling back to builtin rules")
            return self.fallback.check(sentences)

    def _check_one(self, sentence: str) -> list[str]:
        with self._slots:
            payload = self._transport(
                self.url, {"text": sentence, "language": self.language}, self.timeout
            )
        try:
            return [match["rule"]["id"] for match in payload["matches"]]
        except (KeyError, TypeError) as exc:
            raise GrammarServiceUnavailable(f"unexpected response shape: {exc!r}") from exc


def check_grammar(sentences: Sequence[str], backend) -> list[tuple[int, str]]:
    return backend.check(sentences)


# -- scoring ---------------------------------------------------------------


@dataclass(frozen=True)
class LinguisticReport:
    s_mistake: int
    g_mistake: int
    t_word: int
    t_sentence: int
    penalty: float
    la_score: float


def linguistic_score(s_mistake: int, g_mistake: int, t_word: int, t_sentence: int) -> LinguisticReport:
    """Mistake-rate penalty and the resulting score ``clamp(100 - penalty, 0, 100)``.

    penalty = s_mistake / t_word * 100 + g_mistake / t_sentence * 100
    """
    if t_word <= 0 or t_sentence <= 0:
        raise EmptyAnswer(f"need words and sentences, got t_word={t_word}, t_sentence={t_sentence}")
    if s_mistake < 0 or g_mistake < 0:
        raise ValueError("mistake counts must be non-negative")
    if s_mistake > t_word:
        raise ValueError("more spelling mistakes than words")
    penalty = s_mistake / t_word * 100 + g_mistake / t_sentence * 100
    la_score = min(100.0, max(0.0, 100.0 - penalty))
    return LinguisticReport(s_mistake, g_mistake, t_word, t_sentence, penalty, la_score)


def analyze(
    text: str,
    dictionary: SpellingDictionary,
    grammar=None,
    config: PreprocessConfig = DEFAULT_CONFIG,
) -> LinguisticReport:
    """Run both checkers over raw answer text and score the result."""
    if grammar is None:
        grammar = BuiltinGrammar(config)
    sentences = split_sentences(text, config)
    spelling = check_spelling(text, dictionary, config)
    grammar_hits = check_grammar(sentences, grammar)
    return linguistic_score(len(spelling), len(grammar_hits), count_words(text, config), len(sentences))
