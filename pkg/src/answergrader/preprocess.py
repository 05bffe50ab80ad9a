"""Text normalization: special-character stripping, sentence splitting,
tokenization, case folding with an acronym whitelist, and stopword removal.

Every function here is pure and accepts empty text.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

DEFAULT_TOKEN_PATTERN = r"[^\W_]+"
DEFAULT_SENTENCE_DELIMITERS = frozenset(".!?")


def read_word_list(path: str | Path) -> list[str]:
    """Read a one-entry-per-line list, skipping blanks and ``#`` comments."""
    with open(path, encoding="utf-8") as fh:
        return _parse_word_list(fh.read())


def _parse_word_list(text: str) -> list[str]:
    words = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return words


def _bundled(name: str) -> list[str]:
    return _parse_word_list(
        resources.files("answergrader").joinpath("data", name).read_text("utf-8")
    )


def default_stopwords() -> frozenset[str]:
    return frozenset(_bundled("stopwords.txt"))


def default_acronyms() -> frozenset[str]:
    return frozenset(_bundled("acronyms.txt"))


@dataclass(frozen=True)
class PreprocessConfig:
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    acronym_whitelist: frozenset[str] = field(default_factory=default_acronyms)
    token_pattern: str = DEFAULT_TOKEN_PATTERN
    sentence_delimiters: frozenset[str] = DEFAULT_SENTENCE_DELIMITERS

    def __post_init__(self):
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        object.__setattr__(self, "acronym_whitelist", frozenset(self.acronym_whitelist))
        object.__setattr__(self, "sentence_delimiters", frozenset(self.sentence_delimiters))
        for word in self.stopwords:
            if not word or word != word.lower():
                raise ValueError(f"stopword must be a nonempty lowercase string: {word!r}")
        for token in self.acronym_whitelist:
            if not any(ch.isupper() for ch in token):
                raise ValueError(f"acronym has no uppercase character: {token!r}")
        for delim in self.sentence_delimiters:
            if len(delim) != 1 or delim.isalnum() or delim.isspace():
                raise ValueError(f"invalid sentence delimiter: {delim!r}")
        re.compile(self.token_pattern)

    @classmethod
    def from_files(cls, stopwords_file=None, acronyms_file=None, **kwargs) -> PreprocessConfig:
        if stopwords_file is not None:
            kwargs["stopwords"] = frozenset(read_word_list(stopwords_file))
        if acronyms_file is not None:
            kwargs["acronym_whitelist"] = frozenset(read_word_list(acronyms_file))
        return cls(**kwargs)

    @cached_property
    def _token_re(self) -> re.Pattern:
        return re.compile(self.token_pattern)

    @cached_property
    def _special_re(self) -> re.Pattern:
        # a run of disallowed characters plus the blanks hugging it
        delims = re.escape("".join(sorted(self.sentence_delimiters)))
        return re.compile(rf"[ \t]*(?:[^\w\s{delims}]|_)+[ \t]*")

    @cached_property
    def _sentence_re(self) -> re.Pattern:
        delims = re.escape("".join(sorted(self.sentence_delimiters)))
        return re.compile(rf"[^{delims}]*[{delims}]+|[^{delims}]+$")


DEFAULT_CONFIG = PreprocessConfig()


def strip_special(text: str, config: PreprocessConfig = DEFAULT_CONFIG) -> str:
    """Remove everything but letters, digits, whitespace and sentence delimiters.

    A removed run between two surviving characters collapses to one space;
    at either end of the text it simply disappears.

    >>> strip_special("Hello, #world!")
    'Hello world!'
    """
    end = len(text)

    def _replace(m: re.Match) -> str:
        if m.start() == 0 or m.end() == end:
            return ""
        nxt = text[m.end()]
        if nxt in config.sentence_delimiters or nxt.isspace():
            return ""
        if text[m.start() - 1].isspace():
            return ""
        return " "

    return config._special_re.sub(_replace, text)


def split_sentences(text: str, config: PreprocessConfig = DEFAULT_CONFIG) -> list[str]:
    """Split into maximal runs ending at a delimiter (or end of text).

    Consecutive delimiters ("?!", "...") close a single sentence. Whitespace
    around each sentence is trimmed and blank runs are dropped.
    """
    sentences = []
    for m in config._sentence_re.finditer(text):
        sentence = m.group().strip()
        if sentence:
            sentences.append(sentence)
    return sentences


def tokenize(text: str, config: PreprocessConfig = DEFAULT_CONFIG) -> list[str]:
    return config._token_re.findall(text)


def normalize(token: str, config: PreprocessConfig = DEFAULT_CONFIG) -> str:
    if not token:
        raise ValueError("cannot normalize an empty token")
    if token in config.acronym_whitelist:
        return token
    return token.lower()


def remove_stopwords(tokens: list[str], config: PreprocessConfig = DEFAULT_CONFIG) -> list[str]:
    return [t for t in tokens if t.lower() not in config.stopwords]


def preprocess(text: str, config: PreprocessConfig = DEFAULT_CONFIG) -> list[str]:
    """Full pipeline: strip_special -> tokenize -> normalize -> remove_stopwords.

    >>> preprocess("The University of Dhaka!")
    ['university', 'dhaka']
    """
    tokens = tokenize(strip_special(text, config), config)
    return remove_stopwords([normalize(t, config) for t in tokens], config)


def count_words(text: str, config: PreprocessConfig = DEFAULT_CONFIG) -> int:
    """Raw word count, before normalization and stopword removal."""
    return len(tokenize(strip_special(text, config), config))
