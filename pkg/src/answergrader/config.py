"""Grading configuration and its key=value file format.

The file is INI-style::

    [grading]
    weights_frequency = 0.7
    weights_linguistic = 0.3
    threshold = 0.5
    workers = 4

    [reference]
    mode = closed-then-open
    endpoint = https://en.wikipedia.org/w/api.php
    cache_dir = ~/.cache/answergrader
    store = ./store
    offline = false

    [preprocess]
    stopwords_file = stopwords.txt
    acronyms_file = acronyms.txt

    [linguistic]
    dictionary = words.txt
    grammar_backend = builtin
    grammar_endpoint = http://localhost:8081
    grammar_degrade = true

Keys are unique across sections, so each one can be overridden by a
command-line flag of the same name.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .errors import ConfigError
from .linguistic import BuiltinGrammar, RemoteGrammar, SpellingDictionary
from .preprocess import PreprocessConfig
from .scoring import ScoreWeights
from .sources import DEFAULT_ENDPOINT, MODES, MediaWikiClient, ModelAnswerStore, ReferenceCache

DEFAULT_CACHE_DIR = Path("~/.cache/answergrader").expanduser()

KEYS = {
    "weights_frequency": float,
    "weights_linguistic": float,
    "threshold": float,
    "workers": int,
    "human_aggregate": str,
    "mode": str,
    "endpoint": str,
    "cache_dir": str,
    "store": str,
    "offline": bool,
    "stopwords_file": str,
    "acronyms_file": str,
    "dictionary": str,
    "grammar_backend": str,
    "grammar_endpoint": str,
    "grammar_degrade": bool,
    "grammar_max_in_flight": int,
}

_BOOLS = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def _coerce(key: str, value):
    kind = KEYS[key]
    if kind is bool and isinstance(value, str):
        try:
            return _BOOLS[value.strip().lower()]
        except KeyError:
            raise ConfigError(f"{key}: expected a boolean, got {value!r}") from None
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected {kind.__name__}, got {value!r}") from None


@dataclass
class GradingConfig:
    weights: ScoreWeights = field(default_factory=ScoreWeights)
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    dictionary_path: Path | None = None
    grammar: str = "builtin"
    grammar_endpoint: str = ""
    grammar_degrade: bool = True
    grammar_max_in_flight: int = 1
    mode: str = "closed-then-open"
    endpoint: str = DEFAULT_ENDPOINT
    cache_dir: Path = DEFAULT_CACHE_DIR
    store_root: Path | None = None
    threshold: float = 0.5
    workers: int = 1
    offline: bool = False
    human_aggregate: str = "mean"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}; got {self.mode!r}")
        if self.grammar not in ("builtin", "remote"):
            raise ConfigError(f"grammar_backend must be builtin or remote; got {self.grammar!r}")
        if self.grammar == "remote" and not self.grammar_endpoint:
            raise ConfigError("grammar_backend = remote needs grammar_endpoint")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold must lie in [0, 1]; got {self.threshold}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.human_aggregate not in ("mean", "median"):
            raise ConfigError("human_aggregate must be mean or median")
        if self.dictionary_path is not None and not Path(self.dictionary_path).is_file():
            raise ConfigError(f"dictionary file not found: {self.dictionary_path}")
        if self.store_root is not None and not Path(self.store_root).is_dir():
            raise ConfigError(f"model-answer store not found: {self.store_root}")

    @classmethod
    def from_mapping(cls, values: dict) -> GradingConfig:
        """Build from flat ``key -> value`` pairs (strings or typed values)."""
        unknown = set(values) - set(KEYS)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
        v = {k: _coerce(k, val) for k, val in values.items() if val is not None}
        kwargs = {}
        try:
            if "weights_frequency" in v or "weights_linguistic" in v:
                wf = v.get("weights_frequency")
                wl = v.get("weights_linguistic")
                if wf is None:
                    wf = 1.0 - wl
                if wl is None:
                    wl = 1.0 - wf
                kwargs["weights"] = ScoreWeights(wf, wl)
            for name in ("stopwords_file", "acronyms_file"):
                if name in v and not Path(v[name]).expanduser().is_file():
                    raise ConfigError(f"{name} not found: {v[name]}")
            kwargs["preprocess"] = PreprocessConfig.from_files(
                stopwords_file=_path(v.get("stopwords_file")),
                acronyms_file=_path(v.get("acronyms_file")),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        simple = {
            "threshold": "threshold",
            "workers": "workers",
            "human_aggregate": "human_aggregate",
            "mode": "mode",
            "endpoint": "endpoint",
            "offline": "offline",
            "grammar_backend": "grammar",
            "grammar_endpoint": "grammar_endpoint",
            "grammar_degrade": "grammar_degrade",
            "grammar_max_in_flight": "grammar_max_in_flight",
        }
        for key, attr in simple.items():
            if key in v:
                kwargs[attr] = v[key]
        if "dictionary" in v:
            kwargs["dictionary_path"] = _path(v["dictionary"])
        if "cache_dir" in v:
            kwargs["cache_dir"] = _path(v["cache_dir"])
        if "store" in v:
            kwargs["store_root"] = _path(v["store"])
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path | None = None, overrides: dict | None = None) -> GradingConfig:
        values = read_config_file(path) if path is not None else {}
        values.update({k: val for k, val in (overrides or {}).items() if val is not None})
        return cls.from_mapping(values)

    # -- resources built from the config ---------------------------------

    @cached_property
    def _dictionary(self) -> SpellingDictionary:
        if self.dictionary_path is None:
            return SpellingDictionary.default()
        return SpellingDictionary.from_file(self.dictionary_path)

    def spelling_dictionary(self) -> SpellingDictionary:
        return self._dictionary

    @cached_property
    def _grammar(self):
        builtin = BuiltinGrammar(self.preprocess)
        if self.grammar == "builtin":
            return builtin
        return RemoteGrammar(
            self.grammar_endpoint,
            max_in_flight=self.grammar_max_in_flight,
            fallback=builtin if self.grammar_degrade else None,
        )

    def grammar_backend(self):
        return self._grammar

    def mediawiki_client(self, **kwargs) -> MediaWikiClient:
        kwargs.setdefault("offline", self.offline)
        return MediaWikiClient(self.endpoint, cache=ReferenceCache(self.cache_dir), **kwargs)

    def model_store(self) -> ModelAnswerStore | None:
        return ModelAnswerStore(self.store_root) if self.store_root is not None else None


def _path(value) -> Path | None:
    return Path(value).expanduser() if value is not None else None


def read_config_file(path: str | Path) -> dict[str, str]:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    values = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            if key not in KEYS:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
            values[key] = value
    return values
