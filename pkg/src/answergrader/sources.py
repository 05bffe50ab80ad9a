"""Reference answers: keyword extraction, MediaWiki extracts (with an
on-disk cache) and a closed-domain store of model answers."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import threading
import time
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import (
    CorruptStore,
    MalformedResponse,
    NetworkError,
    NoPageFound,
    UnextractableQuestion,
    UnknownQuestion,
)
from .preprocess import DEFAULT_CONFIG, PreprocessConfig, preprocess

log = logging.getLogger(__name__)

DEFAULT_ENDPOINT = "https://en.wikipedia.org/w/api.php"
USER_AGENT = "answergrader/0.1 (automatic answer-script grading; offline cache)"

OPEN_DOMAIN = "open-domain"
CLOSED_DOMAIN = "closed-domain"

QUESTION_WORDS = frozenset(
    "what who when where why how do does know describe define about you".split()
)


@dataclass(frozen=True)
class Question:
    id: str
    text: str
    total_mark: float = 10.0

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError(f"question {self.id!r} has empty text")
        if not self.total_mark > 0:
            raise ValueError(f"question {self.id!r}: total_mark must be positive")


@dataclass(frozen=True)
class ReferenceAnswer:
    text: str
    source: str
    source_detail: str
    fetched_at: str = ""

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("reference answer text is empty")
        if not self.source_detail:
            raise ValueError("reference answer has no source_detail")
        if self.source not in (OPEN_DOMAIN, CLOSED_DOMAIN):
            raise ValueError(f"unknown source {self.source!r}")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def extract_keywords(question: Question | str, config: PreprocessConfig = DEFAULT_CONFIG) -> list[str]:
    """Content words of a question, first occurrence order, no duplicates.

    >>> extract_keywords("What do you know about University of Dhaka?")
    ['university', 'dhaka']
    """
    text = question.text if isinstance(question, Question) else question
    if not text.strip():
        raise UnextractableQuestion("question text is empty")
    keywords = []
    for token in preprocess(text, config):
        if token.lower() in QUESTION_WORDS or token in keywords:
            continue
        keywords.append(token)
    if not keywords:
        raise UnextractableQuestion(f"no keywords survive filtering in {text!r}")
    return keywords


# -- cache ---------------------------------------------------------------------


def _atomic_write(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


class ReferenceCache:
    """Extract cache keyed by a hash of the keyword list.

    Each entry is ``<hash>.txt`` (the extract, stored byte-for-byte) plus a
    ``<hash>.json`` sidecar with title and fetch time. Entries never expire.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    @staticmethod
    def key(keywords: list[str]) -> str:
        return hashlib.sha256("\x1f".join(keywords).encode("utf-8")).hexdigest()

    def _paths(self, keywords):
        key = self.key(keywords)
        return self.directory / f"{key}.txt", self.directory / f"{key}.json"

    def get(self, keywords: list[str]) -> ReferenceAnswer | None:
        text_path, meta_path = self._paths(keywords)
        if not text_path.exists():
            return None
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        text = text_path.read_bytes().decode("utf-8")
        return ReferenceAnswer(text, OPEN_DOMAIN, meta["title"], meta.get("fetched_at", ""))

    def put(self, keywords: list[str], answer: ReferenceAnswer) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        text_path, meta_path = self._paths(keywords)
        meta = {"keywords": keywords, "title": answer.source_detail, "fetched_at": answer.fetched_at}
        # sidecar first: a visible .txt always has its metadata
        _atomic_write(meta_path, json.dumps(meta, sort_keys=True).encode("utf-8"))
        _atomic_write(text_path, answer.text.encode("utf-8"))

    def purge(self) -> int:
        removed = 0
        if self.directory.is_dir():
            for path in self.directory.iterdir():
                if path.suffix in (".txt", ".json"):
                    path.unlink()
                    removed += 1
        return removed


# -- MediaWiki client ----------------------------------------------------------

Transport = Callable[[str, Mapping[str, str], Mapping[str, str], float], bytes]


def requests_transport(url, params, headers, timeout) -> bytes:
    import requests

    try:
        resp = requests.get(url, params=params, headers=headers, timeout=timeout)
        resp.raise_for_status()
    except requests.RequestException as exc:
        raise NetworkError(str(exc)) from exc
    return resp.content


def search_params(keywords: list[str]) -> dict[str, str]:
    return {
        "action": "query",
        "list": "search",
        "srsearch": " ".join(keywords),
        "srlimit": "1",
        "srprop": "",
        "format": "json",
        "formatversion": "2",
    }


def extract_params(title: str) -> dict[str, str]:
    return {
        "action": "query",
        "prop": "extracts",
        "explaintext": "1",
        "redirects": "1",
        "titles": title,
        "format": "json",
        "formatversion": "2",
    }


class MediaWikiClient:
    """Two-step action-API lookup: full-text search for a title, then the
    plain-text extract of that page. JSON responses, formatversion 2.

    Requests are serialized and spaced at least ``min_interval`` seconds
    apart. ``offline=True`` never touches the transport.
    """

    def __init__(
        self,
        endpoint: str = DEFAULT_ENDPOINT,
        cache: ReferenceCache | None = None,
        transport: Transport | None = None,
        user_agent: str = USER_AGENT,
        min_interval: float = 1.0,
        timeout: float = 15.0,
        offline: bool = False,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.endpoint = endpoint
        self.cache = cache
        self.transport = transport
        self.headers = {"User-Agent": user_agent}
        self.min_interval = min_interval
        self.timeout = timeout
        self.offline = offline
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._last_request: float | None = None

    def _get_json(self, params: dict[str, str]) -> dict:
        if self.offline:
            raise NetworkError("offline mode: network access is disabled")
        with self._lock:
            if self._last_request is not None:
                wait = self.min_interval - (self._clock() - self._last_request)
                if wait > 0:
                    self._sleep(wait)
            try:
                transport = self.transport or requests_transport
                body = transport(self.endpoint, params, self.headers, self.timeout)
            finally:
                self._last_request = self._clock()
        try:
            data = json.loads(body)
        except ValueError as exc:
            raise MalformedResponse(f"response is not JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise MalformedResponse("response is not a JSON object")
        if "error" in data:
            err = data["error"]
            raise MalformedResponse(f"API error {err.get('code')}: {err.get('info')}")
        return data

    def search_title(self, keywords: list[str]) -> str:
        data = self._get_json(search_params(keywords))
        try:
            hits = data["query"]["search"]
        except (KeyError, TypeError) as exc:
            raise MalformedResponse(f"search response lacks query.search: {exc!r}") from exc
        if not hits:
            raise NoPageFound(f"no page matches {' '.join(keywords)!r}")
        try:
            return hits[0]["title"]
        except (KeyError, TypeError) as exc:
            raise MalformedResponse(f"search hit lacks a title: {exc!r}") from exc

    def page_extract(self, title: str) -> tuple[str, str]:
        """Return ``(resolved_title, plain_text)`` for a page."""
        data = self._get_json(extract_params(title))
        try:
            page = data["query"]["pages"][0]
        except (KeyError, IndexError, TypeError) as exc:
            raise MalformedResponse(f"extract response lacks query.pages: {exc!r}") from exc
        if page.get("missing") or page.get("invalid"):
            raise NoPageFound(f"page {title!r} does not exist")
        text = page.get("extract", "")
        if not isinstance(text, str):
            raise MalformedResponse("extract is not a string")
        if not text.strip():
            raise NoPageFound(f"page {title!r} has an empty extract")
        return page.get("title", title), text

    def fetch(self, keywords: list[str]) -> ReferenceAnswer:
        if not keywords:
            raise ValueError("keyword list is empty")
        if self.cache is not None:
            cached = self.cache.get(keywords)
            if cached is not None:
                log.debug("cache hit for %s", keywords)
                return cached
        title = self.search_title(keywords)
        resolved, text = self.page_extract(title)
        answer = ReferenceAnswer(text, OPEN_DOMAIN, resolved, _now())
        if self.cache is not None:
            self.cache.put(keywords, answer)
        return answer


def fetch_open_domain(keywords: list[str], client: MediaWikiClient) -> ReferenceAnswer:
    return client.fetch(keywords)


# -- closed domain -----------------------------------------------------------

MANIFEST_NAME = "manifest.tsv"


@dataclass(frozen=True)
class StoreEntry:
    question_id: str
    path: str
    total_mark: float
    question_text: str = ""


class ModelAnswerStore:
    """Directory of plain-text model answers plus a tab-separated manifest.

    Manifest rows are ``question_id<TAB>relative_path<TAB>total_mark``, with
    an optional fourth column holding the question text.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.entries: dict[str, StoreEntry] = {}
        manifest = self.root / MANIFEST_NAME
        if manifest.exists():
            self.entries = self._parse(manifest.read_text(encoding="utf-8"))

    @property
    def manifest_path(self) -> Path:
        return self.root / MANIFEST_NAME

    @staticmethod
    def _parse(text: str) -> dict[str, StoreEntry]:
        entries = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) not in (3, 4):
                raise CorruptStore(f"manifest line {lineno}: expected 3 or 4 tab-separated fields")
            qid, rel, mark = fields[:3]
            if qid in entries:
                raise CorruptStore(f"manifest line {lineno}: duplicate question id {qid!r}")
            try:
                total_mark = float(mark)
            except ValueError:
                raise CorruptStore(f"manifest line {lineno}: bad total_mark {mark!r}") from None
            entries[qid] = StoreEntry(qid, rel, total_mark, fields[3] if len(fields) == 4 else "")
        return entries

    def __contains__(self, question_id: str) -> bool:
        return question_id in self.entries

    def entry(self, question_id: str) -> StoreEntry:
        try:
            return self.entries[question_id]
        except KeyError:
            raise UnknownQuestion(f"question {question_id!r} is not in the store") from None

    def question(self, question_id: str) -> Question:
        e = self.entry(question_id)
        return Question(question_id, e.question_text or question_id, e.total_mark)

    def lookup(self, question_id: str) -> ReferenceAnswer:
        e = self.entry(question_id)
        path = self.root / e.path
        try:
            text = path.read_bytes().decode("utf-8")
        except FileNotFoundError:
            raise CorruptStore(f"manifest entry {question_id!r} points to missing {e.path}") from None
        if not text.strip():
            raise CorruptStore(f"model answer for {question_id!r} is empty")
        return ReferenceAnswer(text, CLOSED_DOMAIN, question_id, _now())

    def add(
        self,
        question_id: str,
        answer_text: str,
        total_mark: float,
        question_text: str = "",
        overwrite: bool = False,
    ) -> StoreEntry:
        """Write a model answer and update the manifest atomically."""
        if not question_id or any(c in question_id for c in "\t\n"):
            raise ValueError(f"invalid question id {question_id!r}")
        if "\t" in question_text or "\n" in question_text:
            raise ValueError("question text may not contain tabs or newlines")
        if not answer_text.strip():
            raise ValueError("model answer is empty")
        if not total_mark > 0:
            raise ValueError("total_mark must be positive")
        if question_id in self.entries and not overwrite:
            raise FileExistsError(f"question {question_id!r} already in store")
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "answers").mkdir(exist_ok=True)
        rel = f"answers/{hashlib.sha256(question_id.encode()).hexdigest()[:16]}.txt"
        _atomic_write(self.root / rel, answer_text.encode("utf-8"))
        entry = StoreEntry(question_id, rel, float(total_mark), question_text)
        self.entries[question_id] = entry
        _atomic_write(self.manifest_path, self._render().encode("utf-8"))
        return entry

    def _render(self) -> str:
        lines = []
        for e in self.entries.values():
            fields = [e.question_id, e.path, f"{e.total_mark:g}"]
            if e.question_text:
                fields.append(e.question_text)
            lines.append("\t".join(fields) + "\n")
        return "".join(lines)


def lookup_closed_domain(question_id: str, store: ModelAnswerStore) -> ReferenceAnswer:
    return store.lookup(question_id)


MODES = ("open", "closed", "closed-then-open")


def resolve_reference(
    question: Question,
    mode: str,
    store: ModelAnswerStore | None = None,
    client: MediaWikiClient | None = None,
    config: PreprocessConfig = DEFAULT_CONFIG,
) -> ReferenceAnswer:
    """Closed store lookup, open-domain fetch, or closed with open fallback."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode in ("closed", "closed-then-open"):
        if store is None:
            if mode == "closed":
                raise UnknownQuestion("no model-answer store configured")
        else:
            try:
                return lookup_closed_domain(question.id, store)
            except UnknownQuestion:
                if mode == "closed":
                    raise
                log.info("question %r not in store, falling back to open domain", question.id)
    if client is None:
        raise NetworkError("no MediaWiki client configured")
    return fetch_open_domain(extract_keywords(question, config), client)
