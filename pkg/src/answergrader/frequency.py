"""Word-frequency tables for student and reference answers."""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from pathlib import Path
from types import MappingProxyType

from .errors import EmptyReference


class FrequencyTable(Mapping):
    """Immutable mapping ``word -> count`` (every count >= 1).

    Iteration is in lexicographic order so that anything derived from a
    table (reports, serialized files) is reproducible.
    """

    __slots__ = ("_counts", "_total")

    def __init__(self, counts: Mapping[str, int] | None = None):
        clean = {}
        for word, count in sorted((counts or {}).items()):
            if not isinstance(count, int) or count < 1:
                raise ValueError(f"count for {word!r} must be a positive integer, got {count!r}")
            if not word:
                raise ValueError("empty word in frequency table")
            clean[word] = count
        self._counts = MappingProxyType(clean)
        self._total = sum(clean.values())

    def __getitem__(self, word: str) -> int:
        return self._counts[word]

    def __iter__(self) -> Iterator[str]:
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __repr__(self) -> str:
        return f"FrequencyTable({dict(self._counts)!r})"

    def __eq__(self, other):
        if isinstance(other, FrequencyTable):
            return dict(self._counts) == dict(other._counts)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._counts.items()))

    @property
    def distinct_count(self) -> int:
        return len(self._counts)

    @property
    def total_count(self) -> int:
        return self._total

    def to_text(self) -> str:
        """Serialize as ``word<TAB>count`` lines, sorted by word."""
        return "".join(f"{word}\t{count}\n" for word, count in self._counts.items())

    @classmethod
    def from_text(cls, text: str) -> FrequencyTable:
        counts = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                word, count = line.split("\t")
                counts[word] = int(count)
            except ValueError:
                raise ValueError(f"line {lineno}: expected 'word<TAB>count', got {line!r}") from None
        return cls(counts)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> FrequencyTable:
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def build_frequency(tokens: Iterable[str]) -> FrequencyTable:
    frequency: dict[str, int] = {}
    for word in tokens:
        if word not in frequency:
            frequency[word] = 1
        else:
            frequency[word] = frequency[word] + 1
    return FrequencyTable(frequency)


def weight_table(reference: FrequencyTable) -> dict[str, float]:
    """Each reference word's share of all reference occurrences, in percent."""
    total = reference.total_count
    if total == 0:
        raise EmptyReference("reference frequency table is empty")
    return {word: count / total * 100 for word, count in reference.items()}
