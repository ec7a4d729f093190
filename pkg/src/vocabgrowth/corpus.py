"""Tokenization, n-gram extraction, and parallel-corpus I/O.

The vocabulary shared by every other module: tokens are non-empty strings
without whitespace, n-grams are tuples of 1..4 tokens, sentences keep both
their token tuple and the raw line they came from.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

NGram = tuple[str, ...]

MAX_NGRAM_ORDER = 4


class CorpusFormatError(ValueError):
    """A corpus or dictionary file violates the expected format."""


def tokenize(text: str) -> list[str]:
    """Split on unicode whitespace runs; everything else is kept verbatim."""
    return text.split()


@dataclass(frozen=True)
class Sentence:
    """A tokenized sentence plus the raw line it was read from."""

    id: int
    tokens: tuple[str, ...]
    raw: str

    def __post_init__(self) -> None:
        if not self.tokens:
            raise ValueError(f"sentence {self.id} has no tokens")
        if list(self.tokens) != tokenize(self.raw):
            raise ValueError(
                f"sentence {self.id}: tokens do not match the raw line"
            )

    @classmethod
    def from_raw(cls, id: int, raw: str) -> "Sentence":
        return cls(id=id, tokens=tuple(tokenize(raw)), raw=raw)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class DictionaryEntry:
    """A lexicon line: source phrase mapped to its translation tokens."""

    source: NGram
    target: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.source) < 1:
            raise ValueError("dictionary entry with empty source")


@dataclass(frozen=True)
class ParallelCorpus:
    """Aligned (source, target) sentence pairs with file provenance."""

    pairs: tuple[tuple[Sentence, Sentence], ...]
    source_path: str | None = None
    target_path: str | None = None

    def __post_init__(self) -> None:
        ids = [src.id for src, _ in self.pairs]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate sentence ids in corpus")

    @property
    def sources(self) -> list[Sentence]:
        return [src for src, _ in self.pairs]

    @property
    def targets(self) -> list[Sentence]:
        return [tgt for _, tgt in self.pairs]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def digest(self) -> str:
        """Content hash of the pair text, independent of file paths."""
        h = hashlib.sha256()
        for src, tgt in self.pairs:
            h.update(src.raw.encode("utf-8"))
            h.update(b"\x00")
            h.update(tgt.raw.encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()


def extract_ngrams(
    tokens: Sequence[str] | Sentence, n_max: int = MAX_NGRAM_ORDER
) -> Counter[NGram]:
    """Count every contiguous subsequence of length 1..n_max, with multiplicity.

    Accepts a Sentence or a plain token sequence. Orders longer than the
    input are silently truncated (a one-token sentence only has a unigram).
    """
    if not 1 <= n_max <= MAX_NGRAM_ORDER:
        raise ValueError(f"n_max must be in 1..{MAX_NGRAM_ORDER}, got {n_max}")
    if isinstance(tokens, Sentence):
        tokens = tokens.tokens
    counts: Counter[NGram] = Counter()
    for n in range(1, min(n_max, len(tokens)) + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i : i + n])] += 1
    return counts


def subgrams(ngram: NGram) -> set[NGram]:
    """All contiguous subsequences of an n-gram, itself included."""
    return set(extract_ngrams(ngram, min(MAX_NGRAM_ORDER, len(ngram))))


def _read_lines(path: str | Path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            raise CorpusFormatError(f"{path}: blank line {lineno}")
    return lines


def load_source_corpus(path: str | Path) -> list[Sentence]:
    """Read a one-sentence-per-line text file into Sentence objects."""
    return [
        Sentence.from_raw(lineno, line)
        for lineno, line in enumerate(_read_lines(path), start=1)
    ]


def load_parallel_corpus(
    source_path: str | Path, target_path: str | Path
) -> ParallelCorpus:
    """Read two aligned text files; line i of each becomes pair i."""
    source_lines = _read_lines(source_path)
    target_lines = _read_lines(target_path)
    if len(source_lines) != len(target_lines):
        raise CorpusFormatError(
            f"line count mismatch: {source_path} has {len(source_lines)} lines, "
            f"{target_path} has {len(target_lines)}"
        )
    pairs = tuple(
        (Sentence.from_raw(i, src), Sentence.from_raw(i, tgt))
        for i, (src, tgt) in enumerate(zip(source_lines, target_lines), start=1)
    )
    return ParallelCorpus(
        pairs=pairs, source_path=str(source_path), target_path=str(target_path)
    )


def save_parallel_corpus(
    corpus: ParallelCorpus, source_path: str | Path, target_path: str | Path
) -> None:
    """Write the corpus back out, one raw sentence per line."""
    Path(source_path).write_text(
        "".join(src.raw + "\n" for src, _ in corpus.pairs), encoding="utf-8"
    )
    Path(target_path).write_text(
        "".join(tgt.raw + "\n" for _, tgt in corpus.pairs), encoding="utf-8"
    )


def load_dictionary(path: str | Path) -> list[DictionaryEntry]:
    """Read a tab-separated lexicon: ``source<TAB>target``, one entry per line."""
    entries = []
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            raise CorpusFormatError(f"{path}: blank line {lineno}")
        fields = line.split("\t")
        if len(fields) != 2:
            raise CorpusFormatError(
                f"{path}: line {lineno}: expected 2 tab-separated fields, "
                f"got {len(fields)}"
            )
        source = tuple(tokenize(fields[0]))
        target = tuple(tokenize(fields[1]))
        if not source or not target:
            raise CorpusFormatError(
                f"{path}: line {lineno}: empty source or target"
            )
        entries.append(DictionaryEntry(source=source, target=target))
    return entries


def save_dictionary(
    entries: Iterable[DictionaryEntry], path: str | Path
) -> None:
    Path(path).write_text(
        "".join(
            " ".join(e.source) + "\t" + " ".join(e.target) + "\n"
            for e in entries
        ),
        encoding="utf-8",
    )
