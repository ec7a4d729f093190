"""N-gram coverage tracking: frequency table, trigger order, stopping rule.

An n-gram counts as covered once it occurs in the labeled data (including
dictionary entries). Triggers are handed out in descending frequency; the
process stops when every n-gram in the table is covered.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path

from .corpus import (
    MAX_NGRAM_ORDER,
    CorpusFormatError,
    DictionaryEntry,
    NGram,
    Sentence,
    extract_ngrams,
    subgrams,
)

FrequencyTable = Counter  # NGram -> occurrence count over pool + labeled data


def build_frequency_table(
    pool: Iterable[Sentence],
    labeled_sources: Iterable[Sentence] = (),
    dictionary: Iterable[DictionaryEntry] = (),
    n_max: int = MAX_NGRAM_ORDER,
) -> Counter[NGram]:
    """Count n-grams over all available sentence data, labeled and unlabeled.

    Dictionary entries seed coverage, not frequency, so the ``dictionary``
    argument is accepted for symmetry with ``initialize_coverage`` but does
    not contribute counts.
    """
    del dictionary
    table: Counter[NGram] = Counter()
    for sentence in pool:
        table.update(extract_ngrams(sentence, n_max))
    for sentence in labeled_sources:
        table.update(extract_ngrams(sentence, n_max))
    return table


def sorted_ngrams(table: Counter[NGram]) -> list[NGram]:
    """Table keys by descending count; ties by ascending order, then tokens.

    The tie-break makes the ordering total, so trigger sequences are
    reproducible bit-for-bit.
    """
    return sorted(table, key=lambda g: (-table[g], len(g), g))


@dataclass(frozen=True)
class CoverageStats:
    covered_count: int
    total_count: int
    fraction: float
    hit_rate: float | None  # fraction of collected triggers seen in the test set


class CoverageIndex:
    """Covered set plus a forward-only cursor into the sorted n-gram list.

    Mutation is single-writer: callers serialize ``mark_covered`` against
    reads of ``next_trigger``/``stopping_met``.
    """

    def __init__(
        self,
        table: Counter[NGram],
        covered: Iterable[NGram] = (),
        n_max: int = MAX_NGRAM_ORDER,
    ) -> None:
        self.table = table
        self.order = sorted_ngrams(table)
        self.covered: set[NGram] = set(covered)
        self.cursor = 0
        self.n_max = n_max

    def next_trigger(self) -> NGram | None:
        """First uncovered entry at or after the cursor, or None when done.

        Advances the cursor past covered entries; the cursor never moves
        backwards, so entries before it are always covered.
        """
        while self.cursor < len(self.order):
            candidate = self.order[self.cursor]
            if candidate not in self.covered:
                return candidate
            self.cursor += 1
        return None

    def mark_covered(self, ngrams: Iterable[NGram]) -> None:
        """Grow the covered set; it never shrinks."""
        self.covered.update(ngrams)

    def mark_sentence_covered(self, sentence: Sentence) -> None:
        """Cover every n-gram of a sentence that joined the labeled data."""
        self.mark_covered(extract_ngrams(sentence, self.n_max))

    def mark_trigger_covered(self, trigger: NGram) -> None:
        """Cover an annotated trigger and all its sub-n-grams."""
        self.mark_covered(subgrams(trigger))

    def stopping_met(self) -> bool:
        """True once every n-gram in the table is covered."""
        return self.next_trigger() is None

    def covered_in_table(self) -> int:
        return sum(1 for g in self.table if g in self.covered)

    def uncovered(self) -> list[NGram]:
        return [g for g in self.table if g not in self.covered]

    def stats(
        self,
        test_set: Iterable[Sentence] = (),
        collected: Iterable[NGram] | None = None,
    ) -> CoverageStats:
        """Coverage counts, plus the share of collected triggers that occur
        in the test set at all (``hit_rate``; None when nothing was collected).
        """
        covered_count = self.covered_in_table()
        total = len(self.table)
        fraction = covered_count / total if total else 0.0
        hit_rate = None
        if collected is not None:
            collected = list(collected)
            if collected:
                test_ngrams: set[NGram] = set()
                for sentence in test_set:
                    test_ngrams.update(extract_ngrams(sentence, self.n_max))
                hits = sum(1 for g in collected if g in test_ngrams)
                hit_rate = hits / len(collected)
        return CoverageStats(
            covered_count=covered_count,
            total_count=total,
            fraction=fraction,
            hit_rate=hit_rate,
        )


def initialize_coverage(
    table: Counter[NGram],
    labeled_sources: Iterable[Sentence] = (),
    dictionary: Iterable[DictionaryEntry] = (),
    n_max: int = MAX_NGRAM_ORDER,
) -> CoverageIndex:
    """Seed coverage from already-labeled sentences and the dictionary.

    Dictionary entries are existing labeled data: their source phrases (and
    the phrases' sub-n-grams, which necessarily also occur there) start out
    covered.
    """
    index = CoverageIndex(table, n_max=n_max)
    for sentence in labeled_sources:
        index.mark_sentence_covered(sentence)
    for entry in dictionary:
        index.mark_covered(subgrams(entry.source))
    return index


def save_snapshot(index: CoverageIndex, path: str | Path) -> None:
    """Write ``count<TAB>ngram<TAB>covered-flag`` lines for inspect/resume.

    Covered n-grams absent from the table (seeded externally, e.g. from a
    dictionary) are listed with count 0.
    """
    lines = []
    for gram in index.order:
        flag = 1 if gram in index.covered else 0
        lines.append(f"{index.table[gram]}\t{' '.join(gram)}\t{flag}")
    for gram in sorted(index.covered - set(index.table)):
        lines.append(f"0\t{' '.join(gram)}\t1")
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def load_snapshot(path: str | Path, n_max: int = MAX_NGRAM_ORDER) -> CoverageIndex:
    """Rebuild a CoverageIndex from a snapshot file."""
    table: Counter[NGram] = Counter()
    covered: set[NGram] = set()
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        fields = line.split("\t")
        if len(fields) != 3:
            raise CorpusFormatError(
                f"{path}: line {lineno}: expected 3 tab-separated fields"
            )
        count_str, gram_str, flag_str = fields
        gram = tuple(gram_str.split(" "))
        count = int(count_str)
        if count > 0:
            table[gram] = count
        if flag_str == "1":
            covered.add(gram)
    return CoverageIndex(table, covered=covered, n_max=n_max)
