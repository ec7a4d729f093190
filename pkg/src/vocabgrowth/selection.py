"""Data-selection strategies and highlighted-trigger task construction.

Seven strategies share one driver: vocabulary-growth (``vg``) and its
trigger-only variant (``hng``) chase the most frequent uncovered n-gram,
the rest are cost baselines (random, shortest, longest, most-new,
moderate-new). All ties break toward the lowest sentence id so runs are
reproducible.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from decimal import Decimal

from .corpus import NGram, Sentence, subgrams, tokenize
from .coverage import CoverageIndex

logger = logging.getLogger(__name__)

VG = "vg"
HNG = "hng"
RANDOM = "random"
SHORTEST = "shortest"
LONGEST = "longest"
MOST_NEW = "mostnew"
MODERATE_NEW = "moderatenew"

STRATEGY_KINDS = (VG, HNG, RANDOM, SHORTEST, LONGEST, MOST_NEW, MODERATE_NEW)

DEFAULT_TARGET_UNKNOWN = 10
DEFAULT_MAX_SENTENCE_LEN = 60


class ConsistencyError(RuntimeError):
    """Selection state and coverage table disagree (out of sync inputs)."""


@dataclass
class Strategy:
    """A strategy kind plus the parameters that kind needs, and only those.

    ``seed`` is required for random; ``target_unknown`` defaults to 10 for
    moderate-new; ``max_sentence_len`` defaults to 60 for hng.
    """

    kind: str
    seed: int | None = None
    target_unknown: int | None = None
    max_sentence_len: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind: {self.kind!r}")
        if self.kind == RANDOM:
            if self.seed is None:
                raise ValueError("random strategy requires a seed")
        elif self.seed is not None:
            raise ValueError(f"{self.kind} strategy takes no seed")
        if self.kind == MODERATE_NEW:
            if self.target_unknown is None:
                self.target_unknown = DEFAULT_TARGET_UNKNOWN
        elif self.target_unknown is not None:
            raise ValueError(f"{self.kind} strategy takes no target_unknown")
        if self.kind == HNG:
            if self.max_sentence_len is None:
                self.max_sentence_len = DEFAULT_MAX_SENTENCE_LEN
        elif self.max_sentence_len is not None:
            raise ValueError(f"{self.kind} strategy takes no max_sentence_len")


@dataclass(frozen=True)
class Selection:
    """One selected sentence, with the trigger that led to it (vg/hng only).

    ``unit`` names what annotation is being solicited: the whole sentence,
    or just the trigger phrase shown in sentence context (hng).
    """

    sentence: Sentence
    trigger: NGram | None = None
    unit: str = "sentence"  # "sentence" | "trigger"


@dataclass(frozen=True)
class AnnotationTask:
    """A trigger to translate, shown highlighted inside a context sentence."""

    task_id: str
    sentence_id: int
    context_tokens: tuple[str, ...]
    highlight_span: tuple[int, int]  # [start, end) token indices
    trigger: NGram
    unit_price: Decimal
    sequence_no: int

    def __post_init__(self) -> None:
        start, end = self.highlight_span
        if not (0 <= start < end <= len(self.context_tokens)):
            raise ValueError(f"invalid highlight span {self.highlight_span}")
        if self.context_tokens[start:end] != self.trigger:
            raise ValueError("highlight span does not cover the trigger")


def find_span(tokens: Sequence[str], trigger: NGram) -> tuple[int, int] | None:
    """First occurrence of the trigger as a contiguous subsequence."""
    n = len(trigger)
    for i in range(len(tokens) - n + 1):
        if tuple(tokens[i : i + n]) == trigger:
            return (i, i + n)
    return None


class Pool:
    """The unlabeled sentences, indexed for containment and length queries."""

    def __init__(self, sentences: Iterable[Sentence]) -> None:
        ordered = sorted(sentences, key=lambda s: s.id)
        self._by_id: dict[int, Sentence] = {}
        for sentence in ordered:
            if sentence.id in self._by_id:
                raise ValueError(f"duplicate sentence id {sentence.id} in pool")
            self._by_id[sentence.id] = sentence
        # Posting lists are built once; removals leave stale ids that are
        # filtered against the live pool at query time.
        self._postings: dict[str, list[int]] = {}
        for sentence in ordered:
            for token in set(sentence.tokens):
                self._postings.setdefault(token, []).append(sentence.id)

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, sentence_id: int) -> bool:
        return sentence_id in self._by_id

    def sentences(self) -> list[Sentence]:
        return list(self._by_id.values())

    def ids(self) -> list[int]:
        return list(self._by_id)

    def get(self, sentence_id: int) -> Sentence:
        return self._by_id[sentence_id]

    def remove(self, sentence_id: int) -> Sentence:
        return self._by_id.pop(sentence_id)

    def total_words(self) -> int:
        return sum(len(s) for s in self._by_id.values())

    def shortest_containing(
        self, trigger: NGram, max_len: int | None = None
    ) -> Sentence | None:
        """Shortest pool sentence containing the trigger; ties to lowest id."""
        candidate_ids = min(
            (self._postings.get(tok, []) for tok in set(trigger)),
            key=len,
            default=[],
        )
        best: Sentence | None = None
        for sid in candidate_ids:
            sentence = self._by_id.get(sid)
            if sentence is None:
                continue
            if max_len is not None and len(sentence) > max_len:
                continue
            if best is not None and (len(sentence), sentence.id) >= (
                len(best),
                best.id,
            ):
                continue
            if find_span(sentence.tokens, trigger) is not None:
                best = sentence
        return best


class Selector:
    """Stateful driver applying one strategy to a pool and coverage index.

    Full-sentence strategies remove their selection from the pool and mark
    all its n-grams covered (the sentence is headed for annotation either
    way); hng covers only the trigger and leaves the sentence in the pool so
    later triggers can reuse it as context.
    """

    def __init__(
        self, strategy: Strategy, pool: Pool, index: CoverageIndex
    ) -> None:
        self.strategy = strategy
        self.pool = pool
        self.index = index
        self.rng = (
            random.Random(strategy.seed) if strategy.kind == RANDOM else None
        )

    def next_selection(self) -> Selection | None:
        """One selection step, or None at stopping/exhaustion."""
        kind = self.strategy.kind
        if kind in (VG, HNG):
            return self._next_trigger_driven(kind)
        if not self.pool:
            return None
        if kind == RANDOM:
            ids = self.pool.ids()
            chosen = self.pool.get(ids[self.rng.randrange(len(ids))])
        elif kind == SHORTEST:
            chosen = min(self.pool.sentences(), key=lambda s: (len(s), s.id))
        elif kind == LONGEST:
            chosen = min(self.pool.sentences(), key=lambda s: (-len(s), s.id))
        elif kind == MOST_NEW:
            chosen = min(
                self.pool.sentences(),
                key=lambda s: (-self._unknown_types(s), s.id),
            )
        else:  # moderate-new
            target = self.strategy.target_unknown
            chosen = min(
                self.pool.sentences(),
                key=lambda s: (abs(self._unknown_types(s) - target), s.id),
            )
        self.pool.remove(chosen.id)
        self.index.mark_sentence_covered(chosen)
        return Selection(sentence=chosen)

    def _next_trigger_driven(self, kind: str) -> Selection | None:
        trigger = self.index.next_trigger()
        if trigger is None:
            return None
        sentence = self.pool.shortest_containing(trigger)
        if sentence is None:
            raise ConsistencyError(
                f"trigger {' '.join(trigger)!r} occurs in the frequency table "
                "but in no pool sentence; table and pool are out of sync"
            )
        if kind == VG:
            self.pool.remove(sentence.id)
            self.index.mark_sentence_covered(sentence)
            return Selection(sentence=sentence, trigger=trigger)
        self.index.mark_trigger_covered(trigger)
        return Selection(sentence=sentence, trigger=trigger, unit="trigger")

    def _unknown_types(self, sentence: Sentence) -> int:
        return sum(
            1 for tok in set(sentence.tokens) if (tok,) not in self.index.covered
        )


def make_hng_task(
    selection: Selection,
    pool: Pool,
    price: Decimal,
    sequence_no: int,
    max_len: int = DEFAULT_MAX_SENTENCE_LEN,
) -> AnnotationTask | None:
    """Build the highlighted-trigger task for a selection.

    Context is the shortest containing sentence within the length cap; the
    highlight is the trigger's first occurrence. Returns None (and logs)
    when no containing sentence fits under the cap.
    """
    if selection.trigger is None:
        raise ValueError("selection carries no trigger")
    trigger = selection.trigger
    sentence = selection.sentence
    if len(sentence) > max_len:
        sentence = pool.shortest_containing(trigger, max_len=max_len)
        if sentence is None:
            logger.info(
                "trigger %r skipped: no containing sentence within %d tokens",
                " ".join(trigger),
                max_len,
            )
            return None
    span = find_span(sentence.tokens, trigger)
    assert span is not None  # guaranteed by shortest_containing
    return AnnotationTask(
        task_id=f"t{sequence_no:05d}",
        sentence_id=sentence.id,
        context_tokens=sentence.tokens,
        highlight_span=span,
        trigger=trigger,
        unit_price=price,
        sequence_no=sequence_no,
    )


def hng_task_stream(
    pool: Pool,
    index: CoverageIndex,
    price: Decimal,
    max_len: int = DEFAULT_MAX_SENTENCE_LEN,
    start_seq: int = 1,
) -> Iterator[AnnotationTask]:
    """Enumerate highlighted-trigger tasks in trigger-encounter order.

    Sequence numbers advance for every trigger encountered, so skipped
    (over-cap) triggers leave gaps. The index is advanced as triggers are
    encountered; pass a scratch copy if the live covered set must only
    reflect completed annotations.
    """
    strategy = Strategy(kind=HNG, max_sentence_len=max_len)
    selector = Selector(strategy, pool, index)
    sequence_no = start_seq - 1
    while (selection := selector.next_selection()) is not None:
        sequence_no += 1
        task = make_hng_task(selection, pool, price, sequence_no, max_len)
        if task is not None:
            yield task


def format_selection_record(
    sequence_no: int, strategy_kind: str, sentence_id: int, trigger: NGram | None
) -> str:
    """One stream line: ``sequence_no<TAB>strategy<TAB>sentence_id<TAB>trigger``."""
    trigger_field = " ".join(trigger) if trigger else "-"
    return f"{sequence_no}\t{strategy_kind}\t{sentence_id}\t{trigger_field}"


def parse_selection_record(
    line: str,
) -> tuple[int, str, int, NGram | None]:
    fields = line.rstrip("\n").split("\t")
    if len(fields) != 4:
        raise ValueError(f"malformed selection record: {line!r}")
    seq, kind, sid, trigger_field = fields
    trigger = None if trigger_field == "-" else tuple(tokenize(trigger_field))
    return int(seq), kind, int(sid), trigger
