"""Replay selection strategies against a parallel-corpus oracle.

The oracle hands back reference translations (full sentences from the held
out target side, trigger phrases from a lexicon); the memorizing translator
is retrained every batch and scored on a test set, producing a learning
curve over the configured cost axis.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path

from .bleu import bleu
from .corpus import DictionaryEntry, NGram, ParallelCorpus
from .coverage import build_frequency_table, initialize_coverage
from .selection import HNG, VG, ConsistencyError, Pool, Selection, Selector, Strategy
from .translator import MemorizingTranslator

COST_AXES = ("sentences", "words", "seconds", "dollars")


class OracleMissError(LookupError):
    """The oracle has no translation for the requested unit."""

    def __init__(self, unit: str) -> None:
        super().__init__(f"oracle has no translation for {unit}")
        self.unit = unit


class ComposedLexicon(Mapping):
    """Trigger lexicon that falls back to token-by-token composition.

    Explicit entries win; a multi-token trigger with no entry of its own is
    translated by concatenating its tokens' unigram entries.
    """

    def __init__(self, entries: Iterable[DictionaryEntry]) -> None:
        self._entries: dict[NGram, tuple[str, ...]] = {
            e.source: e.target for e in entries
        }

    def __getitem__(self, trigger: NGram) -> tuple[str, ...]:
        hit = self._entries.get(trigger)
        if hit is not None:
            return hit
        parts: list[str] = []
        for token in trigger:
            unigram = self._entries.get((token,))
            if unigram is None:
                raise KeyError(trigger)
            parts.extend(unigram)
        return tuple(parts)

    def __contains__(self, trigger: object) -> bool:
        try:
            self[trigger]  # type: ignore[index]
        except KeyError:
            return False
        return True

    def __iter__(self):
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)


@dataclass
class OracleAnnotator:
    """Answers annotation requests from held-out references and a lexicon."""

    reference: dict[int, tuple[str, ...]]
    trigger_lexicon: Mapping | None = None

    @classmethod
    def from_corpus(
        cls, corpus: ParallelCorpus, trigger_lexicon: Mapping | None = None
    ) -> "OracleAnnotator":
        return cls(
            reference={src.id: tgt.tokens for src, tgt in corpus.pairs},
            trigger_lexicon=trigger_lexicon,
        )

    def annotate(self, selection: Selection) -> tuple[str, ...]:
        """Reference target for a full sentence, lexicon entry for a trigger."""
        if selection.unit == "trigger":
            assert selection.trigger is not None
            if self.trigger_lexicon is None:
                raise OracleMissError(f"trigger {' '.join(selection.trigger)!r}")
            try:
                return tuple(self.trigger_lexicon[selection.trigger])
            except KeyError:
                raise OracleMissError(
                    f"trigger {' '.join(selection.trigger)!r}"
                ) from None
        target = self.reference.get(selection.sentence.id)
        if target is None:
            raise OracleMissError(f"sentence id {selection.sentence.id}")
        return target


@dataclass
class CostModel:
    """Per-unit cost estimates for the seconds and dollars axes.

    Defaults follow the crowd-collection economics this toolkit is built
    around: cents-per-posting prices, and per-word translation speeds that
    are roughly three times faster for trigger phrases than for sentences.
    """

    dollars_per_sentence: Decimal = Decimal("0.10")
    dollars_per_trigger: Decimal = Decimal("0.01")
    seconds_per_word_sentence: float = 32.92
    seconds_per_word_trigger: float = 11.98


@dataclass
class SimulationConfig:
    strategy: Strategy
    batch_size: int = 100
    n_max: int = 4
    cost_axis: str = "words"
    costs: CostModel = field(default_factory=CostModel)

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.cost_axis not in COST_AXES:
            raise ValueError(f"unknown cost axis: {self.cost_axis!r}")


@dataclass(frozen=True)
class CurvePoint:
    cost: float | int | Decimal
    score: float


@dataclass
class LearningCurve:
    cost_unit: str
    points: list[CurvePoint] = field(default_factory=list)

    def append(self, cost, score: float) -> None:
        if self.points and cost <= self.points[-1].cost:
            raise ValueError("cumulative cost must be strictly increasing")
        self.points.append(CurvePoint(cost=cost, score=score))

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class SimulationResult:
    curve: LearningCurve
    selections: int
    coverage_covered: int
    coverage_total: int
    stop_reason: str  # "criterion" or "exhausted"


def run_simulation(
    config: SimulationConfig,
    corpus: ParallelCorpus,
    test_set: ParallelCorpus,
    dictionary: Iterable[DictionaryEntry] = (),
    trigger_lexicon: Mapping | None = None,
) -> SimulationResult:
    """Drive one selection strategy to its stopping point or pool exhaustion.

    Every ``batch_size`` annotations the translator is rebuilt from all
    observations so far and scored on the test set. On the sentences axis
    each annotation unit (full sentence or trigger phrase) counts as one
    training segment.
    """
    dictionary = list(dictionary)
    strategy = config.strategy
    if strategy.kind == HNG and trigger_lexicon is None:
        raise ValueError("hng simulation requires a trigger lexicon")
    pool_raws = {src.raw for src in corpus.sources}
    overlap = [src.raw for src in test_set.sources if src.raw in pool_raws]
    if overlap:
        raise ValueError(
            f"test set overlaps the pool ({len(overlap)} shared sentences)"
        )

    pool = Pool(corpus.sources)
    oracle = OracleAnnotator.from_corpus(corpus, trigger_lexicon)
    table = build_frequency_table(pool.sentences(), (), dictionary, config.n_max)
    index = initialize_coverage(table, (), dictionary, config.n_max)
    selector = Selector(strategy, pool, index)

    model = MemorizingTranslator()
    for entry in dictionary:
        model.observe(entry.source, entry.target)

    test_sources = [src.tokens for src in test_set.sources]
    test_references = [tgt.tokens for tgt in test_set.targets]

    curve = LearningCurve(cost_unit=config.cost_axis)
    units = 0
    words = 0
    seconds = 0.0
    dollars = Decimal("0")
    in_batch = 0

    def evaluate() -> None:
        hypotheses = [model.translate(src) for src in test_sources]
        score = bleu(hypotheses, test_references)
        cost = {
            "sentences": units,
            "words": words,
            "seconds": seconds,
            "dollars": dollars,
        }[config.cost_axis]
        curve.append(cost, score)

    while (selection := selector.next_selection()) is not None:
        target = oracle.annotate(selection)
        if selection.unit == "trigger":
            source_tokens: tuple[str, ...] = selection.trigger
            seconds += config.costs.seconds_per_word_trigger * len(source_tokens)
            dollars += config.costs.dollars_per_trigger
        else:
            source_tokens = selection.sentence.tokens
            seconds += config.costs.seconds_per_word_sentence * len(source_tokens)
            dollars += config.costs.dollars_per_sentence
        model.observe(source_tokens, target)
        units += 1
        words += len(source_tokens)
        in_batch += 1
        if in_batch == config.batch_size:
            evaluate()
            in_batch = 0

    if in_batch:
        evaluate()

    if strategy.kind in (VG, HNG):
        if not index.stopping_met():
            raise ConsistencyError(
                f"{strategy.kind} run ended with "
                f"{len(index.uncovered())} uncovered n-grams"
            )
        stop_reason = "criterion"
    else:
        stop_reason = "exhausted"
    return SimulationResult(
        curve=curve,
        selections=units,
        coverage_covered=index.covered_in_table(),
        coverage_total=len(table),
        stop_reason=stop_reason,
    )


def emit_curve(curve: LearningCurve, path: str | Path) -> None:
    """Write ``cumulative_cost,score`` CSV with a unit-bearing header.

    Costs are integral on the sentences/words axes and two decimal places
    on seconds/dollars; scores always carry four decimal places.
    """
    lines = [f"cumulative_cost_{curve.cost_unit},score"]
    for point in curve.points:
        if curve.cost_unit in ("sentences", "words"):
            cost_field = f"{int(point.cost)}"
        else:
            cost_field = f"{point.cost:.2f}"
        lines.append(f"{cost_field},{point.score:.4f}")
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def load_curve(path: str | Path) -> LearningCurve:
    """Read a curve CSV written by ``emit_curve``."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("cumulative_cost_"):
        raise ValueError(f"{path}: missing curve header")
    unit = lines[0].split(",")[0].removeprefix("cumulative_cost_")
    curve = LearningCurve(cost_unit=unit)
    for line in lines[1:]:
        cost_field, score_field = line.split(",")
        curve.append(float(cost_field), float(score_field))
    return curve


def run_manifest(
    config: SimulationConfig,
    corpus: ParallelCorpus,
    test_set: ParallelCorpus,
    result: SimulationResult,
    extra: dict | None = None,
) -> dict:
    """Reproducibility sidecar written alongside every emitted curve."""
    manifest = {
        "strategy": config.strategy.kind,
        "seed": config.strategy.seed,
        "batch_size": config.batch_size,
        "n_max": config.n_max,
        "cost_axis": config.cost_axis,
        "corpus_sha256": corpus.digest(),
        "test_sha256": test_set.digest(),
        "points": len(result.curve),
        "selections": result.selections,
        "stop_reason": result.stop_reason,
        "coverage": {
            "covered": result.coverage_covered,
            "total": result.coverage_total,
        },
    }
    if extra:
        manifest.update(extra)
    return manifest


def write_manifest(manifest: dict, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
