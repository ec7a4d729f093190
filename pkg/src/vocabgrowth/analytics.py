"""Annotation cost accounting: totals, translation speeds, trend slopes.

Money is handled as Decimal so ledger totals are exact. Slope fits run on
exact rationals internally, which makes the zero-residual-on-collinear
invariant hold literally instead of to within float noise.
"""

from __future__ import annotations

import json
import math
import statistics
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

COST_AXES = ("sentences", "words", "seconds", "dollars")


@dataclass(frozen=True)
class LedgerEntry:
    """One annotated unit's cost in every currency we track."""

    unit_id: str
    sentences: int
    source_words: int
    seconds: float
    dollars: Decimal

    def __post_init__(self) -> None:
        if (
            self.sentences < 0
            or self.source_words < 0
            or self.seconds < 0
            or self.dollars < 0
        ):
            raise ValueError(f"negative cost in ledger entry {self.unit_id}")


def accumulate(entries: Iterable[LedgerEntry], axis: str):
    """Total the chosen cost axis over the ledger."""
    if axis not in COST_AXES:
        raise ValueError(f"unknown cost axis: {axis!r}")
    if axis == "sentences":
        return sum(e.sentences for e in entries)
    if axis == "words":
        return sum(e.source_words for e in entries)
    if axis == "seconds":
        return sum(e.seconds for e in entries)
    return sum((e.dollars for e in entries), start=Decimal("0"))


@dataclass(frozen=True)
class SpeedSample:
    """Seconds spent on one unit of a given word count."""

    seconds: float
    words: int

    def __post_init__(self) -> None:
        if self.words < 1:
            raise ValueError("speed sample needs at least one word")
        if self.seconds < 0:
            raise ValueError("negative duration")

    @property
    def rate(self) -> float:
        return self.seconds / self.words


@dataclass(frozen=True)
class SpeedStats:
    mean: float
    median: float
    trimmed_mean: float  # slowest 1% of samples dropped, count rounded up
    sample_count: int
    trimmed_count: int


def speed_stats(samples: Sequence[SpeedSample]) -> SpeedStats:
    """Mean, median, and 1%-trimmed mean of per-sample seconds-per-word.

    All three are reported side by side: a handful of implausibly slow
    outliers (annotator walked away mid-task) can drag the raw mean, and
    hiding that silently would be worse than showing it.
    """
    if not samples:
        raise ValueError("no speed samples")
    rates = sorted(s.rate for s in samples)
    drop = min(math.ceil(len(rates) / 100), len(rates) - 1)
    kept = rates[: len(rates) - drop] if drop else rates
    return SpeedStats(
        mean=statistics.fmean(rates),
        median=statistics.median(rates),
        trimmed_mean=statistics.fmean(kept),
        sample_count=len(rates),
        trimmed_count=drop,
    )


@dataclass(frozen=True)
class HistogramBin:
    lower: float
    upper: float
    frequency: float


def histogram(
    samples: Sequence[SpeedSample], bin_width: float
) -> list[HistogramBin]:
    """Relative-frequency histogram of rates over bins [k*w, (k+1)*w)."""
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    if not samples:
        return []
    buckets: Counter[int] = Counter(
        int(s.rate // bin_width) for s in samples
    )
    n = len(samples)
    return [
        HistogramBin(lower=k * bin_width, upper=(k + 1) * bin_width, frequency=c / n)
        for k, c in sorted(buckets.items())
    ]


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    residual_sum_squares: float
    point_count: int


def fit_slope(points: Sequence[tuple[float, float]]) -> SlopeFit:
    """Ordinary least squares through (cost, score) points.

    Computed over exact rationals: collinear input gives a residual sum of
    squares of exactly zero, and the recovered slope is the true one.
    """
    if len(points) < 2:
        raise ValueError("slope fit needs at least 2 points")
    xs = [Fraction(x) for x, _ in points]
    ys = [Fraction(y) for _, y in points]
    n = len(points)
    sum_x = sum(xs)
    sum_y = sum(ys)
    sum_xx = sum(x * x for x in xs)
    sum_xy = sum(x * y for x, y in zip(xs, ys))
    denominator = n * sum_xx - sum_x * sum_x
    if denominator == 0:
        raise ValueError("degenerate fit: all points share one cost value")
    slope = (n * sum_xy - sum_x * sum_y) / denominator
    intercept = (sum_y - slope * sum_x) / n
    rss = sum((y - slope * x - intercept) ** 2 for x, y in zip(xs, ys))
    return SlopeFit(
        slope=float(slope),
        intercept=float(intercept),
        residual_sum_squares=float(rss),
        point_count=n,
    )


@dataclass(frozen=True)
class TrendComparison:
    slope_old: float
    slope_new: float
    ratio: float  # slope_new / slope_old; inf when the old segment is flat
    ratio_is_infinite: bool


def compare_trends(
    segment_old: Sequence[tuple[float, float]],
    segment_new: Sequence[tuple[float, float]],
) -> TrendComparison:
    """How much faster the new segment improves per unit cost than the old."""
    old = fit_slope(segment_old)
    new = fit_slope(segment_new)
    if old.slope == 0:
        return TrendComparison(
            slope_old=0.0,
            slope_new=new.slope,
            ratio=math.inf,
            ratio_is_infinite=True,
        )
    return TrendComparison(
        slope_old=old.slope,
        slope_new=new.slope,
        ratio=new.slope / old.slope,
        ratio_is_infinite=False,
    )


def load_records(path: str | Path) -> list[dict]:
    """Read a newline-delimited annotation record file."""
    records = []
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: line {lineno}: bad record: {exc}") from exc
    return records


def _record_words(record: dict) -> int:
    words = record.get("source_words")
    if words is None:
        trigger = record.get("trigger")
        words = len(trigger) if trigger else 0
    return int(words)


def ledger_from_records(records: Iterable[dict]) -> list[LedgerEntry]:
    """Map annotation records to ledger entries.

    Trigger records count zero full sentences; records without a trigger
    are treated as whole-sentence annotations.
    """
    entries = []
    for i, record in enumerate(records, start=1):
        is_trigger = bool(record.get("trigger"))
        entries.append(
            LedgerEntry(
                unit_id=str(record.get("task_id", f"record-{i}")),
                sentences=int(record.get("sentences", 0 if is_trigger else 1)),
                source_words=_record_words(record),
                seconds=float(record.get("elapsed_seconds", 0.0)),
                dollars=Decimal(str(record.get("dollars", "0"))),
            )
        )
    return entries


def speed_samples_from_records(records: Iterable[dict]) -> list[SpeedSample]:
    """Speed samples for every record with a known positive word count."""
    samples = []
    for record in records:
        words = _record_words(record)
        if words >= 1:
            samples.append(
                SpeedSample(
                    seconds=float(record.get("elapsed_seconds", 0.0)),
                    words=words,
                )
            )
    return samples
