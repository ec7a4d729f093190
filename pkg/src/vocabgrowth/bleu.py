"""Corpus-level BLEU: modified n-gram precisions and brevity penalty.

Single reference per hypothesis, case-sensitive, no smoothing by default
(an add-one flag exists for sentence-level diagnostics where zero counts
are routine).
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

TokenList = Sequence[str]


@dataclass(frozen=True)
class BleuResult:
    score: float
    match_counts: tuple[int, ...]  # clipped matches per order 1..max_n
    total_counts: tuple[int, ...]  # hypothesis n-grams per order
    brevity_penalty: float
    hypothesis_length: int
    reference_length: int

    @property
    def precisions(self) -> tuple[Fraction, ...]:
        return tuple(
            Fraction(m, t) if t else Fraction(0)
            for m, t in zip(self.match_counts, self.total_counts)
        )


def _order_counts(tokens: TokenList, n: int) -> Counter[tuple[str, ...]]:
    return Counter(
        tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)
    )


def corpus_bleu(
    hypotheses: Sequence[TokenList],
    references: Sequence[TokenList],
    max_n: int = 4,
    smooth: bool = False,
) -> BleuResult:
    """Score a corpus of tokenized hypotheses against single references.

    Each reference n-gram is credited at most as many times as it occurs in
    the reference (modified precision); the geometric mean over orders
    1..max_n is scaled by exp(min(0, 1 - r/c)).
    """
    if not hypotheses:
        raise ValueError("empty hypothesis list")
    if len(hypotheses) != len(references):
        raise ValueError(
            f"hypothesis/reference count mismatch: "
            f"{len(hypotheses)} vs {len(references)}"
        )
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            hyp_counts = _order_counts(hyp, n)
            if not hyp_counts:
                continue
            ref_counts = _order_counts(ref, n)
            totals[n - 1] += sum(hyp_counts.values())
            matches[n - 1] += sum(
                min(count, ref_counts[gram])
                for gram, count in hyp_counts.items()
            )
    if hyp_len == 0:
        bp = 0.0
    else:
        bp = math.exp(min(0.0, 1.0 - ref_len / hyp_len))
    # Orders with no hypothesis n-grams at all carry no evidence and stay
    # out of the mean (so a corpus of 3-token sentences is scored over
    # orders 1..3, and identical hypothesis/reference still scores 1).
    active = [(m, t) for m, t in zip(matches, totals) if t > 0]
    if not active:
        score = 0.0
    elif smooth:
        log_sum = sum(math.log((m + 1) / (t + 1)) for m, t in active)
        score = bp * math.exp(log_sum / len(active))
    elif any(m == 0 for m, _ in active):
        score = 0.0
    else:
        log_sum = sum(math.log(m / t) for m, t in active)
        score = bp * math.exp(log_sum / len(active))
    return BleuResult(
        score=score,
        match_counts=tuple(matches),
        total_counts=tuple(totals),
        brevity_penalty=bp,
        hypothesis_length=hyp_len,
        reference_length=ref_len,
    )


def bleu(
    hypotheses: Sequence[TokenList],
    references: Sequence[TokenList],
    max_n: int = 4,
    smooth: bool = False,
) -> float:
    return corpus_bleu(hypotheses, references, max_n, smooth).score
