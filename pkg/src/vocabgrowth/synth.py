"""Seeded synthetic Zipfian parallel corpus for experiments and tests.

Source tokens are drawn from a Zipf-weighted vocabulary; the target side is
a deterministic token-for-token mapping, so an oracle translation exists
for any source fragment. A fraction of sentences are exact repeats of
earlier ones, mimicking the boilerplate redundancy of real news corpora.
"""

from __future__ import annotations

import argparse
import random
from bisect import bisect_right
from pathlib import Path

from .corpus import (
    DictionaryEntry,
    ParallelCorpus,
    Sentence,
    save_dictionary,
    save_parallel_corpus,
)


def map_token(token: str) -> str:
    """The oracle's token-level translation (uppercase of the source)."""
    return token.upper()


class ZipfVocabulary:
    """Ranked vocabulary with 1/rank sampling weights."""

    def __init__(self, size: int) -> None:
        self.tokens = [f"w{rank:03d}" for rank in range(1, size + 1)]
        cumulative = []
        total = 0.0
        for rank in range(1, size + 1):
            total += 1.0 / rank
            cumulative.append(total)
        self._cumulative = cumulative
        self._total = total

    def sample(self, rng: random.Random) -> str:
        r = rng.random() * self._total
        return self.tokens[bisect_right(self._cumulative, r)]


def generate_corpus(
    n_sentences: int = 1000,
    vocab_size: int = 200,
    seed: int = 42,
    min_len: int = 2,
    max_len: int = 12,
    repeat_prob: float = 0.15,
    exclude_raws: frozenset[str] | set[str] = frozenset(),
    id_offset: int = 0,
) -> ParallelCorpus:
    """Generate aligned source/target sentences under a fixed seed.

    ``exclude_raws`` lets callers keep a test split disjoint from the pool.
    """
    rng = random.Random(seed)
    vocab = ZipfVocabulary(vocab_size)
    pairs = []
    raws: list[str] = []
    for i in range(1, n_sentences + 1):
        if raws and rng.random() < repeat_prob:
            raw = raws[rng.randrange(len(raws))]
        else:
            while True:
                length = rng.randint(min_len, max_len)
                raw = " ".join(vocab.sample(rng) for _ in range(length))
                if raw not in exclude_raws:
                    break
        raws.append(raw)
        source = Sentence.from_raw(id_offset + i, raw)
        target_raw = " ".join(map_token(tok) for tok in source.tokens)
        target = Sentence.from_raw(id_offset + i, target_raw)
        pairs.append((source, target))
    return ParallelCorpus(pairs=tuple(pairs))


def token_lexicon(vocab_size: int = 200) -> list[DictionaryEntry]:
    """Unigram lexicon covering the whole synthetic vocabulary."""
    return [
        DictionaryEntry(source=(tok,), target=(map_token(tok),))
        for tok in ZipfVocabulary(vocab_size).tokens
    ]


def generate_splits(
    n_pool: int = 1000,
    n_test: int = 200,
    vocab_size: int = 200,
    seed: int = 42,
    min_len: int = 2,
    max_len: int = 12,
    repeat_prob: float = 0.15,
) -> tuple[ParallelCorpus, ParallelCorpus]:
    """A pool corpus plus a test corpus with no shared source lines."""
    pool = generate_corpus(
        n_pool, vocab_size, seed, min_len, max_len, repeat_prob
    )
    pool_raws = {src.raw for src, _ in pool.pairs}
    test = generate_corpus(
        n_test,
        vocab_size,
        seed + 1,
        min_len,
        max_len,
        repeat_prob=0.0,
        exclude_raws=pool_raws,
    )
    return pool, test


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        description="Generate a synthetic Zipfian parallel corpus."
    )
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--sentences", type=int, default=1000)
    parser.add_argument("--test-sentences", type=int, default=200)
    parser.add_argument("--vocab", type=int, default=200)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--min-len", type=int, default=2)
    parser.add_argument("--max-len", type=int, default=12)
    parser.add_argument("--repeat-prob", type=float, default=0.15)
    args = parser.parse_args(argv)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    pool, test = generate_splits(
        n_pool=args.sentences,
        n_test=args.test_sentences,
        vocab_size=args.vocab,
        seed=args.seed,
        min_len=args.min_len,
        max_len=args.max_len,
        repeat_prob=args.repeat_prob,
    )
    save_parallel_corpus(pool, outdir / "pool.src", outdir / "pool.tgt")
    save_parallel_corpus(test, outdir / "test.src", outdir / "test.tgt")
    save_dictionary(token_lexicon(args.vocab), outdir / "lexicon.tsv")
    print(
        f"wrote {len(pool)} pool pairs, {len(test)} test pairs, "
        f"{args.vocab}-entry lexicon to {outdir}"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
