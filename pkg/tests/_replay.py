"""Brute-force replay oracle for trigger-driven selection.

Deliberately independent of the package internals: it recounts everything
from scratch and scans the full sorted list and pool at every step, straight
from the written selection rules. Slow on purpose; exists to cross-check the
optimized implementation (cursor, posting lists) against first principles.
"""

from __future__ import annotations


def all_ngrams(tokens, n_max=4):
    out = []
    for n in range(1, n_max + 1):
        for i in range(len(tokens) - n + 1):
            out.append(tuple(tokens[i : i + n]))
    return out


def contains(tokens, gram):
    n = len(gram)
    return any(tuple(tokens[i : i + n]) == gram for i in range(len(tokens) - n + 1))


def replay_vg(pool_token_lists, n_max=4):
    """Full-sentence trigger-driven selection, replayed naively.

    Pool sentences get ids 1..N by position. Returns the selected id
    sequence, the trigger sequence, cumulative selected words, and the
    final covered set.
    """
    counts: dict[tuple, int] = {}
    for tokens in pool_token_lists:
        for gram in all_ngrams(tokens, n_max):
            counts[gram] = counts.get(gram, 0) + 1
    order = sorted(counts, key=lambda g: (-counts[g], len(g), g))

    remaining = {i + 1: list(toks) for i, toks in enumerate(pool_token_lists)}
    covered: set[tuple] = set()
    selected_ids = []
    triggers = []
    words = 0
    while True:
        trigger = next((g for g in order if g not in covered), None)
        if trigger is None:
            break
        best = None
        for sid in sorted(remaining):
            tokens = remaining[sid]
            if contains(tokens, trigger):
                if best is None or (len(tokens), sid) < (
                    len(remaining[best]),
                    best,
                ):
                    best = sid
        assert best is not None, f"no sentence contains trigger {trigger}"
        triggers.append(trigger)
        selected_ids.append(best)
        tokens = remaining.pop(best)
        covered.update(all_ngrams(tokens, n_max))
        words += len(tokens)
    uncovered = [g for g in counts if g not in covered]
    assert not uncovered, f"{len(uncovered)} n-grams uncovered after stop"
    return selected_ids, triggers, words, covered
