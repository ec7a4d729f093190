"""A deterministic memorizing translator, the trainable stand-in system.

It keeps a phrase table of exactly the short segments it has been shown
(dictionary entries, annotated triggers, and full pairs of up to four
source tokens) and translates by greedy longest-match. Crude, but its
output quality responds to coverage, which is what the simulations need.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .corpus import DictionaryEntry, NGram

MAX_PHRASE_LEN = 4


@dataclass
class MemorizingTranslator:
    """Phrase table learned from observed segments; later entries win."""

    phrase_table: dict[NGram, tuple[str, ...]] = field(default_factory=dict)

    def observe(self, source: Sequence[str], target: Sequence[str]) -> None:
        """Record a translated segment; sources longer than 4 tokens are
        beyond exact-match reach and are ignored."""
        if 1 <= len(source) <= MAX_PHRASE_LEN:
            self.phrase_table[tuple(source)] = tuple(target)

    def translate(self, tokens: Sequence[str]) -> list[str]:
        """Greedy left-to-right longest match; unknown tokens copy through."""
        out: list[str] = []
        i = 0
        while i < len(tokens):
            for n in range(min(MAX_PHRASE_LEN, len(tokens) - i), 0, -1):
                entry = self.phrase_table.get(tuple(tokens[i : i + n]))
                if entry is not None:
                    out.extend(entry)
                    i += n
                    break
            else:
                out.append(tokens[i])
                i += 1
        return out

    def __len__(self) -> int:
        return len(self.phrase_table)


def train(
    pairs: Iterable[tuple[Sequence[str], Sequence[str]]] = (),
    trigger_annotations: Iterable[tuple[Sequence[str], Sequence[str]]] = (),
    dictionary: Iterable[DictionaryEntry] = (),
) -> MemorizingTranslator:
    """Build a translator from dictionary, labeled pairs, then triggers.

    Later observations overwrite earlier ones for the same source.
    """
    model = MemorizingTranslator()
    for entry in dictionary:
        model.observe(entry.source, entry.target)
    for source, target in pairs:
        model.observe(source, target)
    for source, target in trigger_annotations:
        model.observe(source, target)
    return model
