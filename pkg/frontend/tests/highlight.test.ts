import { describe, expect, it } from 'vitest';

import { highlightedTokens, tokenSegments, validateSpan } from '../src/highlight.js';

// Deterministic 50-task fixture sweeping span positions, widths 1..4, and
// both LTR and RTL scripts.
interface Fixture {
  context: string[];
  highlight: [number, number];
}

function buildFixtures(): Fixture[] {
  const fixtures: Fixture[] = [];
  const rtlWords = ['کتاب', 'پانی', 'شہر', 'دن', 'رات', 'سال'];
  for (let i = 0; i < 50; i++) {
    const length = 2 + (i % 9);
    const rtl = i % 3 === 0;
    const context = Array.from({ length }, (_, t) =>
      rtl ? `${rtlWords[t % rtlWords.length]}${t}` : `tok${i}_${t}`,
    );
    const width = 1 + (i % Math.min(4, length));
    const start = (i * 7) % (length - width + 1);
    fixtures.push({ context, highlight: [start, start + width] });
  }
  return fixtures;
}

describe('tokenSegments', () => {
  it('marks exactly the span tokens across the 50-task fixture set', () => {
    for (const fixture of buildFixtures()) {
      const [start, end] = fixture.highlight;
      const segments = tokenSegments(fixture.context, fixture.highlight);
      expect(segments.map((s) => s.text)).toEqual(fixture.context);
      for (const segment of segments) {
        expect(segment.highlighted).toBe(
          segment.index >= start && segment.index < end,
        );
      }
      expect(highlightedTokens(fixture.context, fixture.highlight)).toEqual(
        fixture.context.slice(start, end),
      );
    }
  });

  it('handles a span covering the whole sentence', () => {
    expect(highlightedTokens(['a', 'b'], [0, 2])).toEqual(['a', 'b']);
  });

  it('rejects out-of-bounds and empty spans', () => {
    expect(() => validateSpan(['a', 'b'], [1, 1])).toThrow();
    expect(() => validateSpan(['a', 'b'], [0, 3])).toThrow();
    expect(() => validateSpan(['a', 'b'], [-1, 1])).toThrow();
    expect(() => validateSpan(['a'], [0.5, 1])).toThrow();
  });
});
