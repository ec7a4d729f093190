// Pure view model for the highlighted context sentence. Kept DOM-free so
// highlight fidelity can be checked token-for-token in tests.

export interface TokenSegment {
  text: string;
  index: number;
  highlighted: boolean;
}

export function validateSpan(context: string[], span: [number, number]): void {
  const [start, end] = span;
  if (!(Number.isInteger(start) && Number.isInteger(end))) {
    throw new Error(`non-integer highlight span [${start}, ${end})`);
  }
  if (!(0 <= start && start < end && end <= context.length)) {
    throw new Error(
      `highlight span [${start}, ${end}) out of bounds for ${context.length} tokens`,
    );
  }
}

/** One segment per token, flagged when it falls inside the span. */
export function tokenSegments(
  context: string[],
  span: [number, number],
): TokenSegment[] {
  validateSpan(context, span);
  const [start, end] = span;
  return context.map((text, index) => ({
    text,
    index,
    highlighted: start <= index && index < end,
  }));
}

/** Exactly the tokens an annotator sees highlighted. */
export function highlightedTokens(
  context: string[],
  span: [number, number],
): string[] {
  return tokenSegments(context, span)
    .filter((segment) => segment.highlighted)
    .map((segment) => segment.text);
}
