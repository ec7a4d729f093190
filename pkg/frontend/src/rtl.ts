// Per-session text direction for the context sentence and the input.
// Source languages may be right-to-left; the tool stays language-agnostic
// and lets the annotator flip direction once per session.

export type Direction = 'ltr' | 'rtl';

export function toggleDirection(current: Direction): Direction {
  return current === 'ltr' ? 'rtl' : 'ltr';
}

export function applyDirection(element: HTMLElement, direction: Direction): void {
  element.setAttribute('dir', direction);
}
