// The annotator loop: fetch a task, render the context with the trigger
// highlighted, take a translation, submit, advance. All coverage state
// lives server-side; this client only displays and posts.

import { AnnotationApi, ApiError, TaskPayload } from './api.js';
import { tokenSegments } from './highlight.js';
import { applyDirection, Direction, toggleDirection } from './rtl.js';

export type ViewState =
  | { kind: 'loading' }
  | { kind: 'task'; task: TaskPayload }
  | { kind: 'done' }
  | { kind: 'fetch-error'; message: string };

export interface AppOptions {
  worker: string;
  instructions?: string;
  now?: () => number;
  tick?: boolean; // elapsed-seconds ticker (off in tests)
}

const DEFAULT_INSTRUCTIONS =
  'Translate only the highlighted words. The rest of the sentence is ' +
  'context to help you pick the right translation.';

export class AnnotatorApp {
  state: ViewState = { kind: 'loading' };
  direction: Direction = 'ltr';

  private readonly instructions: string;
  private readonly now: () => number;
  private readonly tick: boolean;
  private servedAt = 0;
  private submitting = false;
  private banner: string | null = null;
  private bannerAction: 'retry-fetch' | 'next-task' | null = null;
  private pendingInput = '';
  private ticker: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: AnnotationApi,
    private readonly options: AppOptions,
  ) {
    this.instructions = options.instructions ?? DEFAULT_INSTRUCTIONS;
    this.now = options.now ?? (() => Date.now());
    this.tick = options.tick ?? true;
  }

  async start(): Promise<void> {
    await this.fetchNext();
  }

  async fetchNext(): Promise<void> {
    this.state = { kind: 'loading' };
    this.banner = null;
    this.bannerAction = null;
    this.render();
    try {
      const task = await this.api.nextTask(this.options.worker);
      if (task === null) {
        this.state = { kind: 'done' };
      } else {
        this.state = { kind: 'task', task };
        this.servedAt = this.now();
        this.pendingInput = '';
      }
    } catch (error) {
      // Nothing held client-side is lost; the served task stays leased
      // server-side and will be re-served to this worker on retry.
      this.state = { kind: 'fetch-error', message: describe(error) };
      this.bannerAction = 'retry-fetch';
    }
    this.render();
  }

  /** Submit the current input; resolves when the view has settled. */
  async submitCurrent(): Promise<void> {
    if (this.state.kind !== 'task' || this.submitting) return;
    const input = this.inputElement();
    const text = input ? input.value : this.pendingInput;
    if (!text.trim()) return;
    const task = this.state.task;
    this.submitting = true;
    this.renderSubmitDisabled();
    try {
      await this.api.submit(task.task_id, this.options.worker, text);
      this.submitting = false;
      await this.fetchNext();
    } catch (error) {
      this.submitting = false;
      this.pendingInput = text; // input preserved on every failure path
      if (error instanceof ApiError && error.status === 409) {
        this.banner = `Already recorded elsewhere (conflict): ${error.detail}`;
        this.bannerAction = 'next-task';
      } else if (error instanceof ApiError) {
        this.banner = `Submission rejected (${error.status}): ${error.detail}`;
        this.bannerAction = null;
      } else {
        this.banner = `Network problem: ${describe(error)}. Your text is kept; retry.`;
        this.bannerAction = null;
      }
      this.render();
    }
  }

  toggleTextDirection(): void {
    this.direction = toggleDirection(this.direction);
    this.render();
  }

  dispose(): void {
    if (this.ticker !== null) clearInterval(this.ticker);
  }

  private inputElement(): HTMLInputElement | null {
    return this.root.querySelector<HTMLInputElement>('[data-testid="translation-input"]');
  }

  private renderSubmitDisabled(): void {
    const button = this.root.querySelector<HTMLButtonElement>('[data-testid="submit"]');
    if (button) button.disabled = true;
  }

  private render(): void {
    if (this.ticker !== null) {
      clearInterval(this.ticker);
      this.ticker = null;
    }
    this.root.replaceChildren();

    const header = el('header', { class: 'annotator-header' });
    header.append(
      el('span', { 'data-testid': 'worker' }, `worker: ${this.options.worker}`),
    );
    const rtlButton = el(
      'button',
      { type: 'button', 'data-testid': 'rtl-toggle' },
      this.direction === 'ltr' ? 'Text direction: LTR' : 'Text direction: RTL',
    );
    rtlButton.addEventListener('click', () => this.toggleTextDirection());
    header.append(rtlButton);
    this.root.append(header);

    if (this.banner) {
      const banner = el('div', { class: 'banner', 'data-testid': 'banner' }, this.banner);
      if (this.bannerAction === 'next-task') {
        const next = el('button', { type: 'button', 'data-testid': 'banner-next' }, 'Load next task');
        next.addEventListener('click', () => void this.fetchNext());
        banner.append(' ', next);
      }
      this.root.append(banner);
    }

    switch (this.state.kind) {
      case 'loading':
        this.root.append(el('p', { 'data-testid': 'loading' }, 'Loading…'));
        return;
      case 'done':
        this.root.append(
          el('p', { 'data-testid': 'no-work' }, 'No tasks remaining. Thank you!'),
        );
        return;
      case 'fetch-error': {
        const banner = el(
          'div',
          { class: 'banner', 'data-testid': 'retry-banner' },
          `Cannot reach the service: ${this.state.message} `,
        );
        const retry = el('button', { type: 'button', 'data-testid': 'retry' }, 'Retry');
        retry.addEventListener('click', () => void this.fetchNext());
        banner.append(retry);
        this.root.append(banner);
        return;
      }
      case 'task':
        this.renderTask(this.state.task);
        return;
    }
  }

  private renderTask(task: TaskPayload): void {
    this.root.append(
      el('p', { class: 'instructions', 'data-testid': 'instructions' }, this.instructions),
    );
    this.root.append(
      el(
        'p',
        { 'data-testid': 'sequence' },
        `task ${task.task_id} (#${task.sequence_no})`,
      ),
    );

    const context = el('p', { class: 'context', 'data-testid': 'context' });
    applyDirection(context, this.direction);
    const segments = tokenSegments(task.context, task.highlight);
    segments.forEach((segment, position) => {
      if (position > 0) context.append(' ');
      if (segment.highlighted) {
        context.append(
          el('mark', { class: 'trigger', 'data-token-index': String(segment.index) }, segment.text),
        );
      } else {
        context.append(
          el('span', { 'data-token-index': String(segment.index) }, segment.text),
        );
      }
    });
    this.root.append(context);

    const form = el('form', { 'data-testid': 'form' }) as HTMLFormElement;
    const input = el('input', {
      type: 'text',
      'data-testid': 'translation-input',
      placeholder: 'Translation of the highlighted words',
      autocomplete: 'off',
      dir: 'auto',
    }) as HTMLInputElement;
    input.value = this.pendingInput;
    const button = el(
      'button',
      { type: 'submit', 'data-testid': 'submit' },
      'Submit',
    ) as HTMLButtonElement;
    button.disabled = !input.value.trim();
    input.addEventListener('input', () => {
      button.disabled = !input.value.trim();
    });
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      void this.submitCurrent();
    });
    form.append(input, ' ', button);
    this.root.append(form);

    const elapsed = el('p', { class: 'elapsed', 'data-testid': 'elapsed' });
    const update = () => {
      const seconds = Math.max(0, Math.round((this.now() - this.servedAt) / 1000));
      elapsed.textContent = `elapsed: ${seconds}s (display only; the service keeps official time)`;
    };
    update();
    if (this.tick) this.ticker = setInterval(update, 1000);
    this.root.append(elapsed);

    input.focus();
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}

function el(
  tag: string,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) node.textContent = text;
  return node;
}
