// @vitest-environment jsdom
import { beforeEach, describe, expect, it } from 'vitest';

import { AnnotationApi, FetchLike, TaskPayload } from '../src/api.js';
import { AnnotatorApp } from '../src/app.js';

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

function task(id: string, sequence: number, context: string[], span: [number, number]): TaskPayload {
  return { task_id: id, context, highlight: span, sequence_no: sequence };
}

/** Scripted fake service: serves each task once, detects duplicates. */
class FakeService {
  tasks: TaskPayload[] = [];
  submitted = new Map<string, string>();
  served = new Set<string>();
  failNextFetch = false;

  fetchFn: FetchLike = async (url, init) => {
    if (this.failNextFetch) {
      this.failNextFetch = false;
      throw new TypeError('fetch failed');
    }
    if (url.includes('/task?')) {
      const next = this.tasks.find((t) => !this.served.has(t.task_id));
      if (!next) return new Response(null, { status: 204 });
      this.served.add(next.task_id);
      return jsonResponse(200, next);
    }
    const match = url.match(/\/task\/([^/?]+)$/);
    if (match && init?.method === 'POST') {
      const id = decodeURIComponent(match[1]!);
      const body = JSON.parse(String(init.body)) as { worker: string; translation: string };
      if (!body.translation.trim()) {
        return jsonResponse(422, { detail: 'translation is empty' });
      }
      if (this.submitted.has(id)) {
        return jsonResponse(409, { detail: `task ${id} is not pending` });
      }
      this.submitted.set(id, body.translation);
      return jsonResponse(200, {
        task_id: id,
        trigger: ['x'],
        translation: body.translation.split(/\s+/),
        elapsed_seconds: 1,
        worker_id: body.worker,
        dollars: '0.01',
      });
    }
    return jsonResponse(404, { detail: 'unknown route' });
  };
}

function mount(service: FakeService): AnnotatorApp {
  const root = document.createElement('div');
  document.body.replaceChildren(root);
  const api = new AnnotationApi('http://svc', service.fetchFn);
  return new AnnotatorApp(root, api, { worker: 'w1', tick: false });
}

function query<T extends HTMLElement>(selector: string): T {
  const node = document.body.querySelector<T>(selector);
  if (!node) throw new Error(`missing ${selector}`);
  return node;
}

describe('AnnotatorApp', () => {
  let service: FakeService;

  beforeEach(() => {
    service = new FakeService();
  });

  it('renders exactly the span tokens highlighted', async () => {
    service.tasks = [task('t00001', 1, ['w0', 'w1', 'w2', 'w3'], [1, 3])];
    const app = mount(service);
    await app.start();
    const marks = [...document.body.querySelectorAll('mark.trigger')];
    expect(marks.map((m) => m.textContent)).toEqual(['w1', 'w2']);
    expect(marks.map((m) => m.getAttribute('data-token-index'))).toEqual(['1', '2']);
    const plain = [...document.body.querySelectorAll('[data-testid="context"] span')];
    expect(plain.map((s) => s.textContent)).toEqual(['w0', 'w3']);
  });

  it('renders the no-work view on 204', async () => {
    const app = mount(service);
    await app.start();
    expect(query('[data-testid="no-work"]').textContent).toContain('No tasks remaining');
  });

  it('shows a retry banner on network failure and recovers', async () => {
    service.tasks = [task('t00001', 1, ['a'], [0, 1])];
    service.failNextFetch = true;
    const app = mount(service);
    await app.start();
    expect(query('[data-testid="retry-banner"]').textContent).toContain('Cannot reach');
    query<HTMLButtonElement>('[data-testid="retry"]').click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(app.state.kind).toBe('task');
  });

  it('disables submit while the input is empty or whitespace', async () => {
    service.tasks = [task('t00001', 1, ['a'], [0, 1])];
    const app = mount(service);
    await app.start();
    const input = query<HTMLInputElement>('[data-testid="translation-input"]');
    const button = query<HTMLButtonElement>('[data-testid="submit"]');
    expect(button.disabled).toBe(true);
    input.value = '   ';
    input.dispatchEvent(new Event('input'));
    expect(button.disabled).toBe(true);
    input.value = 'X';
    input.dispatchEvent(new Event('input'));
    expect(button.disabled).toBe(false);
  });

  it('submits, clears the form, and advances to a higher sequence number', async () => {
    service.tasks = [
      task('t00001', 1, ['a'], [0, 1]),
      task('t00002', 2, ['b'], [0, 1]),
    ];
    const app = mount(service);
    await app.start();
    const input = query<HTMLInputElement>('[data-testid="translation-input"]');
    input.value = 'X';
    await app.submitCurrent();
    expect(service.submitted.get('t00001')).toBe('X');
    expect(app.state.kind).toBe('task');
    if (app.state.kind === 'task') {
      expect(app.state.task.sequence_no).toBeGreaterThan(1);
    }
    const nextInput = query<HTMLInputElement>('[data-testid="translation-input"]');
    expect(nextInput.value).toBe('');
    expect(document.activeElement).toBe(nextInput); // keyboard-first flow
  });

  it('Enter submits via the form handler', async () => {
    service.tasks = [task('t00001', 1, ['a'], [0, 1])];
    const app = mount(service);
    await app.start();
    const input = query<HTMLInputElement>('[data-testid="translation-input"]');
    input.value = 'via enter';
    query<HTMLFormElement>('[data-testid="form"]').dispatchEvent(
      new Event('submit', { cancelable: true }),
    );
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(service.submitted.get('t00001')).toBe('via enter');
  });

  it('shows the conflict once and preserves input on 409', async () => {
    service.tasks = [
      task('t00001', 1, ['a'], [0, 1]),
      task('t00002', 2, ['b'], [0, 1]),
    ];
    service.submitted.set('t00001', 'someone else'); // already recorded
    const app = mount(service);
    await app.start();
    if (app.state.kind !== 'task') throw new Error('expected a task');
    expect(app.state.task.task_id).toBe('t00001');
    const input = query<HTMLInputElement>('[data-testid="translation-input"]');
    input.value = 'mine';
    await app.submitCurrent();
    const banners = [...document.body.querySelectorAll('[data-testid="banner"]')];
    expect(banners).toHaveLength(1);
    expect(banners[0]!.textContent).toContain('conflict');
    expect(query<HTMLInputElement>('[data-testid="translation-input"]').value).toBe('mine');
  });

  it('ignores a second submit while one is in flight', async () => {
    service.tasks = [task('t00001', 1, ['a'], [0, 1])];
    const app = mount(service);
    await app.start();
    const input = query<HTMLInputElement>('[data-testid="translation-input"]');
    input.value = 'X';
    const first = app.submitCurrent();
    const second = app.submitCurrent(); // double-click
    await Promise.all([first, second]);
    expect(service.submitted.size).toBe(1);
  });

  it('toggles text direction on the context block', async () => {
    service.tasks = [task('t00001', 1, ['a', 'b'], [0, 1])];
    const app = mount(service);
    await app.start();
    expect(query('[data-testid="context"]').getAttribute('dir')).toBe('ltr');
    query<HTMLButtonElement>('[data-testid="rtl-toggle"]').click();
    expect(query('[data-testid="context"]').getAttribute('dir')).toBe('rtl');
  });
});
