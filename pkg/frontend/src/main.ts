import { AnnotationApi } from './api.js';
import { AnnotatorApp } from './app.js';

function workerId(params: URLSearchParams): string {
  const given = params.get('worker');
  if (given) return given;
  const generated = `w-${Math.random().toString(36).slice(2, 8)}`;
  params.set('worker', generated);
  history.replaceState(null, '', `?${params.toString()}`);
  return generated;
}

const params = new URLSearchParams(window.location.search);
const base = params.get('service') ?? 'http://127.0.0.1:8000';
const root = document.getElementById('annotator');
if (!root) throw new Error('missing #annotator mount point');

const app = new AnnotatorApp(root, new AnnotationApi(base), {
  worker: workerId(params),
  instructions: params.get('instructions') ?? undefined,
});
void app.start();
