/** DOM wiring for the review console: context form, scenario replay, coaching. */

import { ApiRequestError, CuratorClient } from './api';
import { renderDecisionPanel, renderDiffPanel, renderErrorBanner, renderTracePanel } from './panels';
import type { ScenarioFixture } from './types';

const client = new CuratorClient(
  new URLSearchParams(window.location.search).get('api') ?? 'http://127.0.0.1:8000',
);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setKbVersion(version: number): void {
  el('kb-version-badge').textContent = `kb v${version}`;
}

function contextFromForm(): Record<string, unknown> | null {
  const requestText = el<HTMLTextAreaElement>('f-request').value.trim();
  const tags = el<HTMLInputElement>('f-tags').value
    .split(',')
    .map((t) => t.trim().toLowerCase())
    .filter(Boolean);
  const sphere = el<HTMLSelectElement>('f-sphere').value;
  if (!requestText && tags.length === 0) {
    el('decision-out').innerHTML =
      '<p class="muted">enter a request text or at least one topic tag</p>';
    return null;
  }
  const context: Record<string, unknown> = {
    request_text: requestText,
    topic_tags: tags,
    demographic_target: el<HTMLInputElement>('f-demographic').checked,
    skill_specific: el<HTMLInputElement>('f-skill').checked,
    sensitive: el<HTMLInputElement>('f-sensitive').checked,
    harm: el<HTMLInputElement>('f-harm').checked,
    diversity_preference: el<HTMLSelectElement>('f-preference').value,
    situatedness: el<HTMLInputElement>('f-situatedness').value,
  };
  if (sphere) context.sphere = sphere;
  return context;
}

function showError(target: HTMLElement, error: unknown, sourceText?: string): void {
  if (error instanceof ApiRequestError) {
    target.innerHTML = renderErrorBanner(error.apiError, sourceText);
  } else {
    target.innerHTML = renderErrorBanner({
      code: 'network',
      message: error instanceof Error ? error.message : String(error),
    });
  }
}

let lastContext: Record<string, unknown> | null = null;

async function submitContext(): Promise<void> {
  const context = contextFromForm();
  if (!context) return;
  const out = el('decision-out');
  try {
    const { body, kbVersion } = await client.decide(context);
    lastContext = context;
    setKbVersion(kbVersion);
    out.innerHTML = renderDecisionPanel(body, kbVersion);
    el('trace-out').innerHTML = renderTracePanel(body);
    el('coach-section').classList.remove('hidden');
  } catch (error) {
    showError(out, error);
  }
}

async function previewRule(): Promise<void> {
  if (!lastContext) return;
  const ruleText = el<HTMLTextAreaElement>('coach-rule').value;
  const out = el('coach-out');
  try {
    const { body, kbVersion } = await client.previewRule(ruleText, lastContext);
    setKbVersion(kbVersion);
    out.innerHTML = renderDiffPanel(body);
    el('coach-commit').removeAttribute('disabled');
  } catch (error) {
    el('coach-commit').setAttribute('disabled', '');
    showError(out, error, ruleText);
  }
}

async function commitRule(): Promise<void> {
  const ruleText = el<HTMLTextAreaElement>('coach-rule').value;
  const author = el<HTMLInputElement>('coach-author').value || 'console';
  const out = el('coach-out');
  try {
    const { body } = await client.commitRule(ruleText, author);
    setKbVersion(body.version);
    out.innerHTML = `<p class="commit-ok">committed as kb version ${body.version}</p>`;
    el('coach-commit').setAttribute('disabled', '');
    if (lastContext) await submitContext();
  } catch (error) {
    showError(out, error, ruleText);
  }
}

function fillFormFromFixture(fixture: ScenarioFixture): void {
  el<HTMLTextAreaElement>('f-request').value = fixture.context.request_text;
  el<HTMLInputElement>('f-tags').value = fixture.context.topic_tags.join(', ');
  el<HTMLSelectElement>('f-sphere').value = '';
  el<HTMLInputElement>('f-demographic').checked = fixture.context.demographic_target;
  el<HTMLInputElement>('f-skill').checked = fixture.context.skill_specific;
  el<HTMLInputElement>('f-sensitive').checked = fixture.context.sensitive;
  el<HTMLInputElement>('f-harm').checked = fixture.context.harm;
  el<HTMLSelectElement>('f-preference').value = fixture.context.diversity_preference;
  el<HTMLInputElement>('f-situatedness').value = fixture.context.situatedness;
}

async function loadScenarios(): Promise<void> {
  const select = el<HTMLSelectElement>('scenario-select');
  try {
    const { body, kbVersion } = await client.scenarios();
    setKbVersion(kbVersion);
    for (const fixture of body.fixtures) {
      const option = document.createElement('option');
      option.value = fixture.name;
      option.textContent = `${fixture.name} (expects ${fixture.expect})`;
      select.appendChild(option);
    }
    select.addEventListener('change', () => {
      const chosen = body.fixtures.find((f) => f.name === select.value);
      if (chosen) fillFormFromFixture(chosen);
    });
  } catch {
    select.setAttribute('disabled', '');
  }
}

export function boot(): void {
  el('decide-button').addEventListener('click', () => void submitContext());
  el('coach-preview').addEventListener('click', () => void previewRule());
  el('coach-commit').addEventListener('click', () => void commitRule());
  void loadScenarios();
}

boot();
