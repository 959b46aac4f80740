/** HTML renderers for the decision panel, trace, coaching diff, and errors.
 *
 * Pure string -> string functions so they can be snapshot-tested without a
 * browser. Every verdict, label, and diff shown comes verbatim from the API
 * payloads passed in; there is no client-side ethics computation.
 */

import { buildGraphView, renderGraphSvg } from './graph';
import type { ApiError, CoachingPreview, Decision } from './types';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function badge(text: string, kind: string): string {
  return `<span class="badge badge-${kind}">${escapeHtml(text)}</span>`;
}

export function renderDecisionPanel(decision: Decision, kbVersion: number): string {
  const instruments = decision.instruments.length
    ? decision.instruments.map((i) => badge(i, 'instrument')).join(' ')
    : '<span class="muted">none</span>';
  const prevailing = decision.prevailing.length
    ? decision.prevailing.map((p) => badge(p, 'prevailing')).join(' ')
    : '<span class="muted">none</span>';
  const contested = decision.contested
    ? badge('contested', 'contested')
    : badge('uncontested', 'ok');
  return [
    '<div class="decision-panel">',
    `  <div class="action-line"><span class="action" data-action="${escapeHtml(decision.action)}">${escapeHtml(decision.action)}</span> ${contested}</div>`,
    `  <dl><dt>prevailing</dt><dd>${prevailing}</dd>`,
    `  <dt>instruments</dt><dd>${instruments}</dd>`,
    `  <dt>kb version</dt><dd class="kb-version">${kbVersion}</dd></dl>`,
    `  ${renderGraphSvg(buildGraphView(decision))}`,
    '</div>',
  ].join('\n');
}

export function renderTracePanel(decision: Decision): string {
  const rows: string[] = [];
  for (const entry of decision.trace) {
    switch (entry.step) {
      case 'applicable':
        rows.push(
          `<li class="trace-applicable"><b>${escapeHtml(entry.argument)}</b> [${escapeHtml(entry.stance)}] promotes ${entry.promotes.map(escapeHtml).join(', ')}` +
            (entry.premises.length
              ? ` <span class="muted">because ${entry.premises.map(escapeHtml).join(', ')}</span>`
              : '') +
            '</li>',
        );
        break;
      case 'raw-attack':
        rows.push(
          `<li class="trace-attack">${escapeHtml(entry.attacker)} &rarr; ${escapeHtml(entry.target)}</li>`,
        );
        break;
      case 'attack-removed':
        rows.push(
          `<li class="trace-removed">${escapeHtml(entry.attacker)} &#8696; ${escapeHtml(entry.target)} <span class="muted">(${escapeHtml(entry.attacker_rank)} below ${escapeHtml(entry.target_rank)})</span></li>`,
        );
        break;
      case 'semantics':
        rows.push(
          `<li class="trace-semantics">${escapeHtml(entry.kind)}: ` +
            Object.entries(entry.labelling)
              .map(([name, label]) => `${escapeHtml(name)}=${label}`)
              .join(', ') +
            '</li>',
        );
        break;
      case 'fallback':
        rows.push(
          `<li class="trace-fallback">${escapeHtml(entry.note)} <span class="muted">(stance ${escapeHtml(entry.stance)}; undecided: ${entry.undecided.map(escapeHtml).join(', ')})</span></li>`,
        );
        break;
      case 'no-applicable':
        rows.push(`<li class="trace-default">${escapeHtml(entry.note)}</li>`);
        break;
      case 'action':
        rows.push(
          `<li class="trace-action">action <b>${escapeHtml(entry.action)}</b>` +
            (entry.mapped_from ? ` mapped from ${escapeHtml(entry.mapped_from)}` : ' by default') +
            '</li>',
        );
        break;
    }
  }
  return `<ol class="trace">\n${rows.join('\n')}\n</ol>`;
}

export function renderDiffPanel(preview: CoachingPreview): string {
  const diff = preview.diff;
  if (diff.empty) {
    return '<div class="diff-panel"><p class="muted">no change: the proposed rule does not alter this decision</p></div>';
  }
  const actionRow = diff.action_changed
    ? `<p class="action-delta"><span class="action-before">${escapeHtml(diff.action_before)}</span> &rarr; <span class="action-after">${escapeHtml(diff.action_after)}</span></p>`
    : `<p class="muted">action unchanged (${escapeHtml(diff.action_after)})</p>`;
  const labelRows = Object.entries(diff.label_changes)
    .map(
      ([name, [before, after]]) =>
        `<li>${escapeHtml(name)}: ${before ?? 'absent'} &rarr; ${after ?? 'absent'}</li>`,
    )
    .join('\n');
  const attackRows = [
    ...diff.added_attacks.map(([a, b]) => `<li class="attack-added">+ ${escapeHtml(a)} &rarr; ${escapeHtml(b)}</li>`),
    ...diff.removed_attacks.map(([a, b]) => `<li class="attack-removed">- ${escapeHtml(a)} &rarr; ${escapeHtml(b)}</li>`),
  ].join('\n');
  return [
    '<div class="diff-panel">',
    actionRow,
    '<div class="diff-columns">',
    `<div class="diff-before"><h4>before</h4>${renderGraphSvg(buildGraphView(preview.before), 380, 280)}</div>`,
    `<div class="diff-after"><h4>after</h4>${renderGraphSvg(buildGraphView(preview.after), 380, 280)}</div>`,
    '</div>',
    labelRows ? `<h4>label changes</h4><ul class="label-changes">\n${labelRows}\n</ul>` : '',
    attackRows ? `<h4>defeat edges</h4><ul class="attack-changes">\n${attackRows}\n</ul>` : '',
    '</div>',
  ]
    .filter(Boolean)
    .join('\n');
}

export function renderErrorBanner(error: ApiError, sourceText?: string): string {
  const where = error.span ? ` at line ${error.span.line}, column ${error.span.column}` : '';
  const parts = [
    `<div class="error-banner"><b>${escapeHtml(error.code)}</b>: ${escapeHtml(error.message)}${where}`,
  ];
  if (error.span && sourceText !== undefined) {
    const lines = sourceText.split('\n');
    const offending = lines[error.span.line - 1];
    if (offending !== undefined) {
      const caret = ' '.repeat(Math.max(0, error.span.column - 1)) + '^';
      parts.push(`<pre class="error-context">${escapeHtml(offending)}\n${caret}</pre>`);
    }
  }
  parts.push('</div>');
  return parts.join('\n');
}
