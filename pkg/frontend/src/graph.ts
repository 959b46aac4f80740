/** Argument-graph view model and SVG rendering.
 *
 * Everything here is a pure function of one Decision JSON document: node
 * labels come from the decision's labelling, stance badges and promoted
 * values from its `applicable` trace entries, and edges from the
 * `raw-attack` / `attack-removed` entries. Nothing is recomputed.
 */

import type { Decision, LabelValue } from './types';

export interface GraphNode {
  id: string;
  label: LabelValue;
  stance: string;
  promotes: string[];
}

export interface GraphEdge {
  from: string;
  to: string;
  kind: 'defeat' | 'removed';
  annotation: string;
}

export interface GraphView {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export const LABEL_COLORS: Record<LabelValue, string> = {
  IN: '#2e7d32',
  OUT: '#c62828',
  UNDEC: '#f9a825',
};

export function buildGraphView(decision: Decision): GraphView {
  const stances = new Map<string, string>();
  const promoted = new Map<string, string[]>();
  for (const entry of decision.trace) {
    if (entry.step === 'applicable') {
      stances.set(entry.argument, entry.stance);
      promoted.set(entry.argument, entry.promotes);
    }
  }
  const nodes: GraphNode[] = Object.keys(decision.labelling)
    .sort()
    .map((id) => ({
      id,
      label: decision.labelling[id] as LabelValue,
      stance: stances.get(id) ?? '',
      promotes: promoted.get(id) ?? [],
    }));

  const removed = new Map<string, GraphEdge>();
  for (const entry of decision.trace) {
    if (entry.step === 'attack-removed') {
      removed.set(`${entry.attacker}->${entry.target}`, {
        from: entry.attacker,
        to: entry.target,
        kind: 'removed',
        annotation: `${entry.attacker_rank} < ${entry.target_rank}`,
      });
    }
  }
  const edges: GraphEdge[] = [];
  for (const entry of decision.trace) {
    if (entry.step === 'raw-attack') {
      const key = `${entry.attacker}->${entry.target}`;
      const dropped = removed.get(key);
      edges.push(
        dropped ?? { from: entry.attacker, to: entry.target, kind: 'defeat', annotation: '' },
      );
    }
  }
  return { nodes, edges };
}

interface Point {
  x: number;
  y: number;
}

function circleLayout(ids: string[], width: number, height: number): Map<string, Point> {
  const positions = new Map<string, Point>();
  const cx = width / 2;
  const cy = height / 2;
  const radius = Math.min(cx, cy) - 70;
  ids.forEach((id, i) => {
    const angle = (2 * Math.PI * i) / ids.length - Math.PI / 2;
    positions.set(id, {
      x: ids.length === 1 ? cx : cx + radius * Math.cos(angle),
      y: ids.length === 1 ? cy : cy + radius * Math.sin(angle),
    });
  });
  return positions;
}

function edgePath(a: Point, b: Point, nodeRadius: number): string {
  const dx = b.x - a.x;
  const dy = b.y - a.y;
  const length = Math.hypot(dx, dy) || 1;
  const sx = a.x + (dx / length) * nodeRadius;
  const sy = a.y + (dy / length) * nodeRadius;
  const tx = b.x - (dx / length) * (nodeRadius + 6);
  const ty = b.y - (dy / length) * (nodeRadius + 6);
  // bow the line slightly so symmetric edges do not overlap
  const mx = (sx + tx) / 2 - dy / length * 14;
  const my = (sy + ty) / 2 + dx / length * 14;
  return `M ${sx.toFixed(1)} ${sy.toFixed(1)} Q ${mx.toFixed(1)} ${my.toFixed(1)} ${tx.toFixed(1)} ${ty.toFixed(1)}`;
}

export function renderGraphSvg(view: GraphView, width = 520, height = 360): string {
  if (view.nodes.length === 0) {
    return `<svg class="graph" viewBox="0 0 ${width} ${height}" role="img">` +
      `<text x="${width / 2}" y="${height / 2}" text-anchor="middle" class="graph-empty">no applicable arguments</text></svg>`;
  }
  const nodeRadius = 34;
  const positions = circleLayout(view.nodes.map((n) => n.id), width, height);
  const parts: string[] = [];
  parts.push(
    `<svg class="graph" viewBox="0 0 ${width} ${height}" role="img">`,
    '<defs>',
    '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse">',
    '<path d="M 0 0 L 10 5 L 0 10 z" fill="#455a64"/>',
    '</marker>',
    '</defs>',
  );
  for (const edge of view.edges) {
    const from = positions.get(edge.from);
    const to = positions.get(edge.to);
    if (!from || !to) continue;
    const dashed = edge.kind === 'removed' ? ' stroke-dasharray="6 5" opacity="0.55"' : '';
    parts.push(
      `<path d="${edgePath(from, to, nodeRadius)}" fill="none" stroke="#455a64" stroke-width="1.6" marker-end="url(#arrow)"${dashed} data-edge="${edge.kind}"/>`,
    );
    if (edge.annotation) {
      const midX = (from.x + to.x) / 2;
      const midY = (from.y + to.y) / 2 - 6;
      parts.push(
        `<text x="${midX.toFixed(1)}" y="${midY.toFixed(1)}" class="edge-note" text-anchor="middle">${edge.annotation}</text>`,
      );
    }
  }
  for (const node of view.nodes) {
    const at = positions.get(node.id);
    if (!at) continue;
    parts.push(
      `<g data-node="${node.id}" data-label="${node.label}">`,
      `<circle cx="${at.x.toFixed(1)}" cy="${at.y.toFixed(1)}" r="${nodeRadius}" fill="${LABEL_COLORS[node.label]}" fill-opacity="0.16" stroke="${LABEL_COLORS[node.label]}" stroke-width="2"/>`,
      `<text x="${at.x.toFixed(1)}" y="${(at.y - 4).toFixed(1)}" text-anchor="middle" class="node-name">${node.id}</text>`,
      `<text x="${at.x.toFixed(1)}" y="${(at.y + 12).toFixed(1)}" text-anchor="middle" class="node-label">${node.label}</text>`,
      node.stance
        ? `<text x="${at.x.toFixed(1)}" y="${(at.y + nodeRadius + 14).toFixed(1)}" text-anchor="middle" class="node-stance">${node.stance}</text>`
        : '',
      '</g>',
    );
  }
  parts.push('</svg>');
  return parts.join('');
}
