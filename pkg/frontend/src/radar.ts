/**
 * Per-concept level radar (SVG polygon over 19 axes) with a plain table
 * fallback for accessibility. Values come straight from the last score
 * response; vacuous concepts (no indicators yet) are marked.
 */

import { ScoreReport } from './api.js';

const SIZE = 320;
const MAX_LEVEL = 5;

export function renderRadar(root: HTMLElement, score: ScoreReport): void {
  root.innerHTML = '';
  const ids = Object.keys(score.per_concept_levels);
  const center = SIZE / 2;
  const radius = center - 30;

  const svg = document.createElementNS('http://www.w3.org/2000/svg', 'svg');
  svg.setAttribute('viewBox', `0 0 ${SIZE} ${SIZE}`);
  svg.setAttribute('role', 'img');
  svg.setAttribute('aria-label', 'per-concept maturity radar');

  const point = (i: number, value: number): [number, number] => {
    const angle = (2 * Math.PI * i) / ids.length - Math.PI / 2;
    const r = (radius * value) / MAX_LEVEL;
    return [center + r * Math.cos(angle), center + r * Math.sin(angle)];
  };

  for (let ring = 1; ring <= MAX_LEVEL; ring++) {
    const poly = document.createElementNS('http://www.w3.org/2000/svg', 'polygon');
    poly.setAttribute('points',
      ids.map((_, i) => point(i, ring).join(',')).join(' '));
    poly.setAttribute('fill', 'none');
    poly.setAttribute('stroke', '#ddd');
    svg.appendChild(poly);
  }

  const data = document.createElementNS('http://www.w3.org/2000/svg', 'polygon');
  data.setAttribute('points', ids
    .map((id, i) => point(i, score.per_concept_levels[id] ?? 1).join(','))
    .join(' '));
  data.setAttribute('fill', 'rgba(40, 110, 180, 0.35)');
  data.setAttribute('stroke', '#286eb4');
  svg.appendChild(data);

  for (let i = 0; i < ids.length; i++) {
    const [x, y] = point(i, MAX_LEVEL + 0.6);
    const text = document.createElementNS('http://www.w3.org/2000/svg', 'text');
    text.setAttribute('x', String(x));
    text.setAttribute('y', String(y));
    text.setAttribute('text-anchor', 'middle');
    text.setAttribute('font-size', '8');
    text.textContent = ids[i] ?? '';
    svg.appendChild(text);
  }
  root.appendChild(svg);
  root.appendChild(renderTable(score));
}

function renderTable(score: ScoreReport): HTMLTableElement {
  const table = document.createElement('table');
  table.className = 'concept-table';
  const head = table.insertRow();
  head.insertCell().textContent = 'concept';
  head.insertCell().textContent = 'level';
  for (const [id, level] of Object.entries(score.per_concept_levels)) {
    const row = table.insertRow();
    const vacuous = score.vacuous_concepts.includes(id);
    row.insertCell().textContent = id;
    row.insertCell().textContent = vacuous ? `${level} (no indicators yet)` : String(level);
  }
  return table;
}
