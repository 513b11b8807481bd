/**
 * App bootstrap: open or create an assessment against the local service,
 * then switch between the questionnaire wizard, the radar view, and the
 * gap explorer. The cycle-state badge mirrors the service's view.
 */

import { ApiClient } from './api.js';
import { renderGapExplorer } from './gap.js';
import { renderRadar } from './radar.js';
import { AssessmentSession } from './session.js';
import { renderWizard } from './wizard.js';

const api = new ApiClient(window.location.origin);

async function boot(): Promise<void> {
  const app = document.getElementById('app');
  if (!app) throw new Error('missing #app element');

  const badge = document.createElement('span');
  badge.className = 'cycle-badge';
  const gauge = document.createElement('strong');
  const header = document.createElement('header');
  header.append('stagegate assessment - ', gauge, ' ', badge);
  app.appendChild(header);

  const session = new AssessmentSession(api, {
    onScore: (score) => {
      // the gauge only ever shows what the service last reported
      gauge.textContent = `level ${score.overall_level}`;
      badge.textContent = session.cycleState ? `cycle: ${session.cycleState}` : '';
    },
    onConflict: () => {
      alert('Someone else updated this assessment; reloaded and retried.');
    },
  });

  const params = new URLSearchParams(window.location.search);
  const existing = params.get('assessment');
  if (existing) {
    await session.open(existing);
  } else {
    const institution = prompt('Institution name?') ?? 'Unnamed institution';
    await session.create(institution);
  }

  const nav = document.createElement('nav');
  const content = document.createElement('main');
  app.append(nav, content);

  const views: Record<string, () => void | Promise<void>> = {
    questionnaire: () => renderWizard(content, session),
    radar: () => {
      if (session.lastScore) renderRadar(content, session.lastScore);
    },
    gaps: async () => {
      if (!session.cycleState || session.cycleState === 'measured') {
        const rank = Number(prompt('Target level (2-5)?') ?? '0');
        await session.setTarget(rank);
      }
      await renderGapExplorer(content, session);
    },
  };

  for (const name of Object.keys(views)) {
    const button = document.createElement('button');
    button.textContent = name;
    button.addEventListener('click', () => void views[name]?.());
    nav.appendChild(button);
  }
  renderWizard(content, session);
}

void boot();
