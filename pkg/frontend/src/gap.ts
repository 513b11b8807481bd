/**
 * Gap explorer: list the unfulfilled sub-requirements for a target
 * level, toggle them hypothetically (what-if through the service), and
 * show the improvement-plan text for gapped concepts. Toggles never
 * auto-persist; committing requires explicit answer edits in the wizard.
 */

import { GapReport, PlanItem } from './api.js';
import { AssessmentSession } from './session.js';

export async function renderGapExplorer(root: HTMLElement,
                                        session: AssessmentSession): Promise<void> {
  root.innerHTML = '';
  const report = await session.gapReport();

  const summary = document.createElement('p');
  summary.className = 'gap-summary';
  summary.textContent = report.already_met
    ? `target ${report.target.rank} already met (current level ${report.current_level})`
    : `current level ${report.current_level}, target ${report.target.rank}: `
      + `${report.gaps.length} gap(s)`;
  root.appendChild(summary);

  const hypo = document.createElement('p');
  hypo.className = 'hypothetical';
  root.appendChild(hypo);

  function syncHypo(): void {
    const level = session.hypotheticalLevel();
    hypo.textContent = level === null
      ? 'hypothetical level: - (toggle gaps to explore)'
      : `hypothetical level: ${level}`;
  }
  syncHypo();

  const list = document.createElement('ul');
  list.className = 'gap-list';
  for (const gap of report.gaps) {
    const item = document.createElement('li');
    const box = document.createElement('input');
    box.type = 'checkbox';
    box.checked = session.isToggled(gap.code, gap.rank);
    box.addEventListener('change', async () => {
      await session.toggleGap(gap.code, gap.rank);
      syncHypo();
    });
    item.appendChild(box);
    item.appendChild(document.createTextNode(
      ` [${gap.rank}] ${gap.code} (${gap.concept_id}): ${gap.status}`));
    list.appendChild(item);
  }
  root.appendChild(list);

  root.appendChild(renderPlan(await session.planItems()));
}

function renderPlan(items: PlanItem[]): HTMLElement {
  const section = document.createElement('section');
  section.className = 'plan-view';
  const title = document.createElement('h2');
  title.textContent = 'Improvement plan';
  section.appendChild(title);
  for (const item of items) {
    const block = document.createElement('article');
    const head = document.createElement('h3');
    head.textContent = `${item.concept_name} (level ${item.level})`;
    block.appendChild(head);
    const objective = document.createElement('p');
    objective.textContent = `Objective: ${item.objective}`;
    block.appendChild(objective);
    for (const action of item.actions) {
      const p = document.createElement('p');
      p.textContent = `Action: ${action}`;
      block.appendChild(p);
    }
    if (item.no_plan_entry) {
      const note = document.createElement('p');
      note.className = 'plan-stub';
      note.textContent = 'no plan entry published';
      block.appendChild(note);
    }
    section.appendChild(block);
  }
  return section;
}
