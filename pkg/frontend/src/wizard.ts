/**
 * Questionnaire wizard: walks concepts and indicators in model order.
 * Controls are derived from each indicator's response kind, so a yes/no
 * answer cannot be entered for a degree question (and vice versa).
 * Submitted answers PUT to the service and refresh the level gauge;
 * unsaved drafts are styled distinctly from persisted answers.
 */

import { ApiError } from './api.js';
import { answerOptions, AssessmentSession } from './session.js';

export function renderWizard(root: HTMLElement, session: AssessmentSession): void {
  root.innerHTML = '';
  const gauge = document.createElement('div');
  gauge.className = 'level-gauge';
  root.appendChild(gauge);

  const error = document.createElement('p');
  error.className = 'wizard-error';
  root.appendChild(error);

  function syncGauge(): void {
    const level = session.displayedLevel();
    gauge.textContent = level === null ? 'level: -' : `level: ${level}`;
  }
  syncGauge();

  for (const concept of session.model.concepts) {
    if (concept.indicators.length === 0) continue;
    const section = document.createElement('section');
    const title = document.createElement('h2');
    title.textContent = concept.name;
    section.appendChild(title);

    for (const indicator of concept.indicators) {
      const row = document.createElement('div');
      row.className = 'indicator-row';
      row.dataset.code = indicator.code;

      const label = document.createElement('label');
      label.textContent = `${indicator.code}: ${indicator.question}`;
      row.appendChild(label);

      const select = document.createElement('select');
      const blank = document.createElement('option');
      blank.value = '';
      blank.textContent = '(unanswered)';
      select.appendChild(blank);
      for (const option of answerOptions(indicator)) {
        const el = document.createElement('option');
        el.value = option;
        el.textContent = option;
        select.appendChild(el);
      }
      const persisted = session.answers[indicator.code];
      if (persisted !== undefined) row.classList.add('persisted');

      select.addEventListener('change', () => {
        session.setDraft(indicator.code, select.value);
        row.classList.add('draft');
      });
      row.appendChild(select);

      const save = document.createElement('button');
      save.textContent = 'save';
      save.addEventListener('click', async () => {
        error.textContent = '';
        try {
          await session.submitAnswer(indicator.code);
          row.classList.remove('draft');
          row.classList.add('persisted');
          syncGauge();
        } catch (err) {
          // drafts are retained; surface the failure inline
          error.textContent = err instanceof ApiError
            ? `service error: ${err.message}`
            : String(err);
        }
      });
      row.appendChild(save);
      section.appendChild(row);
    }
    root.appendChild(section);
  }
}
