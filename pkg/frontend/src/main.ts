/** Curation console: pick 3 of 10 questions, 3 of 5 distractors each,
 * apply categorized edits, submit, export. */

import { ApiClient, ApiError } from './api.js';
import { EDIT_CATEGORIES, EDIT_CATEGORY_LABELS } from './constants.js';
import {
  createView,
  displayText,
  setEdit,
  targetKey,
  toggleDistractor,
  toggleQuestion,
} from './state.js';
import type { BatchView, DraftEdit, EditTarget } from './types.js';
import { buildCurationResult, isSubmittable, validateView } from './validation.js';

const api = new ApiClient();
const app = () => document.getElementById('app')!;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderError(message: string, retry: () => void): void {
  const root = app();
  root.replaceChildren();
  const box = el('div', 'screen error-screen');
  box.append(el('h2', undefined, 'Something went wrong'));
  box.append(el('p', undefined, message));
  const button = el('button', 'primary', 'Retry');
  button.addEventListener('click', retry);
  box.append(button);
  root.replaceChildren(box);
}

function renderNotFound(batchId: string): void {
  const root = app();
  const box = el('div', 'screen error-screen');
  box.append(el('h2', undefined, 'Batch not found'));
  box.append(el('p', undefined, `No batch named "${batchId}" exists on this server.`));
  const back = el('a', undefined, 'Back to batch list');
  back.setAttribute('href', '#/');
  box.append(back);
  root.replaceChildren(box);
}

async function renderBatchList(): Promise<void> {
  let batches;
  try {
    batches = await api.listBatches();
  } catch (error) {
    renderError(String((error as Error).message), renderBatchList);
    return;
  }
  const root = app();
  const screen = el('div', 'screen');
  screen.append(el('h1', undefined, 'Curation batches'));
  if (batches.length === 0) {
    screen.append(el('p', undefined, 'No batches in the data directory yet.'));
  }
  const list = el('ul', 'batch-list');
  for (const batch of batches) {
    const item = el('li');
    const link = el('a', undefined, batch.batch_id);
    link.setAttribute('href', `#/batch/${encodeURIComponent(batch.batch_id)}`);
    item.append(link, el('span', `status status-${batch.status}`, batch.status));
    list.append(item);
  }
  screen.append(list);
  root.replaceChildren(screen);
}

function editorRow(
  view: BatchView,
  target: EditTarget,
  label: string,
  onChange: (next: BatchView) => void,
): HTMLElement {
  const row = el('div', 'edit-row');
  row.append(el('label', 'edit-label', label));

  const input = el('input', 'edit-input') as HTMLInputElement;
  input.type = 'text';
  input.value = displayText(view, target);
  row.append(input);

  const select = el('select', 'edit-category') as HTMLSelectElement;
  const placeholder = el('option', undefined, 'Edit category...') as HTMLOptionElement;
  placeholder.value = '';
  select.append(placeholder);
  for (const category of EDIT_CATEGORIES) {
    const option = el('option', undefined, EDIT_CATEGORY_LABELS[category]) as HTMLOptionElement;
    option.value = category;
    select.append(option);
  }
  const draft = view.draftEdits.get(targetKey(target));
  select.value = draft ? draft.category : '';
  select.hidden = !draft;
  row.append(select);

  const apply = () => {
    onChange(setEdit(view, target, input.value, select.value as DraftEdit['category']));
  };
  input.addEventListener('change', apply);
  select.addEventListener('change', apply);
  return row;
}

function renderOpenBatch(view: BatchView): void {
  const root = app();
  const screen = el('div', 'screen');
  const heading = el('h1', undefined, `Batch ${view.batch.batch_id}`);
  screen.append(heading);
  screen.append(
    el(
      'p',
      'instructions',
      'Pick exactly 3 of the 10 questions and exactly 3 of the 5 distractor ' +
        'candidates for each pick. Edits are limited to grammar/spelling, ' +
        'source/date clarification, and distractor formatting.',
    ),
  );

  const rerender = (next: BatchView) => renderOpenBatch(next);

  view.batch.candidates.forEach((mcq, questionIndex) => {
    const selected = view.selectedQuestions.includes(questionIndex);
    const card = el('section', selected ? 'card selected' : 'card');

    const header = el('header', 'card-header');
    const checkbox = el('input') as HTMLInputElement;
    checkbox.type = 'checkbox';
    checkbox.checked = selected;
    checkbox.id = `pick-q${questionIndex}`;
    checkbox.addEventListener('change', () => rerender(toggleQuestion(view, questionIndex)));
    const title = el('label', 'question-text', mcq.question);
    title.setAttribute('for', checkbox.id);
    header.append(checkbox, title);
    card.append(header);

    const key = el('p', 'key-line');
    key.append(el('span', 'key-badge', 'key'), el('span', undefined, ` ${mcq.key}`));
    card.append(key);

    if (selected) {
      card.append(
        editorRow(view, { question_index: questionIndex, part: 'question', distractor_index: null }, 'Question', rerender),
      );
      card.append(
        editorRow(view, { question_index: questionIndex, part: 'key', distractor_index: null }, 'Key', rerender),
      );
    }

    const picks = view.selectedDistractors.get(questionIndex) ?? [];
    const list = el('ul', 'candidates');
    mcq.distractors.forEach((candidate, distractorIndex) => {
      const item = el('li');
      const box = el('input') as HTMLInputElement;
      box.type = 'checkbox';
      box.id = `pick-q${questionIndex}-d${distractorIndex}`;
      box.checked = picks.includes(distractorIndex);
      box.disabled = !selected;
      box.addEventListener('change', () =>
        rerender(toggleDistractor(view, questionIndex, distractorIndex)),
      );
      const label = el('label', undefined, candidate);
      label.setAttribute('for', box.id);
      item.append(box, label);
      if (selected && picks.includes(distractorIndex)) {
        item.append(
          editorRow(
            view,
            { question_index: questionIndex, part: 'distractor', distractor_index: distractorIndex },
            'Edit',
            rerender,
          ),
        );
      }
      list.append(item);
    });
    card.append(list);
    screen.append(card);
  });

  const footer = el('footer', 'submit-bar');
  const issues = validateView(view);
  const issueList = el('ul', 'issues');
  for (const issue of issues) {
    issueList.append(el('li', `issue issue-${issue.code}`, issue.message));
  }
  footer.append(issueList);

  const serverBox = el('div', 'server-violations');
  footer.append(serverBox);

  const submit = el('button', 'primary', 'Submit curation') as HTMLButtonElement;
  submit.disabled = !isSubmittable(view);
  submit.addEventListener('click', async () => {
    submit.disabled = true;
    try {
      await api.submitCuration(view.batch.batch_id, buildCurationResult(view));
    } catch (error) {
      // 409 and 422 are surfaced inline; nothing is retried silently.
      const apiError = error as ApiError;
      serverBox.replaceChildren();
      serverBox.append(el('p', 'issue', apiError.message));
      for (const violation of apiError.violations ?? []) {
        serverBox.append(el('p', 'issue', violation));
      }
      submit.disabled = !isSubmittable(view);
      return;
    }
    renderSuccess(view.batch.batch_id);
  });
  footer.append(submit);
  screen.append(footer);
  root.replaceChildren(screen);
}

function renderSuccess(batchId: string): void {
  const root = app();
  const screen = el('div', 'screen');
  screen.append(el('h1', undefined, 'Curation submitted'));
  screen.append(el('p', undefined, `Batch ${batchId} is now curated.`));
  const link = el('a', 'primary', 'Download the exported quiz');
  link.setAttribute('href', api.exportUrl(batchId));
  screen.append(link);
  const back = el('p');
  const backLink = el('a', undefined, 'Back to batch list');
  backLink.setAttribute('href', '#/');
  back.append(backLink);
  screen.append(back);
  root.replaceChildren(screen);
}

function renderCuratedBatch(view: BatchView): void {
  const root = app();
  const screen = el('div', 'screen');
  screen.append(el('h1', undefined, `Batch ${view.batch.batch_id} (curated)`));
  screen.append(el('p', 'instructions', 'This batch is read-only.'));
  const picked = new Set(
    (view.batch.curation?.selections ?? []).map((s) => s.question_index),
  );
  view.batch.candidates.forEach((mcq, questionIndex) => {
    const card = el('section', picked.has(questionIndex) ? 'card selected' : 'card muted');
    card.append(el('p', 'question-text', mcq.question));
    const key = el('p', 'key-line');
    key.append(el('span', 'key-badge', 'key'), el('span', undefined, ` ${mcq.key}`));
    card.append(key);
    const list = el('ul', 'candidates');
    for (const candidate of mcq.distractors) {
      list.append(el('li', undefined, candidate));
    }
    card.append(list);
    screen.append(card);
  });
  const link = el('a', 'primary', 'Exported quiz JSON');
  link.setAttribute('href', api.exportUrl(view.batch.batch_id));
  screen.append(link);
  root.replaceChildren(screen);
}

async function renderBatch(batchId: string): Promise<void> {
  let batch;
  try {
    batch = await api.getBatch(batchId);
  } catch (error) {
    if (error instanceof ApiError && error.status === 404) {
      renderNotFound(batchId);
      return;
    }
    renderError(String((error as Error).message), () => renderBatch(batchId));
    return;
  }
  const view = createView(batch);
  if (batch.status === 'curated') {
    renderCuratedBatch(view);
  } else {
    renderOpenBatch(view);
  }
}

function route(): void {
  const hash = window.location.hash || '#/';
  const match = hash.match(/^#\/batch\/(.+)$/);
  if (match && match[1]) {
    void renderBatch(decodeURIComponent(match[1]));
  } else {
    void renderBatchList();
  }
}

window.addEventListener('hashchange', route);
window.addEventListener('DOMContentLoaded', route);
