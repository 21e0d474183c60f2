/** Pure state transitions for the curation view.
 *
 * The transitions enforce the hard caps structurally: a fourth question or
 * a fourth distractor simply cannot be selected, and an edit always carries
 * a target and an (initially empty) category. Everything returns a new
 * BatchView; the previous one is never mutated.
 */

import type { ApiBatch, BatchView, DraftEdit, EditTarget } from './types.js';
import { DISTRACTOR_PICKS, QUESTION_PICKS } from './constants.js';

export function createView(batch: ApiBatch): BatchView {
  return {
    batch,
    selectedQuestions: [],
    selectedDistractors: new Map(),
    draftEdits: new Map(),
  };
}

export function targetKey(target: EditTarget): string {
  const suffix = target.part === 'distractor' ? `:${target.distractor_index}` : '';
  return `${target.question_index}:${target.part}${suffix}`;
}

function cloned(view: BatchView): BatchView {
  return {
    batch: view.batch,
    selectedQuestions: [...view.selectedQuestions],
    selectedDistractors: new Map(
      [...view.selectedDistractors].map(([k, v]) => [k, [...v]]),
    ),
    draftEdits: new Map(view.draftEdits),
  };
}

/** Toggle a question card. Deselecting drops its distractor picks and its
 * edits; selecting beyond the cap is a no-op. */
export function toggleQuestion(view: BatchView, questionIndex: number): BatchView {
  const next = cloned(view);
  const at = next.selectedQuestions.indexOf(questionIndex);
  if (at >= 0) {
    next.selectedQuestions.splice(at, 1);
    next.selectedDistractors.delete(questionIndex);
    for (const key of [...next.draftEdits.keys()]) {
      if (key.startsWith(`${questionIndex}:`)) {
        next.draftEdits.delete(key);
      }
    }
    return next;
  }
  if (next.selectedQuestions.length >= QUESTION_PICKS) {
    return view;
  }
  next.selectedQuestions.push(questionIndex);
  next.selectedQuestions.sort((a, b) => a - b);
  return next;
}

/** Toggle a distractor checkbox within a selected question. */
export function toggleDistractor(
  view: BatchView,
  questionIndex: number,
  distractorIndex: number,
): BatchView {
  if (!view.selectedQuestions.includes(questionIndex)) {
    return view;
  }
  const next = cloned(view);
  const picks = next.selectedDistractors.get(questionIndex) ?? [];
  const at = picks.indexOf(distractorIndex);
  if (at >= 0) {
    picks.splice(at, 1);
    next.draftEdits.delete(
      targetKey({ question_index: questionIndex, part: 'distractor', distractor_index: distractorIndex }),
    );
  } else {
    if (picks.length >= DISTRACTOR_PICKS) {
      return view;
    }
    picks.push(distractorIndex);
    picks.sort((a, b) => a - b);
  }
  next.selectedDistractors.set(questionIndex, picks);
  return next;
}

export function originalText(batch: ApiBatch, target: EditTarget): string {
  const mcq = batch.candidates[target.question_index];
  if (!mcq) {
    return '';
  }
  if (target.part === 'question') {
    return mcq.question;
  }
  if (target.part === 'key') {
    return mcq.key;
  }
  return mcq.distractors[target.distractor_index ?? -1] ?? '';
}

/** Record or update a draft edit; text equal to the original clears it. */
export function setEdit(
  view: BatchView,
  target: EditTarget,
  after: string,
  category: DraftEdit['category'],
): BatchView {
  const next = cloned(view);
  const key = targetKey(target);
  if (after === originalText(view.batch, target)) {
    next.draftEdits.delete(key);
  } else {
    next.draftEdits.set(key, { target, after, category });
  }
  return next;
}

export function clearEdit(view: BatchView, target: EditTarget): BatchView {
  const next = cloned(view);
  next.draftEdits.delete(targetKey(target));
  return next;
}

/** Current text of a target: the draft edit if present, else the original. */
export function displayText(view: BatchView, target: EditTarget): string {
  const draft = view.draftEdits.get(targetKey(target));
  return draft ? draft.after : originalText(view.batch, target);
}
