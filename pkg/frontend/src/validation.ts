/** Client-side mirror of the server's curation rules.
 *
 * buildCurationResult only returns a request body for a view that passes
 * validateView, so the client cannot construct a submission the server
 * would reject for count or category reasons.
 */

import type { BatchView, CurationEdit, CurationResult, EditCategory } from './types.js';
import { DISTRACTOR_PICKS, EDIT_CATEGORIES, QUESTION_PICKS } from './constants.js';
import { originalText } from './state.js';

export interface ViewIssue {
  code: 'PICK_COUNT' | 'EDIT_CATEGORY' | 'EMPTY_EDIT';
  message: string;
}

export function validateView(view: BatchView): ViewIssue[] {
  const issues: ViewIssue[] = [];
  if (view.selectedQuestions.length !== QUESTION_PICKS) {
    issues.push({
      code: 'PICK_COUNT',
      message: `Select exactly ${QUESTION_PICKS} questions (${view.selectedQuestions.length} selected).`,
    });
  }
  for (const questionIndex of view.selectedQuestions) {
    const picks = view.selectedDistractors.get(questionIndex) ?? [];
    if (picks.length !== DISTRACTOR_PICKS) {
      issues.push({
        code: 'PICK_COUNT',
        message: `Question ${questionIndex + 1}: select exactly ${DISTRACTOR_PICKS} distractors (${picks.length} selected).`,
      });
    }
  }
  for (const draft of view.draftEdits.values()) {
    const label = `Question ${draft.target.question_index + 1} (${draft.target.part})`;
    if (!EDIT_CATEGORIES.includes(draft.category as EditCategory)) {
      issues.push({
        code: 'EDIT_CATEGORY',
        message: `${label}: choose an edit category.`,
      });
    }
    if (draft.after.trim() === '') {
      issues.push({
        code: 'EMPTY_EDIT',
        message: `${label}: edited text must not be empty.`,
      });
    }
  }
  return issues;
}

export function isSubmittable(view: BatchView): boolean {
  return view.batch.status === 'open' && validateView(view).length === 0;
}

/** Assemble the request body. Throws if the view fails validation; the
 * submit path must gate on isSubmittable first. Unedited text is never
 * included, so it round-trips untouched on the server. */
export function buildCurationResult(view: BatchView): CurationResult {
  const issues = validateView(view);
  if (issues.length > 0) {
    throw new Error(`view is not submittable: ${issues.map((i) => i.code).join(', ')}`);
  }
  const edits: CurationEdit[] = [...view.draftEdits.values()].map((draft) => ({
    target: draft.target,
    before: originalText(view.batch, draft.target),
    after: draft.after,
    category: draft.category as EditCategory,
  }));
  return {
    batch_id: view.batch.batch_id,
    selections: view.selectedQuestions.map((questionIndex) => ({
      question_index: questionIndex,
      distractor_indices: [...(view.selectedDistractors.get(questionIndex) ?? [])],
    })),
    edits,
  };
}
