import type { EditCategory } from './types.js';

export const QUESTIONS_PER_BATCH = 10;
export const CANDIDATES_PER_QUESTION = 5;
export const QUESTION_PICKS = 3;
export const DISTRACTOR_PICKS = 3;

export const EDIT_CATEGORIES: readonly EditCategory[] = [
  'GRAMMAR_SPELLING',
  'CLARIFY_SOURCE_DATE',
  'DISTRACTOR_FORMATTING',
];

export const EDIT_CATEGORY_LABELS: Record<EditCategory, string> = {
  GRAMMAR_SPELLING: 'Minor grammar / spelling fix',
  CLARIFY_SOURCE_DATE: 'Clarify news source or date',
  DISTRACTOR_FORMATTING: 'Distractor formatting consistency',
};
