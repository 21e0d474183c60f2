import { describe, expect, it } from 'vitest';

import {
  createView,
  displayText,
  originalText,
  setEdit,
  targetKey,
  toggleDistractor,
  toggleQuestion,
} from './state.js';
import type { ApiBatch, EditTarget } from './types.js';

export function makeBatch(status: 'open' | 'curated' = 'open'): ApiBatch {
  return {
    batch_id: 'b1',
    seed: 7,
    status,
    curation: null,
    candidates: Array.from({ length: 10 }, (_, i) => ({
      question: `Question ${i}?`,
      key: `key-${i}`,
      distractors: Array.from({ length: 5 }, (_, j) => `cand-${i}-${j}`),
    })),
  };
}

describe('question selection', () => {
  it('caps question picks at three', () => {
    let view = createView(makeBatch());
    for (const index of [0, 1, 2, 3, 4]) {
      view = toggleQuestion(view, index);
    }
    expect(view.selectedQuestions).toEqual([0, 1, 2]);
  });

  it('deselecting a question drops its distractors and edits', () => {
    let view = createView(makeBatch());
    view = toggleQuestion(view, 2);
    view = toggleDistractor(view, 2, 0);
    view = setEdit(
      view,
      { question_index: 2, part: 'question', distractor_index: null },
      'Edited question 2?',
      'GRAMMAR_SPELLING',
    );
    view = toggleQuestion(view, 2);
    expect(view.selectedQuestions).toEqual([]);
    expect(view.selectedDistractors.has(2)).toBe(false);
    expect(view.draftEdits.size).toBe(0);
  });
});

describe('distractor selection', () => {
  it('requires the question to be selected first', () => {
    const view = createView(makeBatch());
    expect(toggleDistractor(view, 0, 0)).toBe(view);
  });

  it('caps distractor picks at three per question', () => {
    let view = createView(makeBatch());
    view = toggleQuestion(view, 0);
    for (const j of [0, 1, 2, 3, 4]) {
      view = toggleDistractor(view, 0, j);
    }
    expect(view.selectedDistractors.get(0)).toEqual([0, 1, 2]);
  });

  it('unpicking a distractor clears its edit', () => {
    let view = createView(makeBatch());
    view = toggleQuestion(view, 0);
    view = toggleDistractor(view, 0, 1);
    const target: EditTarget = { question_index: 0, part: 'distractor', distractor_index: 1 };
    view = setEdit(view, target, 'formatted', 'DISTRACTOR_FORMATTING');
    expect(view.draftEdits.has(targetKey(target))).toBe(true);
    view = toggleDistractor(view, 0, 1);
    expect(view.draftEdits.has(targetKey(target))).toBe(false);
  });
});

describe('edits', () => {
  const target: EditTarget = { question_index: 1, part: 'question', distractor_index: null };

  it('text equal to the original clears the draft', () => {
    let view = createView(makeBatch());
    view = toggleQuestion(view, 1);
    view = setEdit(view, target, 'Changed?', 'GRAMMAR_SPELLING');
    expect(displayText(view, target)).toBe('Changed?');
    view = setEdit(view, target, originalText(view.batch, target), 'GRAMMAR_SPELLING');
    expect(view.draftEdits.size).toBe(0);
    expect(displayText(view, target)).toBe('Question 1?');
  });

  it('state transitions never mutate the previous view', () => {
    const before = createView(makeBatch());
    const after = toggleQuestion(before, 0);
    expect(before.selectedQuestions).toEqual([]);
    expect(after.selectedQuestions).toEqual([0]);
  });
});
