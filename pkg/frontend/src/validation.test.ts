import { describe, expect, it } from 'vitest';

import { createView, setEdit, toggleDistractor, toggleQuestion } from './state.js';
import type { BatchView } from './types.js';
import { buildCurationResult, isSubmittable, validateView } from './validation.js';
import { makeBatch } from './state.test.js';

function fullSelection(): BatchView {
  let view = createView(makeBatch());
  for (const q of [0, 4, 9]) {
    view = toggleQuestion(view, q);
    for (const d of [0, 1, 2]) {
      view = toggleDistractor(view, q, d);
    }
  }
  return view;
}

describe('validateView', () => {
  it('flags missing question picks', () => {
    const view = createView(makeBatch());
    expect(validateView(view).some((i) => i.code === 'PICK_COUNT')).toBe(true);
    expect(isSubmittable(view)).toBe(false);
  });

  it('flags wrong distractor counts per selected question', () => {
    let view = fullSelection();
    view = toggleDistractor(view, 4, 2); // down to two picks on question 4
    const issues = validateView(view);
    expect(issues).toHaveLength(1);
    expect(issues[0]!.message).toContain('Question 5');
  });

  it('requires a category on every edit', () => {
    let view = fullSelection();
    view = setEdit(
      view,
      { question_index: 0, part: 'question', distractor_index: null },
      'Edited?',
      '',
    );
    expect(validateView(view).some((i) => i.code === 'EDIT_CATEGORY')).toBe(true);
    expect(isSubmittable(view)).toBe(false);
  });

  it('rejects empty edited text', () => {
    let view = fullSelection();
    view = setEdit(
      view,
      { question_index: 0, part: 'key', distractor_index: null },
      '   ',
      'GRAMMAR_SPELLING',
    );
    expect(validateView(view).some((i) => i.code === 'EMPTY_EDIT')).toBe(true);
  });

  it('accepts a complete selection', () => {
    expect(validateView(fullSelection())).toEqual([]);
    expect(isSubmittable(fullSelection())).toBe(true);
  });
});

describe('buildCurationResult', () => {
  it('throws on an invalid view, so bad requests are unconstructible', () => {
    expect(() => buildCurationResult(createView(makeBatch()))).toThrow(/PICK_COUNT/);
  });

  it('serializes selections in ascending order with exact counts', () => {
    const result = buildCurationResult(fullSelection());
    expect(result.batch_id).toBe('b1');
    expect(result.selections.map((s) => s.question_index)).toEqual([0, 4, 9]);
    for (const selection of result.selections) {
      expect(selection.distractor_indices).toHaveLength(3);
    }
    expect(result.edits).toEqual([]);
  });

  it('sends only real edits and keeps unedited text out of the payload', () => {
    let view = fullSelection();
    view = setEdit(
      view,
      { question_index: 4, part: 'distractor', distractor_index: 1 },
      'cand 4 1 (formatted)',
      'DISTRACTOR_FORMATTING',
    );
    const result = buildCurationResult(view);
    expect(result.edits).toHaveLength(1);
    expect(result.edits[0]).toEqual({
      target: { question_index: 4, part: 'distractor', distractor_index: 1 },
      before: 'cand-4-1',
      after: 'cand 4 1 (formatted)',
      category: 'DISTRACTOR_FORMATTING',
    });
  });

  it('never emits a category outside the allowed three', () => {
    let view = fullSelection();
    view = setEdit(
      view,
      { question_index: 0, part: 'question', distractor_index: null },
      'Edited?',
      'GRAMMAR_SPELLING',
    );
    const result = buildCurationResult(view);
    const allowed = ['GRAMMAR_SPELLING', 'CLARIFY_SOURCE_DATE', 'DISTRACTOR_FORMATTING'];
    for (const edit of result.edits) {
      expect(allowed).toContain(edit.category);
    }
  });
});
