/** API documents and client-side view state for the curation console. */

export interface McqCandidate {
  question: string;
  key: string;
  /** Always five candidate distractors per question. */
  distractors: string[];
}

export type BatchStatus = 'open' | 'curated';

export interface ApiBatchSummary {
  batch_id: string;
  status: BatchStatus;
}

export interface ApiBatch {
  batch_id: string;
  seed: number;
  status: BatchStatus;
  candidates: McqCandidate[];
  curation: CurationResult | null;
}

export type EditPart = 'question' | 'key' | 'distractor';

export type EditCategory =
  | 'GRAMMAR_SPELLING'
  | 'CLARIFY_SOURCE_DATE'
  | 'DISTRACTOR_FORMATTING';

export interface EditTarget {
  question_index: number;
  part: EditPart;
  distractor_index: number | null;
}

export interface CurationEdit {
  target: EditTarget;
  before: string;
  after: string;
  category: EditCategory;
}

export interface CurationSelection {
  question_index: number;
  distractor_indices: number[];
}

export interface CurationResult {
  batch_id: string;
  selections: CurationSelection[];
  edits: CurationEdit[];
}

export interface ExportedQuizQuestion {
  question: string;
  options: string[];
  key_index: number;
}

export interface ExportedQuiz {
  batch_id: string;
  questions: ExportedQuizQuestion[];
}

/** A draft edit as captured by the form; category starts unset. */
export interface DraftEdit {
  target: EditTarget;
  after: string;
  category: EditCategory | '';
}

/** Client state: the batch plus selections and draft edits. */
export interface BatchView {
  batch: ApiBatch;
  /** Selected question indices, at most three. */
  selectedQuestions: number[];
  /** Question index -> selected distractor indices, at most three each. */
  selectedDistractors: Map<number, number[]>;
  /** Keyed by serialized target. */
  draftEdits: Map<string, DraftEdit>;
}
