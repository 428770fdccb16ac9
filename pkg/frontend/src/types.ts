// Wire types mirroring the service's JSON schemas. The UI holds no critique
// content of its own: everything below is filled from fetched documents.

export type PerspectiveId =
  | 'user'
  | 'environment'
  | 'interface'
  | 'components'
  | 'design'
  | 'visual_marks';

export type Sentiment = 'positive' | 'negative' | 'neutral';

export interface Perspective {
  id: PerspectiveId;
  display_name: string;
  description: string;
}

export interface Heuristic {
  number: number;
  perspective: PerspectiveId;
  question: string;
  negative_anchor: string;
  positive_anchor: string;
  explanatory_note: string;
}

export interface LexiconEntry {
  word: string;
  sentiment: Sentiment;
}

export interface Catalog {
  version_tag: string;
  likert: { min: number; max: number };
  perspectives: Perspective[];
  heuristics: Heuristic[];
  lexicon: LexiconEntry[];
}

export interface ResponseSlot {
  number: number;
  value: number | null;
  note: string;
}

export interface SheetDocument {
  sheet_id: string;
  artefact_key: string;
  appraiser: string;
  created_at: string;
  updated_at: string;
  catalog_version: string;
  status: 'draft' | 'finalized';
  overview: { design_name: string; essence: string; circled_words: string[] };
  responses: ResponseSlot[];
  review: { reflections: string; next_steps: string };
}

export interface ScoreSummary {
  total: number;
  mean: number;
  perspective_subtotals: Record<PerspectiveId, number>;
  circled_sentiment_counts: Record<Sentiment, number>;
}

export interface HistoryEntry {
  sheet_id: string;
  artefact_key: string;
  appraiser: string;
  created_at: string;
  updated_at: string;
  status: 'draft' | 'finalized';
  score: ScoreSummary | null;
}

export interface CritiqueDiff {
  earlier_id: string;
  later_id: string;
  total_delta: number;
  per_heuristic_delta: Record<string, number>;
  per_perspective_delta: Record<PerspectiveId, number>;
  words_added: string[];
  words_removed: string[];
}

export interface ApiErrorBody {
  error: { code: string; message: string; details: Record<string, unknown> };
}
