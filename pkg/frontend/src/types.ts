/** Payload shapes of the read-only corpus API. */

export interface PersonRow {
  person_id: string;
  full_name: string;
  lifespan: string;
  role_count: number;
}

export interface Profile {
  person_id: string;
  full_name: string;
  synonyms: string[];
  birth_year: number;
  death_year: number;
  roles: string[];
}

export interface RoleEntry {
  role: string;
  aspect_count: number;
}

export interface PersonDetail {
  profile: Profile;
  roles: RoleEntry[];
}

export interface AspectRow {
  aspect: string;
  labels: string[];
  snippet_count: number;
}

export interface RoleAspects {
  person_id: string;
  role: string;
  aspects: AspectRow[];
}

export interface SummarySentence {
  text: string;
  snippet_id: string;
}

export interface SummaryPayload {
  sentences: SummarySentence[];
  k_used: number;
}

export interface ReadabilityMetrics {
  flesch_en: number;
  flesch_nl: number;
  dale_chall: number;
  reading_time_s: number;
  sentence_count: number;
}

export interface SnippetCard {
  fragment: string;
  probability: number;
  article_id: string;
  date: string;
  newspaper: string;
  external_url: string;
}

export interface AspectView {
  person_id: string;
  role: string;
  aspect: string;
  labels: string[];
  summary: SummaryPayload | null;
  metrics: ReadabilityMetrics | null;
  snippets: SnippetCard[];
}
