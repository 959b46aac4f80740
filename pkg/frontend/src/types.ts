/** Wire types mirroring the curator API's JSON schemas. */

export type LabelValue = 'IN' | 'OUT' | 'UNDEC';

export interface ApplicableEntry {
  step: 'applicable';
  argument: string;
  stance: string;
  promotes: string[];
  premises: string[];
}

export interface RawAttackEntry {
  step: 'raw-attack';
  attacker: string;
  target: string;
}

export interface AttackRemovedEntry {
  step: 'attack-removed';
  attacker: string;
  attacker_rank: string;
  target: string;
  target_rank: string;
  reason: string;
}

export interface SemanticsEntry {
  step: 'semantics';
  kind: string;
  labelling: Record<string, LabelValue>;
}

export interface FallbackEntry {
  step: 'fallback';
  note: string;
  undecided: string[];
  stance: string;
}

export interface ActionEntry {
  step: 'action';
  mapped_from: string | null;
  action: string;
  instruments: string[];
}

export interface NoApplicableEntry {
  step: 'no-applicable';
  note: string;
}

export type TraceEntry =
  | ApplicableEntry
  | RawAttackEntry
  | AttackRemovedEntry
  | SemanticsEntry
  | FallbackEntry
  | ActionEntry
  | NoApplicableEntry;

export interface Decision {
  action: string;
  instruments: string[];
  prevailing: string[];
  labelling: Record<string, LabelValue>;
  contested: boolean;
  trace: TraceEntry[];
}

export interface ContextPayload {
  request_text: string;
  topic_tags: string[];
  sphere: string | null;
  demographic_target: boolean;
  skill_specific: boolean;
  sensitive: boolean;
  harm: boolean;
  diversity_preference: string;
  situatedness: string;
}

export interface ScenarioFixture {
  name: string;
  context: ContextPayload;
  expect: string;
  note: string | null;
}

export interface ScenarioList {
  version: number;
  fixtures: ScenarioFixture[];
}

export interface DecisionDiff {
  action_changed: boolean;
  action_before: string;
  action_after: string;
  contested_before: boolean;
  contested_after: boolean;
  label_changes: Record<string, [string | null, string | null]>;
  added_attacks: [string, string][];
  removed_attacks: [string, string][];
  empty: boolean;
}

export interface CoachingPreview {
  kb_version: number;
  before: Decision;
  after: Decision;
  diff: DecisionDiff;
}

export interface ApiError {
  code: string;
  message: string;
  span?: { line: number; column: number };
}
