/**
 * Assessment session view-model.
 *
 * Single source of truth rules:
 *  - every displayed level comes from a service response (lastScore /
 *    lastHypothetical); the session never computes maturity locally;
 *  - drafts (typed but unsubmitted answers) are tracked separately from
 *    persisted answers so the UI can render them distinctly;
 *  - what-if overrides never touch persisted answers.
 */

import {
  AnswerValue,
  ApiClient,
  ApiError,
  DegreeWord,
  GapReport,
  IndicatorDoc,
  ModelDoc,
  PlanItem,
  ScoreReport,
} from './api.js';

const DEGREE_WORDS: DegreeWord[] = ['none', 'low', 'medium', 'high'];

export class ResponseKindError extends Error {}

/** Parse raw wizard input for an indicator, enforcing its response kind. */
export function parseAnswerInput(indicator: IndicatorDoc, raw: string): AnswerValue {
  const lowered = raw.trim().toLowerCase();
  if (lowered.startsWith('na:')) {
    const justification = raw.trim().slice(3).trim();
    if (!justification) throw new ResponseKindError('not-applicable needs a justification');
    return { na: justification };
  }
  if (indicator.response_kind === 'boolean') {
    if (lowered === 'yes') return true;
    if (lowered === 'no') return false;
    throw new ResponseKindError(
      `${indicator.code} takes yes/no, not ${JSON.stringify(raw)}`);
  }
  if ((DEGREE_WORDS as string[]).includes(lowered)) return lowered as DegreeWord;
  throw new ResponseKindError(
    `${indicator.code} takes none/low/medium/high, not ${JSON.stringify(raw)}`);
}

/** The input choices the wizard may render for an indicator. */
export function answerOptions(indicator: IndicatorDoc): string[] {
  return indicator.response_kind === 'boolean' ? ['yes', 'no'] : [...DEGREE_WORDS];
}

/**
 * Minimal degree word that satisfies the given rank of a multi-level
 * indicator (low for its first rank, medium for its second, high after).
 * Used to build what-if overrides for gap toggles.
 */
export function degreeNeededFor(indicator: IndicatorDoc, rank: number): DegreeWord {
  const offset = indicator.levels.indexOf(rank);
  if (offset < 0) throw new Error(`${indicator.code} has no rank ${rank}`);
  return DEGREE_WORDS[Math.min(offset + 1, 3)] as DegreeWord;
}

export interface SessionEvents {
  onScore?: (score: ScoreReport) => void;
  onConflict?: (retried: boolean) => void;
  onError?: (err: ApiError) => void;
}

export class AssessmentSession {
  model!: ModelDoc;
  assessmentId!: string;
  version = 0;
  cycleState: string | null = null;

  /** persisted answers as last loaded from the service */
  answers: Record<string, unknown> = {};
  /** unsaved drafts, keyed by indicator code */
  drafts = new Map<string, string>();

  lastScore: ScoreReport | null = null;
  lastHypothetical: ScoreReport | null = null;
  /** toggled gap items ("CODE@RANK"); turned into what-if overrides, never persisted */
  toggled = new Set<string>();

  constructor(
    readonly api: ApiClient,
    private readonly events: SessionEvents = {},
  ) {}

  async open(assessmentId: string): Promise<void> {
    this.model = await this.api.getModel();
    await this.reload(assessmentId);
    await this.refreshScore();
  }

  async create(institution: string, assessmentId?: string): Promise<void> {
    this.model = await this.api.getModel();
    const created = await this.api.createAssessment(institution, assessmentId);
    await this.reload(created.assessment_id);
    await this.refreshScore();
  }

  private async reload(assessmentId: string): Promise<void> {
    const doc = await this.api.getAssessment(assessmentId);
    this.assessmentId = doc.assessment_id;
    this.version = doc.version;
    this.cycleState = doc.cycle_state;
    this.answers = doc.answers;
  }

  /** Wizard order: model file order, concepts then indicators. */
  indicatorsInOrder(): IndicatorDoc[] {
    return this.model.concepts.flatMap((c) => c.indicators);
  }

  indicator(code: string): IndicatorDoc {
    const found = this.indicatorsInOrder().find((i) => i.code === code);
    if (!found) throw new Error(`unknown indicator ${code}`);
    return found;
  }

  /** The only level the UI may display as current. */
  displayedLevel(): number | null {
    return this.lastScore ? this.lastScore.overall_level : null;
  }

  hypotheticalLevel(): number | null {
    return this.lastHypothetical ? this.lastHypothetical.overall_level : null;
  }

  isDraft(code: string): boolean {
    return this.drafts.has(code);
  }

  setDraft(code: string, raw: string): void {
    this.drafts.set(code, raw);
  }

  /**
   * Validate and persist the draft for one indicator, then refresh the
   * level gauge from the service. A stale version token triggers one
   * reload-and-retry; drafts survive failures.
   */
  async submitAnswer(code: string, raw?: string): Promise<void> {
    const indicator = this.indicator(code);
    const input = raw ?? this.drafts.get(code);
    if (input === undefined) throw new ResponseKindError(`no draft for ${code}`);
    const value = parseAnswerInput(indicator, input);
    try {
      await this.putWithRetry(code, value);
    } catch (err) {
      if (err instanceof ApiError) this.events.onError?.(err);
      throw err;
    }
    this.drafts.delete(code);
    await this.reload(this.assessmentId);
    await this.refreshScore();
  }

  private async putWithRetry(code: string, value: AnswerValue): Promise<void> {
    try {
      const r = await this.api.putAnswer(this.assessmentId, code, value, this.version);
      this.version = r.version;
    } catch (err) {
      if (!(err instanceof ApiError) || !err.isConflict) throw err;
      this.events.onConflict?.(true);
      await this.reload(this.assessmentId);
      const r = await this.api.putAnswer(this.assessmentId, code, value, this.version);
      this.version = r.version;
    }
  }

  async refreshScore(): Promise<ScoreReport> {
    const score = await this.api.getScore(this.assessmentId);
    this.lastScore = score;
    this.events.onScore?.(score);
    return score;
  }

  // --- gap explorer -------------------------------------------------------

  async setTarget(rank: number, rationale = ''): Promise<void> {
    await this.api.setTarget(this.assessmentId, rank, rationale);
    this.cycleState = 'goals_set';
  }

  async gapReport(): Promise<GapReport> {
    return this.api.getGap(this.assessmentId);
  }

  async planItems(): Promise<PlanItem[]> {
    return (await this.api.getPlan(this.assessmentId)).items;
  }

  /**
   * Toggle a gap item on or off in the what-if set and refresh the
   * hypothetical level through the service. Never persists anything.
   */
  async toggleGap(code: string, rank: number): Promise<number | null> {
    const key = `${code}@${rank}`;
    if (this.toggled.has(key)) {
      this.toggled.delete(key);
    } else {
      this.toggled.add(key);
    }
    return this.refreshHypothetical();
  }

  isToggled(code: string, rank: number): boolean {
    return this.toggled.has(`${code}@${rank}`);
  }

  /**
   * What-if overrides derived from the toggled gap items: booleans go
   * to yes; a degree indicator gets the minimal word covering all of
   * its toggled ranks.
   */
  pendingOverrides(): Record<string, AnswerValue> {
    const order: DegreeWord[] = ['none', 'low', 'medium', 'high'];
    const out: Record<string, AnswerValue> = {};
    for (const key of this.toggled) {
      const at = key.lastIndexOf('@');
      const code = key.slice(0, at);
      const rank = Number(key.slice(at + 1));
      const indicator = this.indicator(code);
      if (indicator.response_kind === 'boolean') {
        out[code] = true;
      } else {
        const needed = degreeNeededFor(indicator, rank);
        const current = out[code];
        if (typeof current !== 'string'
            || order.indexOf(needed) > order.indexOf(current as DegreeWord)) {
          out[code] = needed;
        }
      }
    }
    return out;
  }

  async refreshHypothetical(): Promise<number | null> {
    this.lastHypothetical = await this.api.whatIf(this.assessmentId, this.pendingOverrides());
    return this.hypotheticalLevel();
  }

  clearOverrides(): void {
    this.toggled.clear();
    this.lastHypothetical = null;
  }
}
