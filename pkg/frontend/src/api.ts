/**
 * Typed client for the assessment service API (/api/v1).
 *
 * All maturity numbers shown in the UI come from these responses; the
 * client never computes levels itself.
 */

export type Rank = 1 | 2 | 3 | 4 | 5;
export type DegreeWord = 'none' | 'low' | 'medium' | 'high';
export type AnswerValue = boolean | DegreeWord | { na: string };

export interface IndicatorDoc {
  code: string;
  question: string;
  group?: string;
  levels: number[];
  response_kind: 'boolean' | 'degree';
  sources: string[];
}

export interface ConceptDoc {
  id: string;
  name: string;
  sources: string[];
  indicators: IndicatorDoc[];
}

export interface ModelDoc {
  model_id: string;
  version: string;
  levels: { rank: number; name: string }[];
  concepts: ConceptDoc[];
  plan: { level: number; concept_id: string; objective: string; actions: string[] }[];
}

export interface ScoreReport {
  assessment_id: string;
  institution: string;
  overall_level: number;
  per_concept_levels: Record<string, number>;
  vacuous_concepts: string[];
  fulfillment: Record<string, string>;
  computed_at: string;
}

export interface GapEntry {
  code: string;
  rank: number;
  status: string;
  concept_id: string;
}

export interface GapReport {
  current_level: number;
  target: { rank: number; rationale: string };
  already_met: boolean;
  gaps: GapEntry[];
  per_concept_counts: Record<string, number>;
}

export interface PlanItem {
  concept_id: string;
  concept_name: string;
  level: number;
  objective: string;
  actions: string[];
  gap_codes: string[];
  no_plan_entry: boolean;
}

export interface AssessmentDoc {
  assessment_id: string;
  institution: string;
  answers: Record<string, { indicator_code: string; value: unknown; answered_at: string }>;
  version: number;
  cycle_state: string | null;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { 'content-type': 'application/json' } };
    if (body !== undefined) init.body = JSON.stringify(body);
    let res: Response;
    try {
      res = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, 'network_error', `service unreachable: ${String(err)}`);
    }
    if (!res.ok) {
      let code = 'error';
      let message = `${res.status} ${res.statusText}`;
      try {
        const payload = await res.json();
        if (payload?.error) {
          code = payload.error.code ?? code;
          message = payload.error.message ?? message;
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(res.status, code, message);
    }
    return (await res.json()) as T;
  }

  getModel(): Promise<ModelDoc> {
    return this.request('GET', '/api/v1/model');
  }

  createAssessment(institution: string, assessmentId?: string) {
    return this.request<{ assessment_id: string; version: number }>(
      'POST', '/api/v1/assessments',
      { institution, assessment_id: assessmentId ?? null });
  }

  getAssessment(id: string): Promise<AssessmentDoc> {
    return this.request('GET', `/api/v1/assessments/${id}`);
  }

  putAnswer(id: string, code: string, value: AnswerValue, baseVersion: number) {
    return this.request<{ version: number }>(
      'PUT', `/api/v1/assessments/${id}/answers/${code}`,
      { value, base_version: baseVersion });
  }

  getScore(id: string): Promise<ScoreReport> {
    return this.request('GET', `/api/v1/assessments/${id}/score`);
  }

  setTarget(id: string, rank: number, rationale = '') {
    return this.request('POST', `/api/v1/assessments/${id}/target`, { rank, rationale });
  }

  getGap(id: string): Promise<GapReport> {
    return this.request('GET', `/api/v1/assessments/${id}/gap`);
  }

  getPlan(id: string): Promise<{ items: PlanItem[] }> {
    return this.request('GET', `/api/v1/assessments/${id}/plan`);
  }

  whatIf(id: string, overrides: Record<string, AnswerValue>): Promise<ScoreReport> {
    return this.request('POST', `/api/v1/assessments/${id}/whatif`, { overrides });
  }

  remeasure(id: string) {
    return this.request<{ score: ScoreReport; delta: unknown }>(
      'POST', `/api/v1/assessments/${id}/remeasure`);
  }

  benchmark(ids: string[]) {
    return this.request('GET', `/api/v1/benchmark?ids=${ids.join(',')}`);
  }
}
