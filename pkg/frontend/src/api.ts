/** Thin fetch client for the curator API; the console's only data source. */

import type {
  ApiError,
  CoachingPreview,
  Decision,
  ScenarioList,
} from './types';

export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly apiError: ApiError,
  ) {
    super(apiError.message);
  }
}

export interface ApiResult<T> {
  body: T;
  kbVersion: number;
}

export class CuratorClient {
  constructor(private readonly baseUrl: string = '') {}

  private async request<T>(
    method: string,
    path: string,
    payload?: unknown,
  ): Promise<ApiResult<T>> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: payload === undefined ? {} : { 'content-type': 'application/json' },
      body: payload === undefined ? undefined : JSON.stringify(payload),
    });
    const kbVersion = Number(response.headers.get('X-KB-Version') ?? '0');
    const body = await response.json();
    if (!response.ok) {
      throw new ApiRequestError(response.status, body as ApiError);
    }
    return { body: body as T, kbVersion };
  }

  decide(context: Record<string, unknown>): Promise<ApiResult<Decision>> {
    return this.request('POST', '/v1/decide', context);
  }

  kb(): Promise<ApiResult<{ version: number; text: string }>> {
    return this.request('GET', '/v1/kb');
  }

  previewRule(
    rule: string,
    context: Record<string, unknown>,
  ): Promise<ApiResult<CoachingPreview>> {
    return this.request('POST', '/v1/kb/rules?preview=1', { rule, context });
  }

  commitRule(rule: string, author: string): Promise<ApiResult<{ version: number }>> {
    return this.request('POST', '/v1/kb/rules', { rule, author });
  }

  scenarios(): Promise<ApiResult<ScenarioList>> {
    return this.request('GET', '/v1/scenarios');
  }
}
