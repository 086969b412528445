// Thin typed client over the four service endpoints, with a latest-wins
// gate so a slow response never overwrites a newer action's result.

import type {
  DiagnoseResponse,
  FieldError,
  ProfileDocument,
  RecommendResponse,
  Vocabulary,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly detail: FieldError | null,
  ) {
    super(message);
  }
}

async function parseResponse<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let detail: FieldError | null = null;
  try {
    const body = await response.json();
    if (body && typeof body === "object" && body.detail) {
      detail = body.detail as FieldError;
    }
  } catch {
    // non-JSON error body: keep detail null
  }
  throw new ApiError(
    detail ? `${detail.field}: ${detail.reason}` : `HTTP ${response.status}`,
    response.status,
    detail,
  );
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    }).then((response) => parseResponse<T>(response));
  }

  vocabulary(): Promise<Vocabulary> {
    return this.fetchImpl(this.baseUrl + "/vocabulary").then((response) =>
      parseResponse<Vocabulary>(response),
    );
  }

  recommend(profile: ProfileDocument, topN?: number): Promise<RecommendResponse> {
    const body = topN ? { ...profile, topN } : profile;
    return this.post<RecommendResponse>("/recommend", body);
  }

  diagnose(
    profile: ProfileDocument,
    delta: string[],
    topN?: number,
  ): Promise<DiagnoseResponse> {
    const body = topN
      ? { ...profile, delta, topN }
      : { ...profile, delta };
    return this.post<DiagnoseResponse>("/diagnose", body);
  }
}

/** Tags each started request; only the most recently started one may
 * deliver. Superseded responses resolve to null. */
export class LatestGate {
  private current = 0;

  async run<T>(action: () => Promise<T>): Promise<T | null> {
    const ticket = ++this.current;
    const result = await action();
    return ticket === this.current ? result : null;
  }
}
