/** Typed client for the retrieval service HTTP API. */

export const METRIC_KINDS = [
  "l1",
  "euclidean",
  "intersection",
  "quadratic",
  "chebyshev",
  "bray_curtis",
  "manhattan",
  "hamming",
  "minkowski",
] as const;

export type MetricKind = (typeof METRIC_KINDS)[number];

/** Metric kinds that compare whole histograms and cannot score texture vectors. */
export const HISTOGRAM_ONLY_KINDS: readonly MetricKind[] = ["bray_curtis", "hamming"];

export interface StoreConfig {
  h_bins: number;
  s_bins: number;
  v_bins: number;
  grid_rows: number;
  grid_cols: number;
  include_lch: boolean;
  include_texture: boolean;
  entry_count: number;
}

export interface CorpusItem {
  id: string;
  label: string | null;
  thumb_url: string;
}

export interface CorpusPage {
  items: CorpusItem[];
  total: number;
}

export interface QueryResult {
  id: string;
  label: string | null;
  distance: number;
  per_feature: Record<string, number>;
  thumb_url: string;
}

export interface QueryResponse {
  results: QueryResult[];
}

export type QuerySource =
  | { kind: "corpus"; id: string }
  | { kind: "upload"; blob: Blob; name: string };

export interface QueryParams {
  metric: string;
  /** Minkowski order; must be null for every other metric. */
  mk: number | null;
  k: number;
  /** Comma-joined `family=weight` pairs, or null for server defaults. */
  weights: string | null;
}

/** Error carrying the HTTP status and the service's structured message. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchFn = (url: string, init?: RequestInit) => Promise<Response>;

async function errorFrom(response: Response): Promise<ApiError> {
  let message = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as { error?: unknown };
    if (typeof body.error === "string" && body.error.length > 0) {
      message = body.error;
    }
  } catch {
    // Non-JSON error body; keep the status-based message.
  }
  return new ApiError(response.status, message);
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchFn;

  constructor(options: { baseUrl?: string; fetchFn?: FetchFn } = {}) {
    this.baseUrl = options.baseUrl ?? "";
    this.fetchFn = options.fetchFn ?? ((url, init) => fetch(url, init));
  }

  thumbUrl(pathOrId: string): string {
    const path = pathOrId.startsWith("/api/")
      ? pathOrId
      : `/api/images/${encodeURIComponent(pathOrId)}/thumb`;
    return this.baseUrl + path;
  }

  async health(): Promise<{ status: string }> {
    const response = await this.fetchFn(`${this.baseUrl}/api/health`);
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as { status: string };
  }

  async config(): Promise<StoreConfig> {
    const response = await this.fetchFn(`${this.baseUrl}/api/config`);
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as StoreConfig;
  }

  async corpusPage(offset: number, limit: number): Promise<CorpusPage> {
    const url = `${this.baseUrl}/api/corpus?offset=${offset}&limit=${limit}`;
    const response = await this.fetchFn(url);
    if (!response.ok) throw await errorFrom(response);
    const items = (await response.json()) as CorpusItem[];
    const total = Number(response.headers.get("X-Total-Count") ?? items.length);
    return { items, total };
  }

  async query(source: QuerySource, params: QueryParams): Promise<QueryResponse> {
    const form = new FormData();
    if (source.kind === "corpus") {
      form.set("image_id", source.id);
    } else {
      form.set("file", source.blob, source.name);
    }
    form.set("metric", params.metric);
    if (params.mk !== null) form.set("mk", String(params.mk));
    form.set("k", String(params.k));
    if (params.weights !== null) form.set("weights", params.weights);

    const response = await this.fetchFn(`${this.baseUrl}/api/query`, {
      method: "POST",
      body: form,
    });
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as QueryResponse;
  }
}
