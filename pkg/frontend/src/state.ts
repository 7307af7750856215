/** UI state shape and the pure transition/validation helpers around it. */

import {
  CorpusItem,
  HISTOGRAM_ONLY_KINDS,
  METRIC_KINDS,
  QueryResult,
  StoreConfig,
} from "./api.js";

export type FeatureFamily = "gch" | "lch" | "texture";

export const FEATURE_FAMILIES: readonly FeatureFamily[] = ["gch", "lch", "texture"];

export type Weights = Record<FeatureFamily, number>;

export interface UploadSource {
  blob: Blob;
  name: string;
  /** Object URL (or data URL) for preview; null when no preview is available. */
  previewUrl: string | null;
}

/** Snapshot of the query whose results are on screen, pinned for comparison. */
export interface QueryPin {
  title: string;
  thumbUrl: string | null;
}

export interface UiState {
  config: StoreConfig | null;
  corpusOffset: number;
  corpusLimit: number;
  corpusItems: CorpusItem[];
  corpusTotal: number;
  corpusLoaded: boolean;
  upload: UploadSource | null;
  corpusImageId: string | null;
  metric: string;
  mk: number;
  k: number;
  weights: Weights;
  results: QueryResult[] | null;
  resultsOutdated: boolean;
  queryPin: QueryPin | null;
  /** Whole-page failure (service unreachable); shown as a dismissible banner. */
  banner: string | null;
  /** Request-level failure (4xx) or client-side validation; shown next to the controls. */
  inlineError: string | null;
  loading: boolean;
}

export function initialState(): UiState {
  return {
    config: null,
    corpusOffset: 0,
    corpusLimit: 24,
    corpusItems: [],
    corpusTotal: 0,
    corpusLoaded: false,
    upload: null,
    corpusImageId: null,
    metric: "l1",
    mk: 2.0,
    k: 10,
    weights: { gch: 1.0, lch: 1.0, texture: 1.0 },
    results: null,
    resultsOutdated: false,
    queryPin: null,
    banner: null,
    inlineError: null,
    loading: false,
  };
}

/** Families that can carry weight for this config/metric combination. */
export function eligibleFamilies(config: StoreConfig | null, metric: string): FeatureFamily[] {
  const families: FeatureFamily[] = ["gch"];
  if (config === null || config.include_lch) families.push("lch");
  const textureStored = config === null || config.include_texture;
  if (textureStored && !HISTOGRAM_ONLY_KINDS.includes(metric as never)) {
    families.push("texture");
  }
  return families;
}

function roundWeight(value: number): number {
  return Math.round(value * 10) / 10;
}

/**
 * Comma-joined `family=weight` pairs for the current sliders, or null when
 * no eligible family has positive weight.
 */
export function weightsParam(state: UiState): string | null {
  const pairs: string[] = [];
  for (const family of eligibleFamilies(state.config, state.metric)) {
    const weight = roundWeight(state.weights[family]);
    if (weight > 0) pairs.push(`${family}=${weight}`);
  }
  return pairs.length > 0 ? pairs.join(",") : null;
}

/** Parse a `family=weight` string back into slider values (absent families → 0). */
export function parseWeightsParam(param: string): Weights {
  const weights: Weights = { gch: 0, lch: 0, texture: 0 };
  for (const pair of param.split(",")) {
    const trimmed = pair.trim();
    if (trimmed === "") continue;
    const eq = trimmed.indexOf("=");
    if (eq < 0) continue;
    const family = trimmed.slice(0, eq).trim() as FeatureFamily;
    const value = Number(trimmed.slice(eq + 1));
    if (FEATURE_FAMILIES.includes(family) && Number.isFinite(value)) {
      weights[family] = value;
    }
  }
  return weights;
}

/** First problem that must be fixed before a query may be submitted, or null. */
export function validateQuery(state: UiState): string | null {
  if (state.upload !== null && state.corpusImageId !== null) {
    return "choose either an uploaded file or a corpus image, not both";
  }
  if (state.upload === null && state.corpusImageId === null) {
    return "choose a query image: upload a file or click a corpus thumbnail";
  }
  if (!METRIC_KINDS.includes(state.metric as never)) {
    return `unknown metric '${state.metric}'`;
  }
  if (state.metric === "minkowski" && !(state.mk >= 1)) {
    return "minkowski needs an order of at least 1";
  }
  if (!Number.isInteger(state.k) || state.k < 1) {
    return "k must be a whole number of at least 1";
  }
  if (weightsParam(state) === null) {
    return "at least one feature weight must be positive";
  }
  return null;
}

/** Flag existing results as stale after any query parameter changes. */
export function touchParams(state: UiState): void {
  if (state.results !== null) state.resultsOutdated = true;
}
