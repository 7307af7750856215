/** Application logic behind the page: state transitions, API calls, history. */

import { ApiClient, ApiError, QueryParams, QuerySource } from "./api.js";
import {
  FeatureFamily,
  UiState,
  UploadSource,
  initialState,
  parseWeightsParam,
  touchParams,
  validateQuery,
  weightsParam,
} from "./state.js";

export type HistorySource =
  | { kind: "corpus"; id: string }
  | { kind: "upload"; token: number };

export type HistoryEntry =
  | { kind: "browse" }
  | {
      kind: "query";
      source: HistorySource;
      metric: string;
      mk: number | null;
      k: number;
      weights: string | null;
    };

/** Thin seam over the browser history so tests can drive back-navigation. */
export interface HistoryPort {
  push(entry: HistoryEntry): void;
  replace(entry: HistoryEntry): void;
}

export interface ControllerDeps {
  api: ApiClient;
  history: HistoryPort;
  render: (state: UiState) => void;
}

export class AppController {
  readonly state: UiState = initialState();

  private readonly api: ApiClient;
  private readonly history: HistoryPort;
  private readonly renderFn: (state: UiState) => void;

  /** Monotone id of the newest submitted query; stale responses are discarded. */
  private seq = 0;
  /** Uploaded files kept for history restoration, keyed by token. */
  private readonly uploads = new Map<number, UploadSource>();
  private nextUploadToken = 1;

  constructor(deps: ControllerDeps) {
    this.api = deps.api;
    this.history = deps.history;
    this.renderFn = deps.render;
  }

  private render(): void {
    this.renderFn(this.state);
  }

  /** Load config and the first corpus page; establish the browse history entry. */
  async start(): Promise<void> {
    this.history.replace({ kind: "browse" });
    await this.reload();
  }

  /** (Re)load config + current corpus page; used at start and by the retry control. */
  async reload(): Promise<void> {
    this.state.banner = null;
    try {
      if (this.state.config === null) {
        this.state.config = await this.api.config();
      }
      await this.fetchCorpusPage(this.state.corpusOffset);
    } catch (error) {
      this.state.banner = describeFailure(error);
      this.render();
    }
  }

  private async fetchCorpusPage(offset: number): Promise<void> {
    const page = await this.api.corpusPage(offset, this.state.corpusLimit);
    this.state.corpusOffset = offset;
    this.state.corpusItems = page.items;
    this.state.corpusTotal = page.total;
    this.state.corpusLoaded = true;
    this.render();
  }

  async loadCorpusPage(offset: number): Promise<void> {
    if (offset < 0) offset = 0;
    try {
      await this.fetchCorpusPage(offset);
    } catch (error) {
      this.state.banner = describeFailure(error);
      this.render();
    }
  }

  async nextCorpusPage(): Promise<void> {
    const offset = this.state.corpusOffset + this.state.corpusLimit;
    if (offset < this.state.corpusTotal) await this.loadCorpusPage(offset);
  }

  async prevCorpusPage(): Promise<void> {
    await this.loadCorpusPage(this.state.corpusOffset - this.state.corpusLimit);
  }

  dismissBanner(): void {
    this.state.banner = null;
    this.render();
  }

  /** Make a corpus image the query source; mutually exclusive with an upload. */
  selectCorpusImage(id: string): void {
    this.state.corpusImageId = id;
    this.state.upload = null;
    this.state.inlineError = null;
    touchParams(this.state);
    this.render();
  }

  /** Make an uploaded file the query source; mutually exclusive with a corpus id. */
  setUploadFile(blob: Blob, name: string, previewUrl: string | null = null): void {
    this.state.upload = { blob, name, previewUrl };
    this.state.corpusImageId = null;
    this.state.inlineError = null;
    touchParams(this.state);
    this.render();
  }

  clearQuerySource(): void {
    this.state.upload = null;
    this.state.corpusImageId = null;
    this.render();
  }

  setMetric(metric: string): void {
    this.state.metric = metric;
    touchParams(this.state);
    this.render();
  }

  setMk(mk: number): void {
    this.state.mk = mk;
    touchParams(this.state);
    this.render();
  }

  setK(k: number): void {
    this.state.k = k;
    touchParams(this.state);
    this.render();
  }

  setWeight(family: FeatureFamily, value: number): void {
    this.state.weights[family] = value;
    touchParams(this.state);
    this.render();
  }

  /**
   * Validate, then submit the current query. Invalid states are blocked before
   * any request is made. A newer submission supersedes a pending one: responses
   * arriving for an older sequence number are dropped unrendered.
   */
  async submitQuery(pushHistory = true): Promise<void> {
    const problem = validateQuery(this.state);
    if (problem !== null) {
      this.state.inlineError = problem;
      this.render();
      return;
    }

    const weights = weightsParam(this.state);
    const mk = this.state.metric === "minkowski" ? this.state.mk : null;
    const params: QueryParams = { metric: this.state.metric, mk, k: this.state.k, weights };

    let source: QuerySource;
    let historySource: HistorySource;
    let pinTitle: string;
    let pinThumb: string | null;
    if (this.state.corpusImageId !== null) {
      source = { kind: "corpus", id: this.state.corpusImageId };
      historySource = { kind: "corpus", id: this.state.corpusImageId };
      pinTitle = this.state.corpusImageId;
      pinThumb = this.api.thumbUrl(this.state.corpusImageId);
    } else {
      const upload = this.state.upload!;
      const token = this.nextUploadToken++;
      this.uploads.set(token, upload);
      source = { kind: "upload", blob: upload.blob, name: upload.name };
      historySource = { kind: "upload", token };
      pinTitle = upload.name;
      pinThumb = upload.previewUrl;
    }

    if (pushHistory) {
      this.history.push({ kind: "query", source: historySource, ...params });
    }

    const mySeq = ++this.seq;
    this.state.loading = true;
    this.state.inlineError = null;
    this.render();

    let results;
    try {
      results = (await this.api.query(source, params)).results;
    } catch (error) {
      if (mySeq !== this.seq) return; // superseded while in flight
      this.state.loading = false;
      if (error instanceof ApiError) {
        this.state.inlineError = error.message;
      } else {
        this.state.banner = describeFailure(error);
      }
      this.render();
      return;
    }
    if (mySeq !== this.seq) return; // a newer query answered first

    this.state.results = results;
    this.state.resultsOutdated = false;
    this.state.loading = false;
    this.state.queryPin = { title: pinTitle, thumbUrl: pinThumb };
    this.render();
  }

  /** Turn a result into the next query with the current parameters. */
  async pivotTo(id: string): Promise<void> {
    this.selectCorpusImage(id);
    await this.submitQuery();
  }

  /** Restore the state a history entry describes; re-issue its query if any. */
  async handlePopState(entry: HistoryEntry | null): Promise<void> {
    if (entry === null || entry.kind === "browse") {
      this.state.results = null;
      this.state.resultsOutdated = false;
      this.state.queryPin = null;
      this.state.inlineError = null;
      this.render();
      return;
    }
    this.state.metric = entry.metric;
    if (entry.mk !== null) this.state.mk = entry.mk;
    this.state.k = entry.k;
    if (entry.weights !== null) {
      this.state.weights = parseWeightsParam(entry.weights);
    }
    if (entry.source.kind === "corpus") {
      this.state.corpusImageId = entry.source.id;
      this.state.upload = null;
    } else {
      const upload = this.uploads.get(entry.source.token);
      if (upload === undefined) {
        this.state.banner = "that query used an uploaded file that is no longer held; upload it again";
        this.render();
        return;
      }
      this.state.upload = upload;
      this.state.corpusImageId = null;
    }
    await this.submitQuery(false);
  }
}

function describeFailure(error: unknown): string {
  const detail = error instanceof Error ? error.message : String(error);
  return `service unreachable: ${detail}`;
}
