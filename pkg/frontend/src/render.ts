/** Pure HTML string builders; every number shown comes verbatim from the API. */

import { METRIC_KINDS, QueryResult } from "./api.js";
import { FEATURE_FAMILIES, FeatureFamily, UiState, eligibleFamilies } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

/** Distance badge text: six decimal places, matching the CLI table. */
export function fmtDistance(distance: number): string {
  return distance.toFixed(6);
}

/** Label text for display; unlabeled corpora render as an em dash. */
export function labelText(label: string | null): string {
  return label === null || label === "" ? "—" : label;
}

export function renderBanner(banner: string | null): string {
  if (banner === null) return "";
  return (
    `<div class="banner" role="alert">` +
    `<span>${escapeHtml(banner)}</span>` +
    `<button type="button" data-action="retry">Retry</button>` +
    `<button type="button" data-action="dismiss">Dismiss</button>` +
    `</div>`
  );
}

function renderWeightRow(state: UiState, family: FeatureFamily): string {
  const eligible = eligibleFamilies(state.config, state.metric).includes(family);
  const value = state.weights[family];
  const disabled = eligible ? "" : " disabled";
  return (
    `<label class="weight-row${eligible ? "" : " ineligible"}">` +
    `<span class="weight-name">${family}</span>` +
    `<input type="range" min="0" max="2" step="0.1" value="${value}"` +
    ` data-family="${family}"${disabled}>` +
    `<span class="weight-value">${value.toFixed(1)}</span>` +
    `</label>`
  );
}

export function renderControls(state: UiState): string {
  const options = METRIC_KINDS.map(
    (kind) =>
      `<option value="${kind}"${kind === state.metric ? " selected" : ""}>${kind}</option>`,
  ).join("");
  const mkVisible = state.metric === "minkowski";
  const sourceText =
    state.corpusImageId !== null
      ? `corpus image <code>${escapeHtml(state.corpusImageId)}</code>`
      : state.upload !== null
        ? `upload <code>${escapeHtml(state.upload.name)}</code>`
        : "none — upload a file or click a thumbnail";
  return (
    `<div class="control-row">` +
    `<label>metric <select data-field="metric">${options}</select></label>` +
    `<label class="mk-field"${mkVisible ? "" : " hidden"}>order ` +
    `<input type="number" min="1" step="0.5" value="${state.mk}" data-field="mk"></label>` +
    `<label>k <input type="number" min="1" step="1" value="${state.k}" data-field="k"></label>` +
    `</div>` +
    `<div class="control-row weights">${FEATURE_FAMILIES.map((f) => renderWeightRow(state, f)).join("")}</div>` +
    `<div class="control-row">` +
    `<label class="upload-field">upload <input type="file" accept="image/*" data-field="file"></label>` +
    `<span class="query-source">query: ${sourceText}</span>` +
    `<button type="button" data-action="clear-source"${state.upload === null && state.corpusImageId === null ? " disabled" : ""}>Clear</button>` +
    `<button type="button" data-action="submit">Search</button>` +
    `</div>` +
    (state.inlineError !== null
      ? `<p class="inline-error" role="alert">${escapeHtml(state.inlineError)}</p>`
      : "")
  );
}

export function renderQueryPin(state: UiState): string {
  if (state.queryPin === null) return "";
  const thumb =
    state.queryPin.thumbUrl !== null
      ? `<img src="${escapeHtml(state.queryPin.thumbUrl)}" alt="query image">`
      : `<span class="no-preview">no preview</span>`;
  return (
    `<figure class="pin">${thumb}` +
    `<figcaption>query: ${escapeHtml(state.queryPin.title)}</figcaption></figure>`
  );
}

function renderPerFeature(perFeature: Record<string, number>): string {
  const rows = Object.entries(perFeature)
    .map(
      ([family, distance]) =>
        `<div class="pf-row"><dt>${escapeHtml(family)}</dt>` +
        `<dd>${fmtDistance(distance)}</dd></div>`,
    )
    .join("");
  return `<details><summary>per-feature</summary><dl class="per-feature">${rows}</dl></details>`;
}

export function renderResultItem(result: QueryResult, rank: number): string {
  return (
    `<li class="result" data-id="${escapeHtml(result.id)}" title="click to pivot">` +
    `<span class="rank">${rank}</span>` +
    `<img src="${escapeHtml(result.thumb_url)}" alt="${escapeHtml(result.id)}">` +
    `<span class="result-id">${escapeHtml(result.id)}</span>` +
    `<span class="result-label">${escapeHtml(labelText(result.label))}</span>` +
    `<span class="distance">${fmtDistance(result.distance)}</span>` +
    renderPerFeature(result.per_feature) +
    `</li>`
  );
}

export function renderResults(state: UiState): string {
  if (state.loading) {
    return `<p class="loading">Searching…</p>`;
  }
  if (state.results === null) {
    return `<p class="hint">Pick a query image and press Search.</p>`;
  }
  const cue = state.resultsOutdated
    ? `<p class="outdated" role="status">Results outdated — parameters changed; press Search to refresh.</p>`
    : "";
  if (state.results.length === 0) {
    return `${cue}<p class="empty">No results.</p>`;
  }
  const items = state.results.map((result, i) => renderResultItem(result, i + 1)).join("");
  return `${cue}<ol class="results">${items}</ol>`;
}

export function renderCorpus(state: UiState): string {
  if (!state.corpusLoaded) {
    return `<p class="loading">Loading corpus…</p>`;
  }
  if (state.corpusItems.length === 0) {
    return `<p class="empty">No images on this page.</p>`;
  }
  const cells = state.corpusItems
    .map((item) => {
      const selected = item.id === state.corpusImageId ? " selected" : "";
      return (
        `<figure class="thumb${selected}" data-id="${escapeHtml(item.id)}">` +
        `<img src="${escapeHtml(item.thumb_url)}" alt="${escapeHtml(item.id)}">` +
        `<figcaption>${escapeHtml(labelText(item.label))}</figcaption>` +
        `</figure>`
      );
    })
    .join("");
  return `<div class="corpus-grid">${cells}</div>`;
}

export function renderPager(state: UiState): string {
  if (!state.corpusLoaded) return "";
  const from = state.corpusTotal === 0 ? 0 : state.corpusOffset + 1;
  const to = Math.min(state.corpusOffset + state.corpusItems.length, state.corpusTotal);
  const prevDisabled = state.corpusOffset <= 0 ? " disabled" : "";
  const nextDisabled = state.corpusOffset + state.corpusLimit >= state.corpusTotal ? " disabled" : "";
  return (
    `<button type="button" data-action="prev-page"${prevDisabled}>← Prev</button>` +
    `<span class="pager-text">${from}–${to} of ${state.corpusTotal}</span>` +
    `<button type="button" data-action="next-page"${nextDisabled}>Next →</button>`
  );
}

/** Order of result ids as they appear in rendered results markup. */
export function displayedResultIds(html: string): string[] {
  const ids: string[] = [];
  const pattern = /<li class="result" data-id="([^"]*)"/g;
  let match: RegExpExecArray | null;
  while ((match = pattern.exec(html)) !== null) {
    ids.push(match[1]!);
  }
  return ids;
}
