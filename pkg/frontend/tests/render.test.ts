import { describe, expect, it } from "vitest";

import { QueryResult } from "../src/api.js";
import {
  displayedResultIds,
  escapeHtml,
  fmtDistance,
  labelText,
  renderBanner,
  renderControls,
  renderCorpus,
  renderPager,
  renderResults,
} from "../src/render.js";
import { initialState } from "../src/state.js";
import { FakeService } from "./fakes.js";

function result(id: string, distance: number, label: string | null = "red"): QueryResult {
  return {
    id,
    label,
    distance,
    per_feature: { gch: distance / 2, lch: distance / 2 },
    thumb_url: `/api/images/${id}/thumb`,
  };
}

describe("formatting", () => {
  it("renders distances with six decimals", () => {
    expect(fmtDistance(0)).toBe("0.000000");
    expect(fmtDistance(0.12345678)).toBe("0.123457");
    expect(fmtDistance(1.5)).toBe("1.500000");
  });

  it("renders missing labels as an em dash", () => {
    expect(labelText(null)).toBe("—");
    expect(labelText("")).toBe("—");
    expect(labelText("beach")).toBe("beach");
  });

  it("escapes markup in untrusted text", () => {
    expect(escapeHtml(`<img src=x onerror="pwn()">`)).toBe(
      "&lt;img src=x onerror=&quot;pwn()&quot;&gt;",
    );
  });
});

describe("results markup", () => {
  it("lists results in array order with ranks and distance badges", () => {
    const state = initialState();
    state.results = [result("a", 0), result("b", 0.25), result("c", 0.5, null)];
    const html = renderResults(state);

    expect(displayedResultIds(html)).toEqual(["a", "b", "c"]);
    expect(html).toContain(`<span class="rank">1</span>`);
    expect(html).toContain(`<span class="rank">3</span>`);
    expect(html).toContain("0.000000");
    expect(html).toContain("0.250000");
    expect(html.indexOf(`data-id="a"`)).toBeLessThan(html.indexOf(`data-id="b"`));
    expect(html).toContain("—"); // unlabeled entry
  });

  it("includes the per-feature breakdown", () => {
    const state = initialState();
    state.results = [result("a", 0.5)];
    const html = renderResults(state);
    expect(html).toContain("per-feature");
    expect(html).toContain("gch");
    expect(html).toContain("0.250000");
  });

  it("shows the outdated cue only when flagged", () => {
    const state = initialState();
    state.results = [result("a", 0)];
    expect(renderResults(state)).not.toContain("Results outdated");
    state.resultsOutdated = true;
    expect(renderResults(state)).toContain("Results outdated");
  });

  it("escapes hostile ids and labels", () => {
    const state = initialState();
    state.results = [result(`<script>alert(1)</script>`, 0, `<b>x</b>`)];
    const html = renderResults(state);
    expect(html).not.toContain("<script>");
    expect(html).not.toContain("<b>x</b>");
  });

  it("renders a hint before any query and a spinner while loading", () => {
    const state = initialState();
    expect(renderResults(state)).toContain("Pick a query image");
    state.loading = true;
    expect(renderResults(state)).toContain("Searching");
  });
});

describe("corpus markup", () => {
  it("renders thumbnails with labels and marks the selected one", () => {
    const state = initialState();
    state.corpusLoaded = true;
    state.corpusItems = new FakeService().items;
    state.corpusImageId = "red_02";
    const html = renderCorpus(state);
    expect(html).toContain(`class="thumb selected" data-id="red_02"`);
    expect(html).toContain("blue_03");
  });

  it("shows the empty-state message for an empty page", () => {
    const state = initialState();
    state.corpusLoaded = true;
    state.corpusItems = [];
    expect(renderCorpus(state)).toContain("No images on this page.");
  });

  it("disables pager buttons at the bounds", () => {
    const state = initialState();
    state.corpusLoaded = true;
    state.corpusItems = new FakeService().items;
    state.corpusTotal = 6;
    state.corpusLimit = 24;
    const html = renderPager(state);
    expect(html).toContain(`data-action="prev-page" disabled`);
    expect(html).toContain(`data-action="next-page" disabled`);
    expect(html).toContain("1–6 of 6");
  });
});

describe("controls markup", () => {
  it("shows the minkowski order input only for minkowski", () => {
    const state = initialState();
    expect(renderControls(state)).toContain(`class="mk-field" hidden`);
    state.metric = "minkowski";
    expect(renderControls(state)).toContain(`class="mk-field">`);
  });

  it("offers every metric kind in the dropdown", () => {
    const html = renderControls(initialState());
    for (const kind of [
      "l1",
      "euclidean",
      "intersection",
      "quadratic",
      "chebyshev",
      "bray_curtis",
      "manhattan",
      "hamming",
      "minkowski",
    ]) {
      expect(html).toContain(`<option value="${kind}"`);
    }
  });

  it("disables the texture slider for histogram-only metrics", () => {
    const state = initialState();
    state.metric = "hamming";
    const html = renderControls(state);
    expect(html).toContain(`data-family="texture" disabled`);
    expect(html).toContain(`data-family="gch">`);
  });

  it("uses 0..2 sliders with 0.1 steps", () => {
    const html = renderControls(initialState());
    expect(html).toContain(`min="0" max="2" step="0.1"`);
  });

  it("shows the inline error next to the controls", () => {
    const state = initialState();
    state.inlineError = "k must be a whole number of at least 1";
    expect(renderControls(state)).toContain("k must be a whole number");
  });
});

describe("banner markup", () => {
  it("is empty without a failure and offers retry/dismiss with one", () => {
    expect(renderBanner(null)).toBe("");
    const html = renderBanner("service unreachable: fetch failed");
    expect(html).toContain("service unreachable");
    expect(html).toContain(`data-action="retry"`);
    expect(html).toContain(`data-action="dismiss"`);
  });
});
