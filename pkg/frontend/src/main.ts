/** Browser entry point: binds the controller to the DOM and browser history. */

import { ApiClient } from "./api.js";
import { AppController, HistoryEntry, HistoryPort } from "./controller.js";
import { FeatureFamily, UiState } from "./state.js";
import {
  renderBanner,
  renderControls,
  renderCorpus,
  renderPager,
  renderQueryPin,
  renderResults,
} from "./render.js";

const browserHistory: HistoryPort = {
  push(entry: HistoryEntry) {
    window.history.pushState(entry, "");
  },
  replace(entry: HistoryEntry) {
    window.history.replaceState(entry, "");
  },
};

function region(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing page region #${id}`);
  return el;
}

const regions = {
  banner: region("banner"),
  controls: region("controls"),
  pin: region("pin"),
  results: region("results"),
  corpus: region("corpus"),
  pager: region("pager"),
};

function render(state: UiState): void {
  regions.banner.innerHTML = renderBanner(state.banner);
  regions.controls.innerHTML = renderControls(state);
  regions.pin.innerHTML = renderQueryPin(state);
  regions.results.innerHTML = renderResults(state);
  regions.corpus.innerHTML = renderCorpus(state);
  regions.pager.innerHTML = renderPager(state);
}

const controller = new AppController({
  api: new ApiClient(),
  history: browserHistory,
  render,
});

document.addEventListener("click", (event) => {
  const target = event.target as HTMLElement | null;
  if (target === null) return;

  const actionEl = target.closest<HTMLElement>("[data-action]");
  if (actionEl !== null) {
    switch (actionEl.dataset.action) {
      case "submit":
        void controller.submitQuery();
        return;
      case "clear-source":
        controller.clearQuerySource();
        return;
      case "retry":
        void controller.reload();
        return;
      case "dismiss":
        controller.dismissBanner();
        return;
      case "prev-page":
        void controller.prevCorpusPage();
        return;
      case "next-page":
        void controller.nextCorpusPage();
        return;
    }
  }

  const resultEl = target.closest<HTMLElement>("#results .result[data-id]");
  if (resultEl !== null && resultEl.dataset.id !== undefined) {
    void controller.pivotTo(resultEl.dataset.id);
    return;
  }

  const thumbEl = target.closest<HTMLElement>("#corpus .thumb[data-id]");
  if (thumbEl !== null && thumbEl.dataset.id !== undefined) {
    controller.selectCorpusImage(thumbEl.dataset.id);
  }
});

document.addEventListener("change", (event) => {
  const target = event.target as HTMLInputElement | HTMLSelectElement | null;
  if (target === null) return;
  switch (target.dataset.field) {
    case "metric":
      controller.setMetric(target.value);
      return;
    case "mk":
      controller.setMk(Number(target.value));
      return;
    case "k":
      controller.setK(Number(target.value));
      return;
    case "file": {
      const input = target as HTMLInputElement;
      const file = input.files?.[0];
      if (file !== undefined) {
        controller.setUploadFile(file, file.name, URL.createObjectURL(file));
      }
      return;
    }
  }
});

document.addEventListener("input", (event) => {
  const target = event.target as HTMLInputElement | null;
  if (target === null || target.dataset.family === undefined) return;
  controller.setWeight(target.dataset.family as FeatureFamily, Number(target.value));
});

window.addEventListener("popstate", (event) => {
  void controller.handlePopState(event.state as HistoryEntry | null);
});

void controller.start();
