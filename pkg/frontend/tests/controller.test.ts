import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { AppController } from "../src/controller.js";
import { FakeHistory, FakeService, RenderRecorder, deferred } from "./fakes.js";

function makeApp(service = new FakeService()) {
  const history = new FakeHistory();
  const recorder = new RenderRecorder();
  const controller = new AppController({
    api: new ApiClient({ fetchFn: service.fetchFn }),
    history,
    render: recorder.render,
  });
  history.onpop = (entry) => controller.handlePopState(entry);
  return { service, history, recorder, controller };
}

describe("startup", () => {
  it("loads config and the first corpus page in service order", async () => {
    const { service, recorder, controller } = makeApp();
    await controller.start();

    expect(controller.state.config?.entry_count).toBe(6);
    expect(recorder.last.corpusIds).toEqual(service.items.map((i) => i.id));
    expect(recorder.last.banner).toBeNull();
  });

  it("replaces the initial history entry with a browse marker", async () => {
    const { history, controller } = makeApp();
    await controller.start();
    expect(history.entries).toEqual([{ kind: "browse" }]);
    expect(history.depth).toBe(1);
  });

  it("shows a banner with a retry path when the service is down", async () => {
    const { service, recorder, controller } = makeApp();
    service.failNetwork = true;
    await controller.start();
    expect(recorder.last.banner).toContain("service unreachable");

    service.failNetwork = false;
    await controller.reload();
    expect(recorder.last.banner).toBeNull();
    expect(recorder.last.corpusIds).toHaveLength(6);
  });
});

describe("corpus paging", () => {
  it("pages forward and back within bounds", async () => {
    const { recorder, controller } = makeApp();
    controller.state.corpusLimit = 4;
    await controller.start();
    expect(recorder.last.corpusIds).toHaveLength(4);

    await controller.nextCorpusPage();
    expect(recorder.last.corpusIds).toEqual(["blue_02", "blue_03"]);

    await controller.nextCorpusPage(); // already at the end; no further page
    expect(recorder.last.corpusIds).toEqual(["blue_02", "blue_03"]);

    await controller.prevCorpusPage();
    expect(recorder.last.corpusIds).toEqual(["red_01", "red_02", "red_03", "blue_01"]);
  });

  it("renders an empty-state message for a page past the end", async () => {
    const { recorder, controller } = makeApp();
    await controller.start();
    await controller.loadCorpusPage(100);
    expect(recorder.last.corpusIds).toEqual([]);
    expect(recorder.last.corpusHtml).toContain("No images on this page.");
  });
});

describe("query source selection", () => {
  it("keeps upload and corpus id mutually exclusive", async () => {
    const { controller } = makeApp();
    await controller.start();

    controller.selectCorpusImage("red_01");
    expect(controller.state.corpusImageId).toBe("red_01");

    controller.setUploadFile(new Blob(["x"]), "probe.png");
    expect(controller.state.corpusImageId).toBeNull();
    expect(controller.state.upload?.name).toBe("probe.png");

    controller.selectCorpusImage("blue_02");
    expect(controller.state.upload).toBeNull();
    expect(controller.state.corpusImageId).toBe("blue_02");
  });

  it("blocks submission before any request when both sources are somehow set", async () => {
    const { service, recorder, controller } = makeApp();
    await controller.start();

    controller.state.corpusImageId = "red_01";
    controller.state.upload = { blob: new Blob(["x"]), name: "x.png", previewUrl: null };
    const requestsBefore = service.log.length;
    await controller.submitQuery();

    expect(recorder.last.inlineError).toContain("not both");
    expect(service.log.length).toBe(requestsBefore);
  });

  it("blocks submission when no source is set", async () => {
    const { service, recorder, controller } = makeApp();
    await controller.start();
    const requestsBefore = service.log.length;
    await controller.submitQuery();
    expect(recorder.last.inlineError).toContain("choose a query image");
    expect(service.log.length).toBe(requestsBefore);
  });
});

describe("query submission", () => {
  it("renders results in response order with the query pinned", async () => {
    const { recorder, controller } = makeApp();
    await controller.start();
    controller.selectCorpusImage("red_02");
    await controller.submitQuery();

    const frame = recorder.last;
    expect(frame.resultIds?.[0]).toBe("red_02");
    expect(frame.resultDistances?.[0]).toBe(0);
    expect(frame.inlineError).toBeNull();
    expect(controller.state.queryPin?.title).toBe("red_02");
  });

  it("sends the weights the sliders imply, dropping texture for hamming", async () => {
    const { service, controller } = makeApp();
    await controller.start();
    controller.selectCorpusImage("red_01");
    controller.setMetric("hamming");
    await controller.submitQuery();

    const record = service.log[service.log.length - 1]!;
    expect(record.form?.["metric"]).toBe("hamming");
    expect(record.form?.["weights"]).toBe("gch=1,lch=1");
  });

  it("passes the minkowski order through", async () => {
    const { service, controller } = makeApp();
    await controller.start();
    controller.selectCorpusImage("red_01");
    controller.setMetric("minkowski");
    controller.setMk(2.5);
    await controller.submitQuery();
    expect(service.log[service.log.length - 1]!.form).toMatchObject({
      metric: "minkowski",
      mk: "2.5",
    });
  });

  it("blocks a minkowski query with an order below 1 client-side", async () => {
    const { service, recorder, controller } = makeApp();
    await controller.start();
    controller.selectCorpusImage("red_01");
    controller.setMetric("minkowski");
    controller.setMk(0.25);
    const requestsBefore = service.log.length;
    await controller.submitQuery();
    expect(recorder.last.inlineError).toContain("at least 1");
    expect(service.log.length).toBe(requestsBefore);
  });

  it("surfaces a 404 for an unknown id as an inline error, keeping old results", async () => {
    const { recorder, controller } = makeApp();
    await controller.start();
    controller.selectCorpusImage("red_01");
    await controller.submitQuery();
    const before = recorder.last.resultIds;

    controller.state.corpusImageId = "ghost";
    await controller.submitQuery();
    expect(recorder.last.inlineError).toBe("unknown image id 'ghost'");
    expect(recorder.last.resultIds).toEqual(before);
    expect(recorder.last.loading).toBe(false);
  });

  it("shows a banner when the service dies mid-session", async () => {
    const { service, recorder, controller } = makeApp();
    await controller.start();
    controller.selectCorpusImage("red_01");
    service.failNetwork = true;
    await controller.submitQuery();
    expect(recorder.last.banner).toContain("service unreachable");
    expect(recorder.last.loading).toBe(false);
  });

  it("marks results outdated when parameters change, fresh after resubmit", async () => {
    const { recorder, controller } = makeApp();
    await controller.start();
    controller.selectCorpusImage("red_01");
    await controller.submitQuery();
    expect(recorder.last.outdated).toBe(false);

    controller.setK(3);
    expect(recorder.last.outdated).toBe(true);
    expect(recorder.last.resultsHtml).toContain("Results outdated");

    await controller.submitQuery();
    expect(recorder.last.outdated).toBe(false);
    expect(recorder.last.resultIds).toHaveLength(3);
  });
});

describe("superseded queries", () => {
  it("discards a stale response that arrives after a newer one", async () => {
    const { service, recorder, controller } = makeApp();
    await controller.start();

    const gateA = deferred();
    const gateB = deferred();
    service.queryGates.push(gateA.promise, gateB.promise);

    controller.selectCorpusImage("red_01");
    const first = controller.submitQuery();
    controller.selectCorpusImage("blue_03");
    const second = controller.submitQuery();

    gateB.resolve();
    await second;
    expect(recorder.last.resultIds?.[0]).toBe("blue_03");

    gateA.resolve();
    await first;
    // The late response for red_01 must not overwrite the newer results.
    expect(recorder.last.resultIds?.[0]).toBe("blue_03");
    const framesShowingStale = recorder.frames.filter(
      (f, i) => i > recorder.frames.findIndex((g) => g.resultIds?.[0] === "blue_03") && f.resultIds?.[0] === "red_01",
    );
    expect(framesShowingStale).toEqual([]);
  });

  it("ignores even an error from a superseded request", async () => {
    const { service, recorder, controller } = makeApp();
    await controller.start();

    const gateA = deferred();
    service.queryGates.push(gateA.promise);

    controller.state.corpusImageId = "ghost"; // will 404, slowly
    const first = controller.submitQuery();
    controller.selectCorpusImage("red_01");
    const second = controller.submitQuery();
    await second;

    gateA.resolve();
    await first;
    expect(recorder.last.inlineError).toBeNull();
    expect(recorder.last.resultIds?.[0]).toBe("red_01");
  });
});
