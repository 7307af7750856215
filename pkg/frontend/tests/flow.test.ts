/**
 * Acceptance flow: browse → pivot → back. The UI must issue API calls whose
 * responses match scripted direct calls, display results in exactly the
 * response order, and show a pivoted query at rank 1 with distance 0.
 */
import { describe, expect, it } from "vitest";

import { ApiClient, CorpusItem } from "../src/api.js";
import { AppController } from "../src/controller.js";
import { displayedResultIds } from "../src/render.js";
import { FakeHistory, FakeService, RenderRecorder } from "./fakes.js";

function makeApp() {
  const service = new FakeService();
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

describe("browse → pivot → back", () => {
  it("walks the whole loop against the scripted service", async () => {
    const { service, history, recorder, controller } = makeApp();

    // Browse: the grid shows the corpus page in response order.
    await controller.start();
    const browseDepth = history.depth;
    const corpusResponse = await service.fetchFn("/api/corpus?offset=0&limit=24");
    const corpusDirect = ((await corpusResponse.json()) as CorpusItem[]).map((i) => i.id);
    expect(recorder.last.corpusIds).toEqual(corpusDirect);

    // First query from a corpus thumbnail.
    controller.selectCorpusImage("red_02");
    await controller.submitQuery();
    const firstQueryRecord = service.log.filter((r) => r.path === "/api/query").at(-1)!;
    const firstDirect = await service.replayQuery(firstQueryRecord);
    expect(controller.state.results).toEqual(firstDirect.results);
    expect(history.depth).toBe(browseDepth + 1);

    // Displayed ordering is the response ordering, both in state and markup.
    expect(recorder.last.resultIds).toEqual(firstDirect.results.map((r) => r.id));
    expect(displayedResultIds(recorder.last.resultsHtml)).toEqual(
      firstDirect.results.map((r) => r.id),
    );
    const firstResults = firstDirect.results;

    // Pivot: click the rank-3 result; it becomes the query and ranks first at 0.
    const pivotId = firstResults[2]!.id;
    await controller.pivotTo(pivotId);
    expect(history.depth).toBe(browseDepth + 2);

    const pivotRecord = service.log.filter((r) => r.path === "/api/query").at(-1)!;
    expect(pivotRecord.form?.["image_id"]).toBe(pivotId);
    const pivotDirect = await service.replayQuery(pivotRecord);
    expect(controller.state.results).toEqual(pivotDirect.results);
    expect(recorder.last.resultIds?.[0]).toBe(pivotId);
    expect(recorder.last.resultDistances?.[0]).toBe(0);
    expect(displayedResultIds(recorder.last.resultsHtml)).toEqual(
      pivotDirect.results.map((r) => r.id),
    );

    // Back: the previous query is re-issued and its results restored.
    await history.back();
    expect(history.depth).toBe(browseDepth + 2); // back never adds entries
    expect(controller.state.corpusImageId).toBe("red_02");
    expect(controller.state.results).toEqual(firstResults);
    expect(recorder.last.resultIds).toEqual(firstResults.map((r) => r.id));

    const backRecord = service.log.filter((r) => r.path === "/api/query").at(-1)!;
    expect(backRecord.form?.["image_id"]).toBe("red_02");
    const backDirect = await service.replayQuery(backRecord);
    expect(controller.state.results).toEqual(backDirect.results);

    // Back to the start: browse state, no results.
    await history.back();
    expect(controller.state.results).toBeNull();
    expect(recorder.last.resultsHtml).toContain("Pick a query image");
  });

  it("adds exactly one history entry per pivot", async () => {
    const { history, recorder, controller } = makeApp();
    await controller.start();
    controller.selectCorpusImage("red_01");
    await controller.submitQuery();
    const afterFirst = history.depth;

    await controller.pivotTo(recorder.last.resultIds![1]!);
    expect(history.depth).toBe(afterFirst + 1);
    await controller.pivotTo(recorder.last.resultIds![1]!);
    expect(history.depth).toBe(afterFirst + 2);
  });

  it("changing the metric and resubmitting matches a direct call with the new metric", async () => {
    const { service, recorder, controller } = makeApp();
    await controller.start();
    controller.selectCorpusImage("red_01");
    await controller.submitQuery();
    const l1Order = recorder.last.resultIds!;

    controller.setMetric("euclidean");
    expect(recorder.last.outdated).toBe(true);
    await controller.submitQuery();

    const record = service.log.filter((r) => r.path === "/api/query").at(-1)!;
    expect(record.form?.["metric"]).toBe("euclidean");
    const direct = await service.replayQuery(record);
    expect(recorder.last.resultIds).toEqual(direct.results.map((r) => r.id));
    expect(recorder.last.resultIds).not.toEqual(l1Order);
    expect(recorder.last.resultIds?.[0]).toBe("red_01"); // self still first at 0
    expect(recorder.last.resultDistances?.[0]).toBe(0);
  });

  it("restores an upload query on back using the retained file", async () => {
    const { history, recorder, controller } = makeApp();
    await controller.start();

    controller.setUploadFile(new Blob([new Uint8Array([9, 9, 9])]), "probe.png");
    await controller.submitQuery();
    const uploadResults = controller.state.results;
    expect(uploadResults).not.toBeNull();

    await controller.pivotTo(recorder.last.resultIds![0]!);
    expect(controller.state.corpusImageId).not.toBeNull();

    await history.back();
    expect(controller.state.upload?.name).toBe("probe.png");
    expect(controller.state.results).toEqual(uploadResults);
  });
});
