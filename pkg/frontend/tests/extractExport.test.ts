import { describe, expect, it, vi } from "vitest";

import { App } from "../src/app.js";
import { FakeApi } from "./fakeApi.js";

const PARKING_LOT = [
  '{"kind":"node","id":"p1","labels":["Person"],"properties":{"name":"Ada","parkingSpot":"A3"}}',
  '{"kind":"node","id":"p2","labels":["Person"],"properties":{"name":"Bob"}}',
].join("\n");

function mountApp(api = new FakeApi()): App {
  document.body.innerHTML = "";
  const host = document.createElement("div");
  document.body.appendChild(host);
  return new App(host, api);
}

function pickFile(app: App, name: string, content: string): void {
  const input = app.extract.root.querySelector<HTMLInputElement>(".graph-file")!;
  const file = new File([content], name, { type: "text/plain" });
  Object.defineProperty(input, "files", { value: [file], configurable: true });
}

describe("extract screen", () => {
  it("uploads the two-person fixture and lands on Edit with Person rendered", async () => {
    const app = mountApp();
    await app.start();
    pickFile(app, "g.jsonl", PARKING_LOT);
    await app.extract.run();
    await new Promise((resolve) => setTimeout(resolve, 0));

    expect(app.active).toBe("edit");
    const person = app.edit.root.querySelector('.canvas-element[data-name="Person"]');
    expect(person).not.toBeNull();
    expect(app.edit.payload!.text).toContain("parkingSpot: STRING?");
  });

  it("reports a malformed line with its number", async () => {
    const app = mountApp();
    await app.start();
    pickFile(app, "g.jsonl", '{"kind":"node","id":"a","labels":[],"properties":{}}\nok\n{broken');
    await app.extract.run();

    expect(app.active).toBe("extract");
    const errors = [...app.extract.root.querySelectorAll(".upload-errors li")];
    expect(errors.length).toBeGreaterThanOrEqual(1);
    expect(errors.map((li) => li.textContent).join("\n")).toContain("line 3");
  });
});

describe("export screen", () => {
  it("exported text is byte-equal to the served schema text", async () => {
    vi.spyOn(HTMLAnchorElement.prototype, "click").mockImplementation(() => {});
    const api = new FakeApi();
    const app = mountApp(api);
    await app.show("export");
    app.export.root.querySelector<HTMLElement>(".export-button")!.click();
    await new Promise((resolve) => setTimeout(resolve, 0));

    const preview = app.export.root.querySelector(".export-preview")!.textContent;
    expect(preview).toBe((await api.getSchema()).text);
  });
});
