/** History screen: pick two versions, then flip between the semantic sentence
 * list, the raw unified text diff, and the visual overlay. Visual statuses
 * always carry their +/-/~ symbol next to the color. */

import { ApiClient, DiffMode } from "../api.js";
import { renderCanvas, unionModel } from "../canvas.js";

export class HistoryScreen {
  readonly root: HTMLElement;
  mode: DiffMode = "semantic";

  private fromPicker: HTMLSelectElement;
  private toPicker: HTMLSelectElement;
  private content: HTMLElement;

  constructor(parent: HTMLElement, private api: ApiClient) {
    this.root = document.createElement("div");
    this.root.className = "screen history-screen";
    this.root.innerHTML = `
      <div class="pickers">
        <label>From <select class="from-picker"></select></label>
        <label>To <select class="to-picker"></select></label>
        <span class="mode-toggle">
          <button data-mode="semantic" class="active">Semantic</button>
          <button data-mode="raw">Raw text</button>
          <button data-mode="visual">Visual</button>
        </span>
      </div>
      <div class="history-content"></div>
    `;
    parent.appendChild(this.root);

    this.fromPicker = this.root.querySelector(".from-picker") as HTMLSelectElement;
    this.toPicker = this.root.querySelector(".to-picker") as HTMLSelectElement;
    this.content = this.root.querySelector(".history-content") as HTMLElement;

    for (const button of this.root.querySelectorAll<HTMLElement>(".mode-toggle button")) {
      button.addEventListener("click", () => void this.setMode(button.dataset.mode as DiffMode));
    }
    this.fromPicker.addEventListener("change", () => void this.refresh());
    this.toPicker.addEventListener("change", () => void this.refresh());
  }

  async load(): Promise<void> {
    const versions = await this.api.versions();
    if (versions.length === 0) {
      this.content.innerHTML =
        '<div class="no-versions">No versions yet. Commit one from the Edit screen.</div>';
      return;
    }
    for (const picker of [this.fromPicker, this.toPicker]) {
      picker.textContent = "";
      for (const version of versions) {
        const option = document.createElement("option");
        option.value = String(version.id);
        option.textContent = `v${version.id}: ${version.message}`;
        picker.appendChild(option);
      }
    }
    const last = versions[versions.length - 1].id;
    this.fromPicker.value = String(Math.max(1, last - 1));
    this.toPicker.value = String(last);
    await this.refresh();
  }

  async setMode(mode: DiffMode): Promise<void> {
    this.mode = mode;
    for (const button of this.root.querySelectorAll<HTMLElement>(".mode-toggle button")) {
      button.classList.toggle("active", button.dataset.mode === mode);
    }
    await this.refresh();
  }

  async refresh(): Promise<void> {
    const from = Number(this.fromPicker.value);
    const to = Number(this.toPicker.value);
    if (!from || !to) return;
    this.content.textContent = "";
    if (from === to) {
      this.content.innerHTML = '<div class="no-changes">No changes</div>';
      return;
    }
    const payload = await this.api.diff(from, to, this.mode);
    if (this.mode === "semantic") {
      const sentences = payload.sentences ?? [];
      if (sentences.length === 0) {
        this.content.innerHTML = '<div class="no-changes">No changes</div>';
        return;
      }
      const list = document.createElement("ul");
      list.className = "semantic-list";
      for (const sentence of sentences) {
        const item = document.createElement("li");
        item.textContent = sentence;
        list.appendChild(item);
      }
      this.content.appendChild(list);
    } else if (this.mode === "raw") {
      if (!payload.diff) {
        this.content.innerHTML = '<div class="no-changes">No changes</div>';
        return;
      }
      const pre = document.createElement("pre");
      pre.className = "raw-diff";
      pre.textContent = payload.diff;
      this.content.appendChild(pre);
    } else {
      const [fromSchema, toSchema] = await Promise.all([
        this.api.versionSchema(from),
        this.api.versionSchema(to),
      ]);
      const canvasHost = document.createElement("div");
      canvasHost.className = "canvas-host";
      this.content.appendChild(canvasHost);
      renderCanvas(canvasHost, unionModel(toSchema.model, fromSchema.model), {
        annotations: payload.annotations,
      });
      const legend = document.createElement("div");
      legend.className = "legend";
      legend.innerHTML =
        '<span class="legend-item diff-added">+ added</span>' +
        '<span class="legend-item diff-removed">- removed</span>' +
        '<span class="legend-item diff-modified">~ modified</span>';
      this.content.appendChild(legend);
    }
  }
}
