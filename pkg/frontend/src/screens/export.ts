/** Export screen: save the current schema to a file in either format. */

import { ApiClient } from "../api.js";

export class ExportScreen {
  readonly root: HTMLElement;

  private formatSelect: HTMLSelectElement;
  private preview: HTMLElement;
  private status: HTMLElement;

  constructor(parent: HTMLElement, private api: ApiClient) {
    this.root = document.createElement("div");
    this.root.className = "screen export-screen";
    this.root.innerHTML = `
      <h2>Export the schema</h2>
      <label>Format
        <select class="format-select">
          <option value="pgs">Schema text (.pgs)</option>
          <option value="json">JSON (.json)</option>
        </select>
      </label>
      <button class="export-button">Export</button>
      <div class="status"></div>
      <pre class="export-preview"></pre>
    `;
    parent.appendChild(this.root);

    this.formatSelect = this.root.querySelector(".format-select") as HTMLSelectElement;
    this.preview = this.root.querySelector(".export-preview") as HTMLElement;
    this.status = this.root.querySelector(".status") as HTMLElement;
    (this.root.querySelector(".export-button") as HTMLElement).addEventListener("click", () => {
      void this.run();
    });
  }

  async run(): Promise<void> {
    const format = this.formatSelect.value as "pgs" | "json";
    try {
      const result = await this.api.exportSchema(format);
      this.preview.textContent = result.content;
      this.status.textContent = `Exported ${result.filename}`;
      this.download(result.filename, result.content, result.mediaType);
    } catch (err) {
      this.status.textContent = String(err);
    }
  }

  private download(filename: string, content: string, mediaType: string): void {
    if (typeof URL.createObjectURL !== "function") return; // not available under test
    const url = URL.createObjectURL(new Blob([content], { type: mediaType }));
    const anchor = document.createElement("a");
    anchor.href = url;
    anchor.download = filename;
    anchor.click();
    URL.revokeObjectURL(url);
  }
}
