/** Extract screen: upload a graph file, pick options, run extraction. On
 * success the app jumps to the Edit screen; load problems come back with
 * their line numbers. */

import { ApiClient, SchemaInputError } from "../api.js";

function readFileText(file: File): Promise<string> {
  if (typeof file.text === "function") return file.text();
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(String(reader.result));
    reader.onerror = () => reject(reader.error);
    reader.readAsText(file);
  });
}

export class ExtractScreen {
  readonly root: HTMLElement;

  private fileInput: HTMLInputElement;
  private progress: HTMLElement;
  private errorsBox: HTMLElement;

  constructor(
    parent: HTMLElement,
    private api: ApiClient,
    private onExtracted: () => void
  ) {
    this.root = document.createElement("div");
    this.root.className = "screen extract-screen";
    this.root.innerHTML = `
      <h2>Extract a schema from graph data</h2>
      <p>Upload a graph file (one JSON node or edge per line).</p>
      <input type="file" class="graph-file" accept=".jsonl,.json,.txt">
      <label><input type="checkbox" class="opt-cardinality" checked> Infer cardinalities</label>
      <label><input type="checkbox" class="opt-subtypes"> Infer subtype links</label>
      <button class="extract-button">Extract schema</button>
      <div class="progress"></div>
      <ul class="upload-errors"></ul>
    `;
    parent.appendChild(this.root);

    this.fileInput = this.root.querySelector(".graph-file") as HTMLInputElement;
    this.progress = this.root.querySelector(".progress") as HTMLElement;
    this.errorsBox = this.root.querySelector(".upload-errors") as HTMLElement;

    (this.root.querySelector(".extract-button") as HTMLElement).addEventListener("click", () => {
      void this.run();
    });
  }

  async run(): Promise<void> {
    this.errorsBox.textContent = "";
    const file = this.fileInput.files?.[0];
    if (!file) {
      this.progress.textContent = "Choose a graph file first.";
      return;
    }
    this.progress.textContent = `Extracting from ${file.name}...`;
    try {
      await this.api.extract(file.name, await readFileText(file), {
        inferCardinality: (this.root.querySelector(".opt-cardinality") as HTMLInputElement).checked,
        inferSubtypes: (this.root.querySelector(".opt-subtypes") as HTMLInputElement).checked,
      });
      this.progress.textContent = "Extraction complete.";
      this.onExtracted();
    } catch (err) {
      if (err instanceof SchemaInputError) {
        this.progress.textContent = "The graph file has problems:";
        for (const problem of err.errors) {
          const item = document.createElement("li");
          item.textContent = `line ${problem.line}: ${problem.message}`;
          this.errorsBox.appendChild(item);
        }
      } else {
        this.progress.textContent = String(err);
      }
    }
  }
}
