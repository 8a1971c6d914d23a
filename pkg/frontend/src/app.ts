/** App shell: four screens behind a plain tab bar. Every screen reloads its
 * data from the API when shown; no schema state is kept client-side. */

import { ApiClient } from "./api.js";
import { EditScreen } from "./screens/edit.js";
import { ExportScreen } from "./screens/export.js";
import { ExtractScreen } from "./screens/extract.js";
import { HistoryScreen } from "./screens/history.js";

export type ScreenName = "extract" | "edit" | "history" | "export";

export class App {
  readonly extract: ExtractScreen;
  readonly edit: EditScreen;
  readonly history: HistoryScreen;
  readonly export: ExportScreen;
  active: ScreenName = "extract";

  private nav: HTMLElement;

  constructor(root: HTMLElement, private api: ApiClient) {
    this.nav = document.createElement("nav");
    this.nav.className = "app-nav";
    for (const name of ["extract", "edit", "history", "export"] as ScreenName[]) {
      const button = document.createElement("button");
      button.dataset.screen = name;
      button.textContent = name[0].toUpperCase() + name.slice(1);
      button.addEventListener("click", () => void this.show(name));
      this.nav.appendChild(button);
    }
    root.appendChild(this.nav);

    const main = document.createElement("main");
    root.appendChild(main);
    this.extract = new ExtractScreen(main, api, () => void this.show("edit"));
    this.edit = new EditScreen(main, api);
    this.history = new HistoryScreen(main, api);
    this.export = new ExportScreen(main, api);
  }

  async start(): Promise<void> {
    await this.show("extract");
  }

  async show(name: ScreenName): Promise<void> {
    this.active = name;
    const screens: Record<ScreenName, HTMLElement> = {
      extract: this.extract.root,
      edit: this.edit.root,
      history: this.history.root,
      export: this.export.root,
    };
    for (const [screenName, el] of Object.entries(screens)) {
      el.classList.toggle("hidden", screenName !== name);
    }
    for (const button of this.nav.querySelectorAll<HTMLElement>("button")) {
      button.classList.toggle("active", button.dataset.screen === name);
    }
    if (name === "edit") await this.edit.load();
    if (name === "history") await this.history.load();
  }
}
