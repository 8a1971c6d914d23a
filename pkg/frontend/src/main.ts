import { App } from "./app.js";
import { HttpApi } from "./api.js";

declare global {
  interface Window {
    PGSCHEMA_API_BASE?: string;
  }
}

const base =
  window.PGSCHEMA_API_BASE ??
  new URLSearchParams(window.location.search).get("api") ??
  "";

const app = new App(document.getElementById("app") as HTMLElement, new HttpApi(base));
void app.start();
