import { App } from "./app.js";

const root = document.getElementById("app");
if (root) {
  const saved = window.localStorage?.getItem("kgrec-form") ?? null;
  void App.mount(root, window.KGREC_API_BASE ?? "", undefined, saved);
}

declare global {
  interface Window {
    KGREC_API_BASE?: string;
  }
}
