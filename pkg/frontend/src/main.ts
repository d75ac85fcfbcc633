import { createApp } from "./app.js";

declare global {
  interface Window {
    MTLVIZ_BASE_URL?: string;
  }
}

const root = document.getElementById("app");
if (root) {
  const baseUrl = window.MTLVIZ_BASE_URL ?? "http://127.0.0.1:8640";
  createApp(root, { baseUrl });
}
