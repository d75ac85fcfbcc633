/** DOM helpers shared by the UI tests. Tests interact the way a person
 * does: type into fields, click buttons, read what the page shows. */

import { type App, createApp } from "../src/app.js";
import type { BlockKey } from "../src/ram.js";

/** The worked two-number example; asks for "Input number0" then "Input number1". */
export const SUM_PROGRAM = `Dim sum As Integer
sum = 0
Dim num (1) As Integer
For i As Integer = 0 To 1
num(i) = InputBox("Input number" + i)
sum= sum + num(i)
Next
MsgBox("The sum of numbers is" + sum)
`;

export function mount(baseUrl: string): App {
  document.body.innerHTML = '<div id="app"></div>';
  return createApp(document.getElementById("app") as HTMLElement, { baseUrl });
}

export function byId<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`no element #${id}`);
  return found as T;
}

export function setEditorText(text: string): void {
  byId<HTMLTextAreaElement>("editor").value = text;
}

export async function startSession(app: App, source: string): Promise<void> {
  setEditorText(source);
  byId<HTMLButtonElement>("start").click();
  await app.whenIdle();
}

export async function clickStep(app: App): Promise<void> {
  byId<HTMLButtonElement>("step").click();
  await app.whenIdle();
}

export async function submitModal(app: App, value: string): Promise<void> {
  byId<HTMLInputElement>("input-value").value = value;
  byId<HTMLButtonElement>("input-ok").click();
  await app.whenIdle();
}

export async function slideReplayTo(app: App, k: number): Promise<void> {
  const slider = byId<HTMLInputElement>("replay");
  slider.value = String(k);
  slider.dispatchEvent(new Event("input", { bubbles: true }));
  await app.whenIdle();
}

export function sessionStatus(): string {
  return byId<HTMLElement>("status").textContent ?? "";
}

export function modalVisible(): boolean {
  return !byId<HTMLElement>("input-modal").hidden;
}

export function modalTitle(): string {
  return byId<HTMLElement>("input-title").textContent ?? "";
}

export function blockLabel(key: BlockKey): string {
  const heading = document.querySelector(`[data-block="${key}"] h3`);
  return heading?.textContent ?? "";
}

/** Table rows of one RAM block as [name, value] pairs; a lone "(empty)"
 * row comes back as [["(empty)"]]. */
export function blockRows(key: BlockKey): string[][] {
  const table = document.querySelector(`[data-block="${key}"] table`);
  if (!table) throw new Error(`no block ${key}`);
  return Array.from(table.querySelectorAll("tr"), (row) =>
    Array.from(row.querySelectorAll("td"), (cell) => cell.textContent ?? ""),
  );
}

export function renderedStepIndex(): string {
  return byId<HTMLElement>("ram-view").dataset.renderedStep ?? "";
}

export function highlightedLine(): number | null {
  const current = document.querySelector<HTMLElement>("#code-lines li.current");
  return current ? Number(current.dataset.line) : null;
}

export function outputTexts(): string[] {
  return Array.from(
    document.querySelectorAll("#output-list li"),
    (item) => item.textContent ?? "",
  );
}

export async function waitFor(
  check: () => boolean,
  label: string,
  timeoutMs = 15_000,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (check()) return;
    await new Promise((resolve) => setTimeout(resolve, 50));
  }
  throw new Error(`timed out waiting for ${label}`);
}

/** Counts requests the app makes while `action` runs, restoring fetch after. */
export async function countRequests(action: () => Promise<void>): Promise<string[]> {
  const realFetch = globalThis.fetch;
  const urls: string[] = [];
  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    urls.push(String(input));
    return realFetch(input, init);
  }) as typeof fetch;
  try {
    await action();
  } finally {
    globalThis.fetch = realFetch;
  }
  return urls;
}
