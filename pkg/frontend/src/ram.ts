/** Display projections of server RAM data. Pure functions; every value
 * shown in the UI passes through here verbatim from a service response. */

import type { RamCell, ThreeBlock, TraceStep } from "./api.js";

export const BLOCK_LABELS = {
  before: "RAM: BEFORE EXECUTION",
  after_declaration: "RAM: AFTER DECLARATION",
  after_assignment: "RAM: AFTER ASSIGNMENT",
} as const;

export type BlockKey = keyof typeof BLOCK_LABELS;

export const EMPTY_BLOCK_TEXT = "(empty)";

/** How a cell's contents read inside a RAM box: RESERVED before any
 * assignment, quoted text for strings, plain decimal for integers. */
export function formatCellValue(cell: RamCell): string {
  if (cell.state === "reserved") {
    return "RESERVED";
  }
  if (cell.type === "String") {
    return `"${cell.value}"`;
  }
  return String(cell.value);
}

/** The three-block view of a live step: nothing existed before execution,
 * declaration reserves every cell, assignment shows the step's ram as sent.
 * Cell order and values come straight from the step. */
export function threeBlockFromStep(ram: RamCell[]): ThreeBlock {
  return {
    before: [],
    after_declaration: ram.map((cell) => ({ cell: cell.cell, state: "reserved" })),
    after_assignment: ram,
  };
}

/** MsgBox lines carried by a step, in emission order. */
export function outputsOf(step: TraceStep): string[] {
  return step.io
    .filter((event) => event.type === "output")
    .map((event) => (event as { text: string }).text);
}
