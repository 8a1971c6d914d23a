/** Layered left-to-right placement of node type boxes. Plain zooming and
 * panning is handled by the canvas; no folding or expansion. */

import { SchemaModel } from "./api.js";

export interface BoxGeometry {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface CanvasLayout {
  boxes: Map<string, BoxGeometry>; // keyed by display name
  width: number;
  height: number;
}

const BOX_WIDTH = 190;
const TITLE_HEIGHT = 30;
const PROP_HEIGHT = 18;
const BOX_PADDING = 8;
const COLUMN_GAP = 110;
const ROW_GAP = 36;
const MARGIN = 24;

export function boxHeight(propertyCount: number): number {
  return TITLE_HEIGHT + propertyCount * PROP_HEIGHT + BOX_PADDING;
}

/** Longest-path layering over the edge graph; cycles are capped so the
 * assignment always terminates. */
function assignLayers(model: SchemaModel): Map<string, number> {
  const layers = new Map<string, number>();
  for (const nt of model.nodeTypes) layers.set(nt.displayName, 0);
  const hops = model.edgeTypes
    .map((et) => [et.src, et.dst] as const)
    .filter(([src, dst]) => src !== dst)
    .concat(
      model.nodeTypes
        .filter((nt) => nt.supertype !== null)
        .map((nt) => [nt.supertype as string, nt.displayName] as const)
    );
  const cap = model.nodeTypes.length;
  for (let round = 0; round < cap; round++) {
    let changed = false;
    for (const [src, dst] of hops) {
      const next = (layers.get(src) ?? 0) + 1;
      if (next <= cap && next > (layers.get(dst) ?? 0)) {
        layers.set(dst, next);
        changed = true;
      }
    }
    if (!changed) break;
  }
  return layers;
}

export function layoutSchema(model: SchemaModel): CanvasLayout {
  const layers = assignLayers(model);
  const columns = new Map<number, string[]>();
  for (const nt of model.nodeTypes) {
    const layer = layers.get(nt.displayName) ?? 0;
    const column = columns.get(layer) ?? [];
    column.push(nt.displayName);
    columns.set(layer, column);
  }

  const propCounts = new Map(model.nodeTypes.map((nt) => [nt.displayName, nt.properties.length]));
  const boxes = new Map<string, BoxGeometry>();
  let width = 0;
  let height = 0;
  for (const layer of [...columns.keys()].sort((a, b) => a - b)) {
    const names = columns.get(layer)!.sort();
    const x = MARGIN + layer * (BOX_WIDTH + COLUMN_GAP);
    let y = MARGIN;
    for (const name of names) {
      const h = boxHeight(propCounts.get(name) ?? 0);
      boxes.set(name, { x, y, width: BOX_WIDTH, height: h });
      y += h + ROW_GAP;
    }
    width = Math.max(width, x + BOX_WIDTH + MARGIN);
    height = Math.max(height, y - ROW_GAP + MARGIN);
  }
  return { boxes, width: Math.max(width, 320), height: Math.max(height, 200) };
}
