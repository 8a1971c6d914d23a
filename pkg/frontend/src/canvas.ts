/** SVG rendering of the schema graph: node types as property boxes, edge
 * types as labeled arrows, supertypes as dashed links. Diff overlays always
 * pair a symbol with the color so color is never the only signal. */

import { AnnotationInfo, PropertyInfo, SchemaModel } from "./api.js";
import { BoxGeometry, layoutSchema } from "./layout.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface CanvasOptions {
  selection?: string | null;
  annotations?: Record<string, AnnotationInfo>;
  onSelect?: (elementId: string | null) => void;
}

function svg<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {}
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, value);
  return el;
}

function propText(p: PropertyInfo): string {
  return `${p.name}: ${p.type}${p.required ? "" : "?"}`;
}

function cardText(card: [number, number | null]): string {
  return `${card[0]}..${card[1] === null ? "*" : card[1]}`;
}

/** Merge the compared version into the displayed one so removed elements can
 * still be drawn (ghosted) in a visual diff. */
export function unionModel(shown: SchemaModel, other: SchemaModel): SchemaModel {
  const nodeNames = new Set(shown.nodeTypes.map((nt) => nt.displayName));
  const edgeNames = new Set(shown.edgeTypes.map((et) => et.displayName));
  return {
    nodeTypes: shown.nodeTypes.concat(
      other.nodeTypes.filter((nt) => !nodeNames.has(nt.displayName))
    ),
    edgeTypes: shown.edgeTypes.concat(
      other.edgeTypes.filter((et) => !edgeNames.has(et.displayName))
    ),
  };
}

export function renderCanvas(
  host: HTMLElement,
  model: SchemaModel,
  options: CanvasOptions = {}
): void {
  host.textContent = "";
  const layout = layoutSchema(model);
  const root = svg("svg", {
    class: "schema-canvas",
    viewBox: `0 0 ${layout.width} ${layout.height}`,
  });

  const defs = svg("defs");
  const marker = svg("marker", {
    id: "arrowhead",
    viewBox: "0 0 10 10",
    refX: "9",
    refY: "5",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  marker.appendChild(svg("path", { d: "M 0 0 L 10 5 L 0 10 z", class: "arrowhead" }));
  defs.appendChild(marker);
  root.appendChild(defs);

  const edgeLayer = svg("g", { class: "edges" });
  const nodeLayer = svg("g", { class: "nodes" });
  root.appendChild(edgeLayer);
  root.appendChild(nodeLayer);

  const annotationFor = (name: string): AnnotationInfo | undefined =>
    options.annotations?.[name];

  for (const nt of model.nodeTypes) {
    if (nt.supertype === null) continue;
    const from = layout.boxes.get(nt.displayName);
    const to = layout.boxes.get(nt.supertype);
    if (!from || !to) continue;
    edgeLayer.appendChild(
      svg("line", {
        class: "supertype-link",
        x1: String(from.x + from.width / 2),
        y1: String(from.y),
        x2: String(to.x + to.width / 2),
        y2: String(to.y + to.height),
      })
    );
  }

  for (const et of model.edgeTypes) {
    const group = svg("g", { class: "canvas-element edge-arrow" });
    group.dataset.elementId = et.id;
    group.dataset.name = et.displayName;
    const from = layout.boxes.get(et.src);
    const to = layout.boxes.get(et.dst);
    if (!from || !to) continue;

    let labelX: number;
    let labelY: number;
    if (et.src === et.dst) {
      const cx = from.x + from.width / 2;
      const top = from.y;
      group.appendChild(
        svg("path", {
          class: "edge-line",
          d: `M ${cx - 30} ${top} C ${cx - 40} ${top - 46}, ${cx + 40} ${top - 46}, ${cx + 30} ${top}`,
          "marker-end": "url(#arrowhead)",
          fill: "none",
        })
      );
      labelX = cx;
      labelY = top - 40;
    } else {
      const [x1, y1] = [from.x + from.width, from.y + from.height / 2];
      const [x2, y2] = [to.x, to.y + to.height / 2];
      group.appendChild(
        svg("line", {
          class: "edge-line",
          x1: String(x1),
          y1: String(y1),
          x2: String(x2),
          y2: String(y2),
          "marker-end": "url(#arrowhead)",
        })
      );
      labelX = (x1 + x2) / 2;
      labelY = (y1 + y2) / 2 - 8;
    }

    const annotation = annotationFor(et.displayName);
    if (annotation && annotation.status !== "unchanged") {
      group.classList.add(`diff-${annotation.status}`);
    }
    const symbol = annotation?.symbol ? `${annotation.symbol} ` : "";
    const label = svg("text", {
      class: "edge-label",
      x: String(labelX),
      y: String(labelY),
      "text-anchor": "middle",
    });
    label.textContent = `${symbol}${et.label}`;
    group.appendChild(label);

    const cards = `${cardText(et.inCard)} → ${cardText(et.outCard)}`;
    if (cards !== "0..* → 0..*") {
      const cardLabel = svg("text", {
        class: "edge-cards",
        x: String(labelX),
        y: String(labelY + 14),
        "text-anchor": "middle",
      });
      cardLabel.textContent = cards;
      group.appendChild(cardLabel);
    }

    group.addEventListener("click", (event) => {
      event.stopPropagation();
      options.onSelect?.(et.id);
    });
    if (options.selection === et.id) group.classList.add("selected");
    edgeLayer.appendChild(group);
  }

  for (const nt of model.nodeTypes) {
    const box = layout.boxes.get(nt.displayName) as BoxGeometry;
    const group = svg("g", { class: "canvas-element node-box" });
    group.dataset.elementId = nt.id;
    group.dataset.name = nt.displayName;
    group.appendChild(
      svg("rect", {
        class: "node-rect",
        x: String(box.x),
        y: String(box.y),
        width: String(box.width),
        height: String(box.height),
        rx: "6",
      })
    );

    const annotation = annotationFor(nt.displayName);
    if (annotation && annotation.status !== "unchanged") {
      group.classList.add(`diff-${annotation.status}`);
    }
    const symbol = annotation?.symbol ? `${annotation.symbol} ` : "";
    const title = svg("text", {
      class: "node-title",
      x: String(box.x + 10),
      y: String(box.y + 20),
    });
    title.textContent = `${symbol}${nt.displayName}`;
    group.appendChild(title);
    group.appendChild(
      svg("line", {
        class: "node-divider",
        x1: String(box.x),
        y1: String(box.y + 28),
        x2: String(box.x + box.width),
        y2: String(box.y + 28),
      })
    );

    nt.properties.forEach((p, i) => {
      const line = svg("text", {
        class: "node-prop",
        x: String(box.x + 10),
        y: String(box.y + 44 + i * 18),
      });
      line.textContent = propText(p);
      group.appendChild(line);
    });

    group.addEventListener("click", (event) => {
      event.stopPropagation();
      options.onSelect?.(nt.id);
    });
    if (options.selection === nt.id) group.classList.add("selected");
    nodeLayer.appendChild(group);
  }

  root.addEventListener("click", () => options.onSelect?.(null));
  enablePanZoom(root, layout.width, layout.height);
  host.appendChild(root);
}

/** Wheel zoom and drag pan on the viewBox; nothing fancier is needed for
 * schemas of this size. */
function enablePanZoom(root: SVGSVGElement, width: number, height: number): void {
  const view = { x: 0, y: 0, w: width, h: height };
  const apply = () => root.setAttribute("viewBox", `${view.x} ${view.y} ${view.w} ${view.h}`);

  root.addEventListener("wheel", (event) => {
    event.preventDefault();
    const factor = event.deltaY > 0 ? 1.15 : 1 / 1.15;
    const newW = Math.min(Math.max(view.w * factor, width / 8), width * 4);
    const scale = newW / view.w;
    view.x -= (newW - view.w) / 2;
    view.y -= (view.h * scale - view.h) / 2;
    view.w = newW;
    view.h *= scale;
    apply();
  });

  let dragging: { x: number; y: number } | null = null;
  root.addEventListener("mousedown", (event) => {
    dragging = { x: event.clientX, y: event.clientY };
  });
  root.addEventListener("mousemove", (event) => {
    if (!dragging) return;
    const scale = view.w / Math.max(root.clientWidth, 1);
    view.x -= (event.clientX - dragging.x) * scale;
    view.y -= (event.clientY - dragging.y) * scale;
    dragging = { x: event.clientX, y: event.clientY };
    apply();
  });
  root.addEventListener("mouseup", () => (dragging = null));
  root.addEventListener("mouseleave", () => (dragging = null));
}
