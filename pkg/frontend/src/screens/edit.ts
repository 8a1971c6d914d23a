/** Edit screen: graph canvas and text pane side by side, kept in lockstep.
 * Selecting in either pane outlines the same element in both; buttons issue
 * edit commands; typing commits on blur. The guard checkbox turns on the
 * backwards-compatibility gate, and rejected edits leave everything as-is.
 */

import {
  ApiClient,
  ApiError,
  CompatRejectedError,
  EdgeTypeInfo,
  SchemaInputError,
  SchemaPayload,
} from "../api.js";
import { renderCanvas } from "../canvas.js";
import { TextPane } from "../textPane.js";

interface FieldSpec {
  key: string;
  label: string;
  kind: "text" | "type" | "flag";
}

interface OpSpec {
  label: string;
  fields: FieldSpec[];
  build: (screen: EditScreen, values: Record<string, string | boolean>) => Record<string, unknown>;
}

const DATATYPES = ["STRING", "INTEGER", "FLOAT", "BOOLEAN", "DATE", "ANY"];

function labelsOf(name: string): string[] {
  return name.split("&").filter((l) => l.length > 0);
}

const OPS: Record<string, OpSpec> = {
  "add-node": {
    label: "Add node",
    fields: [{ key: "name", label: "name", kind: "text" }],
    build: (_s, v) => ({ op: "add-node", labels: labelsOf(v.name as string) }),
  },
  "remove-node": {
    label: "Remove node",
    fields: [{ key: "type", label: "type", kind: "text" }],
    build: (s, v) => ({ op: "remove-node", type: v.type || s.selectedNodeName() }),
  },
  "add-edge": {
    label: "Add edge",
    fields: [
      { key: "label", label: "label", kind: "text" },
      { key: "src", label: "from", kind: "text" },
      { key: "dst", label: "to", kind: "text" },
    ],
    build: (_s, v) => ({ op: "add-edge", label: v.label, src: v.src, dst: v.dst }),
  },
  "remove-edge": {
    label: "Remove edge",
    fields: [],
    build: (s) => {
      const edge = s.selectedEdgeRef();
      return { op: "remove-edge", label: edge?.label, src: edge?.src, dst: edge?.dst };
    },
  },
  "add-property": {
    label: "Add property",
    fields: [
      { key: "owner", label: "owner", kind: "text" },
      { key: "name", label: "name", kind: "text" },
      { key: "type", label: "type", kind: "type" },
      { key: "required", label: "required", kind: "flag" },
    ],
    build: (s, v) => ({
      op: "add-property",
      owner: v.owner || s.selectedOwner(),
      name: v.name,
      type: v.type,
      required: Boolean(v.required),
    }),
  },
  "remove-property": {
    label: "Remove property",
    fields: [
      { key: "owner", label: "owner", kind: "text" },
      { key: "name", label: "name", kind: "text" },
    ],
    build: (s, v) => ({ op: "remove-property", owner: v.owner || s.selectedOwner(), name: v.name }),
  },
  "set-property-type": {
    label: "Set property type",
    fields: [
      { key: "owner", label: "owner", kind: "text" },
      { key: "name", label: "name", kind: "text" },
      { key: "type", label: "type", kind: "type" },
    ],
    build: (s, v) => ({
      op: "set-property-type",
      owner: v.owner || s.selectedOwner(),
      name: v.name,
      type: v.type,
    }),
  },
  "set-property-required": {
    label: "Set property required",
    fields: [
      { key: "owner", label: "owner", kind: "text" },
      { key: "name", label: "name", kind: "text" },
      { key: "required", label: "required", kind: "flag" },
    ],
    build: (s, v) => ({
      op: "set-property-required",
      owner: v.owner || s.selectedOwner(),
      name: v.name,
      required: Boolean(v.required),
    }),
  },
  "flip-edge": {
    label: "Flip edge direction",
    fields: [],
    build: (s) => ({ op: "flip-edge", edge: s.selectedEdgeRef() }),
  },
  "set-cardinality": {
    label: "Set cardinality",
    fields: [
      { key: "outMin", label: "out min", kind: "text" },
      { key: "outMax", label: "out max (* for unbounded)", kind: "text" },
      { key: "inMin", label: "in min", kind: "text" },
      { key: "inMax", label: "in max (* for unbounded)", kind: "text" },
    ],
    build: (s, v) => ({
      op: "set-cardinality",
      edge: s.selectedEdgeRef(),
      out: [Number(v.outMin || 0), v.outMax === "*" || v.outMax === "" ? null : Number(v.outMax)],
      in: [Number(v.inMin || 0), v.inMax === "*" || v.inMax === "" ? null : Number(v.inMax)],
    }),
  },
  "set-supertype": {
    label: "Set supertype",
    fields: [
      { key: "type", label: "type", kind: "text" },
      { key: "supertype", label: "supertype (empty clears)", kind: "text" },
    ],
    build: (s, v) => ({
      op: "set-supertype",
      type: v.type || s.selectedNodeName(),
      supertype: v.supertype === "" ? null : v.supertype,
    }),
  },
  rename: {
    label: "Rename",
    fields: [{ key: "name", label: "new name", kind: "text" }],
    build: (s, v) => {
      const edge = s.selectedEdgeRef();
      if (edge) return { op: "rename", edge, label: v.name };
      return { op: "rename", type: s.selectedNodeName(), name: v.name };
    },
  },
  duplicate: {
    label: "Duplicate",
    fields: [{ key: "name", label: "new name", kind: "text" }],
    build: (s, v) => {
      const edge = s.selectedEdgeRef();
      if (edge) return { op: "duplicate", edge, label: v.name };
      return { op: "duplicate", type: s.selectedNodeName(), name: v.name };
    },
  },
  split: {
    label: "Split node",
    fields: [
      { key: "type", label: "type", kind: "text" },
      { key: "discriminator", label: "discriminator", kind: "text" },
      { key: "with", label: "with name", kind: "text" },
      { key: "without", label: "without name", kind: "text" },
    ],
    build: (s, v) => ({
      op: "split",
      type: v.type || s.selectedNodeName(),
      discriminator: v.discriminator,
      with: v.with,
      without: v.without,
    }),
  },
  "merge-union": {
    label: "Merge (union)",
    fields: [
      { key: "a", label: "first", kind: "text" },
      { key: "b", label: "second", kind: "text" },
      { key: "name", label: "new name", kind: "text" },
    ],
    build: (s, v) => ({ op: "merge-union", a: v.a || s.selectedNodeName(), b: v.b, name: v.name }),
  },
  "merge-intersection": {
    label: "Merge (intersection)",
    fields: [
      { key: "types", label: "types (comma separated)", kind: "text" },
      { key: "name", label: "new name", kind: "text" },
    ],
    build: (_s, v) => ({
      op: "merge-intersection",
      types: (v.types as string).split(",").map((t) => t.trim()),
      name: v.name,
    }),
  },
  escalate: {
    label: "Escalate property to node",
    fields: [
      { key: "type", label: "type", kind: "text" },
      { key: "property", label: "property", kind: "text" },
      { key: "name", label: "new node name", kind: "text" },
      { key: "edge", label: "edge label", kind: "text" },
    ],
    build: (s, v) => ({
      op: "escalate",
      type: v.type || s.selectedNodeName(),
      property: v.property,
      name: v.name,
      edge: v.edge,
    }),
  },
};

export class EditScreen {
  readonly root: HTMLElement;
  payload: SchemaPayload | null = null;
  selection: string | null = null;

  private canvasHost: HTMLElement;
  private textPane: TextPane;
  private guardToggle: HTMLInputElement;
  private opSelect: HTMLSelectElement;
  private fieldsHost: HTMLElement;
  private violationsBox: HTMLElement;
  private statusBox: HTMLElement;

  constructor(parent: HTMLElement, private api: ApiClient) {
    this.root = document.createElement("div");
    this.root.className = "screen edit-screen";
    this.root.innerHTML = `
      <div class="toolbar">
        <label class="guard-label">
          <input type="checkbox" class="guard-toggle">
          Prevent backwards-incompatible changes
        </label>
        <input class="commit-message" placeholder="commit message">
        <button class="commit-button">Commit version</button>
        <span class="status"></span>
      </div>
      <div class="split-view">
        <div class="canvas-host"></div>
        <div class="text-host"></div>
      </div>
      <div class="edit-controls">
        <select class="op-select"></select>
        <span class="op-fields"></span>
        <button class="apply-edit">Apply</button>
      </div>
      <ul class="violations"></ul>
    `;
    parent.appendChild(this.root);

    this.canvasHost = this.root.querySelector(".canvas-host") as HTMLElement;
    this.guardToggle = this.root.querySelector(".guard-toggle") as HTMLInputElement;
    this.opSelect = this.root.querySelector(".op-select") as HTMLSelectElement;
    this.fieldsHost = this.root.querySelector(".op-fields") as HTMLElement;
    this.violationsBox = this.root.querySelector(".violations") as HTMLElement;
    this.statusBox = this.root.querySelector(".status") as HTMLElement;

    this.textPane = new TextPane(this.root.querySelector(".text-host") as HTMLElement, {
      onCommit: (text) => void this.commitText(text),
      onSelectSpan: (id) => this.selectElement(id),
    });

    for (const [op, spec] of Object.entries(OPS)) {
      const option = document.createElement("option");
      option.value = op;
      option.textContent = spec.label;
      this.opSelect.appendChild(option);
    }
    this.opSelect.addEventListener("change", () => this.renderFields());
    this.renderFields();

    this.guardToggle.addEventListener("change", () => {
      void this.api.setGuard(this.guardToggle.checked);
    });
    (this.root.querySelector(".apply-edit") as HTMLElement).addEventListener("click", () => {
      void this.applyFromForm();
    });
    (this.root.querySelector(".commit-button") as HTMLElement).addEventListener("click", () => {
      void this.commit();
    });
  }

  async load(): Promise<void> {
    this.guardToggle.checked = await this.api.getGuard();
    this.render(await this.api.getSchema());
  }

  render(payload: SchemaPayload): void {
    this.payload = payload;
    if (this.selection !== null && !this.elementIds().includes(this.selection)) {
      this.selection = null;
    }
    this.renderCanvasPane();
    this.textPane.setSchema(payload);
    this.textPane.setSelection(this.selection);
  }

  private renderCanvasPane(): void {
    if (!this.payload) return;
    if (this.payload.model.nodeTypes.length === 0) {
      this.canvasHost.innerHTML =
        '<div class="empty-canvas">No schema yet.' +
        ' <button class="create-node">Create a node type</button></div>';
      (this.canvasHost.querySelector(".create-node") as HTMLElement).addEventListener(
        "click",
        () => {
          this.opSelect.value = "add-node";
          this.renderFields();
        }
      );
      return;
    }
    renderCanvas(this.canvasHost, this.payload.model, {
      selection: this.selection,
      onSelect: (id) => this.selectElement(id),
    });
  }

  /** Outline the element in both representations (or clear with null). */
  selectElement(elementId: string | null): void {
    this.selection = elementId;
    this.renderCanvasPane();
    this.textPane.setSelection(elementId);
  }

  elementIds(): string[] {
    if (!this.payload) return [];
    return [
      ...this.payload.model.nodeTypes.map((nt) => nt.id),
      ...this.payload.model.edgeTypes.map((et) => et.id),
    ];
  }

  selectedNodeName(): string | null {
    const nt = this.payload?.model.nodeTypes.find((n) => n.id === this.selection);
    return nt ? nt.displayName : null;
  }

  selectedEdge(): EdgeTypeInfo | null {
    return this.payload?.model.edgeTypes.find((e) => e.id === this.selection) ?? null;
  }

  selectedEdgeRef(): { label: string; src: string; dst: string } | null {
    const et = this.selectedEdge();
    return et ? { label: et.label, src: et.src, dst: et.dst } : null;
  }

  selectedOwner(): string | { label: string; src: string; dst: string } | null {
    return this.selectedEdgeRef() ?? this.selectedNodeName();
  }

  private renderFields(): void {
    const spec = OPS[this.opSelect.value];
    this.fieldsHost.textContent = "";
    for (const field of spec.fields) {
      const label = document.createElement("label");
      label.className = "op-field";
      label.textContent = `${field.label} `;
      const input = document.createElement("input");
      input.dataset.key = field.key;
      if (field.kind === "flag") {
        input.type = "checkbox";
      } else if (field.kind === "type") {
        const select = document.createElement("select");
        select.dataset.key = field.key;
        for (const dt of DATATYPES) {
          const option = document.createElement("option");
          option.value = dt;
          option.textContent = dt;
          select.appendChild(option);
        }
        label.appendChild(select);
        this.fieldsHost.appendChild(label);
        continue;
      }
      label.appendChild(input);
      this.fieldsHost.appendChild(label);
    }
  }

  private formValues(): Record<string, string | boolean> {
    const values: Record<string, string | boolean> = {};
    for (const el of this.fieldsHost.querySelectorAll<HTMLElement>("[data-key]")) {
      const key = el.dataset.key as string;
      if (el instanceof HTMLInputElement && el.type === "checkbox") values[key] = el.checked;
      else values[key] = (el as HTMLInputElement | HTMLSelectElement).value;
    }
    return values;
  }

  private async applyFromForm(): Promise<void> {
    const spec = OPS[this.opSelect.value];
    await this.applyEdit(spec.build(this, this.formValues()));
  }

  /** POST one edit command; on a 409 the schema is untouched and the
   * violations are listed inline. */
  async applyEdit(command: Record<string, unknown>): Promise<void> {
    this.violationsBox.textContent = "";
    this.statusBox.textContent = "";
    this.statusBox.classList.remove("error");
    try {
      this.render(await this.api.postEdit(command));
      this.statusBox.textContent = `Applied ${command.op}`;
    } catch (err) {
      if (err instanceof CompatRejectedError) {
        for (const violation of err.report.violations) {
          const item = document.createElement("li");
          item.textContent = violation.reason;
          this.violationsBox.appendChild(item);
        }
        this.statusBox.textContent = "Rejected: backwards-incompatible";
        this.statusBox.classList.add("error");
      } else if (err instanceof ApiError) {
        this.statusBox.textContent = err.message;
        this.statusBox.classList.add("error");
      } else {
        throw err;
      }
    }
  }

  private async commitText(text: string): Promise<void> {
    try {
      this.render(await this.api.putSchema(text));
      this.statusBox.textContent = "Schema updated";
      this.statusBox.classList.remove("error");
    } catch (err) {
      if (err instanceof SchemaInputError) {
        this.textPane.showErrors(err.errors); // typed text is preserved
      } else if (err instanceof ApiError) {
        this.statusBox.textContent = err.message;
        this.statusBox.classList.add("error");
      } else {
        throw err;
      }
    }
  }

  private async commit(): Promise<void> {
    const input = this.root.querySelector(".commit-message") as HTMLInputElement;
    const version = await this.api.commit(input.value || "(no message)");
    this.statusBox.textContent = `Committed version ${version.id}`;
    input.value = "";
  }
}
