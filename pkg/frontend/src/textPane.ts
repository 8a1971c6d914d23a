/** Schema text pane: the definitive source of truth, editable in place.
 *
 * A highlight layer sits behind a transparent textarea; each declaration's
 * span is wrapped so selections can be outlined in both directions. Edits
 * commit on blur, never per keystroke; a failed parse keeps the typed text.
 */

import { ParseErrorInfo, SchemaPayload, SpanInfo } from "./api.js";

export interface TextPaneCallbacks {
  onCommit: (text: string) => void;
  onSelectSpan: (elementId: string | null) => void;
}

export class TextPane {
  readonly root: HTMLElement;
  private highlight: HTMLElement;
  private textarea: HTMLTextAreaElement;
  private errorsBox: HTMLElement;
  private payload: SchemaPayload | null = null;

  constructor(parent: HTMLElement, private callbacks: TextPaneCallbacks) {
    this.root = document.createElement("div");
    this.root.className = "text-pane";

    const stack = document.createElement("div");
    stack.className = "text-stack";
    this.highlight = document.createElement("pre");
    this.highlight.className = "text-highlight";
    this.textarea = document.createElement("textarea");
    this.textarea.className = "text-input";
    this.textarea.spellcheck = false;
    stack.appendChild(this.highlight);
    stack.appendChild(this.textarea);

    this.errorsBox = document.createElement("ul");
    this.errorsBox.className = "parse-errors";

    this.root.appendChild(stack);
    this.root.appendChild(this.errorsBox);
    parent.appendChild(this.root);

    this.textarea.addEventListener("blur", () => {
      if (this.payload && this.textarea.value !== this.payload.text) {
        this.callbacks.onCommit(this.textarea.value);
      }
    });
    const report = () => this.callbacks.onSelectSpan(this.spanAtCaret());
    this.textarea.addEventListener("click", report);
    this.textarea.addEventListener("keyup", report);
    this.textarea.addEventListener("input", () => {
      this.highlight.classList.toggle("stale", this.isDirty());
    });
    this.textarea.addEventListener("scroll", () => {
      this.highlight.scrollTop = this.textarea.scrollTop;
      this.highlight.scrollLeft = this.textarea.scrollLeft;
    });
  }

  isDirty(): boolean {
    return this.payload !== null && this.textarea.value !== this.payload.text;
  }

  setSchema(payload: SchemaPayload): void {
    this.payload = payload;
    this.textarea.value = payload.text;
    this.highlight.classList.remove("stale");
    this.rebuildHighlight();
    this.clearErrors();
  }

  /** Outline one declaration (or none); spans and canvas share element ids. */
  setSelection(elementId: string | null): void {
    for (const span of this.spanElements()) {
      span.classList.toggle("selected", span.dataset.elementId === elementId);
    }
  }

  selectedSpanCount(): number {
    return this.highlight.querySelectorAll("span.decl.selected").length;
  }

  showErrors(errors: ParseErrorInfo[]): void {
    this.clearErrors();
    for (const err of errors) {
      const item = document.createElement("li");
      const where = err.column !== undefined ? `${err.line}:${err.column}` : `line ${err.line}`;
      const hint = err.expected ? ` (expected ${err.expected})` : "";
      item.textContent = `${where}: ${err.message}${hint}`;
      this.errorsBox.appendChild(item);
    }
  }

  clearErrors(): void {
    this.errorsBox.textContent = "";
  }

  private spanElements(): HTMLElement[] {
    return [...this.highlight.querySelectorAll<HTMLElement>("span.decl")];
  }

  private spanAtCaret(): string | null {
    if (!this.payload || this.isDirty()) return null;
    const offset = this.textarea.selectionStart ?? 0;
    const hit = this.payload.spans.find((span) => offset >= span.start && offset < span.end);
    return hit ? hit.id : null;
  }

  private rebuildHighlight(): void {
    this.highlight.textContent = "";
    if (!this.payload) return;
    const { text } = this.payload;
    const spans = [...this.payload.spans].sort((a, b) => a.start - b.start);
    let cursor = 0;
    for (const span of spans) {
      if (span.start > cursor) {
        this.highlight.appendChild(document.createTextNode(text.slice(cursor, span.start)));
      }
      const el = document.createElement("span");
      el.className = "decl";
      el.dataset.elementId = span.id;
      el.textContent = text.slice(span.start, span.end);
      el.addEventListener("click", () => this.callbacks.onSelectSpan(span.id));
      this.highlight.appendChild(el);
      cursor = span.end;
    }
    if (cursor < text.length) {
      this.highlight.appendChild(document.createTextNode(text.slice(cursor)));
    }
  }
}

export function spanById(spans: SpanInfo[], elementId: string): SpanInfo | undefined {
  return spans.find((span) => span.id === elementId);
}
