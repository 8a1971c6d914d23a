/** Typed client for the pgschema HTTP API. All schema state lives server-side;
 * the UI never mutates a schema locally. */

export interface SpanInfo {
  id: string;
  start: number;
  end: number;
}

export interface PropertyInfo {
  name: string;
  type: string;
  required: boolean;
}

export interface NodeTypeInfo {
  id: string;
  displayName: string;
  labels: string[];
  supertype: string | null;
  properties: PropertyInfo[];
}

export type CardInfo = [number, number | null];

export interface EdgeTypeInfo {
  id: string;
  displayName: string;
  label: string;
  src: string;
  dst: string;
  outCard: CardInfo;
  inCard: CardInfo;
  properties: PropertyInfo[];
}

export interface SchemaModel {
  nodeTypes: NodeTypeInfo[];
  edgeTypes: EdgeTypeInfo[];
}

export interface SchemaPayload {
  text: string;
  spans: SpanInfo[];
  model: SchemaModel;
}

export interface ParseErrorInfo {
  line: number;
  column?: number;
  message: string;
  expected?: string | null;
}

export interface VersionInfo {
  id: number;
  message: string;
  timestamp: number;
}

export interface CompatViolationInfo {
  record: { kind: string; subject: string };
  reason: string;
}

export interface CompatReportInfo {
  compatible: boolean;
  violations: CompatViolationInfo[];
}

export type DiffMode = "semantic" | "raw" | "visual";

export type AnnotationStatus = "added" | "removed" | "modified" | "unchanged";

export interface AnnotationInfo {
  status: AnnotationStatus;
  symbol: string;
}

export interface DiffPayload {
  from: number;
  to: number;
  mode: DiffMode;
  sentences?: string[];
  diff?: string;
  annotations?: Record<string, AnnotationInfo>;
}

export interface ExtractOptions {
  inferCardinality: boolean;
  inferSubtypes: boolean;
}

export interface ExportResult {
  filename: string;
  content: string;
  mediaType: string;
}

/** PUT /schema or POST /extract rejected the input; positions included. */
export class SchemaInputError extends Error {
  constructor(public errors: ParseErrorInfo[]) {
    super(errors.map((e) => `${e.line}:${e.column ?? 0}: ${e.message}`).join("\n"));
  }
}

/** The compat guard rejected an edit (HTTP 409). */
export class CompatRejectedError extends Error {
  constructor(public report: CompatReportInfo) {
    super(report.violations.map((v) => v.reason).join("; "));
  }
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export interface ApiClient {
  extract(filename: string, content: string, options: ExtractOptions): Promise<SchemaPayload>;
  getSchema(): Promise<SchemaPayload>;
  putSchema(text: string): Promise<SchemaPayload>;
  postEdit(command: Record<string, unknown>): Promise<SchemaPayload>;
  commit(message: string): Promise<VersionInfo>;
  versions(): Promise<VersionInfo[]>;
  versionSchema(id: number): Promise<SchemaPayload>;
  diff(from: number, to: number, mode: DiffMode): Promise<DiffPayload>;
  exportSchema(format: "pgs" | "json"): Promise<ExportResult>;
  getGuard(): Promise<boolean>;
  setGuard(on: boolean): Promise<boolean>;
}

export class HttpApi implements ApiClient {
  constructor(private base = "", private fetchFn: typeof fetch = fetch.bind(globalThis)) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.base + path, init);
    if (response.status === 422) {
      const body = await response.json();
      if (Array.isArray(body.errors)) throw new SchemaInputError(body.errors);
      throw new ApiError(422, body.error ?? JSON.stringify(body));
    }
    if (response.status === 409) {
      throw new CompatRejectedError(await response.json());
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        detail = body.error ?? body.detail ?? detail;
      } catch {
        // keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return response;
  }

  async extract(filename: string, content: string, options: ExtractOptions): Promise<SchemaPayload> {
    const form = new FormData();
    form.append("graph", new Blob([content], { type: "text/plain" }), filename);
    form.append("infer_cardinality", String(options.inferCardinality));
    form.append("infer_subtypes", String(options.inferSubtypes));
    const response = await this.request("/extract", { method: "POST", body: form });
    return response.json();
  }

  async getSchema(): Promise<SchemaPayload> {
    return (await this.request("/schema")).json();
  }

  async putSchema(text: string): Promise<SchemaPayload> {
    const response = await this.request("/schema", {
      method: "PUT",
      body: text,
      headers: { "Content-Type": "text/plain" },
    });
    return response.json();
  }

  async postEdit(command: Record<string, unknown>): Promise<SchemaPayload> {
    const response = await this.request("/edits", {
      method: "POST",
      body: JSON.stringify(command),
      headers: { "Content-Type": "application/json" },
    });
    return response.json();
  }

  async commit(message: string): Promise<VersionInfo> {
    const response = await this.request("/commit", {
      method: "POST",
      body: JSON.stringify({ message }),
      headers: { "Content-Type": "application/json" },
    });
    return response.json();
  }

  async versions(): Promise<VersionInfo[]> {
    const body = await (await this.request("/versions")).json();
    return body.versions;
  }

  async versionSchema(id: number): Promise<SchemaPayload> {
    return (await this.request(`/versions/${id}/schema`)).json();
  }

  async diff(from: number, to: number, mode: DiffMode): Promise<DiffPayload> {
    return (await this.request(`/diff?from=${from}&to=${to}&mode=${mode}`)).json();
  }

  async exportSchema(format: "pgs" | "json"): Promise<ExportResult> {
    const response = await this.request("/export", {
      method: "POST",
      body: JSON.stringify({ format }),
      headers: { "Content-Type": "application/json" },
    });
    return {
      filename: `schema.${format}`,
      content: await response.text(),
      mediaType: response.headers.get("content-type") ?? "text/plain",
    };
  }

  async getGuard(): Promise<boolean> {
    const body = await (await this.request("/settings")).json();
    return body.guard_compat;
  }

  async setGuard(on: boolean): Promise<boolean> {
    const response = await this.request("/settings", {
      method: "PUT",
      body: JSON.stringify({ guard_compat: on }),
      headers: { "Content-Type": "application/json" },
    });
    return (await response.json()).guard_compat;
  }
}
