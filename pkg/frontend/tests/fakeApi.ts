/** In-memory stand-in for the HTTP service. Every payload it serves was
 * captured verbatim from the real service by tools/make_fixtures.py, so these
 * tests exercise the actual wire format. */

import {
  ApiClient,
  ApiError,
  CompatRejectedError,
  DiffMode,
  DiffPayload,
  ExportResult,
  ExtractOptions,
  SchemaInputError,
  SchemaPayload,
  VersionInfo,
} from "../src/api.js";

import fiveTypeSchema from "./fixtures/five_type_schema.json";
import removeProperty409 from "./fixtures/remove_property_409.json";
import afterRemoveAllowed from "./fixtures/after_remove_allowed.json";
import putSchema422 from "./fixtures/put_schema_422.json";
import versionsFixture from "./fixtures/versions.json";
import historyV1 from "./fixtures/history_v1_schema.json";
import historyV2 from "./fixtures/history_v2_schema.json";
import diffSemantic from "./fixtures/diff_semantic.json";
import diffRaw from "./fixtures/diff_raw.json";
import diffVisual from "./fixtures/diff_visual.json";
import extractSuccess from "./fixtures/extract_success.json";
import extractError from "./fixtures/extract_error.json";

const clone = <T>(value: T): T => JSON.parse(JSON.stringify(value));

export class FakeApi implements ApiClient {
  current: SchemaPayload = clone(fiveTypeSchema) as SchemaPayload;
  guard = false;
  committed: string[] = [];

  async extract(_filename: string, content: string, _options: ExtractOptions): Promise<SchemaPayload> {
    if (content.includes("{broken")) {
      throw new SchemaInputError((extractError as { errors: never[] }).errors);
    }
    this.current = clone(extractSuccess) as SchemaPayload;
    return clone(this.current);
  }

  async getSchema(): Promise<SchemaPayload> {
    return clone(this.current);
  }

  async putSchema(text: string): Promise<SchemaPayload> {
    if (text === this.current.text) return clone(this.current);
    if (text.includes("WAT")) {
      throw new SchemaInputError((putSchema422 as { errors: never[] }).errors);
    }
    throw new ApiError(500, "FakeApi only accepts the recorded schema texts");
  }

  async postEdit(command: Record<string, unknown>): Promise<SchemaPayload> {
    const isRecordedRemoval =
      command.op === "remove-property" && command.owner === "Person" && command.name === "name";
    if (!isRecordedRemoval) {
      throw new ApiError(400, `FakeApi has no recorded response for ${JSON.stringify(command)}`);
    }
    if (this.guard) {
      throw new CompatRejectedError(clone(removeProperty409) as never);
    }
    this.current = clone(afterRemoveAllowed) as SchemaPayload;
    return clone(this.current);
  }

  async commit(message: string): Promise<VersionInfo> {
    this.committed.push(message);
    return { id: this.committed.length, message, timestamp: 0 };
  }

  async versions(): Promise<VersionInfo[]> {
    return clone(versionsFixture).versions;
  }

  async versionSchema(id: number): Promise<SchemaPayload> {
    if (id === 1) return clone(historyV1) as SchemaPayload;
    if (id === 2) return clone(historyV2) as SchemaPayload;
    throw new ApiError(404, `no version ${id}`);
  }

  async diff(from: number, to: number, mode: DiffMode): Promise<DiffPayload> {
    if (from === to) {
      return { from, to, mode, sentences: [], diff: "", annotations: {} };
    }
    const fixture = { semantic: diffSemantic, raw: diffRaw, visual: diffVisual }[mode];
    return clone(fixture) as DiffPayload;
  }

  async exportSchema(format: "pgs" | "json"): Promise<ExportResult> {
    const content =
      format === "pgs" ? this.current.text : JSON.stringify(this.current.model, null, 2);
    return { filename: `schema.${format}`, content, mediaType: "text/plain" };
  }

  async getGuard(): Promise<boolean> {
    return this.guard;
  }

  async setGuard(on: boolean): Promise<boolean> {
    this.guard = on;
    return this.guard;
  }
}
