/**
 * Hand-written runtime support for the generated mlkit wrappers.
 *
 * Bridges host arrays to the mlkit boundary layer, which runs in a
 * long-lived `python -m mlkit.boundary_bridge` child speaking one JSON
 * object per line.  Float buffers travel as base64 of the little-endian
 * f64 bytes, so every matrix crosses the boundary bit-for-bit.
 *
 * This file contains no per-method code: everything method-specific
 * lives in src/generated/, emitted by the mlkit binding generator.
 */

import { spawn, type ChildProcessByStdio } from "node:child_process";
import type { Readable, Writable } from "node:stream";
import { createInterface, type Interface } from "node:readline";
import * as fs from "node:fs";

export interface Matrix {
  rows: number;
  cols: number;
  /** row-major, length rows*cols */
  data: Float64Array;
}

export type MatrixInput = Matrix | number[][];
export type VectorInput = Float64Array | number[];

/** Boundary failure surfaced as a native exception. */
export class MlkitError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
    this.name = "MlkitError";
  }
}

export function toMatrix(input: MatrixInput): Matrix {
  if (Array.isArray(input)) {
    const rows = input.length;
    const cols = rows === 0 ? 0 : input[0].length;
    const data = new Float64Array(rows * cols);
    for (let i = 0; i < rows; i++) {
      if (input[i].length !== cols) {
        throw new MlkitError(`row ${i} has ${input[i].length} values, expected ${cols}`, 3);
      }
      data.set(input[i], i * cols);
    }
    return { rows, cols, data };
  }
  return input;
}

function toFloat64Array(input: VectorInput): Float64Array {
  return input instanceof Float64Array ? input : Float64Array.from(input);
}

function encodeF64(data: Float64Array): string {
  return Buffer.from(data.buffer, data.byteOffset, data.byteLength).toString("base64");
}

function decodeF64(b64: string): Float64Array {
  const buf = Buffer.from(b64, "base64");
  // copy so the view owns aligned memory independent of the Buffer pool
  const out = new Float64Array(buf.byteLength / 8);
  for (let i = 0; i < out.length; i++) {
    out[i] = buf.readDoubleLE(i * 8);
  }
  return out;
}

interface BridgeResponse {
  id: number;
  status: number;
  [key: string]: unknown;
}

/** One long-lived bridge child; requests resolve by id. */
export class BridgeTransport {
  private child: ChildProcessByStdio<Writable, Readable, null>;
  private lines: Interface;
  private pending = new Map<number, { resolve: (r: BridgeResponse) => void; reject: (e: Error) => void }>();
  private nextId = 1;
  private closed = false;

  constructor(pythonBin?: string) {
    const python = pythonBin ?? process.env.MLKIT_PYTHON ?? "python3";
    this.child = spawn(python, ["-m", "mlkit.boundary_bridge"], {
      stdio: ["pipe", "pipe", "inherit"],
    });
    this.lines = createInterface({ input: this.child.stdout });
    this.lines.on("line", (line) => {
      const resp = JSON.parse(line) as BridgeResponse;
      const waiter = this.pending.get(resp.id);
      if (waiter) {
        this.pending.delete(resp.id);
        waiter.resolve(resp);
      }
    });
    this.child.on("exit", () => {
      this.closed = true;
      for (const waiter of this.pending.values()) {
        waiter.reject(new MlkitError("bridge process exited", 1));
      }
      this.pending.clear();
    });
  }

  request(op: string, fields: Record<string, unknown> = {}): Promise<BridgeResponse> {
    if (this.closed) {
      return Promise.reject(new MlkitError("bridge is closed", 1));
    }
    const id = this.nextId++;
    const payload = JSON.stringify({ id, op, ...fields });
    return new Promise((resolve, reject) => {
      this.pending.set(id, { resolve, reject });
      this.child.stdin.write(payload + "\n");
    });
  }

  async close(): Promise<void> {
    if (this.closed) return;
    try {
      await this.request("shutdown");
    } catch {
      // already gone
    }
    this.closed = true;
    this.child.stdin.end();
  }
}

/** Typed facade over the boundary function set. */
export class Runtime {
  readonly transport: BridgeTransport;

  constructor(transport?: BridgeTransport) {
    this.transport = transport ?? new BridgeTransport();
  }

  private async call(
    op: string,
    fields: Record<string, unknown>,
    packForError?: number,
  ): Promise<BridgeResponse> {
    const resp = await this.transport.request(op, fields);
    if (resp.status !== 0) {
      let message = (resp.message as string) ?? "";
      if (!message && packForError !== undefined) {
        const err = await this.transport.request("pack_last_error", { handle: packForError });
        message = (err.message as string) ?? "";
      }
      throw new MlkitError(message || `${op} failed with status ${resp.status}`, resp.status);
    }
    return resp;
  }

  async boundaryVersion(): Promise<number> {
    return (await this.call("boundary_version", {})).version as number;
  }

  async packCreate(): Promise<number> {
    return (await this.call("pack_create", {})).handle as number;
  }

  async packDestroy(handle: number): Promise<void> {
    await this.call("pack_destroy", { handle });
  }

  async packSetInt(handle: number, name: string, value: number): Promise<void> {
    if (!Number.isInteger(value)) {
      throw new MlkitError(`param '${name}': expected an integer, got ${value}`, 3);
    }
    await this.call("pack_set_int", { handle, name, value }, handle);
  }

  async packSetDouble(handle: number, name: string, value: number): Promise<void> {
    await this.call("pack_set_double", { handle, name, value }, handle);
  }

  async packSetString(handle: number, name: string, value: string): Promise<void> {
    await this.call("pack_set_string", { handle, name, value }, handle);
  }

  async packSetFlag(handle: number, name: string, value: boolean): Promise<void> {
    await this.call("pack_set_flag", { handle, name, value }, handle);
  }

  async packSetDoubleVector(handle: number, name: string, value: VectorInput): Promise<void> {
    const data = toFloat64Array(value);
    await this.call("pack_set_double_vector", { handle, name, data: encodeF64(data) }, handle);
  }

  async packSetMatrix(handle: number, name: string, value: MatrixInput): Promise<void> {
    const m = toMatrix(value);
    await this.call(
      "pack_set_matrix",
      { handle, name, rows: m.rows, cols: m.cols, data: encodeF64(m.data) },
      handle,
    );
  }

  async packSetModelRef(handle: number, name: string, model: ModelHandle): Promise<void> {
    await this.call("pack_set_model_ref", { handle, name, model_handle: model.id }, handle);
  }

  async packRun(handle: number, method: string): Promise<void> {
    await this.call("pack_run", { handle, method }, handle);
  }

  async packHas(handle: number, name: string): Promise<boolean> {
    return (await this.call("pack_has", { handle, name }, handle)).present as boolean;
  }

  async packGetInt(handle: number, name: string): Promise<number> {
    return (await this.call("pack_get_int", { handle, name }, handle)).value as number;
  }

  async packGetDouble(handle: number, name: string): Promise<number> {
    return (await this.call("pack_get_double", { handle, name }, handle)).value as number;
  }

  async packGetString(handle: number, name: string): Promise<string> {
    return (await this.call("pack_get_string", { handle, name }, handle)).value as string;
  }

  async packGetFlag(handle: number, name: string): Promise<boolean> {
    return (await this.call("pack_get_flag", { handle, name }, handle)).value as boolean;
  }

  async packGetDoubleVector(handle: number, name: string): Promise<Float64Array> {
    const resp = await this.call("pack_get_double_vector", { handle, name }, handle);
    return decodeF64(resp.data as string);
  }

  async packGetMatrix(handle: number, name: string): Promise<Matrix> {
    const dims = await this.call("pack_get_matrix_dims", { handle, name }, handle);
    const resp = await this.call("pack_copy_matrix", { handle, name }, handle);
    return {
      rows: dims.rows as number,
      cols: dims.cols as number,
      data: decodeF64(resp.data as string),
    };
  }

  async packGetModel(handle: number, name: string): Promise<ModelHandle> {
    const resp = await this.call("pack_get_model_ref", { handle, name }, handle);
    return new ModelHandle(this, resp.model_handle as number, resp.type_tag as string);
  }

  async modelFromBytes(data: Buffer): Promise<ModelHandle> {
    const resp = await this.call("model_from_bytes", { data: data.toString("base64") });
    return new ModelHandle(this, resp.model_handle as number, "");
  }

  async close(): Promise<void> {
    await this.transport.close();
  }
}

/** Opaque reference to a model loaded in the bridge process. */
export class ModelHandle {
  constructor(
    readonly runtime: Runtime,
    readonly id: number,
    readonly typeTag: string,
  ) {}

  async toBytes(format: "binary" | "text" = "binary"): Promise<Buffer> {
    const resp = await this.runtime.transport.request("model_to_bytes", {
      model_handle: this.id,
      format,
    });
    if (resp.status !== 0) {
      throw new MlkitError((resp.message as string) || "model_to_bytes failed", resp.status);
    }
    return Buffer.from(resp.data as string, "base64");
  }

  /** Byte-identical to the same model saved by the CLI. */
  async save(path: string, format: "binary" | "text" = "binary"): Promise<void> {
    fs.writeFileSync(path, await this.toBytes(format));
  }

  static async load(path: string, runtime?: Runtime): Promise<ModelHandle> {
    const rt = runtime ?? defaultRuntime();
    return rt.modelFromBytes(fs.readFileSync(path));
  }

  async free(): Promise<void> {
    await this.runtime.transport.request("model_free", { model_handle: this.id });
  }
}

let sharedRuntime: Runtime | undefined;

/** Lazily created process-wide runtime used when a call passes none. */
export function defaultRuntime(): Runtime {
  if (sharedRuntime === undefined) {
    sharedRuntime = new Runtime();
  }
  return sharedRuntime;
}

export async function closeDefaultRuntime(): Promise<void> {
  if (sharedRuntime !== undefined) {
    await sharedRuntime.close();
    sharedRuntime = undefined;
  }
}
