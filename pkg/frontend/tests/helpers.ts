import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

export const PYTHON = process.env.MLKIT_PYTHON ?? "python3";

export interface CliResult {
  code: number;
  stdout: string;
  stderr: string;
}

/** Run the mlkit CLI; the interop contract under test. */
export function runCli(args: string[], env: Record<string, string> = {}): CliResult {
  const proc = spawnSync(PYTHON, ["-m", "mlkit.cli", ...args], {
    encoding: "utf-8",
    env: { ...process.env, ...env },
    timeout: 120_000,
  });
  return { code: proc.status ?? -1, stdout: proc.stdout, stderr: proc.stderr };
}

export function expectCliOk(result: CliResult): void {
  if (result.code !== 0) {
    throw new Error(`CLI failed (${result.code}): ${result.stderr}`);
  }
}

export function runCodegen(args: string[]): string {
  const proc = spawnSync(PYTHON, ["-m", "mlkit.codegen", ...args], {
    encoding: "utf-8",
    timeout: 120_000,
  });
  if (proc.status !== 0) {
    throw new Error(`codegen failed: ${proc.stderr}`);
  }
  return proc.stdout;
}

export function makeTmpDir(label: string): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), `mlkit-${label}-`));
}

/** JS shortest round-trip decimal is lossless for finite doubles. */
export function writeCsv(file: string, rows: number[][]): void {
  const text = rows.map((row) => row.map((v) => String(v)).join(",")).join("\n");
  fs.writeFileSync(file, text + (rows.length ? "\n" : ""));
}

export function readCsv(file: string): number[][] {
  const text = fs.readFileSync(file, "utf-8");
  return text
    .split("\n")
    .filter((line) => line.length > 0)
    .map((line) => line.split(",").map(Number));
}

export function flatten(rows: number[][]): number[] {
  return rows.flat();
}

/** Deterministic float fixtures (mulberry32). */
export function fixtureRng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function fixtureMatrix(seed: number, rows: number, cols: number, scale = 4): number[][] {
  const rand = fixtureRng(seed);
  return Array.from({ length: rows }, () =>
    Array.from({ length: cols }, () => Math.round((rand() - 0.5) * 2 * scale * 1e6) / 1e6),
  );
}

/** Two separable blobs with 0/1 labels, deterministic. */
export function blobFixture(seed: number, n: number): { X: number[][]; labels: number[] } {
  const rand = fixtureRng(seed);
  const X: number[][] = [];
  const labels: number[] = [];
  for (let i = 0; i < n; i++) {
    const cls = i % 2;
    const cx = cls === 0 ? -3 : 3;
    X.push([
      Math.round((cx + rand() - 0.5) * 1e6) / 1e6,
      Math.round((rand() - 0.5) * 2 * 1e6) / 1e6,
    ]);
    labels.push(cls);
  }
  return { X, labels };
}
