/**
 * Generator audit: the checked-in wrapper sources are exactly what the
 * generator emits, regeneration is byte-stable, and parsing the sources
 * recovers parameter names and defaults that match the registry.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, test } from "vitest";

import { makeTmpDir, runCodegen } from "./helpers.js";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const GENERATED_DIR = path.join(HERE, "..", "src", "generated");

interface RegistryParam {
  name: string;
  direction: "input" | "output";
  type: string;
  required: boolean;
  default: unknown;
  doc: string;
}

interface RegistryDump {
  [method: string]: { summary: string; params: RegistryParam[] };
}

function registryDump(): RegistryDump {
  return JSON.parse(runCodegen(["--dump-registry"])) as RegistryDump;
}

const SET_CALL = /await rt\.(packSet\w+)\(pack, "(\w+)"(?:, args\.(\w+)(?: \?\? (.+?))?)?\);/g;
const GET_CALL = /outputs\.(\w+) = await rt\.(packGet\w+)\(pack, "(\w+)"\);/g;

function listDir(dir: string): string[] {
  return fs.readdirSync(dir).sort();
}

describe("generator audit", () => {
  test("checked-in sources equal a fresh regeneration, byte for byte", () => {
    const fresh = makeTmpDir("regen");
    runCodegen(["--backend", "typescript", "--out", fresh]);
    expect(listDir(fresh)).toEqual(listDir(GENERATED_DIR));
    for (const name of listDir(fresh)) {
      const a = fs.readFileSync(path.join(fresh, name));
      const b = fs.readFileSync(path.join(GENERATED_DIR, name));
      expect(a.equals(b), `${name} differs from checked-in copy`).toBe(true);
    }
  });

  test("regeneration is byte-stable", () => {
    const first = makeTmpDir("regen-a");
    const second = makeTmpDir("regen-b");
    runCodegen(["--backend", "typescript", "--out", first]);
    runCodegen(["--backend", "typescript", "--out", second]);
    for (const name of listDir(first)) {
      expect(
        fs.readFileSync(path.join(first, name))
          .equals(fs.readFileSync(path.join(second, name))),
      ).toBe(true);
    }
  });

  test("parsed wrapper params match the registry exactly", () => {
    const dump = registryDump();
    for (const [method, info] of Object.entries(dump)) {
      const source = fs.readFileSync(
        path.join(GENERATED_DIR, `${method}.ts`), "utf-8",
      );

      const inputs = info.params.filter((p) => p.direction === "input");
      const outputs = info.params.filter((p) => p.direction === "output");

      const setNames = [...source.matchAll(SET_CALL)].map((m) => m[2]);
      expect(setNames, `${method} input order`).toEqual(inputs.map((p) => p.name));

      const getNames = [...source.matchAll(GET_CALL)].map((m) => m[3]);
      expect(getNames, `${method} output order`).toEqual(outputs.map((p) => p.name));

      for (const match of source.matchAll(SET_CALL)) {
        const [, , name, argName, defaultLiteral] = match;
        const param = inputs.find((p) => p.name === name)!;
        expect(argName, `${method}.${name} arg`).toBe(name);
        if (param.default === null) {
          expect(defaultLiteral, `${method}.${name} should have no default`).toBeUndefined();
        } else {
          expect(defaultLiteral, `${method}.${name} should carry a default`).toBeDefined();
          const parsed =
            param.type === "string" ? JSON.parse(defaultLiteral) : Number(defaultLiteral);
          expect(parsed, `${method}.${name} default value`).toEqual(param.default);
        }
      }
    }
  });

  test("every registered method has a generated module and an index entry", () => {
    const dump = registryDump();
    const index = fs.readFileSync(path.join(GENERATED_DIR, "index.ts"), "utf-8");
    for (const method of Object.keys(dump)) {
      expect(fs.existsSync(path.join(GENERATED_DIR, `${method}.ts`))).toBe(true);
      expect(index).toContain(`./${method}.js`);
    }
  });

  test("embedded documentation mirrors the registry help", () => {
    const dump = registryDump();
    for (const [method, info] of Object.entries(dump)) {
      const source = fs.readFileSync(
        path.join(GENERATED_DIR, `${method}.ts`), "utf-8",
      );
      expect(source).toContain(info.summary);
      for (const param of info.params) {
        expect(source, `${method} help mentions ${param.name}`)
          .toContain(`--${param.name}`);
      }
    }
  });
});
