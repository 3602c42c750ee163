import * as path from "node:path";
import { afterAll, beforeAll, describe, expect, test } from "vitest";

import {
  Runtime,
  closeDefaultRuntime,
  defaultRuntime,
  toMatrix,
} from "../src/runtime.js";
import { kmeans } from "../src/generated/kmeans.js";
import { knn } from "../src/generated/knn.js";
import { kde } from "../src/generated/kde.js";
import {
  expectCliOk,
  fixtureMatrix,
  flatten,
  makeTmpDir,
  readCsv,
  runCli,
  writeCsv,
} from "./helpers.js";

let rt: Runtime;

beforeAll(() => {
  rt = new Runtime();
});

afterAll(async () => {
  await rt.close();
  await closeDefaultRuntime();
});

describe("runtime plumbing", () => {
  test("boundary version", async () => {
    expect(await rt.boundaryVersion()).toBe(1);
  });

  test("matrix round trip host -> boundary -> host is the identity", async () => {
    const values = fixtureMatrix(42, 17, 5, 1e6);
    values[0][0] = 1e-300;
    values[0][1] = -1.7976931348623157e308;
    values[0][2] = 0.1;
    const pack = await rt.packCreate();
    try {
      await rt.packSetMatrix(pack, "m", values);
      const got = await rt.packGetMatrix(pack, "m");
      expect(got.rows).toBe(17);
      expect(got.cols).toBe(5);
      expect(Array.from(got.data)).toEqual(flatten(values));
    } finally {
      await rt.packDestroy(pack);
    }
  });

  test("vector round trip preserves bits", async () => {
    const v = new Float64Array([0.1, 2 ** -1074, 1234.5678e-9]);
    const pack = await rt.packCreate();
    try {
      await rt.packSetDoubleVector(pack, "v", v);
      const got = await rt.packGetDoubleVector(pack, "v");
      expect(Array.from(got)).toEqual(Array.from(v));
    } finally {
      await rt.packDestroy(pack);
    }
  });

  test("ragged host array rejected", () => {
    expect(() => toMatrix([[1, 2], [3]])).toThrow(/row 1/);
  });
});

describe("generated wrappers", () => {
  test("kmeans via wrapper equals kmeans via CLI on the same fixture", async () => {
    const dir = makeTmpDir("wrap-kmeans");
    const X = fixtureMatrix(7, 60, 2);
    writeCsv(path.join(dir, "x.csv"), X);
    const cli = runCli([
      "kmeans",
      "--input", path.join(dir, "x.csv"),
      "--clusters", "4",
      "--variant", "hamerly",
      "--seed", "11",
      "--centroids", path.join(dir, "c.csv"),
      "--assignments", path.join(dir, "a.csv"),
    ]);
    expectCliOk(cli);

    const out = await kmeans(
      { input: X, clusters: 4, variant: "hamerly", seed: 11 },
      rt,
    );
    expect(out.centroids).toBeDefined();
    expect(Array.from(out.centroids!.data)).toEqual(
      flatten(readCsv(path.join(dir, "c.csv"))),
    );
    expect(Array.from(out.assignments!)).toEqual(
      flatten(readCsv(path.join(dir, "a.csv"))),
    );

    const printed = Object.fromEntries(
      cli.stdout.trim().split("\n").map((line) => line.split("=")),
    );
    expect(out.inertia).toBe(Number(printed["inertia"]));
    expect(out.iterations).toBe(Number(printed["iterations"]));
  });

  test("defaults are applied by the wrapper (variant lloyd equals explicit)", async () => {
    const X = fixtureMatrix(9, 40, 2);
    const an = await kmeans({ input: X, clusters: 3, seed: 2 }, rt);
    const explicit = await kmeans(
      { input: X, clusters: 3, seed: 2, variant: "lloyd", max_iterations: 100, tolerance: 1e-6 },
      rt,
    );
    expect(Array.from(an.centroids!.data)).toEqual(Array.from(explicit.centroids!.data));
  });

  test("omitting a required argument raises an exception naming it", async () => {
    const X = fixtureMatrix(3, 10, 2);
    await expect(
      knn({ reference: X } as never, rt),
    ).rejects.toThrow(/'k'/);
  });

  test("algorithm errors surface as exceptions with the boundary message", async () => {
    const X = fixtureMatrix(4, 10, 2);
    await expect(
      kmeans({ input: X, clusters: 3, variant: "sideways" }, rt),
    ).rejects.toThrow(/sideways/);
  });

  test("kde wrapper returns densities for every query row", async () => {
    const X = fixtureMatrix(5, 80, 2);
    const out = await kde({ reference: X, bandwidth: 1.5, rel_tol: 0 }, rt);
    expect(out.densities!.length).toBe(80);
    for (const value of out.densities!) {
      expect(value).toBeGreaterThan(0);
    }
  });

  test("default runtime works when no runtime is passed", async () => {
    const X = fixtureMatrix(6, 12, 2);
    const out = await knn({ reference: X, k: 1 });
    expect(out.neighbors!.rows).toBe(12);
    expect(defaultRuntime()).toBeDefined();
  });
});
