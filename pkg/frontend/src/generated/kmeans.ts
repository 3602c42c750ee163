// GENERATED by the mlkit binding generator. Do not edit.

import {
  Matrix,
  MatrixInput,
  ModelHandle,
  Runtime,
  VectorInput,
  defaultRuntime,
} from "../runtime.js";

export interface KmeansInputs {
  /** Points to cluster or assign. */
  input?: MatrixInput;
  /** Number of clusters. */
  clusters?: number;
  /** Algorithm variant, one of {lloyd, hamerly}. (default: lloyd) */
  variant?: string;
  /** Iteration cap. (default: 100) */
  max_iterations?: number;
  /** Stop when no centroid moves farther than this. (default: 1e-06) */
  tolerance?: number;
  /** Seeding RNG seed. (default: 0) */
  seed?: number;
  /** Previously saved centroids. */
  input_model?: ModelHandle;
}

export interface KmeansOutputs {
  /** Final centroids. */
  output_model?: ModelHandle;
  /** Final centroids, one per row. */
  centroids?: Matrix;
  /** Cluster index of each --input row. */
  assignments?: Float64Array;
  /** Sum of squared point-to-centroid distances. */
  inertia?: number;
  /** Iterations performed. */
  iterations?: number;
}

/**
 * kmeans: k-means clustering (Lloyd or Hamerly's exact acceleration).
 *
 * Seeds with k-means++ from --seed and clusters --input into --clusters groups; both variants return identical results. With --input_model, assigns --input rows to the saved centroids instead.
 *
 * Input parameters:
 *   --input (matrix, optional): Points to cluster or assign.
 *   --clusters (int, optional): Number of clusters.
 *   --variant (string, default: lloyd): Algorithm variant, one of {lloyd, hamerly}.
 *   --max_iterations (int, default: 100): Iteration cap.
 *   --tolerance (double, default: 1e-06): Stop when no centroid moves farther than this.
 *   --seed (int, default: 0): Seeding RNG seed.
 *   --input_model (model:kmeans, optional): Previously saved centroids.
 *
 * Output parameters:
 *   --output_model (model:kmeans): Final centroids.
 *   --centroids (matrix): Final centroids, one per row.
 *   --assignments (double_vector): Cluster index of each --input row.
 *   --inertia (double): Sum of squared point-to-centroid distances.
 *   --iterations (int): Iterations performed.
 */
export async function kmeans(args: KmeansInputs, runtime?: Runtime): Promise<KmeansOutputs> {
  const rt = runtime ?? defaultRuntime();
  const pack = await rt.packCreate();
  try {
    if (args.input !== undefined) {
      await rt.packSetMatrix(pack, "input", args.input);
    }
    if (args.clusters !== undefined) {
      await rt.packSetInt(pack, "clusters", args.clusters);
    }
    await rt.packSetString(pack, "variant", args.variant ?? "lloyd");
    await rt.packSetInt(pack, "max_iterations", args.max_iterations ?? 100);
    await rt.packSetDouble(pack, "tolerance", args.tolerance ?? 1e-06);
    await rt.packSetInt(pack, "seed", args.seed ?? 0);
    if (args.input_model !== undefined) {
      await rt.packSetModelRef(pack, "input_model", args.input_model);
    }
    await rt.packRun(pack, "kmeans");
    const outputs: KmeansOutputs = {};
    if (await rt.packHas(pack, "output_model")) {
      outputs.output_model = await rt.packGetModel(pack, "output_model");
    }
    if (await rt.packHas(pack, "centroids")) {
      outputs.centroids = await rt.packGetMatrix(pack, "centroids");
    }
    if (await rt.packHas(pack, "assignments")) {
      outputs.assignments = await rt.packGetDoubleVector(pack, "assignments");
    }
    if (await rt.packHas(pack, "inertia")) {
      outputs.inertia = await rt.packGetDouble(pack, "inertia");
    }
    if (await rt.packHas(pack, "iterations")) {
      outputs.iterations = await rt.packGetInt(pack, "iterations");
    }
    return outputs;
  } finally {
    await rt.packDestroy(pack);
  }
}
