// GENERATED by the mlkit binding generator. Do not edit.

import {
  Matrix,
  MatrixInput,
  ModelHandle,
  Runtime,
  VectorInput,
  defaultRuntime,
} from "../runtime.js";

export interface KnnInputs {
  /** Reference points. */
  reference: MatrixInput;
  /** Query points (default: reference). */
  query?: MatrixInput;
  /** Neighbors per query. */
  k: number;
  /** kd-tree leaf size. (default: 20) */
  leaf_size?: number;
}

export interface KnnOutputs {
  /** Reference row indices, ascending distance. */
  neighbors?: Matrix;
  /** Matching Euclidean distances. */
  distances?: Matrix;
}

/**
 * knn: Exact k-nearest-neighbor search via a kd-tree.
 *
 * Finds the k nearest reference rows for every query row (queries default to the reference set itself, self-matches included).  Results are exact: branch-and-bound pruning never skips a true neighbor.
 *
 * Input parameters:
 *   --reference (matrix, required): Reference points.
 *   --query (matrix, optional): Query points (default: reference).
 *   --k (int, required): Neighbors per query.
 *   --leaf_size (int, default: 20): kd-tree leaf size.
 *
 * Output parameters:
 *   --neighbors (matrix): Reference row indices, ascending distance.
 *   --distances (matrix): Matching Euclidean distances.
 */
export async function knn(args: KnnInputs, runtime?: Runtime): Promise<KnnOutputs> {
  const rt = runtime ?? defaultRuntime();
  const pack = await rt.packCreate();
  try {
    await rt.packSetMatrix(pack, "reference", args.reference);
    if (args.query !== undefined) {
      await rt.packSetMatrix(pack, "query", args.query);
    }
    await rt.packSetInt(pack, "k", args.k);
    await rt.packSetInt(pack, "leaf_size", args.leaf_size ?? 20);
    await rt.packRun(pack, "knn");
    const outputs: KnnOutputs = {};
    if (await rt.packHas(pack, "neighbors")) {
      outputs.neighbors = await rt.packGetMatrix(pack, "neighbors");
    }
    if (await rt.packHas(pack, "distances")) {
      outputs.distances = await rt.packGetMatrix(pack, "distances");
    }
    return outputs;
  } finally {
    await rt.packDestroy(pack);
  }
}
