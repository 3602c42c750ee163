// GENERATED by the mlkit binding generator. Do not edit.

import {
  Matrix,
  MatrixInput,
  ModelHandle,
  Runtime,
  VectorInput,
  defaultRuntime,
} from "../runtime.js";

export interface KdeInputs {
  /** Sample points. */
  reference: MatrixInput;
  /** Evaluation points (default: reference). */
  query?: MatrixInput;
  /** Kernel, one of {gaussian, epanechnikov}. (default: gaussian) */
  kernel?: string;
  /** Kernel bandwidth h > 0. (default: 1.0) */
  bandwidth?: number;
  /** Relative error guarantee. (default: 0.05) */
  rel_tol?: number;
  /** kd-tree leaf size. (default: 20) */
  leaf_size?: number;
}

export interface KdeOutputs {
  /** Estimated density per query row. */
  densities?: Float64Array;
}

/**
 * kde: Kernel density estimation with a guaranteed relative error.
 *
 * Estimates the density at each query point from the reference sample using a kd-tree traversal; every estimate is within --rel_tol of the exact kernel sum (0 evaluates exactly).
 *
 * Input parameters:
 *   --reference (matrix, required): Sample points.
 *   --query (matrix, optional): Evaluation points (default: reference).
 *   --kernel (string, default: gaussian): Kernel, one of {gaussian, epanechnikov}.
 *   --bandwidth (double, default: 1.0): Kernel bandwidth h > 0.
 *   --rel_tol (double, default: 0.05): Relative error guarantee.
 *   --leaf_size (int, default: 20): kd-tree leaf size.
 *
 * Output parameters:
 *   --densities (double_vector): Estimated density per query row.
 */
export async function kde(args: KdeInputs, runtime?: Runtime): Promise<KdeOutputs> {
  const rt = runtime ?? defaultRuntime();
  const pack = await rt.packCreate();
  try {
    await rt.packSetMatrix(pack, "reference", args.reference);
    if (args.query !== undefined) {
      await rt.packSetMatrix(pack, "query", args.query);
    }
    await rt.packSetString(pack, "kernel", args.kernel ?? "gaussian");
    await rt.packSetDouble(pack, "bandwidth", args.bandwidth ?? 1.0);
    await rt.packSetDouble(pack, "rel_tol", args.rel_tol ?? 0.05);
    await rt.packSetInt(pack, "leaf_size", args.leaf_size ?? 20);
    await rt.packRun(pack, "kde");
    const outputs: KdeOutputs = {};
    if (await rt.packHas(pack, "densities")) {
      outputs.densities = await rt.packGetDoubleVector(pack, "densities");
    }
    return outputs;
  } finally {
    await rt.packDestroy(pack);
  }
}
