// GENERATED by the mlkit binding generator. Do not edit.

import {
  Matrix,
  MatrixInput,
  ModelHandle,
  Runtime,
  VectorInput,
  defaultRuntime,
} from "../runtime.js";

export interface FfnInputs {
  /** Training features, one row per example. */
  input?: MatrixInput;
  /** Training labels 0..C-1 (C inferred). */
  labels?: VectorInput;
  /** Hidden layer width. (default: 8) */
  hidden_width?: number;
  /** Training epochs. (default: 200) */
  epochs?: number;
  /** Mini-batch size. (default: 32) */
  batch?: number;
  /** Initial SGD step. (default: 0.5) */
  step?: number;
  /** Step decay rate (step0/(1+t*decay)). (default: 0.0) */
  decay?: number;
  /** Initialization/shuffling seed. (default: 0) */
  seed?: number;
  /** Rows to classify. */
  test?: MatrixInput;
  /** Previously trained model. */
  input_model?: ModelHandle;
}

export interface FfnOutputs {
  /** Trained (or passed-through) model. */
  output_model?: ModelHandle;
  /** Predicted class labels for --test. */
  predictions?: Float64Array;
}

/**
 * ffn: Small feedforward network classifier.
 *
 * Trains a Linear-ReLU-Linear-LogSoftmax network with SGD (deterministic under --seed) or loads --input_model; predicts class labels for --test rows.
 *
 * Input parameters:
 *   --input (matrix, optional): Training features, one row per example.
 *   --labels (double_vector, optional): Training labels 0..C-1 (C inferred).
 *   --hidden_width (int, default: 8): Hidden layer width.
 *   --epochs (int, default: 200): Training epochs.
 *   --batch (int, default: 32): Mini-batch size.
 *   --step (double, default: 0.5): Initial SGD step.
 *   --decay (double, default: 0.0): Step decay rate (step0/(1+t*decay)).
 *   --seed (int, default: 0): Initialization/shuffling seed.
 *   --test (matrix, optional): Rows to classify.
 *   --input_model (model:ffn, optional): Previously trained model.
 *
 * Output parameters:
 *   --output_model (model:ffn): Trained (or passed-through) model.
 *   --predictions (double_vector): Predicted class labels for --test.
 */
export async function ffn(args: FfnInputs, runtime?: Runtime): Promise<FfnOutputs> {
  const rt = runtime ?? defaultRuntime();
  const pack = await rt.packCreate();
  try {
    if (args.input !== undefined) {
      await rt.packSetMatrix(pack, "input", args.input);
    }
    if (args.labels !== undefined) {
      await rt.packSetDoubleVector(pack, "labels", args.labels);
    }
    await rt.packSetInt(pack, "hidden_width", args.hidden_width ?? 8);
    await rt.packSetInt(pack, "epochs", args.epochs ?? 200);
    await rt.packSetInt(pack, "batch", args.batch ?? 32);
    await rt.packSetDouble(pack, "step", args.step ?? 0.5);
    await rt.packSetDouble(pack, "decay", args.decay ?? 0.0);
    await rt.packSetInt(pack, "seed", args.seed ?? 0);
    if (args.test !== undefined) {
      await rt.packSetMatrix(pack, "test", args.test);
    }
    if (args.input_model !== undefined) {
      await rt.packSetModelRef(pack, "input_model", args.input_model);
    }
    await rt.packRun(pack, "ffn");
    const outputs: FfnOutputs = {};
    if (await rt.packHas(pack, "output_model")) {
      outputs.output_model = await rt.packGetModel(pack, "output_model");
    }
    if (await rt.packHas(pack, "predictions")) {
      outputs.predictions = await rt.packGetDoubleVector(pack, "predictions");
    }
    return outputs;
  } finally {
    await rt.packDestroy(pack);
  }
}
