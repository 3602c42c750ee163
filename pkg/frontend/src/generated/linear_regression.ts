// GENERATED by the mlkit binding generator. Do not edit.

import {
  Matrix,
  MatrixInput,
  ModelHandle,
  Runtime,
  VectorInput,
  defaultRuntime,
} from "../runtime.js";

export interface LinearregressionInputs {
  /** Training features, one row per example. */
  input?: MatrixInput;
  /** Training responses, one per row. */
  responses?: VectorInput;
  /** Ridge penalty (intercept exempt). (default: 0.0) */
  lambda?: number;
  /** Rows to predict. */
  test?: MatrixInput;
  /** Previously trained model. */
  input_model?: ModelHandle;
}

export interface LinearregressionOutputs {
  /** Trained (or passed-through) model. */
  output_model?: ModelHandle;
  /** Predicted responses for --test. */
  predictions?: Float64Array;
}

/**
 * linear_regression: Ordinary least squares / ridge regression.
 *
 * Trains on --input/--responses (solving the regularized normal equations) or loads --input_model, then predicts --test rows.
 *
 * Input parameters:
 *   --input (matrix, optional): Training features, one row per example.
 *   --responses (double_vector, optional): Training responses, one per row.
 *   --lambda (double, default: 0.0): Ridge penalty (intercept exempt).
 *   --test (matrix, optional): Rows to predict.
 *   --input_model (model:linear_regression, optional): Previously trained model.
 *
 * Output parameters:
 *   --output_model (model:linear_regression): Trained (or passed-through) model.
 *   --predictions (double_vector): Predicted responses for --test.
 */
export async function linearRegression(args: LinearregressionInputs, runtime?: Runtime): Promise<LinearregressionOutputs> {
  const rt = runtime ?? defaultRuntime();
  const pack = await rt.packCreate();
  try {
    if (args.input !== undefined) {
      await rt.packSetMatrix(pack, "input", args.input);
    }
    if (args.responses !== undefined) {
      await rt.packSetDoubleVector(pack, "responses", args.responses);
    }
    await rt.packSetDouble(pack, "lambda", args.lambda ?? 0.0);
    if (args.test !== undefined) {
      await rt.packSetMatrix(pack, "test", args.test);
    }
    if (args.input_model !== undefined) {
      await rt.packSetModelRef(pack, "input_model", args.input_model);
    }
    await rt.packRun(pack, "linear_regression");
    const outputs: LinearregressionOutputs = {};
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
