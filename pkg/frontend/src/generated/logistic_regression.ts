// GENERATED by the mlkit binding generator. Do not edit.

import {
  Matrix,
  MatrixInput,
  ModelHandle,
  Runtime,
  VectorInput,
  defaultRuntime,
} from "../runtime.js";

export interface LogisticregressionInputs {
  /** Training features, one row per example. */
  input?: MatrixInput;
  /** Training labels in {0, 1}. */
  labels?: VectorInput;
  /** L2 penalty (intercept exempt). (default: 0.0) */
  lambda?: number;
  /** Probability above which class 1 is predicted. (default: 0.5) */
  threshold?: number;
  /** Initial gradient-descent step. (default: 1.0) */
  step?: number;
  /** Iteration cap. (default: 200) */
  max_iterations?: number;
  /** Relative loss-change stop. (default: 1e-09) */
  tolerance?: number;
  /** Rows to classify. */
  test?: MatrixInput;
  /** Previously trained model. */
  input_model?: ModelHandle;
}

export interface LogisticregressionOutputs {
  /** Trained (or passed-through) model. */
  output_model?: ModelHandle;
  /** Predicted labels for --test. */
  predictions?: Float64Array;
  /** Class-1 probabilities for --test. */
  probabilities?: Float64Array;
}

/**
 * logistic_regression: Binary logistic regression with L2 regularization.
 *
 * Trains with backtracking gradient descent from zero weights (deterministic) or loads --input_model; classifies --test rows into {0, 1} with their class-1 probabilities.
 *
 * Input parameters:
 *   --input (matrix, optional): Training features, one row per example.
 *   --labels (double_vector, optional): Training labels in {0, 1}.
 *   --lambda (double, default: 0.0): L2 penalty (intercept exempt).
 *   --threshold (double, default: 0.5): Probability above which class 1 is predicted.
 *   --step (double, default: 1.0): Initial gradient-descent step.
 *   --max_iterations (int, default: 200): Iteration cap.
 *   --tolerance (double, default: 1e-09): Relative loss-change stop.
 *   --test (matrix, optional): Rows to classify.
 *   --input_model (model:logistic_regression, optional): Previously trained model.
 *
 * Output parameters:
 *   --output_model (model:logistic_regression): Trained (or passed-through) model.
 *   --predictions (double_vector): Predicted labels for --test.
 *   --probabilities (double_vector): Class-1 probabilities for --test.
 */
export async function logisticRegression(args: LogisticregressionInputs, runtime?: Runtime): Promise<LogisticregressionOutputs> {
  const rt = runtime ?? defaultRuntime();
  const pack = await rt.packCreate();
  try {
    if (args.input !== undefined) {
      await rt.packSetMatrix(pack, "input", args.input);
    }
    if (args.labels !== undefined) {
      await rt.packSetDoubleVector(pack, "labels", args.labels);
    }
    await rt.packSetDouble(pack, "lambda", args.lambda ?? 0.0);
    await rt.packSetDouble(pack, "threshold", args.threshold ?? 0.5);
    await rt.packSetDouble(pack, "step", args.step ?? 1.0);
    await rt.packSetInt(pack, "max_iterations", args.max_iterations ?? 200);
    await rt.packSetDouble(pack, "tolerance", args.tolerance ?? 1e-09);
    if (args.test !== undefined) {
      await rt.packSetMatrix(pack, "test", args.test);
    }
    if (args.input_model !== undefined) {
      await rt.packSetModelRef(pack, "input_model", args.input_model);
    }
    await rt.packRun(pack, "logistic_regression");
    const outputs: LogisticregressionOutputs = {};
    if (await rt.packHas(pack, "output_model")) {
      outputs.output_model = await rt.packGetModel(pack, "output_model");
    }
    if (await rt.packHas(pack, "predictions")) {
      outputs.predictions = await rt.packGetDoubleVector(pack, "predictions");
    }
    if (await rt.packHas(pack, "probabilities")) {
      outputs.probabilities = await rt.packGetDoubleVector(pack, "probabilities");
    }
    return outputs;
  } finally {
    await rt.packDestroy(pack);
  }
}
