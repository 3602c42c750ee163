"""The shipped method registry: seven algorithms, one declarative table.

Model-bearing methods follow one convention: supplying training inputs
trains a new model, supplying --input_model reuses a saved one, and
--test (or, for kmeans, --input with a model) asks for predictions.
"""

from __future__ import annotations

import numpy as np

from .bindings import MethodSpec, ParamSpec, Registry
from .clustering import (
    KMeansModel,
    kmeans_assign,
    kmeans_hamerly,
    kmeans_lloyd,
    kmeanspp_init,
)
from .core import LabeledDataset, SeededRng
from .errors import ValidationError
from .linear_models import (
    linreg_predict,
    linreg_train,
    logreg_classify,
    logreg_train,
)
from .neural import ffn_classify, ffn_create, ffn_train
from .trees import kde, kdtree_build, kfn_search, knn_search, make_kernel

__all__ = ["REGISTRY", "build_registry"]


def _in(name, type_tag, doc, required=False, default=None):
    return ParamSpec(name, "input", type_tag, required, default, doc)


def _out(name, type_tag, doc):
    return ParamSpec(name, "output", type_tag, doc=doc)


def _labels_vector(values, what="labels"):
    arr = np.asarray(values)
    if arr.size and not np.all(arr == np.floor(arr)):
        raise ValidationError(f"{what} must be integers")
    return arr.astype(np.int64)


def _run_linear_regression(p):
    model = p.get("input_model")
    if model is None:
        if "input" not in p or "responses" not in p:
            raise ValidationError(
                "provide --input with --responses to train, or --input_model"
            )
        model = linreg_train(p["input"], p["responses"], p["lambda"])
    out = {"output_model": model}
    if "test" in p:
        out["predictions"] = linreg_predict(model, p["test"])
    return out


def _run_logistic_regression(p):
    model = p.get("input_model")
    if model is None:
        if "input" not in p or "labels" not in p:
            raise ValidationError(
                "provide --input with --labels to train, or --input_model"
            )
        ds = LabeledDataset(p["input"], _labels_vector(p["labels"]))
        model, _ = logreg_train(
            ds, p["lambda"], step=p["step"], max_iters=p["max_iterations"],
            tol=p["tolerance"], decision_threshold=p["threshold"],
        )
    out = {"output_model": model}
    if "test" in p:
        labels, prob = logreg_classify(model, p["test"])
        out["predictions"] = labels.astype(np.float64)
        out["probabilities"] = prob
    return out


def _run_kmeans(p):
    model = p.get("input_model")
    if model is not None:
        if "input" not in p:
            raise ValidationError("provide --input to assign with a model")
        assignments, inertia = kmeans_assign(model, p["input"])
        return {
            "output_model": model,
            "centroids": model.centroids,
            "assignments": assignments.astype(np.float64),
            "inertia": inertia,
            "iterations": 0,
        }
    if "input" not in p or "clusters" not in p:
        raise ValidationError(
            "provide --input with --clusters to cluster, or --input_model"
        )
    variant = p["variant"]
    if variant not in ("lloyd", "hamerly"):
        raise ValidationError(
            f"variant must be 'lloyd' or 'hamerly', got {variant!r}"
        )
    X = p["input"]
    init = kmeanspp_init(X, p["clusters"], SeededRng(p["seed"]))
    solver = kmeans_lloyd if variant == "lloyd" else kmeans_hamerly
    result = solver(X, init, p["max_iterations"], p["tolerance"])
    return {
        "output_model": KMeansModel(result.centroids),
        "centroids": result.centroids,
        "assignments": result.assignments.astype(np.float64),
        "inertia": result.inertia,
        "iterations": result.iterations,
    }


def _neighbor_runner(search):
    def run(p):
        tree = kdtree_build(p["reference"], p["leaf_size"])
        queries = p.get("query", p["reference"])
        idx, dist = search(tree, queries, p["k"])
        return {
            "neighbors": idx.astype(np.float64),
            "distances": dist,
        }
    return run


def _run_kde(p):
    reference = p["reference"]
    tree = kdtree_build(reference, p["leaf_size"])
    queries = p.get("query", reference)
    kernel = make_kernel(p["kernel"], p["bandwidth"], reference.shape[1])
    densities = kde(tree, queries, kernel, p["rel_tol"])
    return {"densities": densities}


def _run_ffn(p):
    model = p.get("input_model")
    if model is None:
        if "input" not in p or "labels" not in p:
            raise ValidationError(
                "provide --input with --labels to train, or --input_model"
            )
        ds = LabeledDataset(p["input"], _labels_vector(p["labels"]))
        if ds.num_classes < 2:
            raise ValidationError("need at least two classes to train")
        arch = ffn_create(ds.features.shape[1], [p["hidden_width"]],
                          ds.num_classes)
        model, _ = ffn_train(
            arch, ds, SeededRng(p["seed"]), step0=p["step"],
            batch=p["batch"], epochs=p["epochs"], decay=p["decay"],
        )
    out = {"output_model": model}
    if "test" in p:
        out["predictions"] = ffn_classify(model, p["test"]).astype(np.float64)
    return out


def build_registry():
    """Fresh registry holding the seven shipped methods, already frozen."""
    reg = Registry()

    reg.register(MethodSpec(
        "linear_regression",
        "Ordinary least squares / ridge regression.",
        "Trains on --input/--responses (solving the regularized normal "
        "equations) or loads --input_model, then predicts --test rows.",
        (
            _in("input", "matrix", "Training features, one row per example."),
            _in("responses", "double_vector",
                "Training responses, one per row."),
            _in("lambda", "double", "Ridge penalty (intercept exempt).",
                default=0.0),
            _in("test", "matrix", "Rows to predict."),
            _in("input_model", "model:linear_regression",
                "Previously trained model."),
            _out("output_model", "model:linear_regression",
                 "Trained (or passed-through) model."),
            _out("predictions", "double_vector",
                 "Predicted responses for --test."),
        ),
        _run_linear_regression,
    ))

    reg.register(MethodSpec(
        "logistic_regression",
        "Binary logistic regression with L2 regularization.",
        "Trains with backtracking gradient descent from zero weights "
        "(deterministic) or loads --input_model; classifies --test rows "
        "into {0, 1} with their class-1 probabilities.",
        (
            _in("input", "matrix", "Training features, one row per example."),
            _in("labels", "double_vector", "Training labels in {0, 1}."),
            _in("lambda", "double", "L2 penalty (intercept exempt).",
                default=0.0),
            _in("threshold", "double",
                "Probability above which class 1 is predicted.",
                default=0.5),
            _in("step", "double", "Initial gradient-descent step.",
                default=1.0),
            _in("max_iterations", "int", "Iteration cap.", default=200),
            _in("tolerance", "double", "Relative loss-change stop.",
                default=1e-9),
            _in("test", "matrix", "Rows to classify."),
            _in("input_model", "model:logistic_regression",
                "Previously trained model."),
            _out("output_model", "model:logistic_regression",
                 "Trained (or passed-through) model."),
            _out("predictions", "double_vector",
                 "Predicted labels for --test."),
            _out("probabilities", "double_vector",
                 "Class-1 probabilities for --test."),
        ),
        _run_logistic_regression,
    ))

    reg.register(MethodSpec(
        "kmeans",
        "k-means clustering (Lloyd or Hamerly's exact acceleration).",
        "Seeds with k-means++ from --seed and clusters --input into "
        "--clusters groups; both variants return identical results. "
        "With --input_model, assigns --input rows to the saved centroids "
        "instead.",
        (
            _in("input", "matrix", "Points to cluster or assign."),
            _in("clusters", "int", "Number of clusters."),
            _in("variant", "string",
                "Algorithm variant, one of {lloyd, hamerly}.",
                default="lloyd"),
            _in("max_iterations", "int", "Iteration cap.", default=100),
            _in("tolerance", "double",
                "Stop when no centroid moves farther than this.",
                default=1e-6),
            _in("seed", "int", "Seeding RNG seed.", default=0),
            _in("input_model", "model:kmeans", "Previously saved centroids."),
            _out("output_model", "model:kmeans", "Final centroids."),
            _out("centroids", "matrix", "Final centroids, one per row."),
            _out("assignments", "double_vector",
                 "Cluster index of each --input row."),
            _out("inertia", "double",
                 "Sum of squared point-to-centroid distances."),
            _out("iterations", "int", "Iterations performed."),
        ),
        _run_kmeans,
    ))

    reg.register(MethodSpec(
        "knn",
        "Exact k-nearest-neighbor search via a kd-tree.",
        "Finds the k nearest reference rows for every query row "
        "(queries default to the reference set itself, self-matches "
        "included).  Results are exact: branch-and-bound pruning never "
        "skips a true neighbor.",
        (
            _in("reference", "matrix", "Reference points.", required=True),
            _in("query", "matrix", "Query points (default: reference)."),
            _in("k", "int", "Neighbors per query.", required=True),
            _in("leaf_size", "int", "kd-tree leaf size.", default=20),
            _out("neighbors", "matrix",
                 "Reference row indices, ascending distance."),
            _out("distances", "matrix", "Matching Euclidean distances."),
        ),
        _neighbor_runner(knn_search),
    ))

    reg.register(MethodSpec(
        "kfn",
        "Exact k-furthest-neighbor search via a kd-tree.",
        "Finds the k furthest reference rows for every query row "
        "(queries default to the reference set itself).  Pruning uses "
        "bounding-box maximum distances and is exact.",
        (
            _in("reference", "matrix", "Reference points.", required=True),
            _in("query", "matrix", "Query points (default: reference)."),
            _in("k", "int", "Neighbors per query.", required=True),
            _in("leaf_size", "int", "kd-tree leaf size.", default=20),
            _out("neighbors", "matrix",
                 "Reference row indices, descending distance."),
            _out("distances", "matrix", "Matching Euclidean distances."),
        ),
        _neighbor_runner(kfn_search),
    ))

    reg.register(MethodSpec(
        "kde",
        "Kernel density estimation with a guaranteed relative error.",
        "Estimates the density at each query point from the reference "
        "sample using a kd-tree traversal; every estimate is within "
        "--rel_tol of the exact kernel sum (0 evaluates exactly).",
        (
            _in("reference", "matrix", "Sample points.", required=True),
            _in("query", "matrix", "Evaluation points (default: reference)."),
            _in("kernel", "string",
                "Kernel, one of {gaussian, epanechnikov}.",
                default="gaussian"),
            _in("bandwidth", "double", "Kernel bandwidth h > 0.",
                default=1.0),
            _in("rel_tol", "double", "Relative error guarantee.",
                default=0.05),
            _in("leaf_size", "int", "kd-tree leaf size.", default=20),
            _out("densities", "double_vector",
                 "Estimated density per query row."),
        ),
        _run_kde,
    ))

    reg.register(MethodSpec(
        "ffn",
        "Small feedforward network classifier.",
        "Trains a Linear-ReLU-Linear-LogSoftmax network with SGD "
        "(deterministic under --seed) or loads --input_model; predicts "
        "class labels for --test rows.",
        (
            _in("input", "matrix", "Training features, one row per example."),
            _in("labels", "double_vector",
                "Training labels 0..C-1 (C inferred)."),
            _in("hidden_width", "int", "Hidden layer width.", default=8),
            _in("epochs", "int", "Training epochs.", default=200),
            _in("batch", "int", "Mini-batch size.", default=32),
            _in("step", "double", "Initial SGD step.", default=0.5),
            _in("decay", "double", "Step decay rate (step0/(1+t*decay)).",
                default=0.0),
            _in("seed", "int", "Initialization/shuffling seed.", default=0),
            _in("test", "matrix", "Rows to classify."),
            _in("input_model", "model:ffn", "Previously trained model."),
            _out("output_model", "model:ffn",
                 "Trained (or passed-through) model."),
            _out("predictions", "double_vector",
                 "Predicted class labels for --test."),
        ),
        _run_ffn,
    ))

    reg.freeze()
    return reg


REGISTRY = build_registry()
