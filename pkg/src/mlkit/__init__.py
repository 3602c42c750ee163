"""mlkit: a small machine-learning toolkit behind one binding registry.

Algorithms (linear/logistic regression, exact accelerated k-means,
kd-tree kNN/kFN/KDE, a small feedforward net) are described once in a
declarative method registry that drives the CLI, a flat foreign-call
boundary, and generated foreign wrappers; trained models round-trip
through one portable file format regardless of surface.
"""

__version__ = "0.1.0"

from . import errors
from ._kernels import NUMBA_ENABLED, backend
from .bindings import (
    MethodSpec,
    ParamPack,
    ParamSpec,
    Registry,
    generate_help,
    run_method,
)
from .clustering import (
    KMeansModel,
    KMeansResult,
    kmeans_assign,
    kmeans_hamerly,
    kmeans_lloyd,
    kmeanspp_init,
)
from .core import (
    LabeledDataset,
    SeededRng,
    load_csv,
    save_csv,
    train_test_split,
)
from .linear_models import (
    LinearRegressionModel,
    LogisticRegressionModel,
    linreg_predict,
    linreg_train,
    logreg_classify,
    logreg_objective,
    logreg_train,
)
from .methods import REGISTRY
from .model_io import load_model, model_from_bytes, model_to_bytes, save_model
from .neural import (
    FFNModel,
    ffn_classify,
    ffn_create,
    ffn_forward,
    ffn_loss_grad,
    ffn_train,
)
from .optimize import (
    OptimizationReport,
    check_gradient,
    gradient_descent,
    sgd,
)
from .trees import (
    EpanechnikovKernel,
    GaussianKernel,
    KdTree,
    kde,
    kdtree_build,
    kfn_search,
    knn_search,
    make_kernel,
)
