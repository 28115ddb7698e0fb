"""Belief-weighted kernel SVMs for phoneme recognition.

Each training sample gets a confidence degree from its distance to its class
centroid; the degrees scale the kernel in the SVM dual. Binary models are
combined one-vs-one and optionally arranged as a two-level coarse/fine hierarchy.
"""

from .belief import BeliefAssignment, assign_beliefs, class_centroid, euclidean_distance
from .data import LabeledDataset
from .hierarchy import HierarchicalModel, Taxonomy, predict_hierarchical, train_hierarchical
from .kernels import KernelSpec, gram_matrix, kernel_eval
from .metrics import EvalReport, evaluate
from .multiclass import OvoModel, predict_ovo, train_ovo
from .solver import (
    BACKEND,
    BinaryModel,
    SolverConfig,
    decision_value,
    kkt_violation,
    predict_binary,
    train_binary,
)

__version__ = "0.1.0"
