"""QuasiNet-style networks: trainable product layers with quasi-exponentiation
weighting, stacked with tanh summation layers and trained by hand-derived
backpropagation."""

from .experiments import (
    Dataset,
    RunRecord,
    SpiralParams,
    TrainConfig,
    convergence_check,
    make_parity,
    make_spirals,
    make_xor,
    run_batch,
    run_spirals,
    run_trial,
)
from .gradcheck import GradCheckReport, check_network, numeric_grad
from .layers import ProductLayer, TanhSumLayer, partial_product, quasi_pow
from .network import LayerSpec, Network, NetworkSpec, predict_correct
from .numerics import RngState, gaussian, logistic, matvec

__all__ = [
    "Dataset",
    "GradCheckReport",
    "LayerSpec",
    "Network",
    "NetworkSpec",
    "ProductLayer",
    "RngState",
    "RunRecord",
    "SpiralParams",
    "TanhSumLayer",
    "TrainConfig",
    "check_network",
    "convergence_check",
    "gaussian",
    "logistic",
    "make_parity",
    "make_spirals",
    "make_xor",
    "matvec",
    "numeric_grad",
    "partial_product",
    "predict_correct",
    "quasi_pow",
    "run_batch",
    "run_spirals",
    "run_trial",
]

__version__ = "0.1.0"
