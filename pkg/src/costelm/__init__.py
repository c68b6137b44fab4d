"""Evolutionary cost-sensitive extreme learning machines and discriminant subspaces."""

from .bsa import BsaConfig, optimize
from .cost_elm import EcselmConfig, ecselm_fit, predict_ecselm, train_cselm
from .elm import ElmModel, KernelSpec, decide, predict_scores, train_elm, train_kernel_elm
from .errors import CostElmError
from .numerics import Rng
from .subspace import EcsldaConfig, ecslda_fit

__version__ = "0.1.0"

__all__ = [
    "BsaConfig",
    "CostElmError",
    "EcselmConfig",
    "EcsldaConfig",
    "ElmModel",
    "KernelSpec",
    "Rng",
    "decide",
    "ecselm_fit",
    "ecslda_fit",
    "optimize",
    "predict_ecselm",
    "predict_scores",
    "train_cselm",
    "train_elm",
    "train_kernel_elm",
]
