from .binning import Binning, equal_frequency_edges
from .boosting import GBMConfig, GBMModel, gbm_fit, gbm_predict, negative_gradient
from .pool import BASE_MEMBERS, DEFAULT_MEMBERS, PRESETS, submodel_pool
from .tree import RegressionTree, fit_tree

__all__ = [
    "Binning",
    "equal_frequency_edges",
    "GBMConfig",
    "GBMModel",
    "gbm_fit",
    "gbm_predict",
    "negative_gradient",
    "BASE_MEMBERS",
    "DEFAULT_MEMBERS",
    "PRESETS",
    "submodel_pool",
    "RegressionTree",
    "fit_tree",
]
