"""Rank prediction for architecture search from small samples.

Encoded architectures feed a pool of gradient-boosted tree regressors
trained on logit-transformed rank labels; their out-of-fold predictions
are stacked by a Bayesian linear meta-learner.
"""
from ._backend import BACKEND
from .encoding import (
    FeatureMatrix,
    FeatureVector,
    RawArchitecture,
    SearchSpaceSchema,
    drop_constant_columns,
    encode_architectures,
    encode_onehot,
    encode_ordinal,
    format_architecture,
    parse_architecture,
    select_columns,
)
from .gbm import GBMConfig, GBMModel, RegressionTree, fit_tree, gbm_fit, gbm_predict, negative_gradient, submodel_pool
from .gpnas import GPNASModel, GPNASPrior, posterior_update, predict_mean, predict_variance, prior_from_data
from .metrics import kendall_tau, kendall_tau_b, multi_rmse, per_task_report
from .rank_transform import latent_to_rank, latent_to_score_paper, rank_to_latent
from .stacking import FoldSpec, StackEnsemble, fit_stack, make_folds, oof_predictions, predict_ranks, stack_predict
from .synthetic import SyntheticTask, TaskGenerator, gen_task, sample_architectures

__version__ = "0.1.0"
