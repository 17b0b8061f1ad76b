"""Disturbance-rejection analysis of grids with grid-following and grid-forming inverters."""

from .gridstrength import Partition, gscr, lemma1_check, lemma2_check, modified_laplacian, schur_complement
from .inverters import (
    AdmittanceModel,
    FilterParams,
    GflParams,
    GfmParams,
    Kind,
    build_gfl_model,
    build_gfm_model,
    estimate_beq,
    eval_admittance,
    eval_network_factor,
    eval_network_factor_inverse,
    load_params,
    passive_branch,
)
from .netgraph import GroundedLaplacian, NetworkSpec, grounded_laplacian, kron_reduce, load_network
from .sensitivity import GridSpec, SibsConfig, SweepResult, SystemAssignment, modal_kappa, sibs_sweep, sweep

__version__ = "0.1.0"

__all__ = [
    "AdmittanceModel", "FilterParams", "GflParams", "GfmParams", "GridSpec", "GroundedLaplacian", "Kind",
    "NetworkSpec", "Partition", "SibsConfig", "SweepResult", "SystemAssignment", "build_gfl_model",
    "build_gfm_model", "estimate_beq", "eval_admittance", "eval_network_factor", "eval_network_factor_inverse",
    "grounded_laplacian", "gscr", "kron_reduce", "lemma1_check", "lemma2_check", "load_network", "load_params",
    "modal_kappa", "modified_laplacian", "passive_branch", "schur_complement", "sibs_sweep", "sweep",
]
