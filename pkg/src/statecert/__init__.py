"""Certification of quantum states given as density matrices, L2 kernels
or Wigner functions, with an independent spectral oracle."""

__version__ = "0.1.0"

from .criteria import (
    ACCEPT,
    INCONCLUSIVE,
    REJECT,
    CriterionReport,
    StateVerdict,
    run_all,
)
from .estimators import DensityMatrixCertifier, WignerCertifier
from .kernel import KernelOperator, kernel_to_matrix
from .linalg import ConvergenceReport, ToleranceConfig
from .phase_space import (
    OrthogonalMixture,
    PhaseGrid,
    WignerGrid,
    build_tatarskij,
    fock_wigner,
    mixture_criteria,
    moyal_star,
    run_phase_criteria,
)
from .spectral import Spectrum, eigh, psd_oracle

__all__ = [
    "ACCEPT",
    "INCONCLUSIVE",
    "REJECT",
    "ConvergenceReport",
    "CriterionReport",
    "DensityMatrixCertifier",
    "KernelOperator",
    "OrthogonalMixture",
    "PhaseGrid",
    "Spectrum",
    "StateVerdict",
    "ToleranceConfig",
    "WignerCertifier",
    "WignerGrid",
    "build_tatarskij",
    "eigh",
    "fock_wigner",
    "kernel_to_matrix",
    "mixture_criteria",
    "moyal_star",
    "psd_oracle",
    "run_all",
    "run_phase_criteria",
]
