"""Weighted Bergman and Hardy kernels, jet-constrained minima and minimal L^2 integrals
on disks, annuli and their products."""
from .geometry import Annulus, Disk, ProductDomain
from .jets import BoxIdeal, JetTarget, MaximalIdeal, MultiplierIdeal
from .kernels import (
    KernelReport,
    Resolution,
    bergman_kernel_at,
    bergman_min_at,
    hardy_dM_kernel_at,
    hardy_dM_min_at,
    hardy_S_kernel_at,
    hardy_S_min_at,
)
from .minimal_l2 import MinL2Setup, closed_form_G, concavity_report, g_curve, g_of_t
from .weights import (
    Affine,
    Constant,
    Exponential,
    GaussianBump,
    HarmonicLogPower,
    LogAbsPoly,
    WeightSpec,
    Zero,
    tuned_log_power,
)

__version__ = "0.1.0"
