"""Exact engine for vanishing Fourier coefficients of Dedekind eta powers."""

from .bounds import (
    chain_count_lower_bound,
    cs_bound_check,
    lacunarity_density,
    ono_bound_check,
)
from .engine import (
    DEFAULT_BASKET,
    ScanJob,
    ScanReport,
    ZeroRecord,
    certify_zero,
    coefficient_bound,
    nonvanishing_sweep,
    scan_zeros,
)
from .halfint import dseries_from_eta, eigen_check, hecke_tp2, kronecker
from .maeda import cusp_basis, delta_sq_equivalence, hecke_matrix
from .series import (
    EXACT,
    CoeffSeries,
    EtaAlgorithm,
    ExactInt,
    ModPrime,
    eta_power,
    euler_series,
    jacobi_series,
    multiply,
    sigma1_table,
)
from .sources import census, chain_indices, classify_zeros, discriminant

__version__ = "0.1.0"

__all__ = [
    "EXACT",
    "CoeffSeries",
    "DEFAULT_BASKET",
    "EtaAlgorithm",
    "ExactInt",
    "ModPrime",
    "ScanJob",
    "ScanReport",
    "ZeroRecord",
    "census",
    "certify_zero",
    "chain_count_lower_bound",
    "chain_indices",
    "classify_zeros",
    "coefficient_bound",
    "cs_bound_check",
    "cusp_basis",
    "delta_sq_equivalence",
    "discriminant",
    "dseries_from_eta",
    "eigen_check",
    "eta_power",
    "euler_series",
    "hecke_matrix",
    "hecke_tp2",
    "jacobi_series",
    "kronecker",
    "lacunarity_density",
    "multiply",
    "nonvanishing_sweep",
    "ono_bound_check",
    "scan_zeros",
    "sigma1_table",
    "__version__",
]
