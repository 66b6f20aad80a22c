"""Weighted eigenvalue sums of symmetric matrices and operators, and numerical
checks of their Schur convexity (sublinearity, convexity, lower semicontinuity).
"""

from .campaign import VerificationReport
from .estimators import SpectrumTransformer, WeightedEigenvalueSum
from .gallery import (
    OperatorSpec,
    analytic_spectrum,
    build_dirichlet_schrodinger,
    build_periodic_schrodinger,
    build_sturm_liouville,
    merge_double_spectrum,
    solution_spectrum,
    synthetic_unbounded_spectrum,
)
from .majorization import (
    SymmetricFunctionSpec,
    complete_symmetric,
    in_descending_cone,
    in_dual_cone,
    isotone_pair_check,
    merkle_divided_difference,
    schur_criterion_check,
)
from .matrixcore import (
    Spectrum,
    StiefelFrame,
    SymmetricMatrix,
    TridiagonalMatrix,
    eigh,
    eigh_tridiagonal,
    random_orthogonal,
    random_symmetric,
    sum_top_k,
    trace_quadratic,
)
from .spectralfun import (
    SpectrumGenerator,
    TwoSidedSpectrum,
    WeightSequence,
    arrange_two_sided,
    convergence_check,
    psi,
    psi_truncated,
    truncation_error_bound,
)

__version__ = "0.1.0"
