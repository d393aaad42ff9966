"""Numerical toolkit for sub-Hardy Hilbert spaces on which multiplication by z
acts as a weighted shift."""

from .core import (
    DiagonalSpace,
    GramSpace,
    WeightSequence,
    as_coeffs,
    beta_from_weights,
    gramspace_from_generator,
    inner_product_beta,
    norm_M,
    weights_from_beta,
)
from .errors import (
    BudgetExceeded,
    HypothesesNotVerified,
    NotInvariant,
    NotRepresentable,
    SubHardyError,
    WanderingDimNotOne,
)
from .hypotheses import (
    check_condition_i,
    check_condition_ii,
    check_hypotheses,
    check_ine1,
    check_shimorin,
)
from .shift import (
    adjoint,
    apply_shift,
    build_operator,
    metric_singular_values,
    operator_power_image,
)
from .structure import (
    check_closedness,
    deflate,
    detect_vanishing_order,
    extract_generator,
    verify_contraction,
    verify_decomposition,
    wandering_subspace,
)

__version__ = "0.1.0"
