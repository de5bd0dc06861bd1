"""Renyi entropy of order alpha over error-control families.

Classical entropy (minimum over acceptable partitions), weighted entropy over
divisions of a measure, entropy bounds for mixtures of sources, and entropy
dimension estimates.
"""

from .bounds import (
    BoundReport,
    mixture_lower_bound,
    mixture_upper_bound,
    shannon_limit_check,
    shannon_mixture_bounds,
    verify_mixture_bounds,
)
from .core import (
    AlphaOrder,
    g_alpha,
    g_alpha_inv,
    partition_entropy,
    renyi_of_masses,
    shannon_partition_entropy,
)
from .dimension import (
    DeltaLadder,
    DimensionEstimate,
    IfsSpec,
    cantor_measure,
    entropy_at_scale,
    estimate_dimension,
    generate_ifs_measure,
    mixture_dimension_check,
    uniform_dyadic,
)
from .division import (
    Division,
    MajorizationInstance,
    division_from_partition,
    hlp_partition_from_division,
    hlp_sequences,
    majorization_check,
    validate_division,
    weighted_entropy,
)
from .errors import BudgetError, ContractError, EstimationError, InputError, RenyiError
from .families import (
    CellFamily,
    Partition,
    ball_family,
    grid_family,
    is_mu_partition,
    refines,
)
from .measure import Atom, AtomSpace, DiscreteMeasure, MixtureSpec, mix, restrict
from .search import (
    SearchResult,
    classical_entropy,
    classical_entropy_exact,
    classical_entropy_greedy,
    sample_random_divisions,
)
