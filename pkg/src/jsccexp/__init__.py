"""Expurgated (and baseline random-coding) error exponents for joint
source-channel coding of a discrete memoryless source over a discrete
memoryless channel, under single-class i.i.d. random coding and two-class
source-partitioned coding."""

from .envelope import (
    ExponentCurve,
    GridTooCoarseWarning,
    HullResult,
    NonFiniteInput,
    SupResult,
    golden_section_max,
    grid_supremum,
    sup_objective,
    upper_concave_envelope,
)
from .kernel import (
    BhattacharyyaMatrix,
    EmptySet,
    bhattacharyya_matrix,
    cross_exponent,
    cross_growth_rate,
    expurgated_exponent,
    finite_pair_mass,
    gallager_e0,
    min_cross_exponent,
    set_growth_rate,
    set_max_exponent,
    set_max_exponent_curve,
    set_max_exponent_grid,
    source_exponent,
    source_exponent_grid,
)
from .partition import (
    AlphabetMismatch,
    DegenerateSlope,
    EnumerationBudgetExceeded,
    PartitionSpec,
    TypeClassRecord,
    affine_source_bound,
    class_source_bound,
    class_source_exponent_exact,
    classify_sequence,
    dump_type_records_csv,
    enumerate_type_records,
    equalizing_gamma,
    two_class_error_bound,
)
from .problems import (
    ChannelSpec,
    DimensionMismatch,
    DistributionSet,
    InputDistribution,
    NonPositiveRate,
    NonStochasticRow,
    ProblemSpec,
    RhoGrid,
    SourceSpec,
    ValidationError,
    check_distribution,
    validate_problem,
)
from .solver import (
    ExponentReport,
    SingleClassResult,
    SolverConfig,
    TwoClassResult,
    baseline_random_coding,
    max_over_q,
    single_class_exponent,
    single_class_fixed_q,
    two_class_exponent_fixed_pair,
    two_class_exponent_optimal,
    uniform_input,
)

__version__ = "0.1.0"
