"""Sum and product Schur triples: exact search, constructions, counting,
and Monte Carlo threshold experiments."""

from .core import (
    Colouring,
    ExperimentRecord,
    IntegerSubset,
    Interval,
    ResourceGuardError,
    SolverOutcome,
    TripleSystem,
    has_mono_triple,
    triple_satisfied,
)
from .solver import (
    SearchConfig,
    SearchInconclusive,
    exists_good_colouring,
    is_k_schur,
    max_non_schur_subset,
    schur_bounds,
    schur_number,
)
from .constructions import (
    KNOWN_DOUBLE_SUM_SCHUR,
    KNOWN_SCHUR,
    PerturbationParams,
    alpha_for_rate,
    divisor_interval_rate,
    eleven_interval_colouring,
    erdos_ford_delta,
    integer_nth_root,
    log_partition_boundaries,
    max_non_schur_size_bounds,
    mod5_colouring,
    perturbed_blocker_set,
    product_free_colouring,
    threshold_exponent_offset,
    verify_colouring_free,
)
from .counting import (
    TableCountEstimate,
    TripleCount,
    count_monochromatic,
    count_product_triples,
    divisor_count_table,
    divisors_in_interval_indicator,
    enumerate_product_triples,
    factorisation_pairs,
    max_divisor_count,
    min_monochromatic_bruteforce,
    multiplication_table_count,
    supersaturation_count,
)
from .randomlab import (
    ProbabilityRule,
    SweepPlan,
    contains_product_triple,
    degree_structure,
    derive_seed,
    perturbed_sweep,
    perturbed_trial,
    product_set_count,
    sample_random_subset,
    threshold_sweep,
    two_copy_split,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
