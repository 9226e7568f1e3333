"""Finite-difference calculus of arithmetic and geometric means, and tools to
detect and induce opposite-signed comparisons under the log-transform."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    MeanSummary,
    SampleVector,
    TransformMode,
    TransformOptions,
    arith_mean,
    base_sensitivity,
    concat,
    geom_mean,
    inter_mean_distance,
    log_transform,
    multiset_difference,
    summarize,
    validate,
)
from .finite_diff import (  # noqa: E402
    Concat,
    Delete,
    DiffResult,
    Replace,
    condition_check,
    diff_arith,
    diff_geom,
    diff_id,
    oracle_diff,
)
from .paradox import (  # noqa: E402
    Selector,
    d_score,
    d_surface,
    gradient_product_sweep,
    insert_step,
    optimal_target,
    paradox_verdict,
    replace_step,
)
from .resampling import BootstrapConfig, Statistic, bootstrap, mwu_test, replacement_sweep  # noqa: E402
from .generators import (  # noqa: E402
    gen_exponential,
    gen_symmetric_tails,
    kmer_experiment,
    markov_model,
    sample_cells,
)
