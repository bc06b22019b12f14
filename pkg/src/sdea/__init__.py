"""Stagnation-detection evolutionary algorithms on pseudo-boolean benchmarks.

Bit-string engines (static, stagnation-detecting, two-rate self-adjusting
and heavy-tailed (1+1)/(1+lambda) EAs), the OneMax / LeadingOnes / Jump /
Trap / NeedHighMut benchmark family, a deterministic experiment harness
with CSV output, and numeric checkers for the closed-form waiting-time
bounds that justify the stagnation thresholds.
"""

from .bitstrings import (
    BitString,
    RandomStream,
    hamming_distance,
    mix64,
    power_law_strength,
    random_bitstring,
    standard_bit_mutation,
)
from .engines import (
    EngineState,
    FastEA,
    RunRecord,
    SASDEA,
    SDEA,
    StaticEA,
    ThresholdSpec,
    counter_exceeds_threshold,
    default_lambda,
    fast_ea_step,
    log_threshold,
    make_engine,
    phase_length,
    run_to_termination,
    sasd_ea_step,
    sd_ea_step,
    static_ea_step,
    threshold_value,
)
from .fastpath import fast_run, run_auto
from .harness import (
    AlgorithmSpec,
    CellSummary,
    ExperimentConfig,
    ProblemSpec,
    run_experiment,
    stopping_policy,
    summarize,
    write_records_csv,
    write_summary_csv,
)
from .problems import (
    Jump,
    LeadingOnes,
    NeedHighMut,
    NeedHighMutLayout,
    NoImprovingPoint,
    OneMax,
    Problem,
    Trap,
    gap_bruteforce,
    jump,
    leading_ones,
    make_problem,
    need_high_mut,
    nhm_prefix_value,
    nhm_suffix_value,
    one_max,
    trap,
)
from .theory import (
    EscapeBracket,
    escape_bracket,
    partial_sum_check,
    partial_sum_sweep,
    phase_failure_bound,
)

__version__ = "0.1.0"
