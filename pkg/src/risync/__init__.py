"""Phase design for distributed reflecting surfaces with per-surface
fractional timing offsets.

The package models an oversampled downlink in which every reflecting surface
re-radiates with its own sub-symbol timing offset, and designs the surface
phases together with a linear equalizer to minimize the block MSE against a
zero-ISI target.  See README.md for the layout and the command-line tools.
"""

from .baselines import naive_sync_equalizer, perfect_sync_alignment, random_phases
from .channel import (
    ChannelRealization,
    draw_los_channel,
    draw_multipath_channel,
    draw_timing_offsets,
    ura_steering,
)
from .errors import (
    ConfigError,
    ConstraintError,
    DimensionError,
    NumericError,
    ParameterError,
    RisyncError,
)
from .harness import (
    SweepResult,
    SweepRow,
    SweepSettings,
    TrialRecord,
    emit_csv,
    emit_gnuplot_script,
    load_config,
    mix_seed,
    read_csv,
    run_trial,
    sweep_k,
    sweep_snr,
    validate,
)
from .mm import (
    OptimizationResult,
    PhaseSolution,
    equalizer_for,
    linearization_filter,
    linearized_bound,
    majorizer_coefficient,
    mse_full,
    mse_reduction,
    optimal_equalizer,
    optimize_phases,
    phase_update_matrix,
    quadratic_majorizer,
    quantize_phases,
    surrogate_value,
    update_phases,
)
from .pulse import (
    PulseModel,
    autocorrelation,
    build_target_response,
    build_window_matrix,
    rrc_amplitude,
    rrc_sample,
)
from .sysmodel import (
    ModelMatrices,
    SystemConfig,
    assemble_delay_blocks,
    build_delay_matrix,
    build_model,
    cascade_gains,
    cascade_rows,
    draw_symbols,
    effective_channel,
    expand_phases,
    model_from_config,
    mse_no_equalizer,
    simulate_received,
)

__version__ = "0.1.0"
