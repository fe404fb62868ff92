"""Python bindings for the lculab simulator."""

from ._lculab import (
    LculabError,
    __version__,
    combine,
    decompose_bins,
    estimate_angle,
    estimator_samples,
    fidelity,
    frac_power_iterate,
    grover_iterations,
    inner,
    normalize,
    overlap_magnitude,
    overlap_signed,
    prepare,
    quantize_phase,
    rotation_generator,
    run_cli,
    search,
    sign_shift,
    swap_test_prob,
    v1_success,
    v2_success,
)

__all__ = [
    "LculabError",
    "__version__",
    "combine",
    "decompose_bins",
    "estimate_angle",
    "estimator_samples",
    "fidelity",
    "frac_power_iterate",
    "grover_iterations",
    "inner",
    "normalize",
    "overlap_magnitude",
    "overlap_signed",
    "prepare",
    "quantize_phase",
    "rotation_generator",
    "run_cli",
    "search",
    "sign_shift",
    "swap_test_prob",
    "v1_success",
    "v2_success",
]
