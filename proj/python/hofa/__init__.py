"""Higher-order Fourier analysis over F_p^n and a distance tester for affine-invariant properties."""

from ._hofa import (
    Function,
    HofaError,
    __version__,
    check_suite,
    distance_tester,
    gowers_estimate,
    gowers_norm,
    l1_distance,
    mu_estimate,
    mu_exact,
    property_distance,
    rm_distance,
    run_cli,
    set_threads,
    stat_distance,
    verify_degree,
)

__all__ = [
    "Function",
    "HofaError",
    "__version__",
    "check_suite",
    "distance_tester",
    "gowers_estimate",
    "gowers_norm",
    "l1_distance",
    "mu_estimate",
    "mu_exact",
    "property_distance",
    "rm_distance",
    "run_cli",
    "set_threads",
    "stat_distance",
    "verify_degree",
]
