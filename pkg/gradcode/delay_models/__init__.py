from .comparison import SchemeComparison, pairwise_straggler_count, scheme1_vs_scheme2
from .models import DelayModel, Scaling, WorkerLoadProfile, load_delay_model
from .order_stats import (
    approximate_order_statistic,
    expected_iteration_delay,
    expected_order_statistic,
    expected_profile_delay,
    harmonic_number,
    harmonic_number_exact,
    monte_carlo_iteration_delay,
    sample_completion,
)

__all__ = [
    "SchemeComparison",
    "pairwise_straggler_count",
    "scheme1_vs_scheme2",
    "DelayModel",
    "Scaling",
    "WorkerLoadProfile",
    "load_delay_model",
    "approximate_order_statistic",
    "expected_iteration_delay",
    "expected_order_statistic",
    "expected_profile_delay",
    "harmonic_number",
    "harmonic_number_exact",
    "monte_carlo_iteration_delay",
    "sample_completion",
]
