"""Coherent, one-time and compatible information of small quantum systems."""

__version__ = "0.1.0"

from .bloch import BlochAngles, BlochGrid, bloch_state  # noqa: E402
from .channels import (  # noqa: E402
    KrausChannel,
    LambdaParams,
    apply,
    apply_with_reference,
    coherent_information,
    coherent_information_clamped,
    depolarizing_channel,
    identity_channel,
    joint_from_channel,
    lambda_channel,
    one_time_coherent,
    one_time_mutual,
    two_level_channel,
    unitary_channel,
)
from .experiment import (  # noqa: E402
    ExperimentScheme,
    Psm,
    RateResult,
    experiment_distribution,
    experiment_information,
    lambda_rate_optimum,
    optimize_controls,
)
from .linalg import partial_trace, tensor, von_neumann_entropy  # noqa: E402
from .measurement import (  # noqa: E402
    JointDistribution,
    Povm,
    mutual_information,
    nonselected_information,
    orientation_average_experiment,
    orientation_kernel,
    selected_information,
    shannon_mutual,
)
from .states import (  # noqa: E402
    epsilon_operator,
    mixed_family,
    overlap_information,
    pure_family,
)

__all__ = [
    "BlochAngles", "BlochGrid", "ExperimentScheme", "JointDistribution", "KrausChannel",
    "LambdaParams", "Povm", "Psm", "RateResult", "apply", "apply_with_reference", "bloch_state",
    "coherent_information", "coherent_information_clamped", "depolarizing_channel",
    "epsilon_operator", "experiment_distribution", "experiment_information", "identity_channel",
    "joint_from_channel", "lambda_channel", "lambda_rate_optimum", "mixed_family",
    "mutual_information", "nonselected_information", "one_time_coherent", "one_time_mutual",
    "optimize_controls", "orientation_average_experiment", "orientation_kernel",
    "overlap_information", "partial_trace", "pure_family", "selected_information",
    "shannon_mutual", "tensor", "two_level_channel", "unitary_channel", "von_neumann_entropy",
]
