"""degsyn: joint state-feedback synthesis and actuator-degradation budgeting.

For an open-loop-stable LTI plant, compute a full-state-feedback gain
together with the maximum actuator degradation (minimum bandwidth,
minimum DC authority, maximum additive noise) compatible with a given
H2 or H-infinity closed-loop performance bound, then verify the result
with independent norm computations and simulate the gust response.
"""

__version__ = "0.1.0"

from .degradation import (
    DegradationParams,
    DegradationReport,
    FaultSignalBounds,
    actuator_channel_gain,
    degradation_report,
    filter_dynamics,
)
from .errors import (
    DegsynError,
    DivergenceError,
    InvalidDegradationError,
    InvalidInputError,
    PreconditionViolationError,
    SingularResolventError,
    UnstableSystemError,
)
from .lti import (
    AugmentedClosedLoop,
    NormReport,
    StateSpace,
    assemble_closed_loop,
    frequency_response,
    h2_norm,
    h2_norm_frequency_integral,
    hinf_norm,
    hinf_norm_grid,
    is_hurwitz,
)
from .sim import (
    DisturbanceSpec,
    ResponseMetrics,
    Trajectory,
    generate_disturbance,
    response_metrics,
    simulate,
    zoh_discretize,
)
from .synthesis import (
    LmiProblem,
    SynthesisResult,
    SynthesisSpec,
    ValidationReport,
    build_h2_lmi,
    build_hinf_lmi,
    build_lmi,
    solve,
    synthesize,
    validate,
)

__all__ = [
    "__version__",
    "AugmentedClosedLoop",
    "DegradationParams",
    "DegradationReport",
    "DegsynError",
    "DisturbanceSpec",
    "DivergenceError",
    "FaultSignalBounds",
    "InvalidDegradationError",
    "InvalidInputError",
    "LmiProblem",
    "NormReport",
    "PreconditionViolationError",
    "ResponseMetrics",
    "SingularResolventError",
    "StateSpace",
    "SynthesisResult",
    "SynthesisSpec",
    "Trajectory",
    "UnstableSystemError",
    "ValidationReport",
    "actuator_channel_gain",
    "assemble_closed_loop",
    "build_h2_lmi",
    "build_hinf_lmi",
    "build_lmi",
    "degradation_report",
    "filter_dynamics",
    "frequency_response",
    "generate_disturbance",
    "h2_norm",
    "h2_norm_frequency_integral",
    "hinf_norm",
    "hinf_norm_grid",
    "is_hurwitz",
    "response_metrics",
    "simulate",
    "solve",
    "synthesize",
    "validate",
    "zoh_discretize",
]
