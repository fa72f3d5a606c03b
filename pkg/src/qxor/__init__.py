"""Quantum XOR games as executable objects.

Build game matrices, evaluate strategy biases in the tensor and commuting
models, apply the dilation/symmetrization transforms between strategy
classes, and certify lower bounds on the entanglement bias by see-saw
optimization.
"""

__version__ = "0.1.0"

from .dilation import (
    EmbeddingWitness,
    corner_pattern,
    embed_self_adjoint,
    extract_from_embedding,
    extract_from_embedding_commuting,
    extract_from_embedding_tensor,
    halmos_dilation,
    observable_dilation_commuting,
    observable_dilation_tensor,
    symmetrize_strategy,
)
from .errors import (
    CommutationError,
    NumericalError,
    ParseError,
    PatternError,
    QxorError,
    ShapeError,
    ValidationError,
)
from .game import (
    Outcome,
    OutcomeSpec,
    QuantumXorGame,
    chsh_game,
    game_from_classical_xor,
    game_from_dict,
    game_from_outcomes,
    game_to_dict,
    load_game,
    save_game,
    validate_game,
)
from .linalg import (
    DEFAULT_TOL,
    TensorLayout,
    canonical_shuffle,
    haar_unitary,
    hermitian_sqrt,
    is_unitary,
    operator_norm,
    partial_trace_game,
    polar_factor,
    trace_norm,
)
from .optimize import (
    LadderEntry,
    OptTrace,
    SeesawConfig,
    SeesawResult,
    assemble_update_matrix,
    dimension_ladder,
    seesaw,
    update_player,
    update_state,
    write_trace_csv,
)
from .strategy import (
    CommutingStrategy,
    Correlation,
    TensorStrategy,
    adjoint_strategy,
    bias_direct,
    bias_trace,
    check_commuting,
    convex_combine,
    correlation_commuting,
    correlation_of,
    correlation_tensor,
    is_observable_strategy,
    load_strategy,
    phase_adjust,
    random_commuting_strategy,
    random_tensor_strategy,
    save_strategy,
    scale_by_phase,
    strategy_from_dict,
    strategy_to_dict,
    success_probability,
)

__all__ = [
    "CommutationError",
    "CommutingStrategy",
    "Correlation",
    "DEFAULT_TOL",
    "EmbeddingWitness",
    "LadderEntry",
    "NumericalError",
    "OptTrace",
    "Outcome",
    "OutcomeSpec",
    "ParseError",
    "PatternError",
    "QuantumXorGame",
    "QxorError",
    "SeesawConfig",
    "SeesawResult",
    "ShapeError",
    "TensorLayout",
    "TensorStrategy",
    "ValidationError",
    "adjoint_strategy",
    "assemble_update_matrix",
    "bias_direct",
    "bias_trace",
    "canonical_shuffle",
    "check_commuting",
    "chsh_game",
    "convex_combine",
    "corner_pattern",
    "correlation_commuting",
    "correlation_of",
    "correlation_tensor",
    "dimension_ladder",
    "embed_self_adjoint",
    "extract_from_embedding",
    "extract_from_embedding_commuting",
    "extract_from_embedding_tensor",
    "game_from_classical_xor",
    "game_from_dict",
    "game_from_outcomes",
    "game_to_dict",
    "haar_unitary",
    "halmos_dilation",
    "hermitian_sqrt",
    "is_observable_strategy",
    "is_unitary",
    "load_game",
    "load_strategy",
    "observable_dilation_commuting",
    "observable_dilation_tensor",
    "operator_norm",
    "partial_trace_game",
    "phase_adjust",
    "polar_factor",
    "random_commuting_strategy",
    "random_tensor_strategy",
    "save_game",
    "save_strategy",
    "scale_by_phase",
    "seesaw",
    "strategy_from_dict",
    "strategy_to_dict",
    "success_probability",
    "symmetrize_strategy",
    "trace_norm",
    "update_player",
    "update_state",
    "validate_game",
    "write_trace_csv",
]
