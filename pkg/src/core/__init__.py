"""Core module - state containers, symmetry operators, initial data and checkpoints."""

from src.core.errors import (
    BlowUpError,
    ConfigurationError,
    DegenerateDataError,
    DegenerateFitError,
    InputError,
    InvalidStateError,
    NumericalInconsistencyError,
    OutputError,
)
from src.core.initial_data import InitialDataRecipe, RecipeId, make_initial_data
from src.core.protocol import (
    CheckpointHeader,
    HEADER_TOTAL_SIZE,
    create_header,
    parse_header,
    read_checkpoint,
    write_checkpoint,
)
from src.core.state import (
    PeState,
    SnsState,
    barotropic_project,
    barotropic_residual,
    check_pe_state,
    check_sns_state,
    diagnostic_w,
    divergence_3d,
    divergence_H,
    make_admissible,
    parity_deviation,
    parity_project,
    sns_initial_state,
    solenoidal_project,
)

__all__ = [
    'BlowUpError',
    'CheckpointHeader',
    'ConfigurationError',
    'DegenerateDataError',
    'DegenerateFitError',
    'HEADER_TOTAL_SIZE',
    'InitialDataRecipe',
    'InputError',
    'InvalidStateError',
    'NumericalInconsistencyError',
    'OutputError',
    'PeState',
    'RecipeId',
    'SnsState',
    'barotropic_project',
    'barotropic_residual',
    'check_pe_state',
    'check_sns_state',
    'create_header',
    'diagnostic_w',
    'divergence_3d',
    'divergence_H',
    'make_admissible',
    'make_initial_data',
    'parity_deviation',
    'parity_project',
    'parse_header',
    'read_checkpoint',
    'sns_initial_state',
    'solenoidal_project',
    'write_checkpoint',
]
