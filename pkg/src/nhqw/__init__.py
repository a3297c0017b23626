"""Simulation of history-dependent discrete-time quantum walks.

Plain coined walk, site-history walk, memory-ricochet and UOB-scattering
neighbourhood-history walks on a cyclic 1-D lattice, plus the four-qubit-cell
QCA whose single-particle sector carries the UOB walk.
"""
from .analysis import (
    ProbabilityTable,
    memory_occupation,
    position_marginal,
    total_variation,
    trajectory_table,
    velocity_marginal,
)
from .errors import (
    RangeError,
    SeamCrossingError,
    SectorLeakageError,
    SizeLimitError,
    ValidationError,
)
from .hilbert import (
    BasisLabel,
    LatticeConfig,
    QcaState,
    WalkState,
    apply_factor_permutation,
    apply_factor_unitary,
    decode_basis,
    encode_basis,
    inner_product,
    norm,
)
from .presets import PRESETS, get_preset
from .walks import (
    MrNhqwParams,
    QwParams,
    ShqwParams,
    StepOperator,
    UobNhqwParams,
    evolve,
    initial_state,
    mr_step,
    qw_step,
    shqw_step,
    uob_step,
)

__version__ = "0.1.0"
