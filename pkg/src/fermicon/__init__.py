"""Entanglement measures for pure states of N identical fermions.

Reduced-density-matrix purities, bipartite separability for every cut,
the normalized multipartite concurrence, and its realization as two-copy
observables, with brute-force oracles backing every closed form.
"""

__version__ = "0.1.0"

from .analysis import (
    CampaignReport,
    SensitivityRecord,
    appendix_verify,
    fit_gap_slope,
    inequality_campaign,
    orthogonal_direction,
    sensitivity_sweep,
    slater_equality_check,
)
from .concurrence import (
    BipartitionRecord,
    ConcurrenceReport,
    SlaterRankResult,
    alpha,
    c_ff_purity,
    c_ff_wedge,
    classify_bipartition,
    fghz_state,
    multipartite_concurrence,
    slater_rank_two_fermions,
)
from .errors import (
    AntisymmetryError,
    BoundViolation,
    DegenerateDirection,
    DegenerateShapeError,
    EmptyBlockError,
    FermiconError,
    ModeError,
    NormError,
    RangeError,
    ShapeError,
    ShapeMismatch,
    StateFileError,
    UnitarityError,
)
from .fock import (
    AntisymTensor,
    FermionState,
    FirstQuantizedVector,
    OccupationBasis,
    SystemShape,
    apply_mode_unitary,
    embed_first_quantized,
    enumerate_basis,
    from_antisym_tensor,
    random_mode_unitary,
    random_slater_state,
    random_state,
    slater_state,
    to_antisym_tensor,
)
from .rdm import (
    DensityMatrix,
    DiagonalReport,
    diagonal_via_appendix,
    occupation_to_first_quantized,
    purity,
    purity_direct,
    reduce,
    reduce_first_quantized,
)
from .two_copy import (
    CopyPair,
    DoubledOperator,
    antisym_projector,
    expectation,
    expectation_identical,
    observable_A,
    observable_A_tilde,
    observable_Af,
    observable_Af_prime,
    observable_O_NM,
    swap_operator,
    sym_projector,
)
