"""Exact rational toolkit for Lefschetz modules, canonical splittings of
filtered Lefschetz modules, special-fiber data and Arakelov-type heights."""

from .errors import (
    CenterMismatch,
    ContractError,
    ExactnessViolation,
    HardLefschetzFailure,
    HypothesisViolation,
    IndexViolation,
    LefkitError,
    NonUniqueSolution,
    NotHomologicallyTrivial,
    OrthogonalityViolation,
)
from .graded import GradedMap, GradedSpace
from .lefschetz import (
    LefschetzModule,
    check_hard_lefschetz,
    lambda_operator,
    primitive_parts,
)
from .pairing import (
    GradedPairing,
    block_form_check,
    check_adjoint,
    find_polarization_twist,
    hodge_equivalence_check,
    hodge_index_check,
    induced_graded_pairings,
)
from .ratlinalg import RatMatrix, image_kernel, signature, solve
from .splitting import (
    ExactSequence,
    FilteredLefschetzModule,
    ThreeStepSplitting,
    lambda_equivariant_split,
    three_step_split,
    two_step_lift,
    verify_block_form,
)
from .local import (
    LocalModel,
    SpecialFiberData,
    arakelov_lift,
    bb_lift,
    conjecture_report,
    harmonic_split,
    is_admissible,
    local_height,
    vanishing_nearby,
)
from .arakelov import (
    ArakelovData,
    decompose,
    divisor_decomposition,
    gs_beilinson_equivalence,
    l_lift,
    l_pairing,
    local_index_check,
    zero_cycle_decomposition,
)

__version__ = "0.1.0"
