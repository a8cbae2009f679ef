"""Mixed-state fidelity, optimal purifications and channel witnesses."""
from .channels import (
    KrausChannel,
    StinespringDilation,
    apply,
    apply_dilation,
    choi,
    compose,
    kraus_from_dilation,
    random_channel,
    stinespring_dilate,
    validate_kraus,
)
from .corollary import (
    CorollaryWitness,
    construct_witness,
    monotonicity_check,
    monotonicity_via_witness,
    overlap_upper_bound_check,
    two_pair_unitary,
    verify_witness,
)
from .metrics import (
    UhlmannResult,
    VariationalTrace,
    classical_fidelity,
    fidelity,
    pure_overlap,
    random_purification_sweep,
    test_pass_probability,
    uhlmann_optimal_purifications,
    uhlmann_variational,
)
from .states import (
    DensityMatrix,
    PureState,
    Purification,
    random_density,
    random_pure,
    random_unitary,
    reduce,
    standard_purification,
    validate_density,
)

__version__ = "0.1.0"
