"""Square roots of H-nonnegative matrices in indefinite inner product spaces.

The package reduces a pair (B, H) to canonical block data, decides which
kinds of square roots exist (plain, H-selfadjoint, H-nonnegative),
constructs explicit roots from parametric templates, predicts their Jordan
forms, and classifies the stability of H-nonnegative roots.
"""

from .canonical import (
    CanonicalBlock,
    CanonicalPair,
    Transform,
    canonicalize,
    is_H_nonnegative,
    is_H_selfadjoint,
    jordan_matrix,
    scramble,
    sip_matrix,
    synthesize,
    tri_split,
)
from .linalg import DEFAULT_TOL, Tolerance, hermitian_spectrum, kernel_basis, rank
from .pairing import (
    GENERAL,
    HNN,
    HSA,
    MODES,
    SegreCharacteristic,
    SegrePair,
    SegrePairing,
    admissible_for_mode,
    enumerate_pairings,
    has_square_root,
    segre_characteristic,
    weyr_to_segre,
)
from .roots import (
    P10,
    P11,
    P11Hsa,
    P11Upper,
    P21,
    P21Hsa,
    P22,
    P22Alt,
    PredictedBlock,
    RootPlan,
    RootSignChoice,
    assemble_root,
    build_plan,
    existence,
    params_norm,
    predicted_jordan_form,
    root_block,
    root_block_structured,
    sample_params,
    target_block,
)
from .stability import (
    CONDITIONAL,
    UNCONDITIONAL,
    UNSTABLE,
    ProbeReport,
    StabilityVerdict,
    best_stability,
    classify_root,
    instability_witness,
    perturbation_probe,
)
from .verify import (
    JordanData,
    brute_force_pairing_exists,
    check_square,
    jordan_structure,
    weyr_sequence,
)

__version__ = "0.1.0"
