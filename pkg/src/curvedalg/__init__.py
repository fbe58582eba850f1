"""curvedalg - exact computations with curved algebras, curved coalgebras and the bar-cobar adjunction."""

import logging

from .adjoint import (
    AdjunctionWitness,
    TwistingCochain,
    adjoint_bwd,
    adjoint_fwd,
    check_naturality_in_A,
    check_naturality_in_C,
    check_system_equivalence,
    coalg_to_tw,
    counit_witness,
    split_equations_alg,
    split_equations_coalg,
    to_twisting_cochain,
    tw_to_alg,
    tw_to_coalg,
    validate_twisting_cochain,
    validate_twisting_cochain_dg,
)
from .barcobar import BarResult, CobarResult, bar_morphism, bar_object, cobar_morphism, cobar_object
from .config import Settings
from .curved import (
    AlgMorphism,
    CACoalgebra,
    CoalgMorphism,
    CurvedAInfAlgebra,
    CurvedAInfCoalgebra,
    UCCAlgebra,
    b_from_m,
    delta_from_xi,
    m_from_b,
    validate_alg_morphism,
    validate_ca_coalgebra,
    validate_cainf_algebra,
    validate_cainf_coalgebra,
    validate_coalg_morphism,
    validate_ucc_algebra,
    xi_from_delta,
)
from .generators import (
    curvature_example,
    curvature_line_coalgebra,
    dual_coalgebra,
    gen_random_ca_coalgebra,
    gen_random_cainf_algebra,
    gen_random_ucc_algebra,
    gen_random_witness,
    square_zero_ainf_algebra,
    square_zero_algebra,
    truncated_polynomial_algebra,
)
from .gmod import GradedMap, GradedModule, koszul_sign_oracle, tensor_map
from .gring import RingDescriptor, RingElement, RingKind
from .report import ValidationReport

__all__ = [
    # Rings and modules
    "RingKind",
    "RingDescriptor",
    "RingElement",
    "GradedModule",
    "GradedMap",
    "tensor_map",
    "koszul_sign_oracle",
    # Structures
    "UCCAlgebra",
    "CACoalgebra",
    "CurvedAInfAlgebra",
    "CurvedAInfCoalgebra",
    "AlgMorphism",
    "CoalgMorphism",
    "b_from_m",
    "m_from_b",
    "xi_from_delta",
    "delta_from_xi",
    # Examples and generators
    "truncated_polynomial_algebra",
    "square_zero_algebra",
    "curvature_example",
    "square_zero_ainf_algebra",
    "curvature_line_coalgebra",
    "dual_coalgebra",
    "gen_random_ucc_algebra",
    "gen_random_ca_coalgebra",
    "gen_random_cainf_algebra",
    "gen_random_witness",
    # Validation
    "ValidationReport",
    "validate_ucc_algebra",
    "validate_ca_coalgebra",
    "validate_cainf_algebra",
    "validate_cainf_coalgebra",
    "validate_alg_morphism",
    "validate_coalg_morphism",
    # Bar and cobar
    "BarResult",
    "CobarResult",
    "bar_object",
    "bar_morphism",
    "cobar_object",
    "cobar_morphism",
    # Adjunction
    "TwistingCochain",
    "AdjunctionWitness",
    "adjoint_fwd",
    "adjoint_bwd",
    "to_twisting_cochain",
    "tw_to_alg",
    "tw_to_coalg",
    "coalg_to_tw",
    "validate_twisting_cochain",
    "validate_twisting_cochain_dg",
    "check_naturality_in_A",
    "check_naturality_in_C",
    "split_equations_alg",
    "split_equations_coalg",
    "check_system_equivalence",
    "counit_witness",
    # Configuration
    "Settings",
]

# Add NullHandler to prevent "No handler found" warnings if the consuming
# application doesn't configure logging.
logging.getLogger(__name__).addHandler(logging.NullHandler())
