"""Exact normal forms, normal elements and isomorphism certificates for
quantum affine spaces, homogenized quantized Weyl algebras and quantum
matrix algebras."""

from .iso import (
    GeneratorMap,
    IsoCertificate,
    build_witness,
    decide_hweyl,
    decide_isomorphism,
    decide_qas,
    decide_qma,
    obstruction_report,
    solve_scalar_map,
    verify_homomorphism,
    verify_isomorphism,
)
from .normal import (
    falsify_completeness,
    find_normal_degree_one,
    is_normal_degree_one,
    iterative_chain,
    quotient_by_degree_one,
)
from .presentation import (
    ParamMatrix,
    Presentation,
    PresentationError,
    make_homogenized_weyl,
    make_quantum_affine,
    make_quantum_matrix,
    presentation_from_spec,
    presentation_to_spec,
    validate_presentation,
)
from .rewrite import (
    NCPoly,
    check_confluence,
    growth_exponent,
    hilbert_dims,
    multiply,
    normal_form,
)
from .scalar import format_rational, parse_rational

__version__ = "0.1.0"
