"""Exact symbolic kernel for centrally-linearizable linear-quadratic Poisson pencils."""

from .polyalg import ParseError, PolyError, Polynomial, VarTable
from .multivec import (
    Multivector,
    euler_field,
    ham,
    lie_derivative,
    poisson_bracket,
    schouten,
)
from .liepoisson import (
    Chart,
    JacobiError,
    StructureConstants,
    builtin,
    casimir,
    central_extend,
    embed_multivector,
    embed_poly,
    lie_poisson,
    load_structure_constants,
)
from .clpencil import (
    CLData,
    ConventionError,
    NotCLAdmissible,
    assemble_pi2,
    build_cl,
    check_basic,
    rmatrix_cl,
    sklyanin,
    solve_m,
    solve_q,
    tautological,
)
from .chains import (
    ChainState,
    InvolutionMatrix,
    LinearSystem,
    canonical_representative,
    casimir_verify,
    chain_extend,
    involution_matrix,
    pencil_rank_sample,
    proportionality_scalar,
    shift_casimir,
    solve_hamiltonian_equation,
)
from .report import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "CLData",
    "ChainState",
    "Chart",
    "ConventionError",
    "InvolutionMatrix",
    "JacobiError",
    "LinearSystem",
    "Multivector",
    "NotCLAdmissible",
    "ParseError",
    "PolyError",
    "Polynomial",
    "StructureConstants",
    "VarTable",
    "VerificationReport",
    "assemble_pi2",
    "build_cl",
    "builtin",
    "canonical_representative",
    "casimir",
    "casimir_verify",
    "central_extend",
    "chain_extend",
    "check_basic",
    "embed_multivector",
    "embed_poly",
    "euler_field",
    "ham",
    "involution_matrix",
    "lie_derivative",
    "lie_poisson",
    "load_structure_constants",
    "pencil_rank_sample",
    "poisson_bracket",
    "proportionality_scalar",
    "rmatrix_cl",
    "schouten",
    "shift_casimir",
    "sklyanin",
    "solve_hamiltonian_equation",
    "solve_m",
    "solve_q",
    "tautological",
]
