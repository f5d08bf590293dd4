"""XP stabilizer check-matrix algebra and quantum lego construction."""

from .xp_algebra import XpOperator, antisymmetric, conjugate, inverse, multiply, power, tensor
from .code_structure import (
    CodewordTable,
    EmptyCodeError,
    NonRegularError,
    OrbitDecomposition,
    PrecisionError,
    XpGroup,
    canonical_form,
    codewords,
    complete_lid,
    counting_check,
    diagonal_logical_operators,
    logical_x_operators,
    orbit_decomposition,
    r_z_generators,
    z_support,
)
from .dense_oracle import projector, render_operator, stabilizes, xp_state_from_dense
from .lego import (
    Lego,
    conjoin,
    materialize_logical,
    redesignate,
    run_network,
    self_trace,
    shorten_to_logical,
    state_lego,
    tensor_product,
    trace_with_insertion,
)
from .enumerator import EnumeratorPoly, biased_distance, coset_scalars, distance, enumerators
from .decoder import (
    Channel,
    DecodeResult,
    Syndrome,
    amplitude_damping,
    depolarizing,
    extract_syndrome,
    ml_decode,
    monte_carlo,
    pauli_process_coeffs,
    representative_errors,
)
from .registry import CodeRegistryEntry, lookup, registry

__all__ = [
    "Channel",
    "CodeRegistryEntry",
    "CodewordTable",
    "DecodeResult",
    "EmptyCodeError",
    "EnumeratorPoly",
    "Lego",
    "NonRegularError",
    "OrbitDecomposition",
    "PrecisionError",
    "Syndrome",
    "XpGroup",
    "XpOperator",
    "amplitude_damping",
    "antisymmetric",
    "biased_distance",
    "canonical_form",
    "codewords",
    "complete_lid",
    "conjoin",
    "conjugate",
    "coset_scalars",
    "counting_check",
    "depolarizing",
    "diagonal_logical_operators",
    "distance",
    "enumerators",
    "extract_syndrome",
    "inverse",
    "logical_x_operators",
    "lookup",
    "materialize_logical",
    "ml_decode",
    "monte_carlo",
    "multiply",
    "orbit_decomposition",
    "pauli_process_coeffs",
    "power",
    "projector",
    "r_z_generators",
    "redesignate",
    "registry",
    "render_operator",
    "representative_errors",
    "run_network",
    "self_trace",
    "shorten_to_logical",
    "stabilizes",
    "state_lego",
    "tensor",
    "tensor_product",
    "trace_with_insertion",
    "xp_state_from_dense",
    "z_support",
]

__version__ = "0.1.0"
