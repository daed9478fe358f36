"""copekit: operational theories as column-stochastic block matrices.

The package represents the probabilistic content of a prepare-measure
theory as a COPE matrix (conditional outcome probabilities of events),
realizes five model classes as constrained factorizations of it, and
certifies contextuality through rank separation: a theory is noncontextual
exactly when its matrix admits an equirank nonnegative factorization.
"""

from .backend import Backend, floating, rational
from .certify import (
    CONTEXTUAL,
    NONCONTEXTUAL,
    UNDETERMINED,
    Certificate,
    EnmfModel,
    ExhaustiveAbsence,
    Exists,
    NotExists,
    SpernerSeparation,
    VertexForcing,
    certify,
    exhaustive_enmf_decision,
    vertex_forcing_certificate,
)
from .cope import (
    CopeMatrix,
    EquivalenceClasses,
    FragmentRestriction,
    PreconditionError,
    QuotientReport,
    Violation,
    cope_matrix,
    distinct_columns,
    distinct_rows,
    find_equivalences,
    is_extremal_column,
    is_extremal_row,
    merge_measurements,
    quotient_extremal,
    rank,
    restrict_fragment,
    validate,
)
from .jsonio import (
    ParseError,
    emit_certificate,
    emit_cope,
    emit_model,
    parse_certificate,
    parse_cope,
    parse_model,
)
from .models import (
    ModelFactorization,
    ModelKind,
    VerificationReport,
    classify_model,
    fiducial_tomography_test,
    gpt,
    gpt_to_trivial_ontological,
    pregpt_from_svd,
    quasi_from_gpt,
    trivial_ontological,
)
from .nmf import NmfOptions, enmf, nmf
from .polytope import GuardExceeded, SpanSimplexPolytope, span_simplex_polytope
from .sperner import (
    SpernerWitness,
    sperner_ontic_bound,
    sperner_span_bound,
    sperner_submatrix,
)
from .theories import (
    BlochDirection,
    boxworld,
    cardinal_directions,
    discrete_qubit,
    extended_boxworld,
    generic_directions,
    reference_models,
    spekkens,
)

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "floating",
    "rational",
    "BlochDirection",
    "CONTEXTUAL",
    "Certificate",
    "CopeMatrix",
    "EnmfModel",
    "EquivalenceClasses",
    "ExhaustiveAbsence",
    "Exists",
    "FragmentRestriction",
    "GuardExceeded",
    "ModelFactorization",
    "ModelKind",
    "NONCONTEXTUAL",
    "NmfOptions",
    "NotExists",
    "ParseError",
    "PreconditionError",
    "QuotientReport",
    "SpanSimplexPolytope",
    "SpernerSeparation",
    "SpernerWitness",
    "UNDETERMINED",
    "VerificationReport",
    "VertexForcing",
    "Violation",
    "boxworld",
    "cardinal_directions",
    "certify",
    "classify_model",
    "cope_matrix",
    "discrete_qubit",
    "distinct_columns",
    "distinct_rows",
    "emit_certificate",
    "emit_cope",
    "emit_model",
    "enmf",
    "exhaustive_enmf_decision",
    "extended_boxworld",
    "fiducial_tomography_test",
    "find_equivalences",
    "generic_directions",
    "gpt",
    "gpt_to_trivial_ontological",
    "is_extremal_column",
    "is_extremal_row",
    "merge_measurements",
    "nmf",
    "parse_certificate",
    "parse_cope",
    "parse_model",
    "pregpt_from_svd",
    "quasi_from_gpt",
    "quotient_extremal",
    "rank",
    "reference_models",
    "restrict_fragment",
    "span_simplex_polytope",
    "spekkens",
    "sperner_ontic_bound",
    "sperner_span_bound",
    "sperner_submatrix",
    "trivial_ontological",
    "validate",
    "vertex_forcing_certificate",
]
