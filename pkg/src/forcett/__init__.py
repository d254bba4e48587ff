"""Type checking and evaluation for dependent type theory with a generic Cohen real."""

from forcett.conditions import (
    EMPTY, Condition, Leaf, Partition, Split, compatible, extend, extends,
    find_partition_witness, is_partition, join, restrict_partition,
)
from forcett.conversion import ConvProblem, ConvResult, conv
from forcett.reduction import (
    CANONICAL, IMPROPER, NEUTRAL, Canonical, FuelExhausted, Improper, Neutral,
    NoStep, PartitionEval, ProperStuck, SplitDepthExceeded, Stepped, WhnfOutcome,
    partition_eval, step, whnf,
)
from forcett.semantics import (
    CannotRefute, ForcingQuery, ForcingResult, GenericInstance, NonBaseClassifier,
    RefutationCertificate, SpotCheckReport, build_generic_instance,
    conservativity_translate, forces_base, refute_sigma, spot_check_pi,
)
from forcett.surface import (
    ParseError, SourceFile, parse_condition, parse_file, parse_term, show, show_judgment,
)
from forcett.syntax import (
    Mode, ModeViolation, Term, as_numeral, dne_to_mp, dne_type, exists_zero, mp_type, numeral,
    witness_type,
)
from forcett.typecheck import (
    Certificate, Diagnostic, Judgment, TypeCheckError, check, check_judgment,
    check_type, infer,
)

__all__ = [name for name in dir() if not name.startswith("_")]
