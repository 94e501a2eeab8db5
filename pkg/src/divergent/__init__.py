"""Exact, executable constructions around families of sequences diverging to infinity."""

from .errors import CapabilityError, MonotonicityError, OracleContractError, VerificationError
from .exact import (
    INF,
    NEG_INF,
    Interval,
    OpenSet,
    OpenUnion,
    affine_image,
    format_rational,
    geometric_set,
    interval,
    member,
    normalize,
    open_region_from_json,
    periodic_set,
    power_set,
    rational,
    segment_inside,
)
from .omega import (
    OmegaFunction,
    constant,
    diagonal_dominator,
    formula,
    le_star_verdict,
    linear,
    monotone_envelope,
    poly,
    prefix_function,
)
from .sequences import (
    ArithmeticSequence,
    DivergingSequence,
    LogSequence,
    SequenceFamily,
    TranslatedSequence,
    Wave,
    WaveSequence,
    condition_c_probe,
    coverage_functional,
    covers,
    make_generator,
    terms_in,
    theorem2_sequence,
)
from .adversary import adversarial_open_set, avoiding_base, separation_profile

__version__ = "0.1.0"
