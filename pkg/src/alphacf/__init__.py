"""Exact and statistical tools for the one-parameter family of continued
fraction maps T(x) = |1/x| - floor(|1/x| + 1 - alpha) on [alpha-1, alpha].

The package is organized bottom-up:

- ``exact``: rational/quadratic-surd arithmetic, 2x2 integer matrices acting
  projectively, the invariant measure of a rectangle.
- ``words``: digit words over the signed alphabet, characteristic sequences,
  the alternating order, the hat involution, synchronization interval data,
  the folding operation and its limit points.
- ``dynamics``: orbits, expansions, digit rewriting, and the synchronization
  decision procedure for exact parameters.
- ``natext``: the planar natural-extension domain, certified measure
  brackets, and entropy bounds.
- ``simulate``: Monte-Carlo entropy estimation (compiled kernel with a
  numpy fallback).
- ``cli``: the ``alphacf`` command-line entry point.
"""

from .errors import (
    AlphaCFError,
    AlphabetError,
    BudgetExceeded,
    CycleLimit,
    DegenerateOrbit,
    DomainError,
    IterationLimit,
    MixedFieldError,
    NotInF,
    PoleError,
    RuleError,
    TruncationWarning,
    ZeroDigit,
)
from .exact import (
    ExactNumber,
    Mobius,
    Rect,
    Surd,
    as_exact,
    decimal_str,
    exact_abs,
    exact_floor,
    format_exact,
    letter_matrices,
    make_surd,
    mobius_apply,
    mu_invariance_check,
    mu_rect,
    parse_exact,
    to_mpf,
)
from .words import (
    CharSeq,
    Letter,
    SyncWordData,
    TauResult,
    Word,
    alt_compare,
    alt_compare_periodic,
    apply_W,
    apply_shift,
    bracket,
    char_seq,
    format_word,
    hat,
    interval_data,
    is_in_F,
    letter,
    parse_word,
    tau,
    theta,
    word_from_char_seq,
)
from .dynamics import (
    DigitStep,
    SyncResult,
    by_excess_expansion,
    char_of_number,
    char_to_rcf,
    digit,
    expansion_stream,
    fiber_boundaries,
    orbit,
    rcf_expansion,
    rcf_rewrite,
    sync_result_json,
    synchronize,
)
from .natext import (
    DomainApprox,
    IntervalSet,
    LanguageAutomaton,
    MeasureBracket,
    OmegaPiece,
    WordSum,
    build_automaton,
    domain_csv,
    domain_svg,
    fiber_at,
    measure_bracket,
    measure_json,
    mu_along_interval,
    natext_step,
    omega_decomposition,
    psi_sets,
    word_sum_measure,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaCFError",
    "AlphabetError",
    "BudgetExceeded",
    "CycleLimit",
    "DegenerateOrbit",
    "DomainError",
    "ExactNumber",
    "IterationLimit",
    "MixedFieldError",
    "Mobius",
    "NotInF",
    "PoleError",
    "Rect",
    "RuleError",
    "Surd",
    "TruncationWarning",
    "ZeroDigit",
    "CharSeq",
    "DigitStep",
    "DomainApprox",
    "IntervalSet",
    "LanguageAutomaton",
    "Letter",
    "MeasureBracket",
    "OmegaPiece",
    "SyncResult",
    "SyncWordData",
    "TauResult",
    "Word",
    "WordSum",
    "alt_compare",
    "alt_compare_periodic",
    "apply_W",
    "apply_shift",
    "as_exact",
    "bracket",
    "build_automaton",
    "by_excess_expansion",
    "char_of_number",
    "char_seq",
    "char_to_rcf",
    "decimal_str",
    "digit",
    "domain_csv",
    "domain_svg",
    "exact_abs",
    "exact_floor",
    "expansion_stream",
    "fiber_at",
    "fiber_boundaries",
    "format_exact",
    "format_word",
    "hat",
    "interval_data",
    "is_in_F",
    "letter",
    "letter_matrices",
    "make_surd",
    "measure_bracket",
    "measure_json",
    "mobius_apply",
    "mu_along_interval",
    "mu_invariance_check",
    "mu_rect",
    "natext_step",
    "omega_decomposition",
    "orbit",
    "parse_exact",
    "parse_word",
    "psi_sets",
    "rcf_expansion",
    "rcf_rewrite",
    "sync_result_json",
    "synchronize",
    "tau",
    "theta",
    "word_from_char_seq",
    "word_sum_measure",
    "__version__",
]
