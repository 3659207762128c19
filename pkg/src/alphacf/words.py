"""Word calculus for signed continued-fraction digits.

Letters are pairs (eps:d) with eps = +-1; words are tuples of letters.
This module knows nothing about orbits or measures: it handles the purely
combinatorial layer (characteristic sequences, the hat operator, the
alternating order, the synchronizing family F) together with the exact
interval data (zeta_v, eta_v, chi_v) attached to each word in F via
Moebius fixed points.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterator, Literal, NamedTuple, Sequence

import mpmath

from .errors import (
    AlphabetError,
    DomainError,
    IterationLimit,
    NotInF,
    PoleError,
)
from .exact import (
    ExactNumber,
    INVPHI,
    Mobius,
    letter_matrices,
    to_mpf,
)

__all__ = [
    "Letter",
    "Word",
    "CharSeq",
    "Ordering",
    "SyncWordData",
    "TauResult",
    "letter",
    "letter_key",
    "parse_word",
    "format_word",
    "is_negative_word",
    "word_matrix",
    "dual_word_matrix",
    "bracket",
    "char_seq",
    "word_from_char_seq",
    "char_length",
    "dual_char_length",
    "periodic_char_seq",
    "shift_periodic",
    "hat",
    "apply_W",
    "apply_shift",
    "alt_compare",
    "alt_compare_periodic",
    "is_in_F",
    "interval_data",
    "theta",
    "tau",
    "sturmian_prefix",
]


class Letter(NamedTuple):
    """One expansion digit: a sign eps and a depth d (math.inf allowed)."""

    eps: int
    d: int | float

    def __str__(self) -> str:
        dtxt = "inf" if self.d == math.inf else str(self.d)
        return f"({self.eps:+d}:{dtxt})"


Word = tuple[Letter, ...]
CharSeq = tuple[int | float, ...]
Ordering = Literal["less", "equal", "greater", "incomparable"]


def letter(eps: int, d) -> Letter:
    """Validated letter constructor for the full alphabet A_0."""
    if eps not in (1, -1):
        raise AlphabetError(f"sign must be +1 or -1, got {eps!r}")
    if d == math.inf:
        if eps != 1:
            raise AlphabetError("the infinite digit carries sign +1")
        return Letter(1, math.inf)
    if not isinstance(d, int):
        raise AlphabetError(f"digit must be an integer or math.inf, got {d!r}")
    if eps == -1 and d < 2:
        raise AlphabetError(f"negative letters need d >= 2, got d={d}")
    if eps == 1 and d < 1:
        raise AlphabetError(f"positive letters need d >= 1, got d={d}")
    return Letter(eps, d)


def is_negative_word(v: Sequence[Letter]) -> bool:
    """True when every letter is (-1:d) with finite d."""
    return all(a.eps == -1 and a.d != math.inf for a in v)


def letter_key(a: Letter) -> Fraction:
    """Sort key realizing the letter order: (eps:d) maps to eps/d."""
    if a.d == math.inf:
        return Fraction(0)
    return Fraction(a.eps, a.d)


def _require_negative(v: Sequence[Letter]) -> None:
    for a in v:
        if a.eps != -1 or a.d == math.inf:
            raise AlphabetError(f"letter {a} is not of the form (-1:d)")


_LETTER_RE = re.compile(
    r"\(\s*([+-]\d+)\s*:\s*(\d+|inf|∞)\s*\)\s*(?:\^\s*(-?\d+))?\s*"
)


def parse_word(text: str) -> Word:
    """Parse a word literal like "(-1:2)(-1:3)^2" or "(+1:inf)"."""
    s = text.strip()
    letters: list[Letter] = []
    pos = 0
    while pos < len(s):
        m = _LETTER_RE.match(s, pos)
        if m is None:
            raise DomainError(f"cannot parse word literal near {s[pos:pos + 12]!r}")
        eps = int(m.group(1))
        dtxt = m.group(2)
        d = math.inf if dtxt in ("inf", "∞") else int(dtxt)
        rep = 1
        if m.group(3) is not None:
            rep = int(m.group(3))
            if rep < 1:
                raise DomainError(f"repetition count must be positive, got {rep}")
        letters.extend([letter(eps, d)] * rep)
        pos = m.end()
    return tuple(letters)


def format_word(v: Sequence[Letter], compress: bool = False) -> str:
    """Render a word as a literal; with compress=True runs become "^k"."""
    if not compress:
        return "".join(str(a) for a in v)
    parts: list[str] = []
    i = 0
    while i < len(v):
        j = i
        while j < len(v) and v[j] == v[i]:
            j += 1
        parts.append(str(v[i]) + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return "".join(parts)


def word_matrix(v: Sequence[Letter]) -> Mobius:
    """Product matrix M_v, first letter applied first (innermost)."""
    m = Mobius.identity()
    for a in v:
        m = letter_matrices(a.eps, a.d)[0] @ m
    return m


def dual_word_matrix(v: Sequence[Letter]) -> Mobius:
    """Product of the dual (transpose-inverse) matrices in the same order."""
    m = Mobius.identity()
    for a in v:
        m = letter_matrices(a.eps, a.d)[1] @ m
    return m


def bracket(v: Sequence[Letter], tail=Fraction(0)) -> ExactNumber:
    """Value eps1/(d1 + eps2/(d2 + ... + epsn/(dn + tail))) of a word.

    A final (+1:inf) letter terminates the expansion (contributes 0).
    """
    val: ExactNumber = Fraction(tail) if isinstance(tail, int) else tail
    for a in reversed(v):
        if a.d == math.inf:
            val = Fraction(0)
            continue
        try:
            den = val + a.d
            if isinstance(den, Fraction):
                val = Fraction(a.eps) / den
            else:
                val = den.reciprocal() * a.eps
        except ZeroDivisionError:
            raise PoleError(f"zero denominator while evaluating {format_word(v)}")
    return val


# -- characteristic sequences -------------------------------------------------

def char_seq(v: Sequence[Letter]) -> tuple[int, ...]:
    """Characteristic sequence a_1 ... a_{2l+1} of a word over {(-1:d)}.

    Runs of (-1:2) of length r contribute an odd-position entry r+1; each
    letter (-1:k) with k >= 3 contributes the even-position entry k-2.
    """
    _require_negative(v)
    entries: list[int] = []
    run = 0
    for a in v:
        if a.d == 2:
            run += 1
        else:
            entries.append(run + 1)
            entries.append(a.d - 2)
            run = 0
    entries.append(run + 1)
    return tuple(entries)


def word_from_char_seq(entries: Sequence[int]) -> Word:
    """Inverse of char_seq: rebuild the word from its characteristic sequence."""
    if len(entries) % 2 == 0:
        raise DomainError("characteristic sequences have odd length")
    letters: list[Letter] = []
    for i, a in enumerate(entries):
        if not isinstance(a, int) or a < 1:
            raise DomainError(f"characteristic entries are integers >= 1, got {a!r}")
        if i % 2 == 0:
            letters.extend([Letter(-1, 2)] * (a - 1))
        else:
            letters.append(Letter(-1, 2 + a))
    return tuple(letters)


def char_length(entries: Sequence[int | float]) -> int:
    """Length of the word with this characteristic sequence."""
    return sum(entries[0::2]) - 1


def dual_char_length(entries: Sequence[int | float]) -> int:
    """Length of the hat of the word with this characteristic sequence."""
    return sum(entries[1::2]) + 1


def periodic_char_seq(prefix: Sequence[Letter], period: Sequence[Letter]) -> tuple[CharSeq, CharSeq]:
    """Characteristic sequence of prefix . period^omega over {(-1:d)}.

    Returns (head, per) so the sequence is head followed by per repeated.
    A period consisting only of (-1:2) yields the all-infinity tail: the
    head stops at the last letter different from (-1:2) and per = (inf,).
    """
    _require_negative(prefix)
    _require_negative(period)
    if not period:
        raise DomainError("period must be a nonempty word")
    pre = tuple(prefix)
    per = tuple(period)
    if all(a.d == 2 for a in per):
        u = list(pre)
        while u and u[-1].d == 2:
            u.pop()
        if not u:
            return (), (math.inf,)
        head = char_seq(u)
        return head[:-1], (math.inf,)
    last = max(i for i, a in enumerate(per) if a.d != 2)
    pre2 = pre + per[: last + 1]
    per2 = per[last + 1 :] + per[: last + 1]
    head = char_seq(pre2 + per2)[:-1]
    block = char_seq(per2)[:-1]
    return head, block


def shift_periodic(head: CharSeq, per: CharSeq, k: int) -> tuple[CharSeq, CharSeq]:
    """Drop the first k entries of an eventually periodic sequence."""
    if k < 0:
        raise DomainError("shift must be nonnegative")
    if k <= len(head):
        return tuple(head[k:]), tuple(per)
    r = (k - len(head)) % len(per)
    return (), tuple(per[r:]) + tuple(per[:r])


# -- hat and the two elementary word operators --------------------------------

def hat(v: Sequence[Letter]) -> Word:
    """Swap the run/letter roles of the characteristic sequence.

    char(hat(v)) equals (1,) + char(v) + (1,).
    """
    return word_from_char_seq((1,) + char_seq(v) + (1,))


def apply_W(v: Sequence[Letter]) -> Word:
    """Replace the first letter (eps:d) by (-eps:d+eps); (+1:inf) is fixed."""
    if not v:
        raise DomainError("cannot apply the involution to an empty word")
    a = v[0]
    if a.d == math.inf:
        return tuple(v)
    return (letter(-a.eps, a.d + a.eps),) + tuple(v[1:])


def apply_shift(v: Sequence[Letter], s: int) -> Word:
    """Adjust the last letter's depth by s = +-1; (+1:inf) is fixed."""
    if s not in (1, -1):
        raise DomainError(f"shift must be +1 or -1, got {s!r}")
    if not v:
        raise DomainError("cannot shift the last letter of an empty word")
    a = v[-1]
    if a.d == math.inf:
        return tuple(v)
    return tuple(v[:-1]) + (letter(a.eps, a.d + s),)


# -- alternating order ---------------------------------------------------------

def alt_compare(a: Sequence[int | float], b: Sequence[int | float]) -> Ordering:
    """Alternating order: the first differing position j (0-based) decides,
    with smaller entry winning at even j and larger entry winning at odd j.

    Sequences of different length that agree on the common prefix are
    incomparable; equal sequences compare equal.
    """
    for j, (x, y) in enumerate(zip(a, b)):
        if x != y:
            if (x < y) == (j % 2 == 0):
                return "less"
            return "greater"
    if len(a) == len(b):
        return "equal"
    return "incomparable"


def _entry(head: CharSeq, per: CharSeq, i: int):
    if i < len(head):
        return head[i]
    return per[(i - len(head)) % len(per)]


def alt_compare_periodic(
    head1: CharSeq, per1: CharSeq, head2: CharSeq, per2: CharSeq
) -> Ordering:
    """Alternating order on two eventually periodic (infinite) sequences."""
    if not per1 or not per2:
        raise DomainError("periods must be nonempty")
    bound = max(len(head1), len(head2)) + 2 * math.lcm(len(per1), len(per2))
    for j in range(bound):
        x = _entry(head1, per1, j)
        y = _entry(head2, per2, j)
        if x != y:
            if (x < y) == (j % 2 == 0):
                return "less"
            return "greater"
    return "equal"


# -- the synchronizing family F ------------------------------------------------

def is_in_F(v: Sequence[Letter]) -> bool:
    """Membership test on the characteristic sequence a_1 ... a_{2l+1}:
    for every 1 <= j <= l the tail a_{[2j, 2l+1]} must be alt-smaller than
    the prefix of matching length, and a_{[2j+1, 2l+1]} at most alt-equal.
    """
    a = char_seq(v)
    ell = (len(a) - 1) // 2
    n = len(a)
    for j in range(1, ell + 1):
        strict = alt_compare(a[2 * j - 1 : n], a[0 : n - 2 * j + 1])
        if strict != "less":
            return False
        weak = alt_compare(a[2 * j : n], a[0 : n - 2 * j])
        if weak not in ("less", "equal"):
            return False
    return True


class SyncWordData(NamedTuple):
    """Interval data of a word v in F: Gamma_v = (zeta, eta), label chi."""

    v: Word
    vhat: Word
    zeta: ExactNumber
    eta: ExactNumber
    chi: ExactNumber
    len_diff: int


def _root_in(m: Mobius, lo, hi) -> ExactNumber:
    roots = [x for x in m.fixed_points() if lo < x and x < hi]
    if len(roots) != 1:
        raise DomainError(f"expected one fixed point of {m!r} in ({lo}, {hi})")
    return roots[0]


def interval_data(v: Sequence[Letter]) -> SyncWordData:
    """Exact zeta_v, eta_v, chi_v and hat data for a word v in F.

    zeta_v is the fixed point in (0,1) of M applied to the hat word with
    first letter sign-flipped and last depth lowered; eta_v - 1 is the
    fixed point in (-1,0) of M of v with last depth raised.  The empty
    word gets the right-end interval (zeta, 1].
    """
    v = tuple(v)
    if not is_in_F(v):
        raise NotInF(f"{format_word(v) or 'the empty word'} is not in F")
    vh = hat(v)
    vprime = apply_W(apply_shift(vh, -1))
    zeta = _root_in(word_matrix(vprime), Fraction(0), Fraction(1))
    if v:
        eta = _root_in(word_matrix(apply_shift(v, 1)), Fraction(-1), Fraction(0)) + 1
    else:
        eta = Fraction(1)
    chi = bracket(v) + 1
    return SyncWordData(v, vh, zeta, eta, chi, len(vh) - len(v))


def theta(v: Sequence[Letter]) -> Word:
    """Folding map v -> v . hat(v) with the last depth lowered by one."""
    v = tuple(v)
    if not is_in_F(v):
        raise NotInF(f"{format_word(v) or 'the empty word'} is not in F")
    return v + apply_shift(hat(v), -1)


class TauResult(NamedTuple):
    value: mpmath.mpf
    witness: Word
    zeta: ExactNumber


def tau(
    v: Sequence[Letter] = (),
    tol: float = 1e-15,
    max_word_len: int = 10**6,
) -> TauResult:
    """Limit of zeta over repeated folding, to within tol.

    Returns the high-precision value, the folded word that witnessed
    convergence, and its exact zeta.  Convergence is doubly exponential,
    so the witness stays short; max_word_len guards against runaway growth.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    prec = max(128, int(3.4 * -math.log10(tol)) + 64)
    w = tuple(v)
    prev = to_mpf(interval_data(w).zeta, prec)
    while True:
        w = theta(w)
        if len(w) > max_word_len:
            raise IterationLimit(
                f"folded word grew past {max_word_len} letters before reaching tol={tol}"
            )
        data = interval_data(w)
        cur = to_mpf(data.zeta, prec)
        if abs(cur - prev) < tol:
            return TauResult(cur, w, data.zeta)
        prev = cur


def sturmian_prefix(n: int) -> tuple[int, ...]:
    """First n letters of the fixed point of 2 -> 2,1,1 and 1 -> 2."""
    if n < 0:
        raise DomainError("length must be nonnegative")
    s: list[int] = [2]
    while len(s) < n:
        s = [x for a in s for x in ((2, 1, 1) if a == 2 else (2,))]
    return tuple(s[:n])
