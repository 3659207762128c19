"""Exact arithmetic substrate.

Rationals are plain ``fractions.Fraction``; quadratic surds a + b*sqrt(d) get
their own small field type with exact comparison and floor. 2x2 integer
matrices act projectively on both. The invariant-measure formula for a
rectangle is evaluated in high precision (the only non-exact computation
here, since logarithms are transcendental).

Everything is an immutable value; all functions are pure.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering
from typing import NamedTuple, Union

import mpmath

from .errors import AlphabetError, DomainError, MixedFieldError, PoleError

ExactNumber = Union[Fraction, "Surd"]

# Square factors of radicands are extracted by trial division up to this
# bound only. Correctness of comparisons does not depend on radicands being
# square-free, so a missed large square factor costs nothing but bit length.
_SQUARE_TRIAL_BOUND = 10_000


def _sign(q) -> int:
    return (q > 0) - (q < 0)


def _sign_a_plus_b_sqrt(a: Fraction, b: Fraction, radicand: int) -> int:
    """Exact sign of a + b*sqrt(radicand) for a nonnegative integer radicand."""
    root = math.isqrt(radicand)
    if root * root == radicand:
        return _sign(a + b * root)
    if b == 0:
        return _sign(a)
    if a == 0:
        return _sign(b)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # Exactly one of a, b is negative: decide |a| vs |b|*sqrt(radicand).
    lhs = a * a
    rhs = b * b * radicand
    if lhs == rhs:
        return 0
    return _sign(a) if lhs > rhs else _sign(b)


def _sign_two_roots(a: Fraction, b: Fraction, d: int, c: Fraction, e: int) -> int:
    """Exact sign of a + b*sqrt(d) + c*sqrt(e) with d, e >= 2 non-square."""
    if b == 0:
        return _sign_a_plus_b_sqrt(a, c, e)
    if c == 0:
        return _sign_a_plus_b_sqrt(a, b, d)
    # t := b*sqrt(d) + c*sqrt(e)
    if b > 0 and c > 0:
        t_sign = 1
    elif b < 0 and c < 0:
        t_sign = -1
    else:
        bb, cc = b * b * d, c * c * e
        t_sign = 0 if bb == cc else (_sign(b) if bb > cc else _sign(c))
    if t_sign == 0:
        return _sign(a)
    if a == 0:
        return t_sign
    r = -a  # decide sign(t - r)
    if t_sign > 0 and r <= 0:
        return 1
    if t_sign < 0 and r >= 0:
        return -1
    # t and r share a sign; compare t^2 vs r^2 and flip for the negative branch.
    # t^2 = b^2 d + c^2 e + 2bc*sqrt(d e)
    squared = _sign_a_plus_b_sqrt(b * b * d + c * c * e - r * r, 2 * b * c, d * e)
    return squared if t_sign > 0 else -squared


def _reduce_radicand(d: int) -> tuple[int, int]:
    """Return (d', m) with d = m^2 * d', extracting small square factors."""
    if d <= 0:
        raise DomainError(f"radicand must be positive, got {d}")
    m = 1
    root = math.isqrt(d)
    if root * root == d:
        return 1, root
    p = 2
    while p <= _SQUARE_TRIAL_BOUND and p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            m *= p
        p += 1 if p == 2 else 2
    return d, m


@total_ordering
class Surd:
    """a + b*sqrt(d) with rational a, b (b != 0) and non-square integer d >= 2.

    Construct via :func:`make_surd`, which normalizes b = 0 and square
    radicands down to ``Fraction``. Arithmetic stays within one field;
    mixing distinct radicands raises :class:`MixedFieldError`. Comparison
    and equality work across fields (and against rationals) exactly.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Fraction, b: Fraction, d: int):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *_):
        raise AttributeError("Surd is immutable")

    # -- representation ------------------------------------------------

    def __repr__(self) -> str:
        return f"Surd({self.a!r}, {self.b!r}, {self.d})"

    def __str__(self) -> str:
        return format_exact(self)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def conjugate(self) -> "Surd":
        return Surd(self.a, -self.b, self.d)

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0), self.d
        if isinstance(other, Surd):
            if other.d != self.d:
                raise MixedFieldError(
                    f"cannot combine sqrt({self.d}) with sqrt({other.d}) arithmetically"
                )
            return other.a, other.b, self.d
        return None

    def __add__(self, other):
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        oa, ob, d = parts
        return make_surd(self.a + oa, self.b + ob, d)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        oa, ob, d = parts
        return make_surd(self.a - oa, self.b - ob, d)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        oa, ob, d = parts
        return make_surd(self.a * oa + self.b * ob * d, self.a * ob + self.b * oa, d)

    __rmul__ = __mul__

    def reciprocal(self) -> ExactNumber:
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:  # impossible for b != 0, d non-square; kept as a guard
            raise ZeroDivisionError("zero norm")
        return make_surd(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return make_surd(self.a / other, self.b / other, self.d)
        if isinstance(other, Surd):
            recip = other.reciprocal()
            return self * recip
        return NotImplemented

    def __rtruediv__(self, other):
        recip = self.reciprocal()
        return recip * other if not isinstance(recip, Fraction) else other * recip

    def __abs__(self):
        return -self if self < 0 else self

    # -- comparison ----------------------------------------------------

    def _sign_of_difference(self, other) -> int:
        if isinstance(other, (int, Fraction)):
            return _sign_a_plus_b_sqrt(self.a - other, self.b, self.d)
        if isinstance(other, Surd):
            if other.d == self.d:
                return _sign_a_plus_b_sqrt(self.a - other.a, self.b - other.b, self.d)
            return _sign_two_roots(self.a - other.a, self.b, self.d, -other.b, other.d)
        raise TypeError(f"cannot compare Surd with {type(other).__name__}")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return False  # b != 0 and d non-square make the value irrational
        if isinstance(other, Surd):
            return (
                self.a == other.a
                and _sign(self.b) == _sign(other.b)
                and self.b * self.b * self.d == other.b * other.b * other.d
            )
        return NotImplemented

    def __lt__(self, other):
        try:
            return self._sign_of_difference(other) < 0
        except TypeError:
            return NotImplemented

    def __hash__(self):
        signed = self.b * self.b * self.d
        return hash(("alphacf.Surd", self.a, signed if self.b > 0 else -signed))

    def __floor__(self) -> int:
        # x = (A + B*sqrt(d)) / C with integers A, B, C > 0
        c = self.a.denominator * self.b.denominator // math.gcd(
            self.a.denominator, self.b.denominator
        )
        a_int = self.a.numerator * (c // self.a.denominator)
        b_int = self.b.numerator * (c // self.b.denominator)
        root = math.isqrt(b_int * b_int * self.d)
        low = root if b_int >= 0 else -root - 1
        guess = (a_int + low) // c
        while self._sign_of_difference(guess + 1) >= 0:
            guess += 1
        while self._sign_of_difference(guess) < 0:
            guess -= 1
        return guess


def make_surd(a, b, d: int) -> ExactNumber:
    """Normalized constructor: returns a Fraction when the value is rational."""
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        return a
    d_red, mult = _reduce_radicand(d)
    if d_red == 1:
        return a + b * mult
    return Surd(a, b * mult, d_red)


def exact_floor(x: ExactNumber) -> int:
    if isinstance(x, Surd):
        return x.__floor__()
    return math.floor(x)


def exact_abs(x: ExactNumber) -> ExactNumber:
    return -x if x < 0 else x


def as_exact(x) -> ExactNumber:
    """Coerce int/Fraction/Surd/str to an ExactNumber. Floats are rejected."""
    if isinstance(x, (Fraction, Surd)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_exact(x)
    raise TypeError(
        f"expected an exact number (int, Fraction, Surd or string), got {type(x).__name__}"
    )


# -- high-precision conversion ------------------------------------------


def to_mpf(x: ExactNumber, prec: int = 128) -> mpmath.mpf:
    with mpmath.workprec(prec):
        if isinstance(x, Surd):
            return (
                mpmath.mpf(x.a.numerator) / x.a.denominator
                + mpmath.mpf(x.b.numerator) / x.b.denominator * mpmath.sqrt(x.d)
            )
        x = Fraction(x)
        return mpmath.mpf(x.numerator) / x.denominator


def decimal_str(x: ExactNumber, digits: int = 30) -> str:
    with mpmath.workprec(max(64, int(digits * 3.5))):
        return mpmath.nstr(to_mpf(x, max(64, int(digits * 3.5))), digits, strip_zeros=False)


# -- 2x2 integer Moebius matrices -----------------------------------------


class Mobius:
    """Integer 2x2 matrix acting projectively: x -> (a*x + b) / (c*x + d).

    Determinant is +-1 for all matrices arising here (letter matrices and
    their products), which keeps inverses integral. Matrix equality is exact
    on entries; identities that hold projectively are checked with
    :meth:`eq_up_to_sign`.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *_):
        raise AttributeError("Mobius is immutable")

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1, 0, 0, 1)

    def __repr__(self) -> str:
        return f"Mobius({self.a}, {self.b}, {self.c}, {self.d})"

    def __eq__(self, other):
        if not isinstance(other, Mobius):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def eq_up_to_sign(self, other: "Mobius") -> bool:
        return self == other or self == Mobius(-other.a, -other.b, -other.c, -other.d)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: "Mobius") -> "Mobius":
        if not isinstance(other, Mobius):
            return NotImplemented
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mobius":
        det = self.det()
        if det == 1:
            return Mobius(self.d, -self.b, -self.c, self.a)
        if det == -1:
            return Mobius(-self.d, self.b, self.c, -self.a)
        raise DomainError(f"inverse requires determinant +-1, got {det}")

    def transpose(self) -> "Mobius":
        return Mobius(self.a, self.c, self.b, self.d)

    def transpose_inverse(self) -> "Mobius":
        return self.transpose().inverse()

    def apply(self, x) -> ExactNumber:
        x = as_exact(x)
        den = self.c * x + self.d
        sign = _sign_a_plus_b_sqrt(den.a, den.b, den.d) if isinstance(den, Surd) else _sign(den)
        if sign == 0:
            raise PoleError(f"{self!r} has a pole at x = {x}")
        return (self.a * x + self.b) / den

    def fixed_points(self) -> list[ExactNumber]:
        """Solutions of m.apply(x) = x, i.e. c*x^2 + (d - a)*x - b = 0, ascending."""
        c2, c1, c0 = self.c, self.d - self.a, -self.b
        if c2 == 0:
            if c1 == 0:
                raise DomainError("every point is fixed" if c0 == 0 else "no fixed point")
            return [Fraction(-c0, c1)]
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0:
            return []
        # roots (-c1 +- sqrt(disc)) / (2 c2)
        lo = make_surd(Fraction(-c1, 2 * c2), Fraction(-1, 2 * c2), disc) if disc else Fraction(
            -c1, 2 * c2
        )
        if disc == 0:
            return [lo]
        hi = make_surd(Fraction(-c1, 2 * c2), Fraction(1, 2 * c2), disc)
        return sorted([lo, hi])


def mobius_apply(m: Mobius, x) -> ExactNumber:
    return m.apply(x)


# The order-2 and shift matrices used throughout the word calculus.
W_MATRIX = Mobius(1, 0, -1, -1)
E_MATRIX = Mobius(1, -1, 0, 1)
E_INVERSE = Mobius(1, 1, 0, 1)


def letter_matrices(eps: int, d: int) -> tuple[Mobius, Mobius]:
    """The pair (M, N) for one digit (eps:d).

    M acts on the expanding coordinate (M.apply(x) is one map step on the
    cylinder of this digit) and N = tM^-1 acts on the dual coordinate
    (N.apply(y) = 1/(d + eps*y)).
    """
    if eps not in (1, -1):
        raise AlphabetError(f"sign must be +1 or -1, got {eps}")
    if not isinstance(d, int):
        raise AlphabetError(f"digit must be an integer, got {d!r}")
    if d < 2 and eps == -1 or d < 1:
        raise AlphabetError(f"digit {d} is too small for sign {eps:+d}")
    return Mobius(d, -eps, -1, 0), Mobius(0, -eps, -1, -eps * d)


class Rect(NamedTuple):
    """Axis-aligned rectangle with exact corners, y-side within [0, 1]."""

    x1: ExactNumber
    x2: ExactNumber
    y1: ExactNumber
    y2: ExactNumber

    def mu(self, prec: int = 128) -> mpmath.mpf:
        return mu_rect(self.x1, self.x2, self.y1, self.y2, prec)

    def is_empty(self) -> bool:
        return not (self.x1 < self.x2 and self.y1 < self.y2)


# -- rectangle measure -----------------------------------------------------


def mu_rect(x1, x2, y1, y2, prec: int = 128) -> mpmath.mpf:
    """Invariant measure of [x1, x2] x [y1, y2] under dx dy / (1 + x y)^2.

    Equals log((1 + x1 y1)(1 + x2 y2)) - log((1 + x1 y2)(1 + x2 y1)).
    Endpoints are exact; only the final logarithm is floating (prec bits).
    """
    x1, x2, y1, y2 = as_exact(x1), as_exact(x2), as_exact(y1), as_exact(y2)
    if x2 < x1 or y2 < y1:
        raise DomainError("rectangle endpoints out of order")
    if not (0 <= y1 and y2 <= 1):
        raise DomainError("y-interval must lie in [0, 1]")
    for corner_x in (x1, x2):
        for corner_y in (y1, y2):
            if not (1 + corner_x * corner_y > 0):
                raise DomainError("rectangle touches the excluded hyperbola 1 + x y <= 0")
    with mpmath.workprec(prec):
        num = to_mpf(1 + x1 * y1, prec) * to_mpf(1 + x2 * y2, prec)
        den = to_mpf(1 + x1 * y2, prec) * to_mpf(1 + x2 * y1, prec)
        return mpmath.log(num) - mpmath.log(den)


def mu_invariance_check(m: Mobius, x1, x2, y1, y2, prec: int = 128, tol: float = 1e-12) -> bool:
    """Does mu of the rectangle match mu of (M x-interval) x (tM^-1 y-interval)?"""
    x1, x2, y1, y2 = as_exact(x1), as_exact(x2), as_exact(y1), as_exact(y2)
    n = m.transpose_inverse()
    mx = sorted([m.apply(x1), m.apply(x2)])
    ny = sorted([n.apply(y1), n.apply(y2)])
    before = mu_rect(x1, x2, y1, y2, prec)
    after = mu_rect(mx[0], mx[1], ny[0], ny[1], prec)
    return abs(before - after) < tol


# -- parsing and formatting ------------------------------------------------

_TERM_RE = re.compile(r"^(\d+)?sqrt(\d+)$|^(\d+)$")

INVPHI = Surd(Fraction(-1, 2), Fraction(1, 2), 5)  # (sqrt5 - 1)/2 ~ 0.618
INVPHI2 = Surd(Fraction(3, 2), Fraction(-1, 2), 5)  # (3 - sqrt5)/2 ~ 0.382, = 1 - INVPHI
SQRT2_MINUS_1 = Surd(Fraction(-1), Fraction(1), 2)

_TOKENS = {"g": INVPHI, "g2": INVPHI2}


def parse_exact(text: str) -> ExactNumber:
    """Parse canonical exact strings.

    Accepts integers ("3"), fractions ("37/97"), decimal literals
    ("0.45", exact as written), the tokens "g" and "g2", and surd forms
    like "sqrt2-1", "2sqrt2-3", "(3-sqrt5)/2", "-(1+sqrt5)/4".
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise DomainError("empty number string")
    if s in _TOKENS:
        return _TOKENS[s]
    if "sqrt" not in s:
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse {text!r} as an exact number") from exc

    negate = False
    if s.startswith("-("):
        negate = True
        s = s[1:]
    denom = 1
    if s.startswith("("):
        close = s.rfind(")")
        if close < 0:
            raise DomainError(f"unbalanced parentheses in {text!r}")
        tail = s[close + 1 :]
        if tail:
            if not tail.startswith("/"):
                raise DomainError(f"unexpected trailing {tail!r} in {text!r}")
            denom = int(tail[1:])
        s = s[1:close]

    rational = Fraction(0)
    coeff = Fraction(0)
    radicand = None
    for match in re.finditer(r"([+-]?)([^+-]+)", s):
        sign = -1 if match.group(1) == "-" else 1
        term = match.group(2)
        parsed = _TERM_RE.match(term)
        if not parsed:
            raise DomainError(f"cannot parse term {term!r} in {text!r}")
        if parsed.group(3) is not None:
            rational += sign * int(parsed.group(3))
        else:
            mult = int(parsed.group(1)) if parsed.group(1) else 1
            d = int(parsed.group(2))
            if radicand is not None and radicand != d:
                raise DomainError(f"two distinct radicands in {text!r}")
            radicand = d
            coeff += sign * mult
    if radicand is None or coeff == 0:
        value: ExactNumber = rational / denom
    else:
        value = make_surd(Fraction(rational, denom), Fraction(coeff, denom), radicand)
    return -value if negate else value


def format_exact(x: ExactNumber) -> str:
    """Canonical string, round-tripping through parse_exact."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    common = x.a.denominator * x.b.denominator // math.gcd(x.a.denominator, x.b.denominator)
    a_int = x.a.numerator * (common // x.a.denominator)
    b_int = x.b.numerator * (common // x.b.denominator)
    shrink = math.gcd(math.gcd(abs(a_int), abs(b_int)), common)
    a_int, b_int, common = a_int // shrink, b_int // shrink, common // shrink

    negate = False
    if b_int < 0 and a_int <= 0:
        negate = True
        a_int, b_int = -a_int, -b_int

    root = f"sqrt{x.d}" if abs(b_int) == 1 else f"{abs(b_int)}sqrt{x.d}"
    if a_int == 0:
        body = root if b_int > 0 else f"-{root}"
    elif a_int > 0:
        body = f"{a_int}+{root}" if b_int > 0 else f"{a_int}-{root}"
    else:  # a_int < 0, b_int > 0 here
        body = f"{root}-{-a_int}"

    if common > 1 or (negate and a_int != 0):
        body = f"({body})"
    if common > 1:
        body = f"{body}/{common}"
    return f"-{body}" if negate else body
