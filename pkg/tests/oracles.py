"""Independent oracles for derived expected values.

Run as a script to print every frozen constant used in the test suite.
Everything here is computed from first principles with the standard library
and mpmath only -- the package under test is deliberately not imported, so
these numbers cannot inherit its bugs.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

mpmath.mp.prec = 160


# -- direct map iteration ---------------------------------------------------


def t0_step(x: Fraction) -> tuple[int, Fraction]:
    """One step of the by-excess map on [-1, 0): digit d, next point 1/|x| - d... rounded up."""
    assert -1 <= x < 0
    inv = -1 / x  # |1/x|
    d = inv.__floor__() + 1  # floor(|1/x| + 1 - 0), exact also when |1/x| is an integer
    return d, inv - d


def by_excess_digits(x: Fraction, n: int) -> list[int]:
    out = []
    for _ in range(n):
        if x == 0:
            break
        d, x = t0_step(x)
        out.append(d)
    return out


def alpha_step(alpha: Fraction, x: Fraction) -> tuple[int, int, Fraction]:
    """One alpha-expansion step: returns (eps, d, next)."""
    assert alpha - 1 <= x <= alpha
    if x == 0:
        return 1, -1, Fraction(0)  # digit infinity marker
    eps = 1 if x > 0 else -1
    inv = abs(1 / x)
    d = (inv + 1 - alpha).__floor__()
    return eps, d, inv - d


def alpha_orbit(alpha: Fraction, x: Fraction, n: int):
    steps = []
    for _ in range(n):
        eps, d, x = alpha_step(alpha, x)
        steps.append((eps, d))
        if d == -1:
            break
    return steps, x


def rcf_digits(x: Fraction, n: int) -> list[int]:
    """Plain regular continued fraction of x in (0, 1)."""
    out = []
    for _ in range(n):
        if x == 0:
            break
        inv = 1 / x
        a = inv.__floor__()
        out.append(a)
        x = inv - a
    return out


# -- characteristic sequences (direct definition) ----------------------------


def char_seq_of(word: list[int]) -> list[int]:
    """Characteristic sequence of a word of by-excess digits (all >= 2)."""
    seq = []
    run = 0
    for d in word:
        if d == 2:
            run += 1
        else:
            seq.append(run + 1)
            seq.append(d - 2)
            run = 0
    seq.append(run + 1)
    return seq


def alt_less(a: list, b: list) -> str:
    """Alternating order: first difference at 0-based j decides by (-1)^j."""
    for j in range(min(len(a), len(b))):
        if a[j] != b[j]:
            bigger = a[j] > b[j]
            if j % 2 == 0:
                return "greater" if bigger else "less"
            return "less" if bigger else "greater"
    return "equal" if len(a) == len(b) else "incomparable"


# -- 2x2 matrices ------------------------------------------------------------


def mat_letter(eps: int, d: int):
    return [[d, -eps], [-1, 0]]


def mat_mul(m, n):
    return [
        [m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]],
        [m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]],
    ]


def mat_eq_up_to_sign(m, n):
    return m == n or m == [[-n[0][0], -n[0][1]], [-n[1][0], -n[1][1]]]


# -- the admissible-word language, straight from its defining prefix sets ----


def companion_digits(v_digits: list[int]) -> list[int]:
    """Companion word of an all-negative word, via its characteristic
    sequence (a1, ..., a_{2l+1}): digits (2+a1) 2^(a2-1) (2+a3) ... (2+a_{2l+1})."""
    a = char_seq_of(v_digits)
    assert len(a) % 2 == 1
    out = [2 + a[0]]
    for i in range(1, len(a), 2):
        out.extend([2] * (a[i] - 1))
        out.append(2 + a[i + 1])
    return out


def upper_word(v_digits: list[int]) -> list[tuple[int, int]]:
    """Expansion prefix of the right endpoint itself: lower the companion's
    last digit by one, then flip its first letter positive (digit down one)."""
    w = companion_digits(v_digits)
    w = w[:-1] + [w[-1] - 1]
    return [(1, w[0] - 1)] + [(-1, d) for d in w[1:]]


def prefix_sets(alpha: Fraction):
    """The four prefix sets U1..U4 as lists of letter tuples.

    Only valid for parameters whose two endpoint orbits both land exactly
    on 0 (smallest-denominator points of their interval); asserted below.
    """
    v: list[tuple[int, int]] = []
    x = alpha - 1
    while x < 0:
        eps, d, x = alpha_step(alpha, x)
        v.append((eps, d))
    assert x == 0 and all(e == -1 for e, _ in v), "lower orbit must die negative"
    upper = upper_word([d for _, d in v])
    steps, fin = alpha_orbit(alpha, alpha, len(upper))
    assert steps == upper and fin == 0, (steps, upper, fin)
    cap = upper[0][1]
    bound = Fraction(-1, cap + 1)  # deepest letter allowed after a prefix
    u1 = [tuple(v[:j]) for j in range(len(v) + 1)]
    u2 = [tuple(upper[:j]) for j in range(1, len(upper) + 1)]
    u3 = [
        tuple(v[: j - 1]) + ((-1, e),)
        for j in range(1, len(v) + 1)
        for e in range(2, cap + 2)
        if Fraction(v[j - 1][0], v[j - 1][1]) < Fraction(-1, e) <= bound
    ]
    u4 = [
        tuple(upper[: j - 1]) + ((-1, e),)
        for j in range(2, len(upper) + 1)
        for e in range(2, cap + 2)
        if Fraction(upper[j - 1][0], upper[j - 1][1]) < Fraction(-1, e) <= bound
    ]
    return u1, u2, u3, u4


def encode_letter(eps: int, d: int) -> str:
    return chr((100 if eps < 0 else 68) + d)


def encode_word(w) -> str:
    return "".join(encode_letter(e, d) for e, d in w)


def language_matchers(alpha: Fraction):
    """(plain, extended) membership predicates on letter-tuple words.

    Built as regular expressions over single-character letter codes:
    plain = (U3 | U1 U2* U4)*, extended = plain U1 U2*.  Empty prefix
    sets drop their branch instead of contributing an empty pattern.
    """
    import re

    u1, u2, u3, u4 = prefix_sets(alpha)

    def alt(words):
        return "(?:" + "|".join(sorted((encode_word(w) for w in words), key=len, reverse=True)) + ")"

    branches = []
    if u3:
        branches.append(alt(u3))
    if u4:
        branches.append(alt(u1) + alt(u2) + "*" + alt(u4))
    plain_src = ("(?:" + "|".join(branches) + ")*") if branches else ""
    ext_src = plain_src + alt(u1) + alt(u2) + "*"
    plain_re = re.compile(plain_src)
    ext_re = re.compile(ext_src)

    def plain(w) -> bool:
        return plain_re.fullmatch(encode_word(w)) is not None

    def extended(w) -> bool:
        return ext_re.fullmatch(encode_word(w)) is not None

    return plain, extended


def count_factorizations(word, u1, u2, u3, u4) -> int:
    """Number of distinct parses of word as (U3 | U1 U2* U4)* pieces."""
    n = len(word)

    def tails(i, pieces):
        out = []
        for p in pieces:
            if word[i : i + len(p)] == p:
                out.append(i + len(p))
        return out

    from functools import lru_cache

    @lru_cache(maxsize=None)
    def u2_star(i):
        ways = {i: 1}
        frontier = [i]
        while frontier:
            j = frontier.pop()
            for nj in tails(j, tuple(u2)):
                if nj not in ways:
                    ways[nj] = 0
                    frontier.append(nj)
                ways[nj] += ways[j]
        return tuple(ways.items())

    # u2 pieces are prefixes of one word, so a given (start, end) spread has
    # at most one chain; the counting above still guards against surprises.
    @lru_cache(maxsize=None)
    def parses(i):
        if i == n:
            return 1
        total = 0
        for j in tails(i, tuple(u3)):
            total += parses(j)
        for j in tails(i, tuple(u1)):
            for mid, ways in u2_star(j):
                for end in tails(mid, tuple(u4)):
                    total += ways * parses(end)
        return total

    u1, u2, u3, u4 = map(tuple, (u1, u2, u3, u4))
    return parses(0)


def main():
    golden = (mpmath.sqrt(5) - 1) / 2
    print("== exact-number ==")
    print("M_(-1:3) . (-1/2) =", Fraction(-1) / Fraction(-1, 2) - 3)
    mu_golden = mpmath.log((2 + golden**2) / (2 - golden**2))
    print("mu_rect([-1/2,1/2]x[0,g2]) =", mpmath.nstr(mu_golden, 25))
    print("log(1+g) =", mpmath.nstr(mpmath.log(1 + golden), 25))
    print("log 2    =", mpmath.nstr(mpmath.log(2), 25))

    print("== alternating order ==")
    print("(1,2) vs (1,1):", alt_less([1, 2], [1, 1]))
    print("(2) vs (1):", alt_less([2], [1]))

    print("== by-excess expansions ==")
    for x in (Fraction(-1, 2), Fraction(-3, 5), Fraction(-1)):
        print(f"T0 digits of {x}:", by_excess_digits(x, 8), "(rationals end in repeating 2)")

    print("== RCF ==")
    print("rcf(1/2) =", rcf_digits(Fraction(1, 2), 5))
    print("rcf(2/5) =", rcf_digits(Fraction(2, 5), 5))
    # g2 = (3 - sqrt5)/2: RCF via mpmath continued fraction of high-precision value
    g2 = 1 - golden
    digits = []
    x = g2
    for _ in range(12):
        inv = 1 / x
        a = int(mpmath.floor(inv))
        digits.append(a)
        x = inv - a
    print("rcf(g2) first 12 =", digits)

    print("== rewriting rules as matrix identities ==")
    lhs = mat_mul(mat_letter(-1, 4), mat_letter(1, 3))  # value brackets: first letter innermost
    rhs = mat_mul(mat_letter(1, 3), mat_mul(mat_letter(1, 1), mat_letter(1, 2)))
    print("M_(-1:4) M_(+1:3) == M_(+1:3) M_(+1:1) M_(+1:2) ?", mat_eq_up_to_sign(lhs, rhs), lhs, rhs)

    print("== synchronization worked examples ==")
    for num, den, steps in ((37, 97, 6), (58, 195, 6)):
        alpha = Fraction(num, den)
        lo_steps, lo_final = alpha_orbit(alpha, alpha - 1, steps)
        hi_steps, hi_final = alpha_orbit(alpha, alpha, steps)
        print(f"alpha={alpha}: orbit(alpha-1) digits {lo_steps} final {lo_final}")
        print(f"alpha={alpha}: orbit(alpha)   digits {hi_steps} final {hi_final}")

    print("== entropy targets ==")
    pi2_6 = mpmath.pi**2 / 6
    print("pi^2/(6 log 2)      =", mpmath.nstr(pi2_6 / mpmath.log(2), 20))
    print("pi^2/(6 log(1+g))   =", mpmath.nstr(pi2_6 / mpmath.log(1 + golden), 20))
    print("pi^2/(6 log(1.7))   =", mpmath.nstr(pi2_6 / mpmath.log(Fraction(17, 10)), 20))
    print("log(1.65), log(1.7), log(1.8), log(1.9):")
    for a in (Fraction(13, 20), Fraction(7, 10), Fraction(4, 5), Fraction(9, 10)):
        print(f"  log(1+{a}) =", mpmath.nstr(mpmath.log(1 + a), 25))

    print("== morphism fixed point (2 -> 211, 1 -> 2) ==")
    word = [2]
    while len(word) < 30:
        word = [x for letter in word for x in ([2, 1, 1] if letter == 2 else [2])]
    print("first 27:", word[:27])

    print("== misc interval endpoints ==")
    print("sqrt2-1 =", mpmath.nstr(mpmath.sqrt(2) - 1, 25))
    print("g       =", mpmath.nstr(golden, 25))
    print("g2      =", mpmath.nstr(g2, 25))
    # zeta of the word (-1:2)(-1:3): positive root of 3x^2 + 4x - 2 = 0
    zeta23 = (mpmath.sqrt(10) - 2) / 3
    print("zeta_{(-1:2)(-1:3)} = (sqrt10-2)/3 =", mpmath.nstr(zeta23, 25))

    print("== admissible-word prefix sets ==")
    for num, den in ((1, 1), (1, 2), (2, 5)):
        alpha = Fraction(num, den)
        u1, u2, u3, u4 = prefix_sets(alpha)
        print(f"alpha={alpha}: U1={u1} U2={u2}")
        print(f"          U3={u3} U4={u4}")

    print("== attractor fixed points (one letter map each) ==")
    print("1/(3-y) fixed point =", mpmath.nstr((3 - mpmath.sqrt(5)) / 2, 25), "(= g2)")
    print("1/(2-g2) =", mpmath.nstr(1 / (2 - g2), 25), "(= g)")
    print("1/(2+g)  =", mpmath.nstr(1 / (2 + golden), 25), "(= g2)")

    print("== slab corners at alpha = 1/2 ==")
    half = Fraction(1, 2)
    lo_steps, lo_fin = alpha_orbit(half, half - 1, 4)
    hi_steps, hi_fin = alpha_orbit(half, half, 4)
    print("orbit(alpha-1):", lo_steps, "final", lo_fin)
    print("orbit(alpha):  ", hi_steps, "final", hi_fin)

    print("== word-sum tail bound samples ==")
    for num, den, cap in ((1, 2, 2), (2, 5, 3)):
        alpha = Fraction(num, den)
        for length in (8, 12):
            bound = (Fraction(cap) / (cap + alpha)) ** length * mpmath.log(1 + 1 / alpha)
            print(f"alpha={alpha} n={length}: (d/(d+a))^n log(1+1/a) =", mpmath.nstr(bound, 12))


if __name__ == "__main__":
    main()
