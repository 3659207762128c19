"""Interval dynamics: the one-parameter family of folded Gauss maps.

For a parameter alpha in (0,1] the map sends x in [alpha-1, alpha] to
|1/x| - d with d = floor(|1/x| + 1 - alpha), recording the digit
(sign(x):d).  This module extracts digits and orbits exactly, expands
numbers by excess (the alpha=0 convention), converts expansions to the
regular continued fraction, and decides whether the two endpoint orbits
synchronize.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import (
    AlphaCFError,
    CycleLimit,
    DomainError,
    RuleError,
)
from .exact import (
    ExactNumber,
    INVPHI,
    decimal_str,
    exact_abs,
    exact_floor,
    format_exact,
)
from .words import (
    CharSeq,
    Letter,
    SyncWordData,
    Word,
    alt_compare_periodic,
    apply_W,
    apply_shift,
    char_seq,
    format_word,
    interval_data,
    is_in_F,
    letter,
    periodic_char_seq,
    shift_periodic,
    word_from_char_seq,
)

__all__ = [
    "DigitStep",
    "SyncResult",
    "digit",
    "orbit",
    "expansion_stream",
    "by_excess_expansion",
    "char_of_number",
    "char_to_rcf",
    "rcf_expansion",
    "rcf_rewrite",
    "synchronize",
    "fiber_boundaries",
    "sync_result_json",
]


class DigitStep(NamedTuple):
    letter: Letter
    next: ExactNumber


def digit(alpha: ExactNumber, x: ExactNumber) -> DigitStep:
    """One exact step of the map: the digit of x and its image.

    x must lie in [alpha-1, alpha]; x = 0 yields the terminating letter
    (+1:inf) with image 0.
    """
    if x < alpha - 1 or x > alpha:
        raise DomainError(f"{x} lies outside [{alpha - 1}, {alpha}]")
    if x == 0:
        return DigitStep(Letter(1, math.inf), Fraction(0))
    eps = 1 if x > 0 else -1
    inv = 1 / exact_abs(x)
    d = exact_floor(inv + 1 - alpha)
    return DigitStep(letter(eps, d), inv - d)


def orbit(alpha: ExactNumber, x: ExactNumber, n: int) -> list[DigitStep]:
    """First n digit steps of x, stopping early once the orbit hits 0."""
    if n < 0:
        raise DomainError("step count must be nonnegative")
    steps: list[DigitStep] = []
    cur = x
    for _ in range(n):
        step = digit(alpha, cur)
        steps.append(step)
        if step.letter.d == math.inf:
            break
        cur = step.next
    return steps


def expansion_stream(alpha: ExactNumber, x: ExactNumber) -> Iterator[Letter]:
    """Lazy digit stream of x; ends with (+1:inf) when the orbit hits 0."""
    cur = x
    while True:
        step = digit(alpha, cur)
        yield step.letter
        if step.letter.d == math.inf:
            return
        cur = step.next


def by_excess_expansion(
    x: ExactNumber, max_steps: int = 10_000
) -> tuple[Word, Word]:
    """Expansion of x in [-1,0) by excess: digits d = floor(|1/x|) + 1.

    Returns (preperiod, period) via exact orbit-point cycle detection;
    rational x always ends in the fixed point -1 with period (-1:2).
    """
    if x < -1 or not x < 0:
        raise DomainError(f"{x} lies outside [-1, 0)")
    seen: dict[ExactNumber, int] = {}
    letters: list[Letter] = []
    cur = x
    while len(letters) < max_steps:
        if cur in seen:
            i = seen[cur]
            return tuple(letters[:i]), tuple(letters[i:])
        seen[cur] = len(letters)
        inv = 1 / (-cur)
        d = exact_floor(inv) + 1
        letters.append(letter(-1, d))
        cur = inv - d
    raise CycleLimit(f"no cycle within {max_steps} steps from {x}")


def char_of_number(x: ExactNumber, max_steps: int = 10_000) -> tuple[CharSeq, CharSeq]:
    """Characteristic sequence (head, period) of the by-excess expansion."""
    pre, per = by_excess_expansion(x, max_steps)
    return periodic_char_seq(pre, per)


def char_to_rcf(head: CharSeq, per: CharSeq) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Regular continued fraction digits read off a characteristic sequence.

    The sequence of alpha-1 lists the partial quotients of alpha directly;
    an all-infinity tail (rational alpha) truncates to the finite digit list.
    """
    digits: list[int] = []
    for e in head:
        if e == math.inf:
            return tuple(digits), ()
        digits.append(int(e))
    per_digits: list[int] = []
    for e in per:
        if e == math.inf:
            return tuple(digits) + tuple(per_digits), ()
        per_digits.append(int(e))
    return tuple(digits), tuple(per_digits)


def rcf_expansion(
    x: ExactNumber, max_steps: int = 10_000
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Regular continued fraction [0; d1, d2, ...] of x in (0, 1].

    Returns (preperiod, period); the period is empty for terminating
    (rational) expansions.
    """
    if not 0 < x or x > 1:
        raise DomainError(f"{x} lies outside (0, 1]")
    one = Fraction(1)
    seen: dict[ExactNumber, int] = {}
    digits: list[int] = []
    cur = x
    while len(digits) < max_steps:
        if cur == 0:
            return tuple(digits), ()
        if cur in seen:
            i = seen[cur]
            return tuple(digits[:i]), tuple(digits[i:])
        seen[cur] = len(digits)
        step = digit(one, cur)
        digits.append(step.letter.d)
        cur = step.next
    raise CycleLimit(f"no cycle within {max_steps} steps from {x}")


def rcf_rewrite(stream: Iterable[Letter]) -> Iterator[Letter]:
    """Rewrite an expansion of some x in (0, alpha] into its RCF digits.

    Works letter by letter: a positive letter followed by a run of (-1:2)s
    and a closing letter is replaced by the positive letters carrying the
    same Moebius product.  The pattern (+1:1) before a negative letter
    cannot arise from a genuine expansion and raises RuleError.
    """
    it = iter(stream)
    head = next(it, None)
    if head is None:
        return
    if head.eps != 1:
        raise RuleError("rewriting starts from the expansion of a positive number")
    while True:
        if head.d == math.inf:
            yield head
            return
        nxt = next(it, None)
        if nxt is None:
            yield head
            return
        if nxt.eps == 1 and nxt.d != math.inf:
            yield head
            head = nxt
            continue
        if nxt.d == math.inf:
            yield head
            yield nxt
            return
        twos = 0
        while nxt is not None and nxt.eps == -1 and nxt.d == 2:
            twos += 1
            nxt = next(it, None)
        if head.d == 1:
            raise RuleError("pattern (+1:1) before a negative letter has no rewriting")
        if nxt is None:
            # the word ends inside the run: same value as two positive letters
            yield letter(1, head.d - 1)
            yield letter(1, twos + 1)
            return
        if nxt.eps == -1:
            yield letter(1, head.d - 1)
            yield letter(1, twos + 1)
            head = letter(1, nxt.d - 1)
            continue
        if nxt.d == math.inf:
            yield letter(1, head.d - 1)
            yield letter(1, twos + 1)
            yield nxt
            return
        yield letter(1, head.d - 1)
        yield letter(1, twos)
        yield letter(1, 1)
        head = nxt


class SyncResult(NamedTuple):
    """Outcome of endpoint-orbit synchronization detection for one alpha."""

    alpha: ExactNumber
    status: str  # "synchronizing" | "right_endpoint" | "non_synchronizing" | "undecided"
    v: Word | None = None
    gamma: SyncWordData | None = None
    k: int | None = None
    k_prime: int | None = None
    certificate: tuple[CharSeq, CharSeq] | None = None
    depth: int | None = None


class _OrbitScan(NamedTuple):
    letters: Word        # negative letters emitted while the orbit stays < 0
    sync_at: int | None  # first n with T^n >= 0 (n counts from start offset)
    cycle_at: int | None # index into `letters` where the point orbit repeats


def _scan_negative(alpha: ExactNumber, x: ExactNumber, start: int, max_iter: int) -> _OrbitScan:
    """Follow x while it stays negative: stop at the first nonnegative image
    (sync), at an exact repeat of an orbit point (cycle), or at max_iter."""
    seen: dict[ExactNumber, int] = {}
    letters: list[Letter] = []
    cur = x
    for n in range(start, max_iter + 1):
        if cur in seen:
            return _OrbitScan(tuple(letters), None, seen[cur])
        seen[cur] = len(letters)
        step = digit(alpha, cur)
        letters.append(step.letter)
        if step.next >= 0:
            return _OrbitScan(tuple(letters), n, None)
        cur = step.next
    return _OrbitScan(tuple(letters), None, None)


def _half_length(word: Word) -> int:
    """(len-1)/2 of the characteristic sequence of the word with its last
    depth raised: the m-value steering the synchronization surgery."""
    return (len(char_seq(apply_shift(word, 1))) - 1) // 2


def synchronize(alpha: ExactNumber, max_iter: int = 10_000) -> SyncResult:
    """Decide how the orbits of alpha-1 and alpha relate.

    Synchronizing alpha get the unique word v with alpha in (zeta_v, eta_v)
    and the exact meeting time of the two orbits.  Exactly periodic,
    never-nonnegative orbit pairs are certified non-synchronizing (with the
    right endpoints alpha = eta_v reported separately); anything unresolved
    within max_iter comes back undecided.
    """
    if not 0 < alpha or alpha > 1:
        raise DomainError(f"parameter {alpha} lies outside (0, 1]")
    first = digit(alpha, alpha)
    if first.next >= 0:
        v = (Letter(-1, 2),) * (first.letter.d - 1)
        return _certify_sync(alpha, v)

    low = _scan_negative(alpha, alpha - 1, 1, max_iter)
    up = _scan_negative(alpha, first.next, 2, max_iter)
    if (low.sync_at is None and low.cycle_at is None) or (
        up.sync_at is None and up.cycle_at is None
    ):
        return SyncResult(alpha, "undecided", depth=max_iter)

    if low.sync_at is None and up.sync_at is None:
        return _certify_non_sync(alpha, low)

    m = _half_length(low.letters) if low.sync_at is not None else math.inf
    m_prime = _half_length(up.letters) if up.sync_at is not None else math.inf
    if m <= m_prime:
        v = low.letters
    else:
        head = char_seq(apply_shift(up.letters, 1))
        v = word_from_char_seq((first.letter.d - 1,) + head[:-1])
    return _certify_sync(alpha, v)


def _certify_sync(alpha: ExactNumber, v: Word) -> SyncResult:
    if not is_in_F(v):
        raise AlphaCFError(
            f"internal: constructed word {format_word(v)} for {alpha} is not in F"
        )
    data = interval_data(v)
    inside = data.zeta < alpha and (alpha <= data.eta if not v else alpha < data.eta)
    if not inside:
        raise AlphaCFError(
            f"internal: {alpha} does not lie in the interval of {format_word(v)}"
        )
    k = len(v) + 1
    k_prime = len(data.vhat) + 1
    low_steps = orbit(alpha, alpha - 1, k)
    up_steps = orbit(alpha, alpha, k_prime)
    if tuple(s.letter for s in low_steps[: len(v)]) != v:
        raise AlphaCFError(f"internal: lower orbit of {alpha} does not start with v")
    expected_up = apply_W(apply_shift(data.vhat, -1))
    if tuple(s.letter for s in up_steps[: len(expected_up)]) != expected_up:
        raise AlphaCFError(f"internal: upper orbit of {alpha} does not match the hat word")
    if low_steps[k - 1].next != up_steps[k_prime - 1].next:
        raise AlphaCFError(f"internal: orbits of {alpha} do not meet at (k, k')")
    return SyncResult(alpha, "synchronizing", v=v, gamma=data, k=k, k_prime=k_prime)


def _certify_non_sync(alpha: ExactNumber, low: _OrbitScan) -> SyncResult:
    pre = low.letters[: low.cycle_at]
    per = low.letters[low.cycle_at :]
    cert = periodic_char_seq(pre, per)

    if alpha > INVPHI:
        raise AlphaCFError(
            f"internal: never-nonnegative orbits found for {alpha} right of the golden point"
        )
    head, block = cert
    distinct = len(head) + len(block)
    for n in range(1, distinct + 1):
        shifted = shift_periodic(head, block, n)
        if alt_compare_periodic(*shifted, head, block) == "greater":
            raise AlphaCFError(
                f"internal: shifted tail {n} of the expansion of {alpha}-1 "
                "is larger in the alternating order"
            )

    if not pre and per[-1].d >= 3:
        v = apply_shift(per, -1)
        if is_in_F(v):
            data = interval_data(v)
            if data.eta == alpha:
                return SyncResult(
                    alpha, "right_endpoint", v=v, gamma=data, certificate=cert
                )
    return SyncResult(alpha, "non_synchronizing", certificate=cert)


def fiber_boundaries(alpha: ExactNumber, max_iter: int = 10_000) -> list[ExactNumber]:
    """Sorted x-values where the vertical fiber of the invariant domain can
    change: the lower orbit points T^j(alpha-1), j < k, and the upper orbit
    points T^j(alpha), 1 <= j < k'."""
    res = synchronize(alpha, max_iter)
    pts: list[ExactNumber] = []
    if res.status == "synchronizing":
        low = [alpha - 1] + [s.next for s in orbit(alpha, alpha - 1, res.k - 1)]
        up = [s.next for s in orbit(alpha, alpha, res.k_prime - 1)]
        pts = low + up
    else:
        # periodic or truncated orbits: collect every distinct point seen
        for x, start in ((alpha - 1, 0), (alpha, 1)):
            seen: set[ExactNumber] = set()
            cur = x
            if start == 1:
                cur = digit(alpha, cur).next
            for _ in range(max_iter):
                if cur in seen:
                    break
                seen.add(cur)
                step = digit(alpha, cur)
                if step.letter.d == math.inf:
                    break
                cur = step.next
            pts.extend(seen)
    out: list[ExactNumber] = []
    for p in sorted(set(pts)):
        if not out or out[-1] != p:
            out.append(p)
    return out


def _exact_json(x: ExactNumber) -> dict:
    return {"exact": format_exact(x), "decimal": decimal_str(x, 30)}


def sync_result_json(res: SyncResult) -> dict:
    """JSON-ready dict for a SyncResult, with exact strings and decimals."""
    out: dict = {"alpha": _exact_json(res.alpha), "status": res.status}
    if res.gamma is not None:
        data = res.gamma
        out["v"] = format_word(data.v)
        out["v_hat"] = format_word(data.vhat)
        out["k"] = res.k
        out["k_prime"] = res.k_prime
        out["zeta"] = _exact_json(data.zeta)
        out["eta"] = _exact_json(data.eta)
        out["chi"] = _exact_json(data.chi)
        out["len_diff"] = data.len_diff
    if res.certificate is not None:
        head, per = res.certificate
        out["certificate"] = {
            "head": [None if e == math.inf else int(e) for e in head],
            "period": [None if e == math.inf else int(e) for e in per],
        }
    if res.depth is not None:
        out["depth"] = res.depth
    return out
