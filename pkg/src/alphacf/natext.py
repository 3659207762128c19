"""Planar extension domains: admissible-word languages, attractors, measures.

The two-dimensional extension of each interval map acts on a domain that
splits into vertical slabs: a base slab over the whole interval plus one
slab per endpoint-orbit prefix, each carrying a dual-coordinate attractor
set transported by the prefix's dual matrix.  This module builds the
finite automaton of admissible dual words, encloses both attractors
between exact inner interval unions and certified frontier bounds, and
integrates the invariant density over the slabs to bracket the domain
measure (and with it the entropy, via the constant product pi^2/6).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import fsum
from typing import Sequence

import mpmath

from .dynamics import SyncResult, digit, orbit, synchronize
from .errors import (
    AlphaCFError,
    AlphabetError,
    BudgetExceeded,
    DomainError,
    TruncationWarning,
    ZeroDigit,
)
from .exact import (
    ExactNumber,
    Mobius,
    as_exact,
    decimal_str,
    format_exact,
    letter_matrices,
    mu_rect,
    to_mpf,
)
from .words import (
    Letter,
    Word,
    apply_W,
    apply_shift,
    dual_word_matrix,
    format_word,
    interval_data,
    letter,
    word_matrix,
)

__all__ = [
    "IntervalSet",
    "LanguageAutomaton",
    "OmegaPiece",
    "DomainApprox",
    "MeasureBracket",
    "WordSum",
    "build_automaton",
    "psi_sets",
    "omega_decomposition",
    "fiber_at",
    "measure_bracket",
    "word_sum_measure",
    "mu_along_interval",
    "natext_step",
    "domain_csv",
    "domain_svg",
    "measure_json",
]

# Length sums and density bounds are rounded outward by this factor before
# they meet a tolerance, so float summation can never make a reported
# enclosure narrower than the true one.
_OUTWARD = 1 + 1e-12


def _float_up(x) -> float:
    """Float upper bound for a nonnegative exact (or float) quantity."""
    return float(x) * _OUTWARD


def _float_down(x) -> float:
    """Float lower bound for a nonnegative exact (or float) quantity."""
    return float(x) / _OUTWARD


def _pairs_sorted(pairs):
    return sorted(pairs, key=lambda p: (p[0], p[1]))


def _merge_pairs(pairs):
    """Union of closed intervals: sorted, with overlap/touch runs coalesced."""
    merged: list[tuple[ExactNumber, ExactNumber]] = []
    for lo, hi in _pairs_sorted(pairs):
        if hi <= lo:
            continue
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def _length_up(pairs) -> float:
    return fsum(_float_up(hi - lo) for lo, hi in pairs) * _OUTWARD


def _length_down(pairs) -> float:
    return fsum(_float_down(hi - lo) for lo, hi in pairs) / _OUTWARD


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint closed subintervals of [0, 1].

    intervals is sorted with exact endpoints.  The two slack fields bound
    how far the enumerated union may differ from the set it stands for:
    tail bounds the measure of anything the set has beyond the union,
    phantom bounds the measure the union may carry beyond the set.  Both
    are 0.0 for an exact representation.
    """

    intervals: tuple[tuple[ExactNumber, ExactNumber], ...]
    tail: float = 0.0
    phantom: float = 0.0

    @classmethod
    def from_pairs(cls, pairs, tail: float = 0.0, phantom: float = 0.0) -> "IntervalSet":
        merged = _merge_pairs(pairs)
        for lo, hi in merged:
            if lo < 0 or hi > 1:
                raise DomainError(f"interval [{lo}, {hi}] leaves [0, 1]")
        return cls(tuple(merged), tail, phantom)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def hull(self) -> tuple[ExactNumber, ExactNumber] | None:
        if not self.intervals:
            return None
        return self.intervals[0][0], self.intervals[-1][1]

    def measure(self) -> float:
        """Total length of the enumerated intervals (outward-rounded)."""
        return _length_up(self.intervals)

    def contains(self, x) -> bool:
        x = as_exact(x)
        return any(lo <= x <= hi for lo, hi in self.intervals)

    def distance(self, x) -> float:
        """Distance from x to the enumerated union, 0.0 when inside."""
        x = as_exact(x)
        best = math.inf
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return 0.0
            best = min(best, _float_up(lo - x if x < lo else x - hi))
        return best

    def contains_set(self, other: "IntervalSet") -> bool:
        """Is every interval of other inside one of ours (as closed sets)?"""
        i = 0
        for lo, hi in other.intervals:
            while i < len(self.intervals) and self.intervals[i][1] < hi:
                i += 1
            if i == len(self.intervals) or not (
                self.intervals[i][0] <= lo and hi <= self.intervals[i][1]
            ):
                return False
        return True

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(
            tuple(_merge_pairs(list(self.intervals) + list(other.intervals))),
            self.tail + other.tail,
            self.phantom + other.phantom,
        )

    def apply(self, m: Mobius) -> "IntervalSet":
        """Image under a Moebius map with no pole on the hull.

        Both slack bounds are scaled by the supremum of |m'| over the
        hull, so they stay valid for the image.
        """
        if not self.intervals:
            return IntervalSet((), self.tail, self.phantom)
        hull_lo, hull_hi = self.intervals[0][0], self.intervals[-1][1]
        den_lo = m.c * hull_lo + m.d
        den_hi = m.c * hull_hi + m.d
        if den_lo == 0 or den_hi == 0 or (den_lo > 0) != (den_hi > 0):
            raise DomainError(f"{m!r} has a pole on the hull [{hull_lo}, {hull_hi}]")
        min_den2 = min(den_lo * den_lo, den_hi * den_hi)
        stretch = _float_up(1.0 / _float_down(min_den2))
        mapped = [tuple(sorted((m.apply(lo), m.apply(hi)))) for lo, hi in self.intervals]
        return IntervalSet(
            tuple(_merge_pairs(mapped)), self.tail * stretch, self.phantom * stretch
        )


# -- the admissible-word automaton -------------------------------------------


@dataclass(frozen=True)
class LanguageAutomaton:
    """Deterministic automaton of the dual-word languages for one alpha.

    Words walk from state 0 (the factor boundary).  States 0..len(v) track
    how much of the lower endpoint word has been matched since the last
    boundary; the remaining states track the upper word after its leading
    positive letter.  A word belongs to the plain language when it ends at
    state 0 and to the extended language when it ends anywhere.
    """

    alphabet: tuple[Letter, ...]
    labels: tuple[str, ...]
    delta: tuple[tuple[int | None, ...], ...]  # delta[state][letter_index]
    lower_prefixes: tuple[Word, ...]  # lower-endpoint orbit prefixes, j = 0, 1, ...
    upper_prefixes: tuple[Word, ...]  # upper-endpoint orbit prefixes, j = 1, 2, ...
    digit_cap: int  # largest admissible negative depth is digit_cap + 1
    truncated: bool = False
    trunc_lower: Word | None = None
    trunc_upper: Word | None = None

    start: int = 0
    accept_plain: int = 0

    @property
    def n_states(self) -> int:
        return len(self.labels)

    def letter_index(self, a: Letter) -> int:
        try:
            return self.alphabet.index(a)
        except ValueError:
            raise AlphabetError(f"letter {a} is outside the alphabet") from None

    def step(self, state: int | None, a: Letter) -> int | None:
        if state is None:
            return None
        return self.delta[state][self.letter_index(a)]

    def accepts(self, w: Sequence[Letter], extended: bool = False) -> bool:
        state: int | None = self.start
        for a in w:
            state = self.step(state, a)
            if state is None:
                return False
        return state is not None if extended else state == self.accept_plain


def _automaton_from_words(
    v: Word,
    vprime: Word,
    truncated: bool = False,
    trunc_lower: Word | None = None,
    trunc_upper: Word | None = None,
) -> LanguageAutomaton:
    if not vprime or vprime[0].eps != 1:
        raise AlphabetError("the upper word must start with a positive letter")
    cap = vprime[0].d
    if not isinstance(cap, int):
        raise AlphabetError("the upper word starts with an infinite digit")
    alphabet = tuple(letter(-1, d) for d in range(2, cap + 2)) + (letter(1, cap),)
    for a in v:
        if a.eps != -1 or not 2 <= a.d <= cap + 1:
            raise AlphabetError(f"lower-word letter {a} is outside the alphabet")
    for a in vprime[1:]:
        if a.eps != -1 or not 2 <= a.d <= cap + 1:
            raise AlphabetError(f"upper-word letter {a} is outside the alphabet")

    nv, nw = len(v), len(vprime)
    labels = tuple(f"L{i}" for i in range(nv + 1)) + tuple(f"R{i}" for i in range(1, nw + 1))

    rows: list[tuple[int | None, ...]] = []
    for s in range(len(labels)):
        row: list[int | None] = [None] * len(alphabet)
        row[-1] = nv + 1  # the positive letter always starts the upper word
        expected = None
        if s < nv:
            expected, target = v[s].d, s + 1
        elif nv < s < nv + nw:
            expected, target = vprime[s - nv].d, s + 1
        if expected is not None:
            row[expected - 2] = target
            for d in range(expected + 1, cap + 2):
                row[d - 2] = 0  # a deeper digit closes the factor
        rows.append(tuple(row))

    return LanguageAutomaton(
        alphabet=alphabet,
        labels=labels,
        delta=tuple(rows),
        lower_prefixes=tuple(tuple(v[:j]) for j in range(nv + 1)),
        upper_prefixes=tuple(tuple(vprime[:j]) for j in range(1, nw + 1)),
        digit_cap=cap,
        truncated=truncated,
        trunc_lower=trunc_lower,
        trunc_upper=trunc_upper,
    )


def _orbit_letters(alpha: ExactNumber, x: ExactNumber, n: int) -> Word:
    steps = orbit(alpha, x, n)
    letters = tuple(s.letter for s in steps)
    if len(letters) < n or any(a.d == math.inf or a.eps != -1 for a in letters):
        raise DomainError(
            "an endpoint orbit leaves the negative alphabet within the "
            "truncation depth; certify synchronization (larger max_iter) instead"
        )
    return letters


def build_automaton(alpha, sync: SyncResult, depth: int = 64) -> LanguageAutomaton:
    """Automaton of the admissible dual words for this alpha.

    Synchronizing (and right-endpoint) parameters give the exact finite
    construction from the synchronization word.  Otherwise both endpoint
    orbits are cut at `depth` letters, a TruncationWarning is issued, and
    the resulting language is a sub-language of the true one.
    """
    alpha = as_exact(alpha)
    if sync.status in ("synchronizing", "right_endpoint"):
        if sync.gamma is None:
            raise DomainError("synchronizing result carries no interval data")
        v = tuple(sync.v or ())
        vprime = apply_W(apply_shift(sync.gamma.vhat, -1))
        return _automaton_from_words(v, vprime)
    if depth < 2:
        raise DomainError("truncation depth must be at least 2")
    warnings.warn(
        f"alpha = {format_exact(alpha)} does not synchronize; "
        f"languages truncated at depth {depth}",
        TruncationWarning,
        stacklevel=2,
    )
    low = _orbit_letters(alpha, alpha - 1, depth + 1)
    first = digit(alpha, alpha)
    up = (first.letter,) + _orbit_letters(alpha, first.next, depth)
    return _automaton_from_words(
        low[:depth],
        up[:depth],
        truncated=True,
        trunc_lower=low,
        trunc_upper=up,
    )


# -- attractor enumeration ----------------------------------------------------


def _seg(m: Mobius, q: Fraction) -> Fraction:
    return Fraction(
        m.a * q.numerator + m.b * q.denominator,
        m.c * q.numerator + m.d * q.denominator,
    )


# Grid resolutions tried in turn: sweeps run on the coarsest first and the
# surviving union is carried into the next, finer stage.  Steps shrink near
# the fine end because interval counts (and sweep costs) can grow quickly
# with resolution when the attractor is fractal.
_GRID_BITS = (16, 24, 32, 40, 44, 48, 52, 56, 60, 64)


def _transfer_series_bound(aut: LanguageAutomaton, lo_hull, hi_hull) -> float | None:
    """Upper bound on the summed powers of the measure-transfer matrix.

    Entry (q2, q) of the transfer matrix bounds the derivative of the
    dual letter maps along the edges q -> q2, taken over the attractor
    hull [lo_hull[q], hi_hull[q]] of state q.  When some power has
    column-sum norm below 1/2 the series sum is certified finite and an
    up-rounded bound is returned; otherwise None.
    """
    n = aut.n_states
    a = [[0.0] * n for _ in range(n)]
    for q in range(n):
        for li, q2 in enumerate(aut.delta[q]):
            if q2 is None:
                continue
            letter = aut.alphabet[li]
            if letter.eps < 0:
                den = letter.d - hi_hull[q]
            else:
                den = letter.d + max(lo_hull[q], 0.0)
            if den <= 0:
                return None
            a[q2][q] += _float_up(1.0 / (den * den))

    def norm1(m) -> float:
        return max(fsum(m[i][j] for i in range(n)) for j in range(n))

    def matmul(x, y):
        return [
            [_float_up(fsum(x[i][k] * y[k][j] for k in range(n))) for j in range(n)]
            for i in range(n)
        ]

    total = 1.0
    power = [row[:] for row in a]
    for _ in range(512):
        nm = norm1(power)
        if nm < 0.5:
            return _float_up(total / (1.0 - nm))
        total += nm
        power = matmul(power, a)
    return None


def _bridge_gaps(pairs, budget: float, grid: int):
    """Coalesce grid intervals across their smallest gaps within a budget.

    Bridging only grows the union, so the caller charges the returned
    (up-rounded) bridged length to the phantom slack.  Greedy smallest-
    first gives the largest count reduction for the budget.
    """
    if len(pairs) < 2 or budget <= 0:
        return pairs, 0.0
    gaps = sorted((pairs[i + 1][0] - pairs[i][1], i) for i in range(len(pairs) - 1))
    bridged: set[int] = set()
    used = 0
    for glen, i in gaps:
        if _float_up((used + glen) / grid) > budget:
            break
        used += glen
        bridged.add(i)
    if not bridged:
        return pairs, 0.0
    out = [pairs[0]]
    for i, p in enumerate(pairs[1:]):
        if i in bridged:
            out[-1] = (out[-1][0], p[1])
        else:
            out.append(p)
    return out, _float_up(used / grid)


def _enumerate_attractors(
    aut: LanguageAutomaton,
    tol: float,
    max_nodes: int,
) -> tuple[IntervalSet, IntervalSet, int]:
    """Interval unions enclosing both attractors, off by at most tol.

    Per automaton state, the closure of the cylinder images of words
    ending there is the fixed point of one interval-set equation: the
    seed [0, 1/(cap+1)] at the start state united with the one-letter
    dual images of the predecessor states' sets.  Sweeping that system
    from [0, 1] everywhere, with endpoints snapped outward to a dyadic
    grid, is monotone decreasing and lands on an exactly fixed union
    after finitely many sweeps (endpoints move in a finite lattice).
    Unfolding the fixed-point equation bounds the accumulated snap
    inflation: one sweep adds at most the recorded snap length, and a
    k-sweep-old addition has passed through k letter maps, so the total
    excess is the one-sweep ledger times the transfer series bound.
    That product becomes the published phantom slack; the tail slack is
    0 because the union never loses any of the attractor.  Stages of
    _GRID_BITS refine the grid only while the phantom exceeds tol, so
    transient fragmentation is absorbed on cheap coarse grids; at the
    end both unions are re-coarsened by bridging their smallest gaps,
    trading leftover budget for interval count.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    n = aut.n_states
    cap1 = aut.digit_cap + 1
    plain = aut.accept_plain

    # incoming edges as integer Moebius rows; dec marks decreasing maps
    edges_into: list[list[tuple[int, bool, int, int, int, int]]] = [
        [] for _ in range(n)
    ]
    for q in range(n):
        for li, q2 in enumerate(aut.delta[q]):
            if q2 is not None:
                letter = aut.alphabet[li]
                m = letter_matrices(letter.eps, letter.d)[1]
                edges_into[q2].append((q, letter.eps > 0, m.a, m.b, m.c, m.d))

    ops = 0
    sweeps = 0
    ledger = 0.0

    def sweep(vec, grid: int, seed_hi: int, seed_add: float):
        nonlocal ops, sweeps, ledger
        sweeps += 1
        added = seed_add
        out = []
        for q2 in range(n):
            parts = [(0, seed_hi)] if q2 == aut.start else []
            for q, dec, a, b, c, d in edges_into[q2]:
                for lo, hi in vec[q]:
                    if dec:
                        lo, hi = hi, lo
                    den1 = c * lo + d * grid
                    den2 = c * hi + d * grid
                    ql, rl = divmod((a * lo + b * grid) * grid, den1)
                    qh, rh = divmod((a * hi + b * grid) * grid, den2)
                    if rl:
                        added += rl / den1 / grid
                    if rh:
                        added += (den2 - rh) / den2 / grid
                        qh += 1
                    parts.append((ql, qh))
            parts.sort()
            merged: list[tuple[int, int]] = []
            for lo, hi in parts:
                if merged and lo <= merged[-1][1]:
                    if hi > merged[-1][1]:
                        merged[-1] = (merged[-1][0], hi)
                else:
                    merged.append((lo, hi))
            ops += len(merged)
            out.append(merged)
        # positive-term float accumulation; pad its rounding before use
        ledger = added * (1 + 1e-9)
        return out

    outer: list[list[tuple[int, int]]] = [[(0, 1)] for _ in range(n)]
    prev_bits = 0
    best = None
    best_phantom = math.inf
    failure = None
    for bits in _GRID_BITS:
        grid = 1 << bits
        shift = bits - prev_bits
        outer = [[(lo << shift, hi << shift) for lo, hi in s] for s in outer]
        prev_bits = bits
        q0, r0 = divmod(grid, cap1)
        seed_hi = q0 + (1 if r0 else 0)
        seed_add = (cap1 - r0) / cap1 / grid if r0 else 0.0
        fixed = False
        while sweeps < 20_000 and ops <= max_nodes:
            nxt = sweep(outer, grid, seed_hi, seed_add)
            fixed = nxt == outer
            outer = nxt
            if fixed:
                break
        if not fixed:
            failure = f"no fixed union within the refinement budget (grid 2^-{bits})"
            break
        lo_hull = [_float_down(s[0][0] / grid) if s else 0.0 for s in outer]
        hi_hull = [_float_up(s[-1][1] / grid) if s else 0.0 for s in outer]
        series = _transfer_series_bound(aut, lo_hull, hi_hull)
        if series is None:
            failure = "the letter maps could not be certified measure-contracting"
            break
        phantom = _float_up(series * ledger)
        if phantom < best_phantom:
            best_phantom, best = phantom, (outer, grid)
        if phantom <= tol:
            break
    else:
        failure = f"phantom bound {best_phantom:.3g} exceeds tol {tol:.3g}"

    def finish(vec, grid: int, phantom: float) -> tuple[IntervalSet, IntervalSet]:
        ext: list[tuple[int, int]] = []
        for s in vec:
            ext.extend(s)
        ext.sort()
        ext_merged: list[tuple[int, int]] = []
        for lo, hi in ext:
            if ext_merged and lo <= ext_merged[-1][1]:
                if hi > ext_merged[-1][1]:
                    ext_merged[-1] = (ext_merged[-1][0], hi)
            else:
                ext_merged.append((lo, hi))
        headroom = (tol - phantom) * 0.9
        pairs_p, used_p = _bridge_gaps(vec[plain], headroom, grid)
        pairs_e, used_e = _bridge_gaps(ext_merged, headroom, grid)

        def to_set(pairs, slack: float) -> IntervalSet:
            exact = tuple(
                (Fraction(lo, grid), Fraction(hi, grid)) for lo, hi in pairs
            )
            return IntervalSet(exact, 0.0, slack)

        return to_set(pairs_p, phantom + used_p), to_set(pairs_e, phantom + used_e)

    if failure is None:
        psi, psi_prime = finish(best[0], best[1], best_phantom)
        return psi, psi_prime, sweeps
    if best is not None:
        exc_sets = finish(best[0], best[1], best_phantom)
    else:
        exc_sets = finish(outer, 1 << prev_bits, math.inf)
    raise BudgetExceeded(
        f"attractor refinement failed: {failure}", best=(*exc_sets, sweeps)
    )


def _verify_cylinder_disjointness(
    aut: LanguageAutomaton,
    max_len: int = 9,
    max_words: int = 8_000,
) -> int:
    """Check that distinct admissible words map the seed core disjointly.

    Enumerates the extended language up to max_len letters (capped) and
    raises on any interior overlap between two cylinder intervals.
    """
    i0 = Fraction(1, aut.digit_cap + 1)
    letter_mats = [letter_matrices(a.eps, a.d)[1] for a in aut.alphabet]
    pairs: list[tuple[Fraction, Fraction]] = []
    stack: list[tuple[int, int, Mobius]] = [(aut.start, 0, Mobius.identity())]
    while stack and len(pairs) < max_words:
        state, wl, m = stack.pop()
        pairs.append(tuple(sorted((_seg(m, Fraction(0)), _seg(m, i0)))))
        if wl < max_len:
            for li, nxt in enumerate(aut.delta[state]):
                if nxt is not None:
                    stack.append((nxt, wl + 1, letter_mats[li] @ m))
    pairs.sort()
    for (_, hi1), (lo2, _) in zip(pairs, pairs[1:]):
        if lo2 < hi1:
            raise AlphaCFError(
                f"internal: admissible cylinder intervals overlap near [{lo2}, {hi1}]"
            )
    return len(pairs)


def psi_sets(
    alpha,
    sync: SyncResult,
    tol: float = 1e-9,
    *,
    depth: int = 64,
    max_nodes: int = 2_000_000,
) -> tuple[IntervalSet, IntervalSet]:
    """Attractor interval sets for the plain and extended dual languages.

    Both sets come back as grid-snapped outer unions: they contain their
    attractor in full (tail 0) and may overshoot it by at most the phantom
    field (below tol on success).  The admissible cylinders are
    spot-checked for disjointness along the way.  Raises BudgetExceeded
    carrying the best pair found when the refinement cannot reach tol.
    """
    aut = build_automaton(alpha, sync, depth=depth)
    _verify_cylinder_disjointness(aut)
    try:
        psi, psi_prime, _ = _enumerate_attractors(aut, tol, max_nodes)
    except BudgetExceeded as exc:
        exc.best = exc.best[:2]
        raise
    return psi, psi_prime


# -- slab decomposition of the domain -----------------------------------------


class OmegaPiece:
    """One vertical slab [x1, x2] x (interval set), labelled by its prefix."""

    __slots__ = ("x1", "x2", "ys", "word")

    def __init__(self, x1: ExactNumber, x2: ExactNumber, ys: IntervalSet, word: Word):
        self.x1 = x1
        self.x2 = x2
        self.ys = ys
        self.word = word

    def __repr__(self) -> str:
        return (
            f"OmegaPiece([{decimal_str(self.x1, 6)}, {decimal_str(self.x2, 6)}], "
            f"{len(self.ys.intervals)} intervals, word={format_word(self.word) or 'empty'})"
        )


@dataclass(frozen=True)
class DomainApprox:
    """Rectangle enclosure of one extension domain with a measure bracket."""

    alpha: ExactNumber
    rectangles: tuple[OmegaPiece, ...]
    mu_lo: mpmath.mpf
    mu_hi: mpmath.mpf
    depth: int
    certified: bool
    trunc_lower_mass: mpmath.mpf | None = None
    trunc_upper_mass: mpmath.mpf | None = None


def _density_sup(x1) -> float:
    """Upper bound for 1/(1+xy)^2 over [x1, 1] x [0, 1], for x1 > -1."""
    if x1 >= 0:
        return 1.0
    return _float_up(1.0 / _float_down(1 + x1) ** 2)


def _slab_specs(alpha: ExactNumber, aut: LanguageAutomaton):
    """(x_left, dual matrix, prefix word, uses_extended) per nonempty slab."""
    specs = []
    for upper, prefixes in ((False, aut.lower_prefixes), (True, aut.upper_prefixes)):
        endpoint = alpha if upper else alpha - 1
        for w in prefixes:
            x_left = word_matrix(w).apply(endpoint)
            if not (alpha - 1 <= x_left <= alpha):
                raise AlphaCFError("internal: slab endpoint escaped the base interval")
            if x_left < alpha:  # a slab starting at alpha is empty
                specs.append((x_left, dual_word_matrix(w), w, upper))
    return specs


def _bridge_frac_gaps(pairs, budget: float):
    """Exact-endpoint version of _bridge_gaps; returns (pairs, used length)."""
    if len(pairs) < 2 or budget <= 0:
        return pairs, 0.0
    gaps = sorted(
        (_float_up(pairs[i + 1][0] - pairs[i][1]), i) for i in range(len(pairs) - 1)
    )
    bridged: set[int] = set()
    used = 0.0
    for glen, i in gaps:
        if used + glen > budget:
            break
        used += glen
        bridged.add(i)
    if not bridged:
        return pairs, 0.0
    out = [pairs[0]]
    for i, p in enumerate(pairs[1:]):
        if i in bridged:
            out[-1] = (out[-1][0], p[1])
        else:
            out.append(p)
    return tuple(out), used * (1 + 1e-9)


def _slab_mu(x1, x2, ys: IntervalSet, prec: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Bracket the slab's share of the invariant mass.

    The integral over the interval union is exact; the upper end adds a
    density-sup allowance for the set's tail and the lower end deducts one
    for its phantom, so each side errs outward on its own.
    """
    with mpmath.workprec(prec):
        raw = mpmath.fsum(mu_rect(x1, x2, y1, y2, prec) for y1, y2 in ys.intervals)
        width = to_mpf(x2, prec) - to_mpf(x1, prec)
        dens = mpmath.mpf(_density_sup(x1))
        hi = raw + dens * width * ys.tail
        lo = raw - dens * width * ys.phantom
        return (lo if lo > 0 else mpmath.mpf(0)), hi


def _assemble(
    alpha: ExactNumber,
    aut: LanguageAutomaton,
    psi: IntervalSet,
    psi_prime: IntervalSet,
    enum_depth: int,
    prec: int,
    tol: float,
) -> DomainApprox:
    # Narrow slabs and overfragmented fibers would make the per-interval
    # integration the dominant cost, so a shared pool of tol/4 buys
    # shortcuts: a slab whose whole mass fits the allowance contributes
    # its fiber hull to the upper end alone, and otherwise the smallest
    # fiber gaps are bridged (charged to phantom) before integrating.
    pieces: list[OmegaPiece] = []
    budget = tol / 4
    with mpmath.workprec(prec):
        mu_lo = mpmath.mpf(0)
        mu_hi = mpmath.mpf(0)
        for x_left, dual, w, upper in _slab_specs(alpha, aut):
            src = psi_prime if upper else psi
            if src.is_empty:
                pieces.append(OmegaPiece(x_left, alpha, src, w))
                continue
            width = _float_up(alpha - x_left)
            dens = _density_sup(x_left)
            h1, h2 = sorted((dual.apply(p) for p in src.hull()))
            hull_len = _float_up(h2 - h1)
            allowance = min(budget, tol / 32)
            if dens * width * hull_len <= allowance:
                budget -= dens * width * hull_len
                ys = IntervalSet(((h1, h2),), 0.0, hull_len)
                pieces.append(OmegaPiece(x_left, alpha, ys, w))
                mu_hi += mu_rect(x_left, alpha, h1, h2, prec)
                continue
            ys = src.apply(dual)
            coarse, used = _bridge_frac_gaps(ys.intervals, allowance / (dens * width))
            if used:
                budget -= dens * width * used
                ys = IntervalSet(coarse, ys.tail, ys.phantom + used)
            pieces.append(OmegaPiece(x_left, alpha, ys, w))
            lo, hi = _slab_mu(x_left, alpha, ys, prec)
            mu_lo += lo
            mu_hi += hi
        trunc_low = trunc_up = None
        if aut.truncated:
            # crude mass estimates for the two cut-off orbit cylinders
            def cylinder_mass(cyl: Word) -> mpmath.mpf:
                m = dual_word_matrix(cyl)
                y1, y2 = sorted((m.apply(Fraction(0)), m.apply(Fraction(1))))
                return mu_rect(alpha - 1, alpha, y1, y2, prec)

            trunc_low = cylinder_mass(aut.trunc_lower)
            trunc_up = cylinder_mass(aut.trunc_upper)
            mu_hi += trunc_low + trunc_up
    return DomainApprox(
        alpha=alpha,
        rectangles=tuple(pieces),
        mu_lo=mu_lo,
        mu_hi=mu_hi,
        depth=enum_depth,
        certified=not aut.truncated,
        trunc_lower_mass=trunc_low,
        trunc_upper_mass=trunc_up,
    )


def omega_decomposition(
    alpha,
    sync: SyncResult,
    tol: float = 1e-9,
    *,
    depth: int = 64,
    max_nodes: int = 2_000_000,
    prec: int = 128,
) -> DomainApprox:
    """Slab decomposition of the extension domain with a measure bracket.

    Synchronizing parameters (interior or right endpoint of their interval)
    get a certified bracket of width at most tol.  Non-synchronizing ones
    are cut at `depth` orbit letters; the bracket is then best-effort, with
    the two dropped cylinder masses reported and added to the upper end.
    """
    alpha = as_exact(alpha)
    aut = build_automaton(alpha, sync, depth=depth)
    if not aut.truncated and sync.gamma is not None:
        if not (sync.gamma.zeta <= alpha <= sync.gamma.eta):
            raise DomainError("alpha lies outside the synchronization interval")

    scale = fsum(
        _density_sup(x_left) * _float_up(alpha - x_left)
        for x_left, _, _, _ in _slab_specs(alpha, aut)
    )
    psi_tol = tol / (2 * max(scale, 1e-30))
    try:
        psi, psi_prime, enum_depth = _enumerate_attractors(aut, psi_tol, max_nodes)
    except BudgetExceeded as exc:
        exc.best = _assemble(alpha, aut, *exc.best, prec, tol)
        raise
    return _assemble(alpha, aut, psi, psi_prime, enum_depth, prec, tol)


def fiber_at(approx: DomainApprox, x) -> IntervalSet:
    """Union of the slab interval sets whose x-range contains x."""
    x = as_exact(x)
    out = IntervalSet(())
    for piece in approx.rectangles:
        if piece.x1 <= x <= piece.x2:
            out = out.union(piece.ys)
    return out


# -- measure and entropy brackets ---------------------------------------------


@dataclass(frozen=True)
class MeasureBracket:
    """Certified (or flagged best-effort) enclosure of the domain measure.

    The entropy bracket comes from the constant product: entropy times
    measure is pi^2/6, so h_lo pairs with hi and h_hi with lo.
    """

    alpha: ExactNumber
    lo: mpmath.mpf
    hi: mpmath.mpf
    h_lo: mpmath.mpf
    h_hi: mpmath.mpf
    depth: int
    certified: bool


class WordSum:
    """Partial word-by-word domain mass with its geometric tail bound."""

    __slots__ = ("total", "tail_bound", "count", "length")

    def __init__(self, total, tail_bound, count, length):
        self.total = total
        self.tail_bound = tail_bound
        self.count = count
        self.length = length


def word_sum_measure(
    alpha,
    sync: SyncResult,
    length: int = 10,
    *,
    depth: int = 64,
    prec: int = 128,
    max_words: int = 500_000,
) -> WordSum:
    """Mass of all admissible-word rectangles for words shorter than `length`.

    Each extended-language word contributes its ending state's base interval
    times the dual image of [0, 1/(cap+1)].  The returned tail bound
    (cap/(cap+alpha))^length * log(1+1/alpha) covers the dropped longer
    words when alpha is a label value or does not synchronize at all.
    """
    alpha = as_exact(alpha)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        aut = build_automaton(alpha, sync, depth=max(depth, length + 2))
    cap = aut.digit_cap
    i0 = Fraction(1, cap + 1)

    n_lower = len(aut.lower_prefixes)
    x_left = [
        word_matrix(w).apply(alpha - 1 if s < n_lower else alpha)
        for s, w in enumerate(aut.lower_prefixes + aut.upper_prefixes)
    ]
    letter_mats = [letter_matrices(a.eps, a.d)[1] for a in aut.alphabet]
    count = 0
    with mpmath.workprec(prec):
        total = mpmath.mpf(0)
        stack: list[tuple[int, int, Mobius]] = [(aut.start, 0, Mobius.identity())]
        while stack:
            state, wl, m = stack.pop()
            count += 1
            if count > max_words:
                raise BudgetExceeded(
                    f"word sum passed {max_words} words before length {length}",
                    best=WordSum(total, None, count, length),
                )
            if x_left[state] < alpha:
                y1, y2 = sorted((m.apply(Fraction(0)), m.apply(i0)))
                total += mu_rect(x_left[state], alpha, y1, y2, prec)
            if wl + 1 < length:
                for li, nxt in enumerate(aut.delta[state]):
                    if nxt is not None:
                        stack.append((nxt, wl + 1, letter_mats[li] @ m))
        ratio = to_mpf(Fraction(cap), prec) / to_mpf(cap + alpha, prec)
        tail = ratio**length * mpmath.log(1 + 1 / to_mpf(alpha, prec))
    return WordSum(total, tail, count, length)


def _validate_against_word_sum(
    alpha: ExactNumber,
    sync: SyncResult,
    approx: DomainApprox,
    prec: int,
) -> None:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        n_letters = len(build_automaton(alpha, sync, depth=8).alphabet)
    length = 8 if n_letters > 3 else 10
    ws = word_sum_measure(alpha, sync, length, prec=prec)
    with mpmath.workprec(prec):
        pad = mpmath.mpf(2) ** (40 - prec)
        if approx.certified and ws.total > approx.mu_hi + pad:
            raise AlphaCFError(
                "internal: word-sum lower mass exceeds the certified bracket"
            )
        if approx.mu_lo > ws.total + ws.tail_bound + pad:
            raise AlphaCFError(
                "internal: bracket lower end exceeds the word sum plus its tail"
            )


def measure_bracket(
    alpha,
    tol: float = 1e-9,
    *,
    depth: int = 64,
    max_nodes: int = 2_000_000,
    prec: int = 128,
    max_iter: int = 10_000,
) -> MeasureBracket:
    """Bracket [lo, hi] around the domain measure, with the entropy bracket.

    Synchronizing parameters give a certified enclosure of width at most
    tol.  Label values and non-synchronizing parameters are additionally
    cross-checked against the truncated word-by-word sum and its geometric
    tail bound.  Floats are read as their shortest decimal literal.
    """
    if isinstance(alpha, float):
        alpha = Fraction(str(alpha))
    alpha = as_exact(alpha)
    sync = synchronize(alpha, max_iter=max_iter)
    try:
        approx = omega_decomposition(
            alpha, sync, tol, depth=depth, max_nodes=max_nodes, prec=prec
        )
    except BudgetExceeded as exc:
        exc.best = _bracket_from(exc.best, prec)
        raise
    is_label = (
        sync.status == "synchronizing"
        and sync.gamma is not None
        and alpha == sync.gamma.chi
    )
    if is_label or not approx.certified:
        _validate_against_word_sum(alpha, sync, approx, prec)
    return _bracket_from(approx, prec)


def _bracket_from(approx: DomainApprox, prec: int) -> MeasureBracket:
    with mpmath.workprec(prec):
        pi2_6 = mpmath.pi**2 / 6
        return MeasureBracket(
            alpha=approx.alpha,
            lo=approx.mu_lo,
            hi=approx.mu_hi,
            h_lo=pi2_6 / approx.mu_hi,
            h_hi=pi2_6 / approx.mu_lo,
            depth=approx.depth,
            certified=approx.certified,
        )


def mu_along_interval(
    v: Sequence[Letter],
    alpha,
    tol: float = 1e-9,
    *,
    max_nodes: int = 2_000_000,
    prec: int = 128,
) -> mpmath.mpf:
    """Domain measure at alpha inside the closed interval of the word v.

    Along [zeta_v, eta_v] the measure moves linearly in the mass the
    attractor assigns to [zeta_v - 1, alpha - 1], weighted by the length
    defect of the hat word: measure(alpha) = measure(zeta_v) + defect *
    mass.  Words with defect 0 yield the constant value.
    """
    data = interval_data(v)
    alpha = as_exact(alpha)
    if not (data.zeta <= alpha <= data.eta):
        raise DomainError(
            f"alpha = {format_exact(alpha)} is outside "
            f"[{format_exact(data.zeta)}, {format_exact(data.eta)}]"
        )
    base = measure_bracket(data.zeta, tol / 2, max_nodes=max_nodes, prec=prec)
    defect = data.len_diff
    with mpmath.workprec(prec):
        if defect == 0 or alpha == data.zeta:
            return (base.lo + base.hi) / 2

        vprime = apply_W(apply_shift(data.vhat, -1))
        aut = _automaton_from_words(data.v, vprime)
        width = float(to_mpf(data.eta, prec) - to_mpf(data.zeta, prec))
        dens = _density_sup(data.zeta - 1)
        psi_tol = tol / (2 * abs(defect)) / max(dens * _float_up(width), 1e-30)
        psi, _, _ = _enumerate_attractors(aut, psi_tol, max_nodes)
        mass_lo, mass_hi = _slab_mu(data.zeta - 1, alpha - 1, psi, prec)
        lo = base.lo + defect * (mass_hi if defect < 0 else mass_lo)
        hi = base.hi + defect * (mass_hi if defect > 0 else mass_lo)
        return (lo + hi) / 2


# -- the two-dimensional map ---------------------------------------------------


def natext_step(alpha, point: tuple) -> tuple[ExactNumber, ExactNumber]:
    """One step of the planar extension: (x, y) -> (map x, dual-matrix y).

    The dual coordinate of digit (eps:d) moves to 1/(d + eps*y).  The
    x-coordinate must avoid 0, where no digit exists.
    """
    alpha = as_exact(alpha)
    x, y = point
    x, y = as_exact(x), as_exact(y)
    if not (0 <= y <= 1):
        raise DomainError(f"dual coordinate {format_exact(y)} is outside [0, 1]")
    if x == 0:
        raise ZeroDigit("the planar extension has no digit over x = 0")
    step = digit(alpha, x)
    return step.next, letter_matrices(step.letter.eps, step.letter.d)[1].apply(y)


# -- exports -------------------------------------------------------------------


def _dec(x: ExactNumber) -> str:
    return repr(float(to_mpf(x, 80)))


def domain_csv(approx: DomainApprox) -> str:
    """CSV rows x1,x2,y1,y2,word - one row per rectangle of the enclosure."""
    lines = ["x1,x2,y1,y2,word"]
    for piece in approx.rectangles:
        w = format_word(piece.word)
        for y1, y2 in piece.ys.intervals:
            lines.append(f"{_dec(piece.x1)},{_dec(piece.x2)},{_dec(y1)},{_dec(y2)},{w}")
    return "\n".join(lines) + "\n"


def domain_svg(
    approx: DomainApprox,
    *,
    style: str = "fill:#5a7d9a;fill-opacity:0.65;stroke:none",
) -> str:
    """SVG picture of the enclosure over [alpha-1, alpha] x [0, 1].

    The viewBox is the domain itself (y flipped into screen direction), so
    every rectangle carries plain domain coordinates.
    """
    x0 = float(to_mpf(approx.alpha, 80)) - 1
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{x0:.10g} 0 1 1" preserveAspectRatio="none">'
    ]
    for piece in approx.rectangles:
        px = float(to_mpf(piece.x1, 80))
        pw = float(to_mpf(approx.alpha - piece.x1, 80))
        for y1, y2 in piece.ys.intervals:
            fy1, fy2 = float(to_mpf(y1, 80)), float(to_mpf(y2, 80))
            out.append(
                f'<rect x="{px:.10g}" y="{1 - fy2:.10g}" width="{pw:.10g}" '
                f'height="{fy2 - fy1:.10g}" style="{style}"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def measure_json(bracket: MeasureBracket) -> str:
    """JSON object with the measure and entropy bracket for one alpha."""
    return json.dumps(
        {
            "alpha": {
                "exact": format_exact(bracket.alpha),
                "decimal": decimal_str(bracket.alpha, 30),
            },
            "mu_lo": float(bracket.lo),
            "mu_hi": float(bracket.hi),
            "h_lo": float(bracket.h_lo),
            "h_hi": float(bracket.h_hi),
            "depth": bracket.depth,
            "certified": bracket.certified,
        },
        indent=2,
    )
