"""Continued fractions over GF(2)((1/z)) and the Thue-Morse quotient stream.

A stream holds an integer part a0 (any polynomial, possibly zero) and a
tuple of nonconstant partial quotients.  Convergents come from
left-to-right 2x2 matrix products of [[a, 1], [1, 0]] blocks; for
Thue-Morse prefixes of length 2^j the fold collapses to the doubling
recurrence A_{j+1} = A_j B_j, B_{j+1} = B_j A_j.

cf_eval turns a finite stream prefix into a series trusted to the exact
continued-fraction error bound; cf_expand walks the other way, emitting
quotients only while the horizon proves them and reporting exhaustion
honestly instead of guessing.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .gf2 import LaurentZ, PolyZ, bit_reverse, clsq, series_div


class InsufficientStreamError(ValueError):
    """The stream prefix cannot support the requested precision or window."""


# -- Thue-Morse words ---------------------------------------------------------


@dataclass(frozen=True)
class TMWord:
    """Prefix of the Thue-Morse word over an ordered two-letter alphabet.

    Bit k of letters is set iff position k holds the second letter.  The
    word starts with the first letter: a, b, b, a, b, a, a, b, ...
    """

    length: int
    letters: int

    @classmethod
    def prefix(cls, n: int) -> "TMWord":
        if n < 0:
            raise ValueError("negative prefix length")
        m, w = 1, 0
        while m < n:
            # positions 2k copy position k, positions 2k+1 complement it
            w = clsq(w) | (clsq(~w & ((1 << m) - 1)) << 1)
            m *= 2
        return cls(n, w & ((1 << n) - 1))

    def letter_is_second(self, k: int) -> bool:
        if not 0 <= k < self.length:
            raise IndexError("position outside the prefix")
        return bool((self.letters >> k) & 1)

    def is_palindrome(self) -> bool:
        return bit_reverse(self.letters, self.length) == self.letters if self.length else True

    def prefix_word(self, n: int) -> "TMWord":
        if n > self.length:
            raise ValueError("longer than the stored prefix")
        return TMWord(n, self.letters & ((1 << n) - 1))


def tm_stream(a: PolyZ, b: PolyZ, count: int) -> "PQStream":
    """The stream [0; t_0, t_1, ...] over letters (a, b), first `count` quotients."""
    w = TMWord.prefix(count)
    return PQStream(
        PolyZ(0),
        tuple(b if w.letter_is_second(k) else a for k in range(count)),
    )


# -- streams and convergents --------------------------------------------------


@dataclass(frozen=True)
class PQStream:
    """Integer part plus partial quotients; exhausted marks a precision cut."""

    a0: PolyZ
    quotients: tuple[PolyZ, ...]
    exhausted: bool = False

    def __post_init__(self):
        for q in self.quotients:
            if q.degree < 1:
                raise ValueError("partial quotients must be nonconstant")

    def __len__(self) -> int:
        return len(self.quotients)

    def degree_sum(self) -> int:
        return sum(q.degree for q in self.quotients)


@dataclass(frozen=True)
class ConvergentPair:
    """Convergent p/q after `index` partial quotients, with its predecessor."""

    p: PolyZ
    q: PolyZ
    p_prev: PolyZ
    q_prev: PolyZ
    index: int

    def det_ok(self) -> bool:
        # p_k q_{k-1} + p_{k-1} q_k = 1 for every k
        return (self.p * self.q_prev + self.p_prev * self.q) == PolyZ(1)


def mat_mul4(x, y, reverse: bool = False):
    """Product of 2x2 matrices as 4-tuples (e00, e01, e10, e11) over any ring.

    reverse=True computes entry products as v*u, exercising the opposite
    operand order in the underlying kernel for run-twice checks.
    """
    if reverse:
        return (
            y[0] * x[0] + y[2] * x[1],
            y[1] * x[0] + y[3] * x[1],
            y[0] * x[2] + y[2] * x[3],
            y[1] * x[2] + y[3] * x[3],
        )
    return (
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    )


def tm_fold(n: int, ma, mb, reverse: bool = False):
    """Product of quotient matrices along the first n Thue-Morse letters.

    Uses the block structure t_{2k} = t_k, t_{2k+1} = complement: a prefix
    of even length is the half-length prefix over the letter matrices
    (ma*mb, mb*ma), so powers of two cost log n matrix products.
    """
    if n < 1:
        raise ValueError("fold needs at least one letter")
    if n == 1:
        return ma
    if n & 1:
        prev = tm_fold(n - 1, ma, mb, reverse)
        last = mb if (n - 1).bit_count() & 1 else ma
        return mat_mul4(prev, last, reverse)
    return tm_fold(
        n >> 1, mat_mul4(ma, mb, reverse), mat_mul4(mb, ma, reverse), reverse
    )


def quotient_matrix(c: PolyZ):
    return (c, PolyZ(1), PolyZ(1), PolyZ(0))


def cf_convergents(stream: PQStream, k: int | None = None) -> ConvergentPair:
    """Convergent after k partial quotients via the left-to-right matrix fold."""
    if k is None:
        k = len(stream.quotients)
    if k > len(stream.quotients):
        raise InsufficientStreamError(f"stream holds {len(stream.quotients)} quotients, need {k}")
    mat = quotient_matrix(stream.a0)
    for a in stream.quotients[:k]:
        mat = mat_mul4(mat, quotient_matrix(a))
    return ConvergentPair(p=mat[0], p_prev=mat[1], q=mat[2], q_prev=mat[3], index=k)


def cf_eval(stream: PQStream, precision: int) -> LaurentZ:
    """Series value of the infinite continued fraction the stream prefixes.

    The last convergent p/q satisfies |value - p/q| < |q|^{-2}, so the
    expansion of p/q is exact down to z^{-2 deg q}; the stream must carry
    2 * degree_sum >= precision, otherwise the precision is unreachable.
    """
    sd = stream.degree_sum()
    if 2 * sd < precision:
        raise InsufficientStreamError(
            f"need quotient degrees summing to {precision}/2, stream has {sd}"
        )
    cp = cf_convergents(stream)
    assert cp.q.degree == sd
    return series_div(cp.p, cp.q, -2 * sd)


def cf_expand(x: LaurentZ, count: int) -> PQStream:
    """Extract up to `count` partial quotients, stopping when the horizon
    can no longer certify one (exhausted=True) or the tail is exactly zero.
    """
    if (not x.exact) and x.horizon > 0:
        return PQStream(PolyZ(0), (), True)
    a0 = x.poly_part()
    cur = x.frac() if x.exact or x.horizon <= -1 else None
    quotients: list[PolyZ] = []
    exhausted = cur is None
    while cur is not None and len(quotients) < count:
        if cur.is_zero_within():
            exhausted = not cur.exact
            break
        cur = cur.inv()
        if (not cur.exact) and cur.horizon > 0:
            exhausted = True
            break
        quotients.append(cur.poly_part())
        if (not cur.exact) and cur.horizon > -1:
            exhausted = True
            break
        cur = cur.frac()
    return PQStream(a0, tuple(quotients), exhausted)


# -- quotient degree statistics -----------------------------------------------


@dataclass(frozen=True)
class SpectrumReport:
    """Quotient degrees over a window, with the implied Lagrange estimate."""

    window: int
    max_degree: int
    histogram: dict[int, int] = field(compare=False)
    lagrange_log2: int = 0


def spectrum_window(stream: PQStream, window: int) -> SpectrumReport:
    if window > len(stream.quotients):
        raise InsufficientStreamError(
            f"window {window} exceeds the {len(stream.quotients)} extracted quotients"
        )
    degs = [q.degree for q in stream.quotients[:window]]
    hist = dict(Counter(degs))
    mx = max(degs)
    return SpectrumReport(window=window, max_degree=mx, histogram=hist, lagrange_log2=-mx)
