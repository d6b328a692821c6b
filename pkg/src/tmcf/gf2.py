"""Exact arithmetic in GF(2)[z] and truncated Laurent series in z^{-1}.

Polynomials over GF(2) are bit-packed into Python ints: bit i holds the
coefficient of z^i, so addition is XOR and the representation is canonical.
Products are routed to one of two kernels: an XOR-shift loop over the set
bits of the cheaper operand, or, above a size threshold, a padded
Kronecker-to-integer substitution (each coefficient gets a lane wide enough
that integer carries cannot reach the next one) evaluated with a single GMP
multiply and unpacked with numpy.

Laurent series in z^{-1} are truncated with an explicit horizon: bit i of
the mantissa holds the coefficient of z^{horizon+i}, and horizon is the
lowest exponent that is guaranteed correct.  Every operation propagates
horizons soundly; nothing is ever reported below the propagated horizon.
Series lifted from finite objects (polynomials, Laurent polynomials) are
marked exact and carry no horizon penalty.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np

NEG_INF = float("-inf")

# Kernel thresholds, tunable.  Below them the XOR-shift loop wins because
# the padded-multiply path pays fixed packing/unpacking costs.
_SPARSE_POPCOUNT = 16
_SCHOOLBOOK_BITS = 1024


def _mk_spread_table(stride: int) -> list[bytes]:
    table = []
    for v in range(256):
        chunk = bytearray(8 * stride)
        for j in range(8):
            if (v >> j) & 1:
                chunk[j * stride] = 1
        table.append(bytes(chunk))
    return table


_SPREAD1 = _mk_spread_table(1)
_SPREAD2 = _mk_spread_table(2)
_SPREAD3: list[bytes] | None = None  # 16-bit chunks, built on first big multiply


def _mk_square_table() -> list[bytes]:
    table = []
    for v in range(256):
        w = 0
        for j in range(8):
            if (v >> j) & 1:
                w |= 1 << (2 * j)
        table.append(w.to_bytes(2, "little"))
    return table


_SQUARE_TABLE = _mk_square_table()


def _spread(x: int, stride: int) -> int:
    """Insert stride-1 zero bytes between coefficient bits of x."""
    n = (x.bit_length() + 7) // 8
    raw = x.to_bytes(n, "little")
    if stride == 1:
        return int.from_bytes(b"".join([_SPREAD1[v] for v in raw]), "little")
    if stride == 2:
        return int.from_bytes(b"".join([_SPREAD2[v] for v in raw]), "little")
    global _SPREAD3
    if _SPREAD3 is None:
        base = _mk_spread_table(3)
        _SPREAD3 = [base[w & 0xFF] + base[w >> 8] for w in range(65536)]
    if n & 1:
        raw += b"\x00"
    words = memoryview(raw).cast("H")
    return int.from_bytes(b"".join([_SPREAD3[w] for w in words]), "little")


def _unspread(p: int, stride: int) -> int:
    """Extract the low bit of every stride-th byte of p."""
    n = (p.bit_length() + 7) // 8
    n = ((n + stride - 1) // stride) * stride
    raw = p.to_bytes(n, "little")
    lanes = np.frombuffer(raw, dtype=np.uint8)[0::stride] & 1
    return int.from_bytes(np.packbits(lanes, bitorder="little").tobytes(), "little")


def clmul(x: int, y: int) -> int:
    """Carryless (GF(2)) product of two bit-packed polynomials."""
    if not x or not y:
        return 0
    bx, by = x.bit_length(), y.bit_length()
    if min(bx, by) <= _SCHOOLBOOK_BITS or min(x.bit_count(), y.bit_count()) <= _SPARSE_POPCOUNT:
        if x.bit_count() < y.bit_count():
            x, y = y, x
        acc = 0
        while y:
            low = y & -y
            acc ^= x << (low.bit_length() - 1)
            y ^= low
        return acc
    # Padded path: each convolution coefficient is at most min(bx, by), so a
    # lane of 8*stride bits never overflows into its neighbor.
    m = min(bx, by)
    if m < (1 << 8):
        stride = 1
    elif m < (1 << 16):
        stride = 2
    elif m < (1 << 24):
        stride = 3
    else:
        raise ValueError("operands too large for padded multiply lanes")
    prod = gmpy2.mpz(_spread(x, stride)) * gmpy2.mpz(_spread(y, stride))
    return _unspread(int(prod), stride)


def clsq(x: int) -> int:
    """Carryless square: the Frobenius map, bit i moves to bit 2i."""
    if not x:
        return 0
    raw = x.to_bytes((x.bit_length() + 7) // 8, "little")
    return int.from_bytes(b"".join([_SQUARE_TABLE[v] for v in raw]), "little")


def cldivmod(x: int, y: int) -> tuple[int, int]:
    """Quotient and remainder of bit-packed polynomial division."""
    if not y:
        raise ZeroDivisionError("polynomial division by zero")
    ly = y.bit_length()
    q = 0
    while x.bit_length() >= ly:
        shift = x.bit_length() - ly
        q |= 1 << shift
        x ^= y << shift
    return q, x


def clgcd(x: int, y: int) -> int:
    """Greatest common divisor of bit-packed polynomials (monic by construction)."""
    while y:
        x, y = y, cldivmod(x, y)[1]
    return x


def bit_reverse(x: int, width: int) -> int:
    """Reverse the low `width` bits of x."""
    if width <= 0:
        if x:
            raise ValueError("value wider than reversal width")
        return 0
    if x >> width:
        raise ValueError("value wider than reversal width")
    if width <= 64:
        return int(f"{x:0{width}b}"[::-1], 2)
    n = (width + 7) // 8
    bits = np.unpackbits(
        np.frombuffer(x.to_bytes(n, "little"), dtype=np.uint8), bitorder="little"
    )[:width]
    rev = np.packbits(bits[::-1], bitorder="little")
    return int.from_bytes(rev.tobytes(), "little")


def _alternating_mask(width: int, parity: int) -> int:
    """Bits at positions congruent to parity mod 2, below width."""
    if width <= 0:
        return 0
    n = width + (width & 1)
    mask = ((1 << n) - 1) // 3  # 0b...010101
    return (mask << 1) & ((1 << width) - 1) if parity else mask


def winv(c: int, count: int) -> int:
    """Inverse of a unit power series (bit j = coefficient of w^j) mod w^count.

    Newton iteration; in characteristic 2 the error squares exactly at each
    step, so precision doubles per multiply pair.
    """
    if not c & 1:
        raise ZeroDivisionError("series inverse needs a unit constant term")
    y = 1
    t = 1
    while t < count:
        t = min(2 * t, count)
        mask = (1 << t) - 1
        err = (clmul(c & mask, y) & mask) ^ 1
        y = (y ^ (clmul(y, err) & mask)) & mask
    return y


def default_precision() -> int:
    """Working precision (series coefficient count), overridable via TMCF_PREC."""
    return int(os.environ.get("TMCF_PREC", "4096"))


@dataclass(frozen=True)
class PolyZ:
    """Polynomial over GF(2) in z, bit-packed (bit i = coefficient of z^i)."""

    bits: int

    def __post_init__(self):
        if self.bits < 0:
            raise ValueError("negative bit pattern")

    @property
    def degree(self) -> int | float:
        return self.bits.bit_length() - 1 if self.bits else NEG_INF

    def __bool__(self) -> bool:
        return bool(self.bits)

    def __add__(self, other: "PolyZ") -> "PolyZ":
        return PolyZ(self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: "PolyZ") -> "PolyZ":
        return PolyZ(clmul(self.bits, other.bits))

    def square(self) -> "PolyZ":
        return PolyZ(clsq(self.bits))

    def __pow__(self, e: int) -> "PolyZ":
        if e < 0:
            raise ValueError("negative exponent")
        acc = PolyZ(1)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base.square()
            e >>= 1
        return acc

    def __divmod__(self, other: "PolyZ") -> tuple["PolyZ", "PolyZ"]:
        q, r = cldivmod(self.bits, other.bits)
        return PolyZ(q), PolyZ(r)

    def __floordiv__(self, other: "PolyZ") -> "PolyZ":
        return divmod(self, other)[0]

    def __mod__(self, other: "PolyZ") -> "PolyZ":
        return divmod(self, other)[1]

    def gcd(self, other: "PolyZ") -> "PolyZ":
        return PolyZ(clgcd(self.bits, other.bits))

    def derivative(self) -> "PolyZ":
        # only odd exponents survive in characteristic 2
        shifted = self.bits >> 1
        return PolyZ(shifted & _alternating_mask(shifted.bit_length(), 0))

    def coeff(self, i: int) -> int:
        return (self.bits >> i) & 1 if i >= 0 else 0

    def compose(self, other: "PolyZ") -> "PolyZ":
        """Substitute `other` for z (Horner from the top coefficient)."""
        acc = PolyZ(0)
        for i in range(self.bits.bit_length() - 1, -1, -1):
            acc = acc * other
            if (self.bits >> i) & 1:
                acc = acc + PolyZ(1)
        return acc

    def as_series(self) -> "LaurentZ":
        return LaurentZ(self.bits, 0, True)

    def to_hex(self) -> str:
        return hex(self.bits)

    @classmethod
    def parse(cls, text: str) -> "PolyZ":
        """Parse "z^3+z+1", "z", "1", "0", or a hex literal like "0x0b"."""
        text = text.strip().replace(" ", "")
        if text.lower().startswith("0x"):
            return cls(int(text, 16))
        bits = 0
        for term in text.split("+"):
            if term == "0":
                continue
            if term == "1":
                bits ^= 1
            elif term == "z":
                bits ^= 2
            elif term.startswith("z^"):
                bits ^= 1 << int(term[2:])
            else:
                raise ValueError(f"cannot parse polynomial term {term!r}")
        return cls(bits)

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        terms = []
        for i in range(self.bits.bit_length() - 1, -1, -1):
            if (self.bits >> i) & 1:
                terms.append("1" if i == 0 else "z" if i == 1 else f"z^{i}")
        return "+".join(terms)

    def __repr__(self) -> str:
        return f"PolyZ({self})"


def _exponent_str(e: int) -> str:
    if e == 0:
        return "1"
    if e == 1:
        return "z"
    return f"z^{e}"


@dataclass(frozen=True)
class LaurentZ:
    """Truncated Laurent series in z^{-1}.

    Bit i of mantissa is the coefficient of z^{horizon+i}.  When exact is
    False, coefficients below horizon are unknown; when True, the mantissa
    is the whole series (a Laurent polynomial) and horizon is only a
    storage offset.
    """

    mantissa: int
    horizon: int
    exact: bool = False

    def __post_init__(self):
        if self.mantissa < 0:
            raise ValueError("negative mantissa")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_poly(cls, p: PolyZ) -> "LaurentZ":
        return cls(p.bits, 0, True)

    @classmethod
    def zero(cls, horizon: int, exact: bool = False) -> "LaurentZ":
        return cls(0, horizon, exact)

    @classmethod
    def monomial(cls, e: int) -> "LaurentZ":
        return cls(1, e, True)

    @classmethod
    def from_coeffs(cls, top: int, coeffs: list[int], exact: bool = False) -> "LaurentZ":
        """coeffs[j] is the coefficient of z^{top-j}."""
        m = 0
        n = len(coeffs)
        for j, c in enumerate(coeffs):
            if c & 1:
                m |= 1 << (n - 1 - j)
        return cls(m, top - n + 1, exact)

    # -- structure ---------------------------------------------------------

    @property
    def top(self) -> int | None:
        """Highest exponent with a nonzero coefficient, None if none known."""
        return self.horizon + self.mantissa.bit_length() - 1 if self.mantissa else None

    @property
    def trust(self) -> int | float:
        """Lowest exponent guaranteed correct (-inf when exact)."""
        return NEG_INF if self.exact else self.horizon

    def is_zero_within(self) -> bool:
        return self.mantissa == 0

    def coeff(self, e: int) -> int:
        i = e - self.horizon
        if i < 0:
            if self.exact:
                return 0
            raise ValueError(f"coefficient of z^{e} is below the horizon")
        return (self.mantissa >> i) & 1

    def bits_from(self, lo: int) -> int:
        """Mantissa re-based so bit 0 is the coefficient of z^{lo}.

        Going below the horizon is only allowed for exact series, where the
        missing coefficients are genuinely zero.
        """
        d = self.horizon - lo
        if d > 0 and not self.exact:
            raise ValueError("requested bits below the horizon")
        return self.mantissa << d if d >= 0 else self.mantissa >> -d

    def _upper_log(self) -> int | None:
        """Exponent bound on the whole series including any unknown tail."""
        if self.mantissa:
            t = self.top
            return t if self.exact else max(t, self.horizon - 1)
        return None if self.exact else self.horizon - 1

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "LaurentZ") -> "LaurentZ":
        lo = min(self.horizon, other.horizon)
        m = (self.mantissa << (self.horizon - lo)) ^ (other.mantissa << (other.horizon - lo))
        if self.exact and other.exact:
            return LaurentZ(m, lo, True)
        trust = int(max(self.trust, other.trust))
        return LaurentZ(m >> (trust - lo), trust, False)

    __sub__ = __add__

    def __mul__(self, other: "LaurentZ") -> "LaurentZ":
        bx, by = self._upper_log(), other._upper_log()
        if bx is None or by is None:
            return LaurentZ(0, 0, True)
        lo = self.horizon + other.horizon
        m = clmul(self.mantissa, other.mantissa)
        if self.exact and other.exact:
            return LaurentZ(m, lo, True)
        bounds = []
        if not self.exact:
            bounds.append(self.horizon + by)
        if not other.exact:
            bounds.append(other.horizon + bx)
        # trust can only fall below lo when a zero-mantissa operand was
        # involved, in which case m is zero anyway
        trust = max(bounds)
        return LaurentZ(m >> max(0, trust - lo), trust, False)

    def square(self) -> "LaurentZ":
        m = clsq(self.mantissa)
        lo = 2 * self.horizon
        if self.exact:
            return LaurentZ(m, lo, True)
        trust = self.horizon + self._upper_log()
        return LaurentZ(m >> max(0, trust - lo), trust, False)

    def __pow__(self, e: int) -> "LaurentZ":
        if e < 0:
            raise ValueError("negative exponent, use inv() first")
        acc = LaurentZ(1, 0, True)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base.square()
            e >>= 1
        return acc

    def shift(self, k: int) -> "LaurentZ":
        """Multiply by z^k."""
        return LaurentZ(self.mantissa, self.horizon + k, self.exact)

    def inv(self, rel_prec: int | None = None) -> "LaurentZ":
        """Multiplicative inverse, to the propagated precision.

        For an exact operand the expansion is generally infinite, so the
        relative precision defaults to default_precision().
        """
        if not self.mantissa:
            raise ZeroDivisionError("inverse of a series with no known nonzero term")
        t = self.top
        if self.exact and self.mantissa == (1 << (t - self.horizon)):
            return LaurentZ(1, -t, True)
        if rel_prec is None:
            rel_prec = default_precision() if self.exact else t - self.horizon + 1
        if not self.exact:
            rel_prec = min(rel_prec, t - self.horizon + 1)
        w = bit_reverse(self.bits_from(t - rel_prec + 1), rel_prec)
        y = winv(w, rel_prec)
        return LaurentZ(bit_reverse(y, rel_prec), -t - rel_prec + 1, False)

    def sqrt(self) -> "LaurentZ":
        """Square root via the inverse Frobenius (all exponents must be even)."""
        m, lo = self.mantissa, self.horizon
        if lo & 1:
            if m & 1:
                raise ValueError("not a square: odd exponent present")
            m >>= 1
            lo += 1
        if m & _alternating_mask(m.bit_length(), 1):
            raise ValueError("not a square: odd exponent present")
        if m:
            n = (m.bit_length() + 15) // 16 * 2
            bits = np.unpackbits(
                np.frombuffer(m.to_bytes(n, "little"), dtype=np.uint8), bitorder="little"
            )[0::2]
            half = int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")
        else:
            half = 0
        return LaurentZ(half, lo // 2, self.exact)

    def derivative(self) -> "LaurentZ":
        # d/dz: only odd exponents survive in characteristic 2
        sel = _alternating_mask(self.mantissa.bit_length(), (self.horizon & 1) ^ 1)
        return LaurentZ(self.mantissa & sel, self.horizon - 1, self.exact)

    # -- truncation and parts ----------------------------------------------

    def truncate(self, new_horizon: int) -> "LaurentZ":
        """Forget everything below new_horizon (result is non-exact)."""
        d = new_horizon - self.horizon
        if d <= 0:
            if self.exact:
                return LaurentZ(self.mantissa << -d, new_horizon, False)
            return LaurentZ(self.mantissa, self.horizon, False)
        return LaurentZ(self.mantissa >> d, new_horizon, False)

    def frac(self) -> "LaurentZ":
        """The part with negative exponents."""
        if self.exact:
            keep = -self.horizon
            m = self.mantissa & ((1 << keep) - 1) if keep > 0 else 0
            return LaurentZ(m, self.horizon if keep > 0 else -1, True)
        if self.horizon > -1:
            raise ValueError("fractional part entirely below the horizon")
        return LaurentZ(self.mantissa & ((1 << -self.horizon) - 1), self.horizon, False)

    def poly_part(self) -> PolyZ:
        """The part with exponents >= 0."""
        if not self.exact and self.horizon > 0:
            raise ValueError("polynomial part not fully above the horizon")
        if self.horizon >= 0:
            return PolyZ(self.mantissa << self.horizon)
        return PolyZ(self.mantissa >> -self.horizon)

    def norm(self) -> Fraction:
        """Absolute value 2^top (0 when no nonzero coefficient is known)."""
        if not self.mantissa:
            return Fraction(0)
        t = self.top
        return Fraction(2**t) if t >= 0 else Fraction(1, 2**-t)

    def norm_log2(self) -> int | None:
        return self.top

    def norm_frac(self) -> tuple[Fraction, "LaurentZ"]:
        return self.norm(), self.frac()

    # -- comparison ----------------------------------------------------------

    def agrees_with(self, other: "LaurentZ", lo: int | None = None) -> bool:
        """Coefficientwise equality on the common trusted range (from lo up)."""
        bound = max(self.trust, other.trust)
        if lo is not None:
            bound = max(bound, lo)
        if bound == NEG_INF:
            bound = min(self.horizon, other.horizon)
        bound = int(bound)
        return self.bits_from(bound) == other.bits_from(bound)

    def __str__(self) -> str:
        return self.format()

    def format(self, max_terms: int = 64) -> str:
        total = self.mantissa.bit_count()
        terms = []
        m = self.mantissa
        while m and len(terms) < max_terms:
            i = m.bit_length() - 1
            terms.append(_exponent_str(self.horizon + i))
            m ^= 1 << i
        if total > max_terms:
            terms.append(f"...({total - max_terms} more terms)")
        if not self.exact:
            terms.append(f"O(z^{self.horizon - 1})")
        return "+".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"LaurentZ({self.format(8)})"


def series_div(num: PolyZ, den: PolyZ, horizon: int) -> LaurentZ:
    """Expand the rational function num/den as a series trusted down to horizon."""
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num:
        return LaurentZ(0, horizon, True)
    top = num.degree - den.degree
    count = top - horizon + 1
    if count <= 0:
        return LaurentZ(0, horizon, False)
    wd = bit_reverse(den.bits, den.degree + 1) & ((1 << count) - 1)
    wn = bit_reverse(num.bits, num.degree + 1)
    w = clmul(wn, winv(wd, count)) & ((1 << count) - 1)
    return LaurentZ(bit_reverse(w, count), horizon, False)
