"""Bivariate polynomials over GF(2) and the small algebras built on them.

A BiPoly is a tuple of bit-rows: rows[i] is the bitmask of b-exponents
whose monomial a^i b^j is present.  Addition is rowwise XOR.  Products are
computed either directly over the monomials of the sparser operand or, for
two dense operands, by Kronecker substitution b -> w, a -> w^D into a
single univariate carryless multiply, with D a byte-aligned gap exceeding
the b-degree of the product so rows cannot bleed into each other.

The module also provides 2x2 matrices over BiPoly, Laurent objects
num * tau^e with tau = 1 + a + b (exponents may be negative, numerators are
kept tau-free), and bivariate power series truncated at a total-degree cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gf2 import PolyZ, bit_reverse, clmul, clsq

_SPARSE_TERMS = 16
_SUBST_SIZE_LIMIT = 1 << 24


def _trim(rows) -> tuple[int, ...]:
    rows = list(rows)
    while rows and rows[-1] == 0:
        rows.pop()
    return tuple(rows)


@dataclass(frozen=True)
class BiPoly:
    """Polynomial in GF(2)[a, b]; rows[i] holds the b-mask for a^i."""

    rows: tuple[int, ...]

    def __post_init__(self):
        rows = self.rows if isinstance(self.rows, tuple) else tuple(self.rows)
        if any(r < 0 for r in rows):
            raise ValueError("negative row mask")
        if rows and rows[-1] == 0:
            rows = _trim(rows)
        object.__setattr__(self, "rows", rows)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_pairs(cls, pairs) -> "BiPoly":
        rows: dict[int, int] = {}
        for i, j in pairs:
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            rows[i] = rows.get(i, 0) ^ (1 << j)
        if not rows:
            return cls(())
        top = max(rows)
        return cls(tuple(rows.get(i, 0) for i in range(top + 1)))

    @classmethod
    def monomial(cls, i: int, j: int) -> "BiPoly":
        return cls.from_pairs([(i, j)])

    @classmethod
    def parse(cls, text: str) -> "BiPoly":
        """Parse "a^2*b^2+b^2+1" style monomial sums."""
        text = text.strip().replace(" ", "")
        pairs = []
        if text in ("", "0"):
            return cls(())
        for term in text.split("+"):
            i = j = 0
            for factor in term.split("*"):
                if factor == "1":
                    continue
                if factor == "a":
                    i += 1
                elif factor == "b":
                    j += 1
                elif factor.startswith("a^"):
                    i += int(factor[2:])
                elif factor.startswith("b^"):
                    j += int(factor[2:])
                else:
                    raise ValueError(f"cannot parse monomial factor {factor!r}")
            pairs.append((i, j))
        return cls.from_pairs(pairs)

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.rows

    def __bool__(self) -> bool:
        return bool(self.rows)

    @property
    def deg_a(self) -> int:
        return len(self.rows) - 1

    @property
    def deg_b(self) -> int:
        return max(r.bit_length() for r in self.rows) - 1 if self.rows else -1

    def n_terms(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def support(self):
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                yield (i, low.bit_length() - 1)
                r ^= low

    def coeff(self, i: int, j: int) -> int:
        if 0 <= i < len(self.rows) and j >= 0:
            return (self.rows[i] >> j) & 1
        return 0

    def constant_term(self) -> int:
        return self.coeff(0, 0)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "BiPoly") -> "BiPoly":
        n = max(len(self.rows), len(other.rows))
        xr = self.rows + (0,) * (n - len(self.rows))
        yr = other.rows + (0,) * (n - len(other.rows))
        return BiPoly(tuple(x ^ y for x, y in zip(xr, yr)))

    __sub__ = __add__

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        if not self.rows or not other.rows:
            return BiPoly(())
        if min(self.n_terms(), other.n_terms()) <= _SPARSE_TERMS:
            sparse, dense = (self, other) if self.n_terms() <= other.n_terms() else (other, self)
            out = [0] * (self.deg_a + other.deg_a + 1)
            for i, j in sparse.support():
                for i2, r in enumerate(dense.rows):
                    out[i + i2] ^= r << j
            return BiPoly(tuple(out))
        db = self.deg_b + other.deg_b
        stride = db // 8 + 1  # bytes; gap 8*stride > db, so rows cannot collide
        prod = clmul(_pack(self.rows, stride), _pack(other.rows, stride))
        return BiPoly(_unpack(prod, stride, self.deg_a + other.deg_a + 1))

    def mul(self, other: "BiPoly", reverse: bool = False) -> "BiPoly":
        """Product with explicit operand order, for order-permuted rechecks."""
        return other * self if reverse else self * other

    def square(self) -> "BiPoly":
        if not self.rows:
            return self
        out = [0] * (2 * len(self.rows) - 1)
        for i, r in enumerate(self.rows):
            out[2 * i] = clsq(r)
        return BiPoly(tuple(out))

    def __pow__(self, e: int) -> "BiPoly":
        if e < 0:
            raise ValueError("negative exponent")
        acc = ONE
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base.square()
            e >>= 1
        return acc

    # -- variable games ------------------------------------------------------

    def swap(self) -> "BiPoly":
        """Exchange a and b (transpose the exponent bit-matrix)."""
        if not self.rows:
            return self
        width = self.deg_b + 1
        nbytes = (width + 7) // 8
        arr = np.zeros((len(self.rows), nbytes), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            if r:
                rb = r.to_bytes(nbytes, "little")
                arr[i] = np.frombuffer(rb, dtype=np.uint8)
        bits = np.unpackbits(arr, axis=1, bitorder="little")[:, :width]
        packed = np.packbits(bits.T, axis=1, bitorder="little")
        return BiPoly(tuple(
            int.from_bytes(packed[j].tobytes(), "little") for j in range(width)
        ))

    def flip(self, box_a: int, box_b: int) -> "BiPoly":
        """Exponent reversal a^i b^j -> a^{box_a-i} b^{box_b-j}.

        Equals (a^box_a b^box_b) * p(1/a, 1/b); degrees must fit the box.
        """
        if self.deg_a > box_a or self.deg_b > box_b:
            raise ValueError("degrees exceed the reversal box")
        padded = list(self.rows) + [0] * (box_a + 1 - len(self.rows))
        return BiPoly(tuple(bit_reverse(r, box_b + 1) for r in reversed(padded)))

    def shift_ab(self, i: int, j: int) -> "BiPoly":
        """Multiply by the monomial a^i b^j."""
        if not self.rows:
            return self
        return BiPoly((0,) * i + tuple(r << j for r in self.rows))

    def div_monomial(self, i: int, j: int) -> "BiPoly":
        """Exact division by a^i b^j; raises if any monomial falls outside."""
        if not self.rows:
            return self
        if len(self.rows) <= i or any(self.rows[k] for k in range(i)):
            raise ValueError("not divisible by the monomial (a-exponents too low)")
        mask = (1 << j) - 1
        if any(r & mask for r in self.rows[i:]):
            raise ValueError("not divisible by the monomial (b-exponents too low)")
        return BiPoly(tuple(r >> j for r in self.rows[i:]))

    def subst(self, pa: PolyZ, pb: PolyZ) -> PolyZ:
        """Evaluate at a = pa(z), b = pb(z); Horner in a, sparse in b."""
        if (self.deg_a + 1) * (self.deg_b + 1) > _SUBST_SIZE_LIMIT:
            raise ValueError("substitution input too large")
        pow_b: dict[int, PolyZ] = {0: PolyZ(1), 1: pb}

        def bpow(e: int) -> PolyZ:
            p = pow_b.get(e)
            if p is None:
                half = bpow(e >> 1)
                p = half * half if e % 2 == 0 else half * half * pb
                pow_b[e] = p
            return p

        acc = PolyZ(0)
        for r in reversed(self.rows):
            row_val = PolyZ(0)
            rr = r
            while rr:
                j = rr.bit_length() - 1
                row_val = row_val + bpow(j)
                rr ^= 1 << j
            acc = acc * pa + row_val
        return acc

    def tau_divmod(self) -> tuple["BiPoly", int]:
        """Synthetic division by tau = a + (1+b); returns (quotient, remainder-as-row).

        The remainder is the b-mask of the evaluation at a = 1+b.
        """
        if not self.rows:
            return self, 0
        d = len(self.rows) - 1
        if d == 0:
            return BiPoly(()), self.rows[0]
        q = [0] * d
        q[d - 1] = self.rows[d]
        for i in range(d - 2, -1, -1):
            c = q[i + 1]
            q[i] = self.rows[i + 1] ^ c ^ (c << 1)
        rem = self.rows[0] ^ q[0] ^ (q[0] << 1)
        return BiPoly(tuple(q)), rem

    def tau_valuation(self) -> tuple[int, "BiPoly"]:
        """Largest e with tau^e dividing self, and the cofactor (zero -> (0, 0))."""
        if not self.rows:
            return 0, self
        e = 0
        cur = self
        while True:
            q, rem = cur.tau_divmod()
            if rem:
                return e, cur
            e += 1
            cur = q

    # -- text --------------------------------------------------------------

    def to_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.support(), key=lambda p: (-p[0], -p[1]))

    def __str__(self) -> str:
        if not self.rows:
            return "0"
        terms = []
        for i, j in self.to_pairs():
            factors = []
            if i:
                factors.append("a" if i == 1 else f"a^{i}")
            if j:
                factors.append("b" if j == 1 else f"b^{j}")
            terms.append("*".join(factors) if factors else "1")
        return "+".join(terms)

    def __repr__(self) -> str:
        if self.n_terms() > 12:
            return f"BiPoly(<{self.n_terms()} terms, deg_a={self.deg_a}, deg_b={self.deg_b}>)"
        return f"BiPoly({self})"


def _pack(rows, stride: int) -> int:
    buf = bytearray(stride * len(rows))
    for i, r in enumerate(rows):
        if r:
            rb = r.to_bytes((r.bit_length() + 7) // 8, "little")
            off = i * stride
            buf[off : off + len(rb)] = rb
    return int.from_bytes(buf, "little")


def _unpack(p: int, stride: int, nrows: int) -> tuple[int, ...]:
    raw = p.to_bytes(stride * nrows, "little")
    return tuple(
        int.from_bytes(raw[i * stride : (i + 1) * stride], "little") for i in range(nrows)
    )


ZERO = BiPoly(())
ONE = BiPoly((1,))
VAR_A = BiPoly((0, 1))
VAR_B = BiPoly((2,))
TAU = BiPoly((3, 1))  # 1 + a + b
AB = BiPoly((0, 2))  # a*b
A_PLUS_B = BiPoly((2, 1))


@lru_cache(maxsize=256)
def tau_pow(e: int) -> BiPoly:
    """tau^e for e >= 0 (cached; the verification suite reuses many powers)."""
    if e < 0:
        raise ValueError("negative tau exponent needs TauLaurent")
    return TAU**e


def csv_pairs(p: BiPoly) -> str:
    """Exponent-pair CSV form, one "i,j" line per monomial."""
    return "\n".join(f"{i},{j}" for i, j in p.to_pairs())


def parse_csv_pairs(text: str) -> BiPoly:
    pairs = []
    for line in text.strip().splitlines():
        if not line.strip():
            continue
        i, j = line.split(",")
        pairs.append((int(i), int(j)))
    return BiPoly.from_pairs(pairs)


# -- 2x2 matrices ------------------------------------------------------------


@dataclass(frozen=True)
class Mat2:
    """2x2 matrix over GF(2)[a, b]."""

    e00: BiPoly
    e01: BiPoly
    e10: BiPoly
    e11: BiPoly

    def mul(self, other: "Mat2", reverse: bool = False) -> "Mat2":
        """Matrix product; reverse=True computes each entry product as y*x.

        The reversed form exercises the other packing order in the
        multiply kernel, used for the run-twice residual checks.
        """

        def m(x: BiPoly, y: BiPoly) -> BiPoly:
            return y * x if reverse else x * y

        return Mat2(
            m(self.e00, other.e00) + m(self.e01, other.e10),
            m(self.e00, other.e01) + m(self.e01, other.e11),
            m(self.e10, other.e00) + m(self.e11, other.e10),
            m(self.e10, other.e01) + m(self.e11, other.e11),
        )

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return self.mul(other)

    def swap(self) -> "Mat2":
        return Mat2(self.e00.swap(), self.e01.swap(), self.e10.swap(), self.e11.swap())

    def det(self) -> BiPoly:
        return self.e00 * self.e11 + self.e01 * self.e10

    def is_symmetric(self) -> bool:
        return self.e01 == self.e10


def bipoly_mat_det(rows: list[list[BiPoly]]) -> BiPoly:
    """Determinant by cofactor expansion, memoized over column subsets (n <= 8)."""
    n = len(rows)
    if n > 8:
        raise ValueError("cofactor expansion limited to n <= 8")
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    memo: dict[tuple[int, ...], BiPoly] = {}

    def minor(cols: tuple[int, ...]) -> BiPoly:
        if not cols:
            return ONE
        if cols in memo:
            return memo[cols]
        r = n - len(cols)
        acc = ZERO
        for idx, c in enumerate(cols):
            entry = rows[r][c]
            if entry.is_zero():
                continue
            acc = acc + entry * minor(cols[:idx] + cols[idx + 1 :])
        memo[cols] = acc
        return acc

    return minor(tuple(range(n)))


# -- Laurent objects in tau ---------------------------------------------------


@dataclass(frozen=True)
class TauLaurent:
    """num * tau^exp with the numerator kept tau-free (canonical form)."""

    num: BiPoly
    exp: int

    @classmethod
    def make(cls, num: BiPoly, exp: int = 0) -> "TauLaurent":
        if num.is_zero():
            return cls(ZERO, 0)
        v, cofactor = num.tau_valuation()
        return cls(cofactor, exp + v)

    @classmethod
    def from_bipoly(cls, p: BiPoly) -> "TauLaurent":
        return cls.make(p, 0)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "TauLaurent") -> "TauLaurent":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.exp, other.exp)
        s = self.num * tau_pow(self.exp - lo) + other.num * tau_pow(other.exp - lo)
        return TauLaurent.make(s, lo)

    __sub__ = __add__

    def __mul__(self, other: "TauLaurent") -> "TauLaurent":
        if self.is_zero() or other.is_zero():
            return TauLaurent(ZERO, 0)
        # tau is prime in GF(2)[a,b], so a product of tau-free numerators
        # stays tau-free; make() is kept as a cheap safety net
        return TauLaurent.make(self.num * other.num, self.exp + other.exp)

    def square(self) -> "TauLaurent":
        # squaring is the Frobenius map, so a tau-free numerator stays tau-free
        return TauLaurent(self.num.square(), 2 * self.exp)

    def scale(self, p: BiPoly) -> "TauLaurent":
        return TauLaurent.make(self.num * p, self.exp)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return f"tau^{self.exp}*({self.num})"


# -- total-degree-capped bivariate series -------------------------------------


def _cap_rows(rows, cap: int) -> tuple[int, ...]:
    out = []
    for i, r in enumerate(rows):
        if i > cap:
            break
        out.append(r & ((1 << (cap - i + 1)) - 1))
    return _trim(out)


@dataclass(frozen=True)
class BiSeries:
    """Bivariate power series truncated at a total-degree cap (inclusive)."""

    rows: tuple[int, ...]
    cap: int

    @classmethod
    def from_bipoly(cls, p: BiPoly, cap: int) -> "BiSeries":
        return cls(_cap_rows(p.rows, cap), cap)

    def to_bipoly(self) -> BiPoly:
        return BiPoly(self.rows)

    def is_zero(self) -> bool:
        return not self.rows

    def coeff(self, i: int, j: int) -> int:
        if 0 <= i < len(self.rows) and j >= 0:
            return (self.rows[i] >> j) & 1
        return 0

    def valuation(self) -> int | None:
        """Minimal total degree of a present monomial (None when zero)."""
        best = None
        for i, r in enumerate(self.rows):
            if r:
                v = i + (r & -r).bit_length() - 1
                best = v if best is None else min(best, v)
        return best

    def _common_cap(self, other: "BiSeries") -> int:
        return min(self.cap, other.cap)

    def __add__(self, other: "BiSeries") -> "BiSeries":
        cap = self._common_cap(other)
        s = BiPoly(self.rows) + BiPoly(other.rows)
        return BiSeries(_cap_rows(s.rows, cap), cap)

    __sub__ = __add__

    def __mul__(self, other: "BiSeries") -> "BiSeries":
        cap = self._common_cap(other)
        p = BiPoly(self.rows) * BiPoly(other.rows)
        return BiSeries(_cap_rows(p.rows, cap), cap)

    def square(self) -> "BiSeries":
        p = BiPoly(self.rows).square()
        return BiSeries(_cap_rows(p.rows, self.cap), self.cap)

    def __pow__(self, e: int) -> "BiSeries":
        acc = BiSeries.from_bipoly(ONE, self.cap)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base.square()
            e >>= 1
        return acc

    def inv(self) -> "BiSeries":
        """Newton inverse; requires constant term 1."""
        if self.coeff(0, 0) != 1:
            raise ZeroDivisionError("bivariate series inverse needs constant term 1")
        y = BiSeries((1,), self.cap)
        one = BiSeries((1,), self.cap)
        t = 1
        while t <= self.cap:
            err = self * y + one  # valuation >= t, doubles per step
            y = y + y * err
            t *= 2
        return y

    def div(self, other: "BiSeries") -> "BiSeries":
        return self * other.inv()

    def __str__(self) -> str:
        return f"{BiPoly(self.rows)} (mod total degree {self.cap + 1})"
