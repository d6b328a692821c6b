"""Tower of convergent matrices and the polynomial identities tying it together.

The central object is the sequence of 2x2 matrices over GF(2)[a, b]

    M_0 = [[1, a], [a, 0]],   N_k = M_{k-1} * swap(M_{k-1}),   M_k = N_k * swap(N_k),

where swap exchanges the two variables entrywise.  M_k collects the
numerator/denominator pairs of the continued-fraction convergents at
indices 4^k; its entries satisfy a web of exact identities (trace and
anti-diagonal relations, a level-to-level recursion, determinant-style
factorizations, and closed forms in powers of tau = 1 + a + b) that the
verify_* functions below check literally, term by term.

Every headline product is evaluated twice with operand order permuted
(recheck), so both packing paths of the carryless multiply kernel must
agree before a certificate is issued.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

from .bipoly import (
    AB,
    A_PLUS_B,
    ONE,
    TAU,
    VAR_A,
    VAR_B,
    ZERO,
    BiPoly,
    BiSeries,
    Mat2,
    TauLaurent,
    tau_pow,
)
from .certificate import Certificate, recheck
from .contfrac import TMWord, tm_fold

M0 = Mat2(ONE, VAR_A, VAR_A, ZERO)


def exact_div3(x: int) -> int:
    q, r = divmod(x, 3)
    if r:
        raise ArithmeticError(f"tau exponent {x} is not divisible by 3")
    return q


@dataclass(frozen=True)
class TowerLevel:
    """Level k of the matrix tower, with the derived quantities used everywhere.

    n is 2^(2k-1) (the a- and b-degree of the level's entries), m is
    (2^(2k) + 2)/3 (the tau exponent governing the trace identity), and
    Z is the sum of the first row of N_k.
    """

    k: int
    n: int
    m: int
    N: Mat2
    M: Mat2
    Z: BiPoly

    @property
    def Q(self) -> BiPoly:
        return self.M.e00

    @property
    def P(self) -> BiPoly:
        return self.M.e01

    @property
    def R(self) -> BiPoly:
        return self.M.e11


def build_tower(kmax: int, check_both_orders: bool = True) -> list[TowerLevel]:
    """Construct levels 1..kmax, asserting the structural invariants as built.

    With check_both_orders the two matrix products per level are computed
    in both operand orders and compared, which roughly doubles the build
    cost but rules out kernel asymmetries at the source.
    """
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    levels: list[TowerLevel] = []
    m_prev = None
    mat = M0
    for k in range(1, kmax + 1):
        if check_both_orders:
            n_mat = recheck(lambda rev, m=mat: m.mul(m.swap(), reverse=rev))
            m_mat = recheck(lambda rev, nm=n_mat: nm.mul(nm.swap(), reverse=rev))
        else:
            n_mat = mat.mul(mat.swap())
            m_mat = n_mat.mul(n_mat.swap())
        n = 1 << (2 * k - 1)
        m = exact_div3((1 << (2 * k)) + 2)
        if m_prev is not None and m != 4 * m_prev - 2:
            raise ArithmeticError("tau exponent recurrence violated")
        m_prev = m
        # Structural facts the later identities lean on.
        if not m_mat.is_symmetric():
            raise ArithmeticError(f"M_{k} is not symmetric")
        if n_mat.e10 != n_mat.e01.swap():
            raise ArithmeticError(f"N_{k} anti-diagonal is not a swap pair")
        if n_mat.e00 != n_mat.e00.swap() or n_mat.e11 != n_mat.e11.swap():
            raise ArithmeticError(f"N_{k} diagonal is not swap-invariant")
        for entry in (m_mat.e00, m_mat.e01, m_mat.e11):
            if entry.deg_a > n or entry.deg_b > n:
                raise ArithmeticError(f"M_{k} entry degree exceeds {n}")
        z = n_mat.e00 + n_mat.e01
        levels.append(TowerLevel(k=k, n=n, m=m, N=n_mat, M=m_mat, Z=z))
        mat = m_mat
    return levels


def next_level_z(top: TowerLevel) -> BiPoly:
    """Z_{k+1} computed from one extra matrix product above the tower top."""
    n_next = recheck(lambda rev: top.M.mul(top.M.swap(), reverse=rev))
    return n_next.e00 + n_next.e01


@lru_cache(maxsize=8)
def tower_cached(kmax: int) -> tuple[TowerLevel, ...]:
    """Shared read-only tower for callers that only consume the levels."""
    return tuple(build_tower(kmax))


# ---------------------------------------------------------------------------
# Trace / anti-diagonal identities at a single level.


def verify_tower_pqr(level: TowerLevel) -> Certificate:
    """Q + R = tau^m, P + swap(P) = (1+tau) tau^(m-2), Q + swap(R) = tau^(m-2)."""
    t0 = time.perf_counter()
    q, p, r = level.Q, level.P, level.R
    m = level.m
    if m != exact_div3(2 * level.n + 2):
        raise ArithmeticError("trace exponent mismatch")
    residuals = {
        "trace": q + r + tau_pow(m),
        "numerator-palindrome": p + p.swap() + recheck(
            lambda rev: (ONE + TAU) * tau_pow(m - 2) if not rev else tau_pow(m - 2) * (ONE + TAU)
        ),
        "antidiagonal": q + r.swap() + tau_pow(m - 2),
    }
    return Certificate.from_residuals(
        f"tower-pqr-k{level.k}",
        {"k": level.k},
        residuals,
        details={"n": level.n, "m": level.m},
        wall_time_s=time.perf_counter() - t0,
    )


def verify_tower_zpqr(level: TowerLevel) -> Certificate:
    """Express Q, R, P through Z: Q = Z^2, R = Z^2 + tau^m,
    P = Z^2 + tau^((n+1)/3) Z + (ab)^n, swap(Z) = Z + (1+tau) tau^((n-2)/3),
    and Q R + P^2 = (ab)^(2n)."""
    t0 = time.perf_counter()
    z, n, m = level.Z, level.n, level.m
    zsq = recheck(lambda rev: z * z if not rev else z.square())
    e1 = exact_div3(n + 1)
    e2 = exact_div3(n - 2)
    ab_n = AB ** n
    residuals = {
        "q-from-z": level.Q + zsq,
        "r-from-z": level.R + zsq + tau_pow(m),
        "p-from-z": level.P + zsq + recheck(
            lambda rev: tau_pow(e1) * z if not rev else z * tau_pow(e1)
        ) + ab_n,
        "z-swap": z.swap() + z + recheck(
            lambda rev: (ONE + TAU) * tau_pow(e2) if not rev else tau_pow(e2) * (ONE + TAU)
        ),
        "determinant": recheck(lambda rev: level.Q.mul(level.R, reverse=rev))
        + level.P.square()
        + ab_n.square(),
    }
    return Certificate.from_residuals(
        f"tower-zpqr-k{level.k}",
        {"k": level.k},
        residuals,
        details={"z_terms": z.n_terms()},
        wall_time_s=time.perf_counter() - t0,
    )


def verify_tower_recursion(level: TowerLevel, z_next: BiPoly) -> Certificate:
    """Z_{k+1} = tau^n Z_k + tau^((2n-1)/3) (ab)^n + (ab)^(2n)."""
    t0 = time.perf_counter()
    n = level.n
    e = exact_div3(2 * n - 1)
    predicted = recheck(
        lambda rev: tau_pow(n).mul(level.Z, reverse=rev)
    ) + recheck(
        lambda rev: tau_pow(e).mul(AB ** n, reverse=rev)
    ) + (AB ** n).square()
    residuals = {"recursion": z_next + predicted}
    return Certificate.from_residuals(
        f"tower-recursion-k{level.k}",
        {"k": level.k, "next": level.k + 1},
        residuals,
        wall_time_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Determinant-style combinations.


def delta_closed_form(level: TowerLevel) -> BiPoly:
    """Z^4 + tau^((2n-1)/3) Z^2 + (1+tau) tau^(n-1) Z + (b(1+tau)tau^2 + a^2) tau^((4n-8)/3)."""
    z, n = level.Z, level.n
    z2 = z.square()
    z4 = z2.square()
    head = recheck(lambda rev: tau_pow(exact_div3(2 * n - 1)).mul(z2, reverse=rev))
    lin = recheck(lambda rev: (A_PLUS_B * tau_pow(n - 1)).mul(z, reverse=rev))
    tail_coeff = VAR_B * A_PLUS_B * tau_pow(2) + VAR_A.square()
    tail = recheck(lambda rev: tail_coeff.mul(tau_pow(exact_div3(4 * n - 8)), reverse=rev))
    return z4 + head + lin + tail


def verify_delta(level: TowerLevel) -> Certificate:
    """The quartic combination of Z collapses to (a+b)(ab)^n tau^((2n-4)/3) + (ab)^(2n)."""
    t0 = time.perf_counter()
    n = level.n
    delta = delta_closed_form(level)
    ab_n = AB ** n
    expected = recheck(
        lambda rev: (A_PLUS_B * tau_pow(exact_div3(2 * n - 4))).mul(ab_n, reverse=rev)
    ) + ab_n.square()
    residuals = {"delta": delta + expected}
    details = {}
    if level.k == 1:
        details["delta"] = str(expected)
    return Certificate.from_residuals(
        f"delta-closed-form-k{level.k}",
        {"k": level.k},
        residuals,
        details=details,
        wall_time_s=time.perf_counter() - t0,
    )


def quartic_coeffs_lower() -> list[BiPoly]:
    """Coefficients c_0..c_4 with sum c_j P^j Q^(4-j) = (ab)^(2n) T_k."""
    t2 = tau_pow(2)
    asq = VAR_A.square()
    c2 = t2
    c1 = A_PLUS_B * t2
    c3 = c1
    c0 = VAR_A * A_PLUS_B * t2 + asq
    c4 = VAR_B * A_PLUS_B * t2 + asq
    return [c0, c1, c2, c3, c4]


def quartic_coeffs_upper() -> list[BiPoly]:
    """Coefficients A_0..A_4 of the quartic satisfied by the function itself."""
    s = VAR_A.square() * VAR_B.square() + VAR_A.square() + VAR_B.square()
    a2b4 = BiPoly.monomial(2, 4)
    A0 = VAR_B * A_PLUS_B * s + a2b4
    A1 = AB * A_PLUS_B * s
    A2 = AB.square() * s
    A4 = VAR_A * A_PLUS_B * s + a2b4
    return [A0, A1, A2, A1, A4]


def verify_quartic_coefficients() -> Certificate:
    """The two coefficient families are mirror images: A_j = (ab)^4 c_j(1/a, 1/b);
    A_1 = A_3; and A_0 + A_4 = (a+b)^2 (ab+a+b)^2."""
    t0 = time.perf_counter()
    lower = quartic_coeffs_lower()
    upper = quartic_coeffs_upper()
    residuals: dict[str, BiPoly] = {}
    for j, (c, big) in enumerate(zip(lower, upper)):
        if c.deg_a > 4 or c.deg_b > 4:
            raise ArithmeticError("lower coefficient degree out of range")
        residuals[f"mirror-{j}"] = big + c.flip(4, 4)
    residuals["symmetry"] = upper[1] + upper[3]
    edge = recheck(
        lambda rev: A_PLUS_B.square().mul((AB + A_PLUS_B).square(), reverse=rev)
    )
    residuals["edge-sum"] = upper[0] + upper[4] + edge
    corner = [j for j, big in enumerate(upper) if big.coeff(4, 4)]
    residuals["corner-support"] = ZERO if corner == [2] else ONE
    return Certificate.from_residuals(
        "quartic-coefficients",
        {},
        residuals,
        details={"corner_carriers": corner},
        wall_time_s=time.perf_counter() - t0,
    )


def t_closed_form(level: TowerLevel) -> BiPoly:
    """T_k = (tau^4 + tau^3) Z^4 + (a+b) tau^((n+1)/3 + 2) Z^3
    + (a+b) tau^2 (ab)^n Z^2 + (b(a+b)tau^2 + a^2) (ab)^(2n)."""
    z, n = level.Z, level.n
    z2 = z.square()
    z3 = recheck(lambda rev: z2.mul(z, reverse=rev))
    z4 = z2.square()
    ab_n = AB ** n
    ab_2n = ab_n.square()
    term1 = recheck(lambda rev: (tau_pow(4) + tau_pow(3)).mul(z4, reverse=rev))
    term2 = recheck(
        lambda rev: (A_PLUS_B * tau_pow(exact_div3(n + 1) + 2)).mul(z3, reverse=rev)
    )
    term3 = recheck(
        lambda rev: (A_PLUS_B * tau_pow(2)).mul(ab_n.mul(z2, reverse=rev), reverse=rev)
    )
    term4 = recheck(
        lambda rev: (VAR_B * A_PLUS_B * tau_pow(2) + VAR_A.square()).mul(ab_2n, reverse=rev)
    )
    return term1 + term2 + term3 + term4


def verify_delta_factorization(level: TowerLevel) -> Certificate:
    """sum c_j P^j Q^(4-j) = (ab)^(2n) T_k."""
    t0 = time.perf_counter()
    n = level.n
    p, q = level.P, level.Q

    def build(rev: bool) -> BiPoly:
        coeffs = quartic_coeffs_lower()
        acc = ZERO
        for j, c in enumerate(coeffs):
            term = (p ** j).mul(q ** (4 - j), reverse=rev)
            acc = acc + c.mul(term, reverse=rev)
        return acc

    delta = recheck(build)
    ab_2n = (AB ** n).square()
    t_poly = t_closed_form(level)

    residuals = {
        "factorization": delta + recheck(lambda rev: ab_2n.mul(t_poly, reverse=rev)),
    }
    # The combination must also be exactly divisible by (ab)^(2n): check by
    # monomial division, so a failure shows up as a residual, not an exception.
    quotient = delta.div_monomial(2 * n, 2 * n)
    if quotient is None:
        residuals["exact-division"] = ONE
    else:
        residuals["exact-division"] = quotient + t_poly
    return Certificate.from_residuals(
        f"delta-factorization-k{level.k}",
        {"k": level.k},
        residuals,
        details={"t_terms": t_poly.n_terms()},
        wall_time_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Bridge to the continued-fraction fold.


def verify_fold_bridge(level: TowerLevel) -> Certificate:
    """The tower entries mirror the word-fold convergents at index 4^k:
    q_{4^k} = (ab)^n Q_k(1/a, 1/b) and p_{4^k} = (ab)^n P_k(1/a, 1/b), and the
    quartic combination of the convergent is the mirrored T_k:
    sum A_j p^j q^(4-j) = (ab)^(2n+4) T_k(1/a, 1/b)."""
    t0 = time.perf_counter()
    count = 4 ** level.k
    ma = (VAR_A, ONE, ONE, ZERO)
    mb = (VAR_B, ONE, ONE, ZERO)
    folded = recheck(lambda rev: tm_fold(count, ma, mb, reverse=rev))
    q_word = folded[0]
    p_word = folded[2]
    n = level.n
    residuals = {
        "q-bridge": q_word + level.Q.flip(n, n),
        "p-bridge": p_word + level.P.flip(n, n),
    }

    def build_defect(rev: bool) -> BiPoly:
        acc = ZERO
        for j, c in enumerate(quartic_coeffs_upper()):
            term = (p_word ** j).mul(q_word ** (4 - j), reverse=rev)
            acc = acc + c.mul(term, reverse=rev)
        return acc

    box = 2 * n + 4
    t_poly = t_closed_form(level)
    if t_poly.deg_a > box or t_poly.deg_b > box:
        raise ArithmeticError("defect mirror box too small")
    residuals["defect-mirror"] = recheck(build_defect) + t_poly.flip(box, box)
    return Certificate.from_residuals(
        f"fold-bridge-k{level.k}",
        {"k": level.k, "letters": count},
        residuals,
        details={"deg_a_q": q_word.deg_a, "deg_b_q": q_word.deg_b},
        wall_time_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Closed forms in the tau-Laurent ring.


def explicit_z(k: int, n: int) -> TauLaurent:
    """Z_k = tau^((n-2)/3) (1 + b + sum_{j=0}^{2k-2} tau^((2 - 2^(j+1) - (j mod 2))/3) (ab)^(2^j))."""
    body = TauLaurent.make(ONE + VAR_B, 0)
    for j in range(0, 2 * k - 1):
        e = exact_div3(2 - (1 << (j + 1)) - (j & 1))
        body = body + TauLaurent(BiPoly.monomial(1 << j, 1 << j), e)
    return body * TauLaurent(ONE, exact_div3(n - 2))


def alpha_series(k: int) -> TauLaurent:
    """alpha_k = sum_{j=1}^{k-1} tau^((2 - 2^(2j+1))/3) (ab)^(2^(2j)); zero for k = 1."""
    acc = TauLaurent.make(ZERO, 0)
    for j in range(1, k):
        e = exact_div3(2 - (1 << (2 * j + 1)))
        acc = acc + TauLaurent(BiPoly.monomial(1 << (2 * j), 1 << (2 * j)), e)
    return acc


def verify_explicit_z(level: TowerLevel) -> Certificate:
    """The tau-expansion of Z_k and the alpha_k identities.

    Checks: the explicit tau-Laurent expression equals Z_k; alpha_k satisfies
    alpha^4 + tau^2 alpha + tau^((8 - 2^(2k+1))/3) (ab)^(2^(2k)) + (ab)^4 = 0;
    and P_k/Q_k = (a + a^2 b + a b^2 + (a+b) alpha) / (1 + b^2 + a^2 b^2 + alpha + alpha^2).
    """
    t0 = time.perf_counter()
    k, n = level.k, level.n
    z_exp = explicit_z(k, n)
    residuals = {"explicit-z": z_exp + TauLaurent.make(level.Z, 0)}

    alpha = alpha_series(k)
    alpha_sq = alpha.square()
    e = exact_div3(8 - (1 << (2 * k + 1)))
    residuals["alpha-quartic"] = (
        alpha_sq.square()
        + TauLaurent(ONE, 2) * alpha
        + TauLaurent(BiPoly.monomial(1 << (2 * k), 1 << (2 * k)), e)
        + TauLaurent.make(BiPoly.monomial(4, 4), 0)
    )

    num = TauLaurent.make(VAR_A + VAR_A.square() * VAR_B + VAR_A * VAR_B.square(), 0) + (
        TauLaurent.make(A_PLUS_B, 0) * alpha
    )
    den = (
        TauLaurent.make(ONE + VAR_B.square() + AB.square(), 0)
        + alpha
        + alpha_sq
    )
    p_tau = TauLaurent.make(level.P, 0)
    q_tau = TauLaurent.make(level.Q, 0)
    ratio = p_tau * den + q_tau * num
    ratio_again = den * p_tau + num * q_tau
    if ratio != ratio_again:
        raise ArithmeticError("operand-order recomputation disagrees; kernel fault")
    residuals["ratio"] = ratio
    return Certificate.from_residuals(
        f"explicit-z-alpha-k{k}",
        {"k": k},
        residuals,
        details={"alpha_terms": k - 1},
        wall_time_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# The eta expansion: word-ordered partial numerators, unit denominators.


def eta_series(depth: int, cap: int) -> BiSeries:
    """Truncation of eta = a/(1 + b/(1 + b/(1 + a/(1 + ...)))) with partial
    numerators in word order, evaluated through exact convergents."""
    word = TMWord.prefix(depth)
    a_prev, a_cur = ZERO, VAR_A
    b_prev, b_cur = ONE, ONE
    for i in range(1, depth):
        c = VAR_B if word.letter_is_second(i) else VAR_A
        a_prev, a_cur = a_cur, a_cur + c * a_prev
        b_prev, b_cur = b_cur, b_cur + c * b_prev
    num = BiSeries.from_bipoly(a_cur, cap)
    den = BiSeries.from_bipoly(b_cur, cap)
    return num.div(den)


def verify_eta(cap: int = 64) -> Certificate:
    """eta satisfies eta^4 + (1+a+b) eta^2 + (a+b)(1+a+b) eta + a(a+b)^3 + ab = 0
    through total degree cap; the truncation is depth-stable."""
    t0 = time.perf_counter()
    depth = 2 * cap + 8
    eta = eta_series(depth, cap)
    eta_again = eta_series(depth + 16, cap)
    stable = eta == eta_again

    tau_s = BiSeries.from_bipoly(TAU, cap)
    apb_s = BiSeries.from_bipoly(A_PLUS_B, cap)
    const = BiSeries.from_bipoly(VAR_A * A_PLUS_B ** 3 + AB, cap)
    eta_sq = eta.square()
    residual = eta_sq.square() + tau_s * eta_sq + apb_s * tau_s * eta + const

    residuals = {
        "quartic": residual.to_bipoly(),
        "depth-stability": ZERO if stable else ONE,
        "constant-term": ZERO if eta.coeff(0, 0) == 0 else ONE,
        "leading-term": ZERO if eta.coeff(1, 0) == 1 else ONE,
    }
    return Certificate.from_residuals(
        "eta-quartic",
        {"cap": cap},
        residuals,
        details={"depth": depth},
        wall_time_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Two-variable sections of the function's own expansion.


def sections_support(depth: int) -> tuple[list[tuple[int, int]], BiSeries]:
    """Support of the two-variable expansion of the function written as a
    series in 1/a, 1/b, reported as (negated) exponent pairs.

    The convergent p/q at word length `depth` is reversed (a -> 1/a, b -> 1/b,
    cleared by the q-degree box), which turns the expansion at infinity into
    an ordinary series at the origin; it is trusted through total degree
    depth - 2.
    """
    word = TMWord.prefix(depth)
    ma = (VAR_A, ONE, ONE, ZERO)
    mb = (VAR_B, ONE, ONE, ZERO)
    folded = tm_fold(depth, ma, mb) if depth > 1 else ma
    q, p = folded[0], folded[2]
    da, db = q.deg_a, q.deg_b
    q_rev = q.flip(da, db)
    p_rev = p.flip(da, db)
    if q_rev.constant_term() != 1:
        raise ArithmeticError("reversed denominator must have constant term 1")
    cap = depth - 2
    series = BiSeries.from_bipoly(p_rev, cap).div(BiSeries.from_bipoly(q_rev, cap))
    support = sorted(series.to_bipoly().support(), key=lambda ij: (ij[0] + ij[1], ij[0]))
    dots = [(-i, -j) for i, j in support]
    return dots, series


def verify_sections(depth: int = 32) -> Certificate:
    """Every exponent pair in the expansion has odd total degree (one exponent
    even, the other odd), the first pairs are fixed, and the support is stable
    under deepening."""
    t0 = time.perf_counter()
    dots, _ = sections_support(depth)
    dots_deeper, _ = sections_support(depth + 8)
    cap = depth - 2
    deeper_trimmed = [d for d in dots_deeper if -(d[0] + d[1]) <= cap]
    parity_ok = all((i + j) % 2 == 1 for i, j in ((-u, -v) for u, v in dots))
    head_ok = dots[:3] == [(-1, 0), (-2, -1), (-2, -3)]
    residuals = {
        "parity": ZERO if parity_ok else ONE,
        "leading-dots": ZERO if head_ok else ONE,
        "depth-stability": ZERO if dots == deeper_trimmed else ONE,
    }
    return Certificate.from_residuals(
        "sections-support",
        {"depth": depth},
        residuals,
        details={"dots": len(dots), "first": dots[:6]},
        wall_time_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Suite driver.


def verify_identities(kmax: int = 5, eta_cap: int = 64, sections_depth: int = 32) -> list[Certificate]:
    """Run the whole identity suite through level kmax; returns certificates
    in deterministic order."""
    certs: list[Certificate] = []
    levels = build_tower(kmax)
    certs.append(verify_quartic_coefficients())
    for level in levels:
        certs.append(verify_tower_pqr(level))
        certs.append(verify_tower_zpqr(level))
        certs.append(verify_delta(level))
        certs.append(verify_delta_factorization(level))
        z_next = levels[level.k].Z if level.k < kmax else next_level_z(level)
        certs.append(verify_tower_recursion(level, z_next))
        certs.append(verify_explicit_z(level))
    for level in levels[: min(kmax, 3)]:
        certs.append(verify_fold_bridge(level))
    certs.append(verify_eta(eta_cap))
    certs.append(verify_sections(sections_depth))
    return certs
