"""Series expansions, defects, determinants, and spectra, checked against
independent in-test oracles (schoolbook arithmetic on plain ints)."""

import itertools
import random

from tmcf.analysis import (
    OMEGA_QUARTIC,
    _from_univar,
    _to_univar,
    approx_experiment,
    banded_toeplitz,
    bareiss_det,
    block_counting_sequence,
    cubic_root_coeffs,
    hankel_suite,
    hyperquadratic_toeplitz,
    jacobi_coeffs,
    jacobi_word_bits,
    lacunary_quartic_root,
    odd_exponent_bits,
    omega_quartic_check,
    quadratic_vanishing_search,
    quartic_defect,
    quartic_residual,
    reference_series,
    riccati_check,
    verify_quartic_at_series,
    verify_reference_roots,
    xi_series,
)
from tmcf.bipoly import BiPoly
from tmcf.contfrac import cf_convergents, tm_stream
from tmcf.gf2 import LaurentZ, PolyZ

Z = PolyZ.parse("z")
Z1 = PolyZ.parse("z+1")
Z2 = PolyZ.parse("z^2")


def _naive_mul(x: int, y: int) -> int:
    out = 0
    j = 0
    while y:
        if y & 1:
            out ^= x << j
        y >>= 1
        j += 1
    return out


def _naive_divmod(x: int, y: int):
    dy = y.bit_length() - 1
    q = 0
    while x and x.bit_length() - 1 >= dy:
        sh = x.bit_length() - 1 - dy
        q ^= 1 << sh
        x ^= y << sh
    return q, x


def _naive_convergent(ta: int, tb: int, count: int):
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    for k in range(count):
        t = tb if k.bit_count() & 1 else ta
        p, p_prev = _naive_mul(t, p) ^ p_prev, p
        q, q_prev = _naive_mul(t, q) ^ q_prev, q
    return p, q


def test_xi_against_schoolbook_division():
    for u, v, count in ((Z, Z1, 110), (Z2, Z, 80)):
        p, q = _naive_convergent(u.bits, v.bits, count)
        cp = cf_convergents(tm_stream(u, v, count))
        assert (cp.p.bits, cp.q.bits) == (p, q)
        shift = 120
        quot, _ = _naive_divmod(p << shift, q)
        xi = xi_series(u, v, 100)
        for i in range(1, 101):
            assert xi.coeff(-i) == (quot >> (shift - i)) & 1
    try:
        xi_series(Z, PolyZ(1), 16)
        assert False, "expected ValueError"
    except ValueError:
        pass


def test_quartic_residual_vanishes():
    for u, v in ((Z, Z1), (Z1, Z), (Z2, Z)):
        r = quartic_residual(u, v, 256)
        assert r.is_zero_within()
        assert r.horizon <= -256 + u.degree + v.degree


def test_quartic_defect_frozen():
    d1 = quartic_defect(Z, Z1, 1)
    assert d1["deg_q"] == 4
    assert (d1["deg_defect"], d1["bound"]) == (13, 16)
    assert d1["exact"] and d1["below_one"]
    d2 = quartic_defect(Z, Z1, 2)
    assert (d2["deg_defect"], d2["bound"]) == (37, 40)
    assert d2["exact"] and d2["below_one"]


def test_quartic_certificate():
    cert = verify_quartic_at_series(Z, Z1, 256)
    assert cert.passed, cert.residual
    assert cert.name == "quartic-at-series"
    assert [row["k"] for row in cert.details["defects"]] == [1, 2, 3]
    assert all(row["exact"] for row in cert.details["defects"])


def test_riccati():
    for u, v in ((Z, Z1), (Z2, Z), (Z2, PolyZ.parse("z^3+1"))):
        cert = riccati_check(u, v, 256)
        assert cert.passed, f"{u},{v}: {cert.residual}"
        assert cert.residual == "0"


def test_odd_exponent_bits():
    assert odd_exponent_bits(LaurentZ.from_poly(PolyZ.parse("z^2+1"))) == 0
    assert odd_exponent_bits(LaurentZ.from_poly(PolyZ.parse("z^3+z"))) != 0
    xi = xi_series(Z, Z1, 64)
    assert odd_exponent_bits(xi) != 0
    assert odd_exponent_bits(xi.square()) == 0


def test_univariate_embedding():
    rng = random.Random(55)
    for _ in range(30):
        rows_p = tuple(rng.getrandbits(20) for _ in range(4))
        rows_q = tuple(rng.getrandbits(20) for _ in range(3))
        p, q = BiPoly(rows_p), BiPoly(rows_q)
        assert _from_univar(_to_univar(p)) == p
        assert _to_univar(p * q) == _to_univar(p) * _to_univar(q)


def test_bareiss_against_permutation_expansion():
    rng = random.Random(77)
    for n in (2, 3, 4):
        for _ in range(10):
            mat = [[PolyZ(rng.getrandbits(5)) for _ in range(n)] for _ in range(n)]
            expected = PolyZ(0)
            for perm in itertools.permutations(range(n)):
                term = PolyZ(1)
                for i, j in enumerate(perm):
                    term = term * mat[i][j]
                expected = expected + term
            assert bareiss_det(mat) == expected


def test_banded_toeplitz_layout():
    from tmcf.identities import quartic_coeffs_upper

    coeffs = quartic_coeffs_upper()
    mat = banded_toeplitz(6)
    for i in range(6):
        for j in range(6):
            want = coeffs[2 + i - j] if 0 <= 2 + i - j <= 4 else BiPoly(())
            assert mat[i][j] == want


def test_toeplitz_determinants():
    from tmcf.identities import quartic_coeffs_upper

    c2 = hyperquadratic_toeplitz(2)
    assert c2.passed, c2.residual
    assert c2.params["size"] == 2
    assert c2.details["terms"] == 9
    assert (c2.details["deg_a"], c2.details["deg_b"]) == (8, 8)
    assert c2.details["methods"] == ["cofactor", "elimination"]
    coeffs = quartic_coeffs_upper()
    mat = banded_toeplitz(2)
    assert mat[0][0] * mat[1][1] + mat[0][1] * mat[1][0] == (
        coeffs[2].square() + coeffs[1].square()
    )
    c3 = hyperquadratic_toeplitz(3)
    assert c3.passed and c3.params["size"] == 6
    assert (c3.details["deg_a"], c3.details["deg_b"]) == (24, 24)
    assert c3.details["terms"] == 15
    c4 = hyperquadratic_toeplitz(4)
    assert c4.passed and c4.params["size"] == 14
    assert c4.details["methods"] == ["elimination"]
    for bad in (1, 5):
        try:
            hyperquadratic_toeplitz(bad)
            assert False, "expected ValueError"
        except ValueError:
            pass


def test_jacobi_frozen_values():
    assert jacobi_word_bits(8) == (1, 0, 0, 1, 0, 1, 1, 0)
    assert jacobi_coeffs(32) == 0b1001001100110100110000100001011


def test_jacobi_hankel_naive():
    c = jacobi_coeffs(16)
    for n in range(1, 7):
        det = 0
        for perm in itertools.permutations(range(n)):
            det ^= all((c >> (i + perm[i])) & 1 for i in range(n))
        assert det == 1


def test_omega_quartic():
    assert [g.degree for g in OMEGA_QUARTIC] == [5, 6, 6, 8, 10]
    cert = omega_quartic_check(256)
    assert cert.passed, cert.residual
    assert cert.details["leading_coeffs"][:8] == [1, 1, 0, 1, 0, 0, 0, 0]


def test_hankel_suite():
    cert = hankel_suite(32, 512)
    assert cert.passed, cert.residual
    assert cert.details["first_failure"] is None


def test_lacunary_quartic_root_support():
    x = lacunary_quartic_root(256)
    assert x.mantissa.bit_count() == 5  # exponents -1, -4, -16, -64, -256
    for j in range(5):
        assert x.coeff(-(4**j)) == 1
    res = x.square().square().shift(1) + x.shift(1) + LaurentZ(1, 0, True)
    assert res.is_zero_within()


def test_cubic_root_block_rule():
    assert block_counting_sequence(16) == sum(
        1 << n for n in (0, 1, 3, 4, 7, 9, 12, 15)
    )
    assert cubic_root_coeffs(64) == block_counting_sequence(65)


def test_reference_root_certificates():
    certs = verify_reference_roots(512, 120)
    assert [c.name for c in certs] == ["quartic-root", "cubic-root"]
    assert all(c.passed for c in certs)
    assert certs[1].details["histogram"] == {"1": 77, "2": 43}


def test_mahler_window_growth():
    from tmcf.contfrac import cf_expand, spectrum_window

    stream = cf_expand(lacunary_quartic_root(4096), 80)
    assert len(stream.quotients) >= 40
    reports = [spectrum_window(stream, w) for w in (10, 20, 40)]
    assert [r.max_degree for r in reports] == [32, 128, 512]
    assert reports[0].histogram == {1: 5, 2: 3, 8: 1, 32: 1}
    assert reports[1].histogram == {1: 10, 2: 5, 8: 3, 32: 1, 128: 1}
    assert reports[2].histogram == {1: 20, 2: 10, 8: 5, 32: 3, 128: 1, 512: 1}


def test_reference_series_dispatch():
    assert reference_series("mahler", 64) == lacunary_quartic_root(64)
    assert reference_series("baumsweet", 64).coeff(0) == 1
    try:
        reference_series("nosuch", 64)
        assert False, "expected ValueError"
    except ValueError:
        pass


def test_approximation_exponents():
    cert = approx_experiment(Z, Z1, 1)
    assert cert.passed, cert.residual
    for key, want in {
        "k": 4, "deg_q_prev": 3, "deg_q": 4, "deg_q_next": 5,
        "lin_log": -5, "quad_log": -4, "err1_log": -4, "err2_log": -4,
        "xi_err_log": -7, "xi2_err_log": -8,
    }.items():
        assert cert.details[key] == want
    for ell in (2, 3):
        assert approx_experiment(Z, Z1, ell).passed
    assert approx_experiment(Z1, Z, 2).passed
    assert approx_experiment(Z2, PolyZ.parse("z^3+1"), 1).passed


def test_quadratic_vanishing_orders():
    c = quadratic_vanishing_search(Z, Z1, 4)
    assert c.passed, c.residual
    assert c.details["order"] == 12 and c.details["offset"] == 0
    assert c.details["coeff_degrees"] == [2, 2, 4]
    c = quadratic_vanishing_search(Z, Z1, 8)
    assert c.details["order"] == 25 and c.details["offset"] == 1
    assert c.details["coeff_degrees"] == [6, 7, 7]
    c = quadratic_vanishing_search(Z1, Z, 4)
    assert c.details["order"] == 12
    c = quadratic_vanishing_search(Z2, Z, 4)
    assert c.passed
    assert c.details["order"] == 12
