"""Matrix tower identities: anchors at level 1, invariants, and the full suite."""

from tmcf.bipoly import AB, ONE, TAU, VAR_A, VAR_B, ZERO, BiPoly, Mat2, TauLaurent
from tmcf.identities import (
    alpha_series,
    build_tower,
    delta_closed_form,
    eta_series,
    exact_div3,
    explicit_z,
    next_level_z,
    quartic_coeffs_lower,
    quartic_coeffs_upper,
    sections_support,
    t_closed_form,
    tower_cached,
    verify_delta,
    verify_delta_factorization,
    verify_eta,
    verify_explicit_z,
    verify_fold_bridge,
    verify_identities,
    verify_quartic_coefficients,
    verify_sections,
    verify_tower_pqr,
    verify_tower_recursion,
    verify_tower_zpqr,
)


def test_exact_div3():
    assert exact_div3(9) == 3
    assert exact_div3(0) == 0
    try:
        exact_div3(10)
        assert False, "expected ArithmeticError"
    except ArithmeticError:
        pass


def test_level_one_anchors():
    (lvl,) = build_tower(1)
    assert lvl.N == Mat2(
        BiPoly.parse("a*b+1"), BiPoly.parse("b"), BiPoly.parse("a"), BiPoly.parse("a*b")
    )
    assert lvl.Q == BiPoly.parse("a^2*b^2+b^2+1")
    assert lvl.P == BiPoly.parse("a^2*b+a*b^2+a")
    assert lvl.R == BiPoly.parse("a^2*b^2+a^2")
    assert lvl.Z == BiPoly.parse("a*b+b+1")
    assert (lvl.n, lvl.m) == (2, 2)
    assert lvl.M.is_symmetric()
    # reversing Q in its degree box gives the word-side denominator q_4
    assert lvl.Q.flip(2, 2) == BiPoly.parse("a^2*b^2+a^2+1")


def test_level_two_anchors():
    levels = build_tower(2)
    z2 = levels[1].Z
    assert str(z2) == (
        "a^4*b^4+a^3*b^2+a^3*b+a^2*b^3+a^2*b^2+a^2*b+a^2+a*b^3+a*b+b^3+b^2+b+1"
    )
    assert z2.n_terms() == 13
    assert (levels[1].n, levels[1].m) == (8, 6)
    assert next_level_z(levels[0]) == z2


def test_tower_structure():
    levels = build_tower(4)
    for lvl in levels:
        assert lvl.n == 1 << (2 * lvl.k - 1)
        assert 3 * lvl.m == (1 << (2 * lvl.k)) + 2
        assert lvl.M.is_symmetric()
        assert max(lvl.Q.deg_a, lvl.Q.deg_b, lvl.P.deg_a, lvl.P.deg_b) == lvl.n
        assert lvl.Z == lvl.N.e00 + lvl.N.e01
        # trace collapses to a pure tau power
        assert lvl.Q + lvl.R == TAU ** lvl.m
    assert tower_cached(4) == tuple(build_tower(4))
    try:
        build_tower(0)
        assert False, "expected ValueError"
    except ValueError:
        pass


def test_quartic_coefficient_families():
    lower = quartic_coeffs_lower()
    upper = quartic_coeffs_upper()
    assert len(lower) == len(upper) == 5
    assert upper[1] == upper[3]
    s = BiPoly.parse("a^2*b^2+a^2+b^2")
    assert upper[0] == VAR_B * (VAR_A + VAR_B) * s + BiPoly.monomial(2, 4)
    assert upper[2] == AB.square() * s
    assert upper[0] + upper[4] == (VAR_A + VAR_B).square() * (AB + VAR_A + VAR_B).square()
    for j in range(5):
        assert upper[j] == lower[j].flip(4, 4)
    cert = verify_quartic_coefficients()
    assert cert.passed and cert.residual == "0"
    assert cert.details["corner_carriers"] == [2]


def test_delta_closed_form_level_one():
    (lvl,) = build_tower(1)
    # the quartic combination of Z_1 collapses to three monomials
    assert delta_closed_form(lvl) == BiPoly.parse("a^4*b^4+a^3*b^2+a^2*b^3")
    cert = verify_delta(lvl)
    assert cert.passed
    assert cert.details["delta"] == "a^4*b^4+a^3*b^2+a^2*b^3"


def test_per_level_certificates():
    levels = build_tower(3)
    for lvl in levels:
        for cert in (
            verify_tower_pqr(lvl),
            verify_tower_zpqr(lvl),
            verify_delta(lvl),
            verify_delta_factorization(lvl),
            verify_explicit_z(lvl),
        ):
            assert cert.passed, f"{cert.name}: {cert.residual}"
            assert cert.params["k"] == lvl.k
    for lvl, nxt in zip(levels, levels[1:]):
        assert verify_tower_recursion(lvl, nxt.Z).passed
    assert verify_tower_recursion(levels[-1], next_level_z(levels[-1])).passed


def test_recursion_rejects_wrong_level():
    levels = build_tower(2)
    cert = verify_tower_recursion(levels[0], levels[0].Z)  # wrong: needs Z_2
    assert not cert.passed
    assert cert.residual != "0"


def test_fold_bridge_levels():
    levels = build_tower(3)
    for lvl in levels:
        cert = verify_fold_bridge(lvl)
        assert cert.passed, f"{cert.name}: {cert.residual}"
        assert cert.params["letters"] == 4 ** lvl.k
        assert cert.details["deg_a_q"] == lvl.n


def test_t_closed_form_degree_box():
    for lvl in build_tower(3):
        t = t_closed_form(lvl)
        assert t.deg_a <= 2 * lvl.n + 4 and t.deg_b <= 2 * lvl.n + 4
        assert not t.is_zero()


def test_explicit_z_and_alpha():
    levels = build_tower(3)
    for lvl in levels:
        assert explicit_z(lvl.k, lvl.n) == TauLaurent.make(lvl.Z, 0)
    assert alpha_series(1).is_zero()
    a2 = alpha_series(2)
    assert a2 == TauLaurent(BiPoly.monomial(4, 4), -2)


def test_eta_expansion():
    eta = eta_series(40, 16)
    assert eta.coeff(0, 0) == 0
    assert eta.coeff(1, 0) == 1
    cert = verify_eta(cap=24)
    assert cert.passed, cert.residual
    assert cert.params["cap"] == 24


def test_sections_parity():
    dots, _ = sections_support(26)
    assert dots[:3] == [(-1, 0), (-2, -1), (-2, -3)]
    assert all((i + j) % 2 == 1 for i, j in ((-u, -v) for u, v in dots))
    cert = verify_sections(depth=26)
    assert cert.passed, cert.residual
    assert cert.details["first"][:3] == [(-1, 0), (-2, -1), (-2, -3)]


def test_full_suite_names():
    certs = verify_identities(kmax=3, eta_cap=32, sections_depth=26)
    assert len(certs) == 24
    assert all(c.passed for c in certs)
    names = {c.name for c in certs}
    expected = {"quartic-coefficients", "eta-quartic", "sections-support"}
    for k in (1, 2, 3):
        expected |= {
            f"tower-pqr-k{k}",
            f"tower-zpqr-k{k}",
            f"delta-closed-form-k{k}",
            f"delta-factorization-k{k}",
            f"tower-recursion-k{k}",
            f"explicit-z-alpha-k{k}",
            f"fold-bridge-k{k}",
        }
    assert names == expected
