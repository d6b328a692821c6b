"""Thue-Morse words, convergent folds, and series <-> quotient round trips."""

import random

from tmcf.contfrac import (
    InsufficientStreamError,
    PQStream,
    SpectrumReport,
    TMWord,
    cf_convergents,
    cf_eval,
    cf_expand,
    mat_mul4,
    quotient_matrix,
    spectrum_window,
    tm_fold,
    tm_stream,
)
from tmcf.gf2 import LaurentZ, PolyZ

Z = PolyZ.parse("z")
Z1 = PolyZ.parse("z+1")


def random_quotient(rng: random.Random, max_deg: int = 3) -> PolyZ:
    d = rng.randrange(1, max_deg + 1)
    return PolyZ(rng.getrandbits(d) | (1 << d))


def random_stream(rng: random.Random, count: int, with_a0: bool = False) -> PQStream:
    a0 = PolyZ(rng.getrandbits(3)) if with_a0 else PolyZ(0)
    return PQStream(a0, tuple(random_quotient(rng) for _ in range(count)))


def test_word_prefix_and_parity():
    w = TMWord.prefix(8)
    # a b b a b a a b
    assert [w.letter_is_second(k) for k in range(8)] == [
        False, True, True, False, True, False, False, True,
    ]
    big = TMWord.prefix(1 << 20)
    for k in range(1 << 16):
        assert big.letter_is_second(k) == (k.bit_count() & 1 == 1)
    rng = random.Random(7)
    for _ in range(2000):
        k = rng.randrange(1 << 20)
        assert big.letter_is_second(k) == (k.bit_count() & 1 == 1)
    # prefixes of length 2^k are balanced between the two letters
    for k in range(1, 16):
        assert TMWord.prefix(1 << k).letters.bit_count() == 1 << (k - 1)


def test_word_palindromes_and_slicing():
    for ell in range(7):
        assert TMWord.prefix(4**ell).is_palindrome()
    assert not TMWord.prefix(8).is_palindrome()
    assert not TMWord.prefix(2).is_palindrome()
    w = TMWord.prefix(64)
    assert w.prefix_word(16) == TMWord.prefix(16)
    try:
        w.prefix_word(65)
        assert False, "expected ValueError"
    except ValueError:
        pass
    try:
        w.letter_is_second(64)
        assert False, "expected IndexError"
    except IndexError:
        pass
    try:
        TMWord.prefix(-1)
        assert False, "expected ValueError"
    except ValueError:
        pass


def test_stream_validation():
    for bad in (PolyZ(0), PolyZ(1)):
        try:
            PQStream(PolyZ(0), (Z, bad))
            assert False, "expected ValueError"
        except ValueError:
            pass
    s = tm_stream(Z, PolyZ.parse("z^3+1"), 8)
    # abbabaab: three a's of degree 1... no: four of each in a balanced prefix
    assert s.degree_sum() == 4 * 1 + 4 * 3
    assert len(s) == 8


def test_convergent_determinants():
    rng = random.Random(101)
    for _ in range(25):
        stream = random_stream(rng, 12, with_a0=bool(rng.getrandbits(1)))
        for k in range(1, 13):
            cp = cf_convergents(stream, k)
            assert cp.det_ok()
            assert cp.q.degree == sum(q.degree for q in stream.quotients[:k])
    try:
        cf_convergents(stream, 13)
        assert False, "expected InsufficientStreamError"
    except InsufficientStreamError:
        pass


def test_palindrome_prefixes_give_symmetric_convergents():
    # prefixes of length 4^l are palindromic, which forces p_k = q_{k-1}
    for a, b in ((Z, Z1), (PolyZ.parse("z^2"), Z), (PolyZ.parse("z^2+z"), PolyZ.parse("z^3+1"))):
        stream = tm_stream(a, b, 64)
        for k in (4, 16, 64):
            cp = cf_convergents(stream, k)
            assert cp.p == cp.q_prev
        # a non-palindromic prefix length where the symmetry breaks
        cp = cf_convergents(stream, 8)
        assert cp.p != cp.q_prev


def test_fold_matches_sequential_product():
    ma, mb = quotient_matrix(Z), quotient_matrix(Z1)
    seq = None
    for n in range(1, 17):
        last = mb if (n - 1).bit_count() & 1 else ma
        seq = last if seq is None else mat_mul4(seq, last)
        assert tm_fold(n, ma, mb) == seq
        assert tm_fold(n, ma, mb, reverse=True) == seq
    try:
        tm_fold(0, ma, mb)
        assert False, "expected ValueError"
    except ValueError:
        pass


def test_eval_small_anchors():
    # [0; z] = 1/z
    x = cf_eval(PQStream(PolyZ(0), (Z,)), 2)
    assert x.coeff(-1) == 1 and x.coeff(-2) == 0
    # [0; z, z] = z / (z^2 + 1) = z^-1 + z^-3 + ...
    y = cf_eval(PQStream(PolyZ(0), (Z, Z)), 4)
    assert [y.coeff(-e) for e in range(1, 5)] == [1, 0, 1, 0]
    assert not y.exact and y.horizon == -4
    # integer part passes straight through
    a0 = PolyZ.parse("z^2+1")
    w = cf_eval(PQStream(a0, (Z, Z1)), 4)
    assert w.poly_part() == a0


def test_eval_expand_round_trip():
    rng = random.Random(202)
    for _ in range(30):
        stream = random_stream(rng, 10, with_a0=bool(rng.getrandbits(1)))
        sd = stream.degree_sum()
        x = cf_eval(stream, 2 * sd)
        back = cf_expand(x, 20)
        assert back.a0 == stream.a0
        assert back.quotients == stream.quotients
        assert back.exhausted  # the tail is only zero within the horizon
        # a shorter request stops early without claiming exhaustion
        head = cf_expand(x, 4)
        assert head.quotients == stream.quotients[:4]
        assert not head.exhausted


def test_expand_honesty():
    # exact polynomial: empty quotient list, honestly terminated
    x = LaurentZ.from_poly(PolyZ.parse("z^3+z"))
    s = cf_expand(x, 10)
    assert s.a0 == PolyZ.parse("z^3+z") and s.quotients == () and not s.exhausted
    # a series trusted only above z^0 certifies nothing
    s = cf_expand(LaurentZ(1, 2, False), 10)
    assert s.quotients == () and s.exhausted


def test_eval_precision_guard():
    stream = tm_stream(Z, Z1, 8)  # degree sum 8
    assert cf_eval(stream, 16).horizon == -16
    try:
        cf_eval(stream, 17)
        assert False, "expected InsufficientStreamError"
    except InsufficientStreamError:
        pass


def test_convergent_error_law():
    # |q_k xi - p_k| = 1/|q_{k+1}| along the stream's own convergents
    for a, b in ((Z, Z1), (PolyZ.parse("z^2"), Z)):
        stream = tm_stream(a, b, 32)
        xi = cf_eval(stream, 2 * stream.degree_sum())
        for k in range(1, 30):
            cp = cf_convergents(stream, k)
            err = xi * LaurentZ.from_poly(cp.q) + LaurentZ.from_poly(cp.p)
            nxt = cf_convergents(stream, k + 1)
            assert err.norm_log2() == -nxt.q.degree


def test_spectrum_windows():
    stream = tm_stream(PolyZ.parse("z^2"), PolyZ.parse("z^3+1"), 64)
    rep = spectrum_window(stream, 64)
    assert rep == SpectrumReport(window=64, max_degree=3, histogram={}, lagrange_log2=-3)
    assert rep.histogram == {2: 32, 3: 32}
    const = PQStream(PolyZ(0), (Z,) * 12)
    rep = spectrum_window(const, 12)
    assert rep.histogram == {1: 12}
    assert rep.max_degree == 1 and rep.lagrange_log2 == -1
    try:
        spectrum_window(const, 13)
        assert False, "expected InsufficientStreamError"
    except InsufficientStreamError:
        pass
