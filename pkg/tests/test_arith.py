import math
import random

import pytest
from hypothesis import given, strategies as st

from tamerank.arith import (
    PadicNumber,
    crt,
    mul_order,
    padic_log,
    smallest_primitive_root,
    teichmuller_lift,
    unit_group,
    v_p,
)
from tamerank.errors import PrecisionError

ODD_PRIMES = [3, 5, 7, 11, 13, 37]


def test_v_p_examples():
    assert v_p(360, 3) == 2
    assert v_p(1, 3) == 0
    assert v_p(14640, 5) == 1


def test_v_p_rejects_zero():
    with pytest.raises(ValueError):
        v_p(0, 3)


def test_v_p_rejects_even_prime():
    with pytest.raises(ValueError):
        v_p(8, 2)


@given(
    st.integers(min_value=-(10 ** 9), max_value=10 ** 9).filter(lambda n: n != 0),
    st.integers(min_value=-(10 ** 9), max_value=10 ** 9).filter(lambda n: n != 0),
    st.sampled_from([3, 5, 7, 13]),
)
def test_v_p_additive(m, n, p):
    assert v_p(m * n, p) == v_p(m, p) + v_p(n, p)


def test_mul_order_examples():
    assert mul_order(7, 9) == 3
    assert mul_order(1, 15) == 1
    assert mul_order(2, 5) == 4


def test_mul_order_rejects_non_units():
    with pytest.raises(ValueError):
        mul_order(6, 9)


@given(st.integers(min_value=2, max_value=400), st.integers(min_value=2, max_value=500))
def test_mul_order_is_minimal(a, M):
    if math.gcd(a, M) != 1:
        return
    e = mul_order(a, M)
    assert pow(a, e, M) == 1
    for d in range(1, e):
        if e % d == 0:
            assert pow(a, d, M) != 1 or d == e


def test_unit_group_examples():
    ug9 = unit_group(9)
    assert ug9.generators == (2,) and ug9.orders == (6,)
    ug8 = unit_group(8)
    assert ug8.generators == (7, 3) and ug8.orders == (2, 2)
    ug1 = unit_group(1)
    assert ug1.generators == () and ug1.phi == 1


@pytest.mark.parametrize("M", [1, 8, 9, 15, 24, 40, 56, 105, 296, 1000])
def test_unit_group_roundtrip(M):
    ug = unit_group(M)
    assert ug.phi == len([a for a in range(M) if math.gcd(a, M) == 1]) or M == 1
    rng = random.Random(M)
    units = [a for a in range(1, M) if math.gcd(a, M) == 1] or [0]
    for _ in range(100):
        a = rng.choice(units)
        vec = ug.dlog(a)
        assert ug.exp(vec) == a % M
        for e, n in zip(vec, ug.orders):
            assert 0 <= e < n


def test_smallest_primitive_root():
    assert smallest_primitive_root(9) == 2
    assert smallest_primitive_root(5) == 2
    assert smallest_primitive_root(7) == 3


def test_teichmuller_examples():
    assert teichmuller_lift(2, 5, 2).residue == 7
    assert teichmuller_lift(1, 7, 5).residue == 1
    assert teichmuller_lift(13, 3, 2).residue == 1


def test_teichmuller_rejects_multiples():
    with pytest.raises(ValueError):
        teichmuller_lift(10, 5, 3)


@pytest.mark.parametrize("p", [3, 5, 7, 37])
def test_teichmuller_properties(p):
    N = 6
    for a in range(1, p):
        t = teichmuller_lift(a, p, N)
        assert t.residue % p == a % p
        assert pow(t.residue, p - 1, p ** N) == 1


def test_padic_log_examples():
    assert padic_log(PadicNumber(3, 3, 4)).residue == 21
    assert padic_log(PadicNumber(5, 4, 1)).residue == 0
    assert padic_log(PadicNumber(5, 2, 6)).residue == 5


def test_padic_log_rejects_non_principal():
    with pytest.raises(ValueError):
        padic_log(PadicNumber(5, 3, 2))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_padic_log_is_additive(p):
    N = 8
    mod = p ** N
    rng = random.Random(p)
    for _ in range(25):
        u = 1 + p * rng.randrange(1, p ** (N - 1))
        v = 1 + p * rng.randrange(1, p ** (N - 1))
        lu = padic_log(PadicNumber(p, N, u)).residue
        lv = padic_log(PadicNumber(p, N, v)).residue
        luv = padic_log(PadicNumber(p, N, u * v % mod)).residue
        assert (lu + lv) % mod == luv


@pytest.mark.parametrize("p", [3, 5, 7])
def test_padic_log_valuation_matches_argument(p):
    N = 9
    rng = random.Random(100 + p)
    for _ in range(20):
        s = rng.randint(1, 3)
        unit = rng.randrange(1, p ** (N - s))
        while unit % p == 0:
            unit = rng.randrange(1, p ** (N - s))
        u = 1 + p ** s * unit
        assert padic_log(PadicNumber(p, N, u)).valuation == s


def test_padic_number_division_tracks_precision():
    x = PadicNumber(3, 6, 3 * 5)
    y = PadicNumber(3, 6, 3 * 2)
    q = x.divide(y)
    assert q.precision == 5
    assert q.residue == 5 * pow(2, -1, 3 ** 5) % 3 ** 5
    with pytest.raises(ValueError):
        y.divide(PadicNumber(3, 6, 9))  # non-integral quotient
    with pytest.raises(PrecisionError):
        x.divide(PadicNumber(3, 6, 0))


def test_padic_number_zero_at_precision():
    z = PadicNumber(3, 4, 81)
    assert z.residue == 0 and z.valuation == 4
    with pytest.raises(PrecisionError):
        z.unit_part()


def test_crt():
    assert crt(2, 7, 1, 3) == 16
    assert crt(0, 1, 4, 9) == 4
    with pytest.raises(ValueError):
        crt(1, 6, 1, 9)
