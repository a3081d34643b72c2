import random

import pytest
from hypothesis import given, settings, strategies as st

from tmotive.errors import FieldDivisionError
from tmotive.field import (
    FieldConfig,
    GaloisField,
    MODE_FINITE,
    PerfectFieldElement as K,
    split_prime_power,
)

CFG3 = FieldConfig(3)
CFG2 = FieldConfig(2)


def theta(cfg=CFG3):
    return K.theta(cfg)


def test_split_prime_power():
    assert split_prime_power(2) == (2, 1)
    assert split_prime_power(9) == (3, 2)
    assert split_prime_power(8) == (2, 3)
    with pytest.raises(ValueError):
        split_prime_power(6)
    with pytest.raises(ValueError):
        split_prime_power(1)


def test_galois_field_extension_tables():
    f4 = GaloisField(2, 2)
    # all nonzero elements invertible
    for a in range(1, 4):
        assert f4.mul(a, f4.inv(a)) == 1
    # x^q = x on every element
    for a in range(4):
        assert f4.pow(a, 4) == a


def test_characteristic_addition():
    th = theta()
    two_theta = th + th
    assert two_theta == K.from_int(CFG3, 2) * th
    # at p = 2 theta + theta = 0
    th2 = theta(CFG2)
    assert (th2 + th2).is_zero()


def test_root_multiplication_level():
    # theta^(1/3) * theta^(1/3) = theta^(2/3), still at level 1 for q = 3
    r = K.theta_root(CFG3, 1)
    sq = r * r
    assert sq.level == 1
    assert sq.num == {2: 1}
    cubed = sq * r
    assert cubed == theta()
    assert cubed.level == 0


def test_gcd_normalization():
    th = theta()
    one = K.one(CFG3)
    num = th * th - one  # theta^2 - 1
    den = th - one
    quotient = num / den
    assert quotient == th + one


def test_twist_examples():
    th = theta()
    assert th.twist(1) == th**3
    assert th.twist(-1) == K.theta_root(CFG3, 1)
    c = K.from_int(CFG3, 2)
    for k in range(-3, 4):
        assert c.twist(k) == c


def test_twist_round_trip():
    rng = random.Random(7)
    pool = _element_pool(CFG3, rng)
    for x in pool:
        for k in range(-3, 4):
            assert x.twist(k).twist(-k) == x


def test_twist_is_automorphism():
    rng = random.Random(11)
    pool = _element_pool(CFG3, rng)
    for _ in range(40):
        a, b = rng.choice(pool), rng.choice(pool)
        k = rng.randint(-3, 3)
        assert (a * b).twist(k) == a.twist(k) * b.twist(k)
        assert (a + b).twist(k) == a.twist(k) + b.twist(k)


def _element_pool(cfg, rng):
    th = K.theta(cfg)
    base = [
        K.zero(cfg),
        K.one(cfg),
        K.from_int(cfg, 2),
        th,
        th + K.one(cfg),
        th * th,
        K.theta_root(cfg, 1),
        K.theta_root(cfg, 2) + th,
        K.one(cfg) / (th + K.one(cfg)),
        th / (th * th + K.one(cfg)),
    ]
    # a few random products/sums at mixed levels
    for _ in range(6):
        x = rng.choice(base) * rng.choice(base) + rng.choice(base)
        base.append(x)
    return base


def test_field_axioms_randomized():
    rng = random.Random(23)
    pool = _element_pool(CFG3, rng)
    one = K.one(CFG3)
    for _ in range(60):
        a, b, c = rng.choice(pool), rng.choice(pool), rng.choice(pool)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a
        if not a.is_zero():
            assert a * (one / a) == one
        assert a - a == K.zero(CFG3)


def test_canonical_uniqueness():
    rng = random.Random(5)
    pool = _element_pool(CFG3, rng)
    for _ in range(40):
        a, b = rng.choice(pool), rng.choice(pool)
        diff_zero = (a - b).is_zero()
        syntactic = (a.level, a.num, a.den) == (b.level, b.num, b.den)
        assert diff_zero == syntactic


def test_division_by_zero():
    with pytest.raises(FieldDivisionError):
        K.one(CFG3) / K.zero(CFG3)


def test_finite_mode_has_no_theta():
    cfg = FieldConfig(3, mode=MODE_FINITE)
    with pytest.raises(ValueError):
        K.theta(cfg)
    a = K.from_int(cfg, 2)
    assert a.twist(5) == a


def test_mixed_level_sum_exponent_blowup_is_handled():
    # theta + theta^(1/q^5): exponents scale by q^5 at the common level
    th = theta()
    deep = K.theta_root(CFG3, 5)
    s = th + deep
    assert s.level == 5
    assert max(s.num) == 3**5
    assert (s - deep) == th


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=0, max_value=2),
    st.integers(min_value=0, max_value=2),
    st.integers(min_value=-2, max_value=2),
)
def test_twist_power_identity(a_exp, lvl, k):
    # twist(theta^(a/q^lvl), k) is theta^(a*q^k/q^lvl)
    x = K.theta_power(CFG3, a_exp).twist(-lvl)
    lhs = x.twist(k)
    rhs = K.theta_power(CFG3, a_exp).twist(k - lvl)
    assert lhs == rhs


def test_rendering_round_trip_forms():
    th = theta()
    assert K.zero(CFG3).to_text() == "0"
    assert (th + K.one(CFG3)).to_text() == "th + 1"
    assert K.theta_root(CFG3, 2).to_text() == "root(th, 2)"
    frac = K.one(CFG3) / (th + K.one(CFG3))
    assert frac.to_text() == "1/(th + 1)"
