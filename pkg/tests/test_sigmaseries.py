import random

import pytest

from tmotive.errors import AmbiguousZeroError, FieldDivisionError, NotAUnitError
from tmotive.field import FieldConfig, PerfectFieldElement as K
from tmotive.sigmaseries import QuotientSigmaElement, SkewLaurent
from tmotive.taupoly import SkewTauPoly

CFG3 = FieldConfig(3)


def theta():
    return K.theta(CFG3)


def sl(coeffs, prec=None):
    return SkewLaurent(CFG3, coeffs, prec)


def test_sigma_commutation():
    s = SkewLaurent.sigma(CFG3)
    x = SkewLaurent.constant(theta())
    assert s * x == sl({1: K.theta_root(CFG3, 1)})


def test_monomial_inverse_exact():
    s2 = SkewLaurent.sigma(CFG3, 2)
    inv = s2.invert(10)
    assert inv.is_exact()
    assert inv == SkewLaurent.sigma(CFG3, -2)
    assert (s2 * inv) == SkewLaurent.one(CFG3)


def test_geometric_series_product():
    one = K.one(CFG3)
    x = sl({0: one, 1: one})  # 1 + sigma
    y = sl({0: one, 1: -one, 2: one, 3: -one}, prec=4)  # 1 - s + s^2 - s^3 + O(s^4)
    prod = x * y
    assert prod.prec == 4
    assert prod.coeffs == {0: one}  # 1 + O(s^4)


def test_invert_constant_plus_sigma():
    one = K.one(CFG3)
    x = sl({0: one, 1: one})
    y = x.invert(3)
    assert y.prec == 3
    assert y.coefficient(0) == one
    assert y.coefficient(1) == -one
    assert y.coefficient(2) == one
    assert (x * y).agrees_to_precision(SkewLaurent.one(CFG3))
    assert (y * x).agrees_to_precision(SkewLaurent.one(CFG3))


def test_invert_theta_plus_sigma_derived():
    th = theta()
    x = sl({0: th, 1: K.one(CFG3)})
    y = x.invert(2)
    th_inv = th.inverse()
    assert y.coefficient(0) == th_inv
    assert y.coefficient(1) == -(th_inv * th_inv.twist(-1))
    prod = x * y
    assert prod.agrees_to_precision(SkewLaurent.one(CFG3), upto=2)
    prod2 = y * x
    assert prod2.agrees_to_precision(SkewLaurent.one(CFG3), upto=2)


def test_invert_requires_known_valuation():
    empty_truncated = sl({}, prec=5)
    with pytest.raises(AmbiguousZeroError):
        empty_truncated.invert(10)
    with pytest.raises(FieldDivisionError):
        SkewLaurent.zero(CFG3).invert(10)


def test_twist_examples():
    th = theta()
    x = sl({1: th})
    assert x.twist(1) == sl({1: th**3})
    assert x.twist(0) is x


def _random_exact(rng, span=3):
    th = theta()
    pool = [K.zero(CFG3), K.one(CFG3), th, th + K.one(CFG3), K.from_int(CFG3, 2)]
    return SkewLaurent(CFG3, {k: rng.choice(pool) for k in range(-span, span + 1)})


def test_sigma_power_commutation_randomized():
    rng = random.Random(31)
    for _ in range(20):
        x = _random_exact(rng)
        k = rng.randint(-3, 3)
        lhs = SkewLaurent.sigma(CFG3, k) * x if k >= 0 else x.mul_sigma_left(k)
        # sigma^k * x = twist(x, -k) * sigma^k
        rhs = x.twist(-k).mul_sigma_right(k)
        assert lhs.agrees_to_precision(rhs)
        assert x.mul_sigma_left(k) == rhs


def test_valuation_rules_randomized():
    rng = random.Random(37)
    for _ in range(30):
        x = _random_exact(rng)
        y = _random_exact(rng)
        vx, vy = x.valuation(), y.valuation()
        if vx.is_known and vy.is_known:
            assert (x * y).valuation().value == vx.value + vy.value
            vsum = (x + y).valuation()
            if vsum.is_known:
                assert vsum.value >= min(vx.value, vy.value)
                if vx.value != vy.value:
                    assert vsum.value == min(vx.value, vy.value)


def test_precision_soundness_truncate_then_op():
    rng = random.Random(41)
    for _ in range(25):
        x = _random_exact(rng)
        y = _random_exact(rng)
        n = rng.randint(0, 4)
        exact_then_trunc = (x * y).truncate(n)
        trunc_then_op = x.truncate(n + 6) * y.truncate(n + 6)
        assert exact_then_trunc.agrees_to_precision(trunc_then_op, upto=n)
        assert (x + y).truncate(n).agrees_to_precision(
            x.truncate(n) + y.truncate(n), upto=n
        )
        k = rng.randint(-2, 2)
        assert (x.twist(k)).truncate(n) == (x.truncate(n)).twist(k)


def test_embedding_is_ring_homomorphism():
    rng = random.Random(43)
    th = theta()
    pool = [K.zero(CFG3), K.one(CFG3), th, th * th, K.from_int(CFG3, 2)]
    for _ in range(20):
        a = SkewTauPoly(CFG3, {k: rng.choice(pool) for k in range(3)})
        b = SkewTauPoly(CFG3, {k: rng.choice(pool) for k in range(3)})
        ea = SkewLaurent.from_tau_poly(a)
        eb = SkewLaurent.from_tau_poly(b)
        assert SkewLaurent.from_tau_poly(a * b) == ea * eb
        assert SkewLaurent.from_tau_poly(a + b) == ea + eb


# quotient ring


def test_quotient_invert_geometric():
    one = K.one(CFG3)
    x = QuotientSigmaElement(CFG3, 3, [one, one, K.zero(CFG3)])  # 1 + sigma
    y = x.inv()
    assert y.coeffs == (one, -one, one)
    assert (x * y) == QuotientSigmaElement.one(CFG3, 3)
    assert (y * x) == QuotientSigmaElement.one(CFG3, 3)


def test_quotient_nilpotency():
    s = 4
    z = K.zero(CFG3)
    one = K.one(CFG3)
    sigma = QuotientSigmaElement(CFG3, s, [z, one, z, z])
    top = QuotientSigmaElement(CFG3, s, [z, z, z, one])
    assert (sigma * top).is_zero()


def test_quotient_invert_theta_series():
    th = theta()
    z = K.zero(CFG3)
    x = QuotientSigmaElement(CFG3, 2, [th, th])
    y = x.inv()
    assert y.coeffs == (th.inverse(), -(th.twist(-1).inverse()))
    assert x * y == QuotientSigmaElement.one(CFG3, 2)
    assert y * x == QuotientSigmaElement.one(CFG3, 2)
    with pytest.raises(NotAUnitError):
        QuotientSigmaElement(CFG3, 2, [z, th]).inv()


def test_quotient_from_laurent_and_val():
    one = K.one(CFG3)
    x = sl({1: one, 3: theta()})
    q = QuotientSigmaElement.from_laurent(x, 3)
    assert q.val() == 1
    assert QuotientSigmaElement.zero(CFG3, 3).val() == 3
    with pytest.raises(ValueError):
        QuotientSigmaElement.from_laurent(sl({-1: one}), 3)
