import random

from tmotive.field import FieldConfig, PerfectFieldElement as K
from tmotive.taupoly import NEG_INF, SkewTauPoly, TauMatrix, mat_pow, power_prefix, s_n

CFG3 = FieldConfig(3)
CFG2 = FieldConfig(2)


def tp(cfg, coeffs):
    return SkewTauPoly(cfg, coeffs)


def theta(cfg=CFG3):
    return K.theta(cfg)


def example_62_matrix(cfg=CFG3):
    """phi_t = [[theta + tau^2, tau^3], [1 + tau, theta + tau^2]]."""
    th = K.theta(cfg)
    one = K.one(cfg)
    diag = tp(cfg, {0: th, 2: one})
    return TauMatrix(
        cfg,
        [
            [diag, tp(cfg, {3: one})],
            [tp(cfg, {0: one, 1: one}), diag],
        ],
    )


def test_commutation_rule():
    th = theta()
    tau = SkewTauPoly.tau(CFG3)
    assert tau * SkewTauPoly.constant(th) == tp(CFG3, {1: th**3})


def test_char_two_square():
    one = K.one(CFG2)
    f = tp(CFG2, {0: one, 1: one})  # 1 + tau
    assert f * f == tp(CFG2, {0: one, 2: one})  # 1 + tau^2


def _convolution_oracle(a, b):
    # independent expansion of the product rule, term by term
    cfg = a.cfg
    out = SkewTauPoly.zero(cfg)
    for i, ai in a.coeffs.items():
        for j, bj in b.coeffs.items():
            term = SkewTauPoly(cfg, {i + j: ai * bj.twist(i)})
            out = out + term
    return out


def test_derived_product_example():
    th = theta()
    one = K.one(CFG3)
    f = tp(CFG3, {0: th, 2: one})  # theta + tau^2
    g = tp(CFG3, {0: one, 1: one})  # 1 + tau
    prod = f * g
    expected = tp(CFG3, {0: th, 1: th, 2: one, 3: one})
    assert prod == expected
    assert prod == _convolution_oracle(f, g)


def test_example_62_square_matches_displayed_matrix():
    m = example_62_matrix()
    sq = mat_pow(m, 2)
    th = theta()
    one = K.one(CFG3)
    two = K.from_int(CFG3, 2)
    q = 3
    diag = tp(CFG3, {0: th * th, 2: th ** (q**2) + th, 3: one, 4: two})
    top_right = tp(CFG3, {3: th ** (q**3) + th, 5: two})
    bottom_left = tp(CFG3, {0: two * th, 1: th**q + th, 2: two, 3: two})
    assert sq[0, 0] == diag
    assert sq[1, 1] == diag
    assert sq[0, 1] == top_right
    assert sq[1, 0] == bottom_left


def test_identity_powers():
    ident = TauMatrix.identity(CFG3, 3)
    assert mat_pow(ident, 5) == ident


def _random_poly(cfg, rng, maxdeg=2):
    th = K.theta(cfg)
    pool = [K.zero(cfg), K.one(cfg), th, th + K.one(cfg), K.from_int(cfg, 2), th * th]
    return SkewTauPoly(cfg, {k: rng.choice(pool) for k in range(maxdeg + 1)})


def test_mat_pow_associativity_random():
    rng = random.Random(3)
    for _ in range(5):
        m = TauMatrix(CFG3, [[_random_poly(CFG3, rng) for _ in range(2)] for _ in range(2)])
        assert mat_pow(m, 4) == mat_pow(m, 2) * mat_pow(m, 2)


def test_ring_axioms_and_noncommutativity():
    rng = random.Random(9)
    for _ in range(25):
        a, b, c = (_random_poly(CFG3, rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c
    tau = SkewTauPoly.tau(CFG3)
    th_poly = SkewTauPoly.constant(theta())
    assert tau * th_poly != th_poly * tau


def test_degree_additivity():
    rng = random.Random(17)
    for _ in range(30):
        a, b = _random_poly(CFG3, rng), _random_poly(CFG3, rng)
        if a.is_zero() or b.is_zero():
            continue
        assert (a * b).degree() == a.degree() + b.degree()
    assert SkewTauPoly.zero(CFG3).degree() == NEG_INF


def test_s_n_examples():
    m = example_62_matrix()
    assert s_n(m, 1) == 3
    assert s_n(m, 2) == 5
    th = theta()
    const = TauMatrix(CFG3, [[SkewTauPoly.constant(th), SkewTauPoly.zero(CFG3)],
                             [SkewTauPoly.zero(CFG3), SkewTauPoly.constant(th)]])
    assert s_n(const, 4) == 0


def test_power_prefix_consistency():
    m = example_62_matrix()
    prefix = power_prefix(m, 3)
    assert prefix[0] == m
    assert prefix[1] == m * m
    assert prefix[2] == m * m * m
