"""Exact arithmetic in a perfect coefficient field.

Two field modes are supported:

* ``finite``: K = F_q itself (q = p^e a prime power);
* ``rational_perfection``: K = union over m of F_q(theta^(1/q^m)), the
  closure of the rational function field F_q(theta) under q-th roots.

Elements of the perfection are stored as a reduced fraction of sparse
polynomials in a single variable ``u`` together with a *level* m, where
``u`` stands for theta^(1/q^m).  Raising to the q-th power (and taking
q-th roots) then becomes pure bookkeeping: coefficients live in F_q and
are fixed by x -> x^q, so only the level and the exponents move.

Polynomials over F_q are sparse dicts {exponent: coefficient-code} with
nonzero coefficients only.  Coefficient codes are integers 0..q-1 in the
base-p digit encoding of F_{p^e}.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import FieldDivisionError, ReductionOverflowError

# Work guards for fraction normalization; generously above desk scale.
# Reduction bails out (leaving a value unreduced) rather than grinding.
_SPARSE_DIV_STEP_LIMIT = 20_000
_POWMOD_DEG_LIMIT = 256
_PLAIN_EUCLID_DEG_LIMIT = 4096
# prime-field polynomials up to this degree may be densified (numpy path)
_DENSE_NP_DEG_LIMIT = 1 << 17
_DENSE_TERMS_TRIGGER = 192


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def split_prime_power(q):
    """Return (p, e) with q = p^e, p prime.  Raises ValueError otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if _is_prime(p) and q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, e
    raise ValueError(f"{q} is not a prime power")


class GaloisField:
    """Arithmetic in F_{p^e} on integer-coded elements.

    Elements are integers in [0, q) encoding base-p digit vectors; for
    e > 1 multiplication is defined modulo a fixed irreducible polynomial
    chosen deterministically from (p, e) (the lexicographically smallest
    monic irreducible of degree e over F_p), so results are reproducible.
    """

    def __init__(self, p, e):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if e < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.e = e
        self.q = p**e
        if e > 1:
            if self.q > 1024:
                raise ValueError("extension fields larger than 1024 elements unsupported")
            self._modulus = self._find_irreducible()
            self._mul_table = self._build_mul_table()

    # dense coefficient-list helpers over F_p, used only at construction
    def _dense_mulmod(self, a, b, mod):
        p = self.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % p
        # reduce by monic mod
        dm = len(mod) - 1
        while len(out) > dm:
            top = out.pop()
            if top:
                k = len(out) - dm
                for j in range(dm):
                    out[k + j] = (out[k + j] - top * mod[j]) % p
        while len(out) < dm:
            out.append(0)
        return out

    def _find_irreducible(self):
        p, e = self.p, self.e
        for code in range(p**e):
            poly = self._decode(code, e) + [1]  # monic degree e
            if self._dense_irreducible(poly):
                return poly
        raise AssertionError("no irreducible polynomial found")

    def _dense_irreducible(self, poly):
        # trial division by all monic polynomials of degree 1..e//2
        p = self.p
        e = len(poly) - 1
        for d in range(1, e // 2 + 1):
            for code in range(p**d):
                div = self._decode(code, d) + [1]
                if self._dense_divides(div, poly):
                    return False
        return True

    def _dense_divides(self, div, poly):
        p = self.p
        rem = list(poly)
        dd = len(div) - 1
        while len(rem) - 1 >= dd:
            top = rem.pop()
            if top:
                k = len(rem) - dd
                for j in range(dd):
                    rem[k + j] = (rem[k + j] - top * div[j]) % p
        return not any(rem)

    def _decode(self, code, length=None):
        p = self.p
        out = []
        for _ in range(self.e if length is None else length):
            code, r = divmod(code, p)
            out.append(r)
        return out

    def _encode(self, digits):
        out = 0
        for d in reversed(digits):
            out = out * self.p + d
        return out

    def _build_mul_table(self):
        q = self.q
        table = [[0] * q for _ in range(q)]
        for a in range(1, q):
            da = self._decode(a)
            for b in range(a, q):
                c = self._encode(self._dense_mulmod(da, self._decode(b), self._modulus))
                table[a][b] = c
                table[b][a] = c
        return table

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.e):
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.e):
            out += ((-(a % p)) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        return self._mul_table[a][b]

    def inv(self, a):
        if a == 0:
            raise FieldDivisionError("inverse of 0 in F_q")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def pow(self, a, n):
        if self.e == 1:
            return pow(a, n, self.p)
        out = 1
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def from_int(self, n):
        """Embed an integer literal: reduced mod p, living in the prime field."""
        return n % self.p


@functools.lru_cache(maxsize=None)
def _galois_field(p, e):
    return GaloisField(p, e)


MODE_FINITE = "finite"
MODE_RATIONAL_PERFECTION = "rational_perfection"


@dataclass(frozen=True)
class FieldConfig:
    """Field parameters: K = F_q or the perfection of F_q(theta), q = p^e."""

    p: int
    e: int = 1
    mode: str = MODE_RATIONAL_PERFECTION

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.e < 1:
            raise ValueError("e must be >= 1")
        if self.mode not in (MODE_FINITE, MODE_RATIONAL_PERFECTION):
            raise ValueError(f"unknown field mode {self.mode!r}")

    @property
    def q(self):
        return self.p**self.e

    @property
    def fq(self):
        return _galois_field(self.p, self.e)

    @classmethod
    def from_q(cls, q, mode=MODE_RATIONAL_PERFECTION):
        p, e = split_prime_power(q)
        return cls(p, e, mode)


# ---------------------------------------------------------------------------
# sparse polynomials over F_q: dict {exponent: nonzero coefficient code}


def _padd(fq, a, b):
    out = dict(a)
    for e, c in b.items():
        s = fq.add(out.get(e, 0), c)
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


# dense numpy helpers; prime fields only (integer arithmetic mod p)


def _densifiable(fq, *polys):
    if fq.e != 1:
        return False
    return all((not p or max(p) <= _DENSE_NP_DEG_LIMIT) for p in polys)


def _to_dense(a, deg):
    v = np.zeros(deg + 1, dtype=np.int64)
    for e, c in a.items():
        v[e] = c
    return v


def _from_dense(v, p):
    return {int(e): int(c) for e, c in enumerate(v) if c}


def _dense_divmod_np(fq, a, b):
    p = fq.p
    da, db = _pdeg(a), _pdeg(b)
    rem = _to_dense(a, da)
    bv = _to_dense(b, db)
    lb_inv = fq.inv(b[db])
    q = np.zeros(da - db + 1, dtype=np.int64)
    for i in range(da - db, -1, -1):
        c = (rem[i + db] * lb_inv) % p
        if c:
            q[i] = c
            rem[i : i + db + 1] = (rem[i : i + db + 1] - c * bv) % p
    return _from_dense(q, p), _from_dense(rem[:db], p)


def _pneg(fq, a):
    return {e: fq.neg(c) for e, c in a.items()}


def _pmul(fq, a, b):
    if not a or not b:
        return {}
    if (
        len(a) * len(b) > 4096
        and _densifiable(fq, a, b)
        and _pdeg(a) + _pdeg(b) <= _DENSE_NP_DEG_LIMIT
    ):
        prod = np.convolve(_to_dense(a, _pdeg(a)), _to_dense(b, _pdeg(b))) % fq.p
        return _from_dense(prod, fq.p)
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = fq.add(out.get(e, 0), fq.mul(ca, cb))
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _pscale(fq, a, c):
    if c == 0:
        return {}
    if c == 1:
        return dict(a)
    return {e: fq.mul(x, c) for e, x in a.items()}


def _pdeg(a):
    return max(a) if a else -1


def _plc(a):
    return a[max(a)] if a else 0


def _pdivmod(fq, a, b, guard=_SPARSE_DIV_STEP_LIMIT):
    """Long division a = q*b + r.

    Strategies, in order: joint exponent compression (division commutes with
    the substitution u -> u^g), dense numpy synthetic division for prime
    fields at moderate degree, else guarded sparse reduction."""
    if not b:
        raise FieldDivisionError("polynomial division by zero")
    if not a:
        return {}, {}
    da, db = _pdeg(a), _pdeg(b)
    if da < db:
        return {}, dict(a)
    if len(b) == 1:
        # monomial divisor: exponent shift and coefficient scale, O(terms)
        (eb, cb), = b.items()
        cb_inv = fq.inv(cb)
        q, r = {}, {}
        for e, c in a.items():
            if e >= eb:
                q[e - eb] = fq.mul(c, cb_inv)
            else:
                r[e] = c
        return q, r
    g = math.gcd(_exponent_gcd(a), _exponent_gcd(b))
    if g > 1:
        qq, rr = _pdivmod(
            fq,
            {e // g: c for e, c in a.items()},
            {e // g: c for e, c in b.items()},
            guard,
        )
        return (
            {e * g: c for e, c in qq.items()},
            {e * g: c for e, c in rr.items()},
        )
    if (len(a) > _DENSE_TERMS_TRIGGER or len(b) > _DENSE_TERMS_TRIGGER or da - db > 1024) \
            and _densifiable(fq, a, b):
        return _dense_divmod_np(fq, a, b)
    q = {}
    r = dict(a)
    lb_inv = fq.inv(_plc(b))
    steps = 0
    while r:
        dr = _pdeg(r)
        if dr < db:
            break
        steps += 1
        if steps > guard:
            raise ReductionOverflowError("sparse polynomial division exceeded work budget")
        c = fq.mul(r[dr], lb_inv)
        k = dr - db
        q[k] = c
        for eb, cb in b.items():
            e = eb + k
            s = fq.sub(r.get(e, 0), fq.mul(c, cb))
            if s:
                r[e] = s
            else:
                r.pop(e, None)
    return q, r


def _pdiv_exact(fq, a, b):
    q, r = _pdivmod(fq, a, b)
    if r:
        raise AssertionError("inexact polynomial division")
    return q


def _pmod_by_small(fq, a, b):
    """a mod b computed term-by-term with binary powmod; b of small degree."""
    db = _pdeg(b)
    lb_inv = fq.inv(_plc(b))
    # monic dense form of b without leading coefficient
    bm = [0] * db
    for e, c in b.items():
        if e < db:
            bm[e] = fq.mul(c, lb_inv)

    def reduce_dense(v):
        while len(v) > db:
            top = v.pop()
            if top:
                k = len(v) - db
                for j in range(db):
                    v[k + j] = fq.sub(v[k + j], fq.mul(top, bm[j]))
        return v

    def mul_dense(x, y):
        out = [0] * (len(x) + len(y) - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        out[i + j] = fq.add(out[i + j], fq.mul(xi, yj))
        return reduce_dense(out)

    def upow(e):
        if e < db:
            v = [0] * (e + 1)
            v[e] = 1
            return v
        result = [1]
        base = [0, 1]
        while e:
            if e & 1:
                result = mul_dense(result, base)
            e >>= 1
            if e:
                base = mul_dense(base, base)
        return result

    acc = [0] * db
    for e, c in a.items():
        ue = upow(e)
        for i, v in enumerate(ue):
            if v:
                acc[i] = fq.add(acc[i], fq.mul(c, v))
    return {i: v for i, v in enumerate(acc) if v}


def _pmonic(fq, a):
    if not a:
        return a
    lc = _plc(a)
    if lc == 1:
        return a
    return _pscale(fq, a, fq.inv(lc))


def _exponent_gcd(a):
    g = 0
    for e in a:
        g = math.gcd(g, e)
        if g == 1:
            break
    return g


def _q_power_part(fq, n):
    """Largest q^b dividing n (as the power q^b), for n > 0.

    Only q-th powers commute with the coefficient field: S(u^q) = S(u)^q
    relies on F_q being fixed by x -> x^q.
    """
    q = fq.q
    power = 1
    while n and n % q == 0:
        n //= q
        power *= q
    return power


def _pgcd(fq, a, b):
    """Monic gcd of sparse polynomials.

    Fast paths: monomial content stripping, joint exponent compression and
    perfect p-power peeling (lifting an element to a deeper root level turns
    its polynomials into p-power powers, which this exploits).
    """
    if not a:
        return _pmonic(fq, b)
    if not b:
        return _pmonic(fq, a)
    if len(a) == 1 or len(b) == 1:
        return {min(min(a), min(b)): 1}
    ca, cb = min(a), min(b)
    shift = min(ca, cb)
    if ca:
        a = {e - ca: c for e, c in a.items()}
    if cb:
        b = {e - cb: c for e, c in b.items()}
    core = _pgcd_primitive(fq, a, b)
    if shift:
        core = {e + shift: c for e, c in core.items()}
    return core


def _pgcd_primitive(fq, a, b):
    # both have nonzero constant term here
    if _pdeg(a) == 0 or _pdeg(b) == 0:
        return {0: 1}
    g = math.gcd(_exponent_gcd(a), _exponent_gcd(b))
    if g > 1:
        a = {e // g: c for e, c in a.items()}
        b = {e // g: c for e, c in b.items()}
        core = _pgcd_primitive(fq, a, b)
        return {e * g: c for e, c in core.items()}
    dmax = max(_pdeg(a), _pdeg(b))
    if dmax <= _PLAIN_EUCLID_DEG_LIMIT or (
        dmax <= _DENSE_NP_DEG_LIMIT and _densifiable(fq, a, b)
    ):
        while b:
            da, db = _pdeg(a), _pdeg(b)
            if db <= _POWMOD_DEG_LIMIT and da > 4 * db > 0 and len(a) <= 64:
                r = _pmod_by_small(fq, a, b)
            else:
                _, r = _pdivmod(fq, a, b)
            a, b = b, r
        return _pmonic(fq, a)
    # huge degrees with coprime exponent lattice: peel perfect q-powers
    pa = _q_power_part(fq, _exponent_gcd(a))
    pb = _q_power_part(fq, _exponent_gcd(b))
    if pa == 1 and pb == 1:
        # no structure left; last-resort guarded Euclid
        while b:
            _, r = _pdivmod(fq, a, b)
            a, b = b, r
        return _pmonic(fq, a)
    va = {e // pa: c for e, c in a.items()}
    vb = {e // pb: c for e, c in b.items()}
    gv = _pgcd_primitive(fq, va, vb)
    if _pdeg(gv) == 0:
        return {0: 1}
    pmin = min(pa, pb)
    d = {e * pmin: c for e, c in gv.items()}  # gv^pmin via Frobenius
    rest = _pgcd_primitive(fq, _pdiv_exact(fq, a, d), _pdiv_exact(fq, b, d))
    return _pmonic(fq, _pmul(fq, d, rest))


# ---------------------------------------------------------------------------


class PerfectFieldElement:
    """An element of K, canonically normalized.

    Canonical form: the fraction num/den is reduced with monic denominator,
    and the level is minimal (the element cannot be rewritten one root level
    shallower).  Zero is (level 0, {}, {0: 1}).  Equality and hashing are
    syntactic on this form.  Instances are immutable.

    Full gcd reduction can be genuinely expensive on deep-precision
    intermediates (reduced numerators may be dense of degree ~ q^level), so
    it runs under a work budget: values whose reduction exceeds the budget
    carry reduced=False, compare by cross-multiplication, and refuse
    hashing.  Zero-ness, arithmetic, and level bookkeeping never depend on
    the fraction being reduced, so semantics are unaffected.
    """

    __slots__ = ("cfg", "level", "num", "den", "reduced", "_hash", "_twists")

    def __init__(self, cfg, level, num, den, _normalized=False, _reduced=True):
        if not _normalized:
            level, num, den, _reduced = _normalize(cfg, level, num, den)
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "reduced", _reduced)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_twists", None)

    def __setattr__(self, name, value):
        raise AttributeError("PerfectFieldElement is immutable")

    # constructors

    @classmethod
    def zero(cls, cfg):
        return cls(cfg, 0, {}, {0: 1}, _normalized=True)

    @classmethod
    def one(cls, cfg):
        return cls(cfg, 0, {0: 1}, {0: 1}, _normalized=True)

    @classmethod
    def from_int(cls, cfg, n):
        c = cfg.fq.from_int(n)
        if c == 0:
            return cls.zero(cfg)
        return cls(cfg, 0, {0: c}, {0: 1}, _normalized=True)

    @classmethod
    def from_fq(cls, cfg, code):
        if code == 0:
            return cls.zero(cfg)
        return cls(cfg, 0, {0: code}, {0: 1}, _normalized=True)

    @classmethod
    def theta(cls, cfg):
        if cfg.mode != MODE_RATIONAL_PERFECTION:
            raise ValueError("theta is not available over a finite field")
        return cls(cfg, 0, {1: 1}, {0: 1}, _normalized=True)

    @classmethod
    def theta_power(cls, cfg, n):
        """theta^n for integer n (negative exponents give 1/theta^|n|)."""
        if cfg.mode != MODE_RATIONAL_PERFECTION:
            raise ValueError("theta is not available over a finite field")
        if n >= 0:
            return cls(cfg, 0, {n: 1}, {0: 1}, _normalized=True)
        return cls(cfg, 0, {0: 1}, {-n: 1}, _normalized=True)

    @classmethod
    def theta_root(cls, cfg, m):
        """theta^(1/q^m)."""
        return cls.theta(cfg).twist(-m)

    # predicates

    def is_zero(self):
        return not self.num

    def is_one(self):
        if self.reduced:
            return self.level == 0 and self.num == {0: 1} and self.den == {0: 1}
        return self.num == self.den

    def __bool__(self):
        return bool(self.num)

    # arithmetic

    def _lifted(self, to_level):
        d = to_level - self.level
        if d == 0:
            return self.num, self.den
        scale = self.cfg.q**d
        return (
            {e * scale: c for e, c in self.num.items()},
            {e * scale: c for e, c in self.den.items()},
        )

    def __add__(self, other):
        if not isinstance(other, PerfectFieldElement):
            return NotImplemented
        cfg = self.cfg
        fq = cfg.fq
        lvl = max(self.level, other.level)
        n1, d1 = self._lifted(lvl)
        n2, d2 = other._lifted(lvl)
        if d1 == {0: 1} and d2 == {0: 1}:
            num = _padd(fq, n1, n2)
            if not num:
                return PerfectFieldElement.zero(cfg)
            lvl, num, den = _minimize_level(cfg, lvl, num, {0: 1})
            return PerfectFieldElement(cfg, lvl, num, den, _normalized=True)
        if d1 == d2:
            return PerfectFieldElement(cfg, lvl, _padd(fq, n1, n2), d1)
        num = _padd(fq, _pmul(fq, n1, d2), _pmul(fq, n2, d1))
        den = _pmul(fq, d1, d2)
        return PerfectFieldElement(cfg, lvl, num, den)

    def __neg__(self):
        if not self.num:
            return self
        return PerfectFieldElement(
            self.cfg, self.level, _pneg(self.cfg.fq, self.num), self.den, _normalized=True
        )

    def __sub__(self, other):
        if not isinstance(other, PerfectFieldElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, PerfectFieldElement):
            return NotImplemented
        cfg = self.cfg
        fq = cfg.fq
        if not self.num or not other.num:
            return PerfectFieldElement.zero(cfg)
        lvl = max(self.level, other.level)
        n1, d1 = self._lifted(lvl)
        n2, d2 = other._lifted(lvl)
        if d1 == {0: 1} and d2 == {0: 1}:
            num = _pmul(fq, n1, n2)
            lvl, num, den = _minimize_level(cfg, lvl, num, {0: 1})
            reduced = self.reduced and other.reduced
            return PerfectFieldElement(
                cfg, lvl, num, den, _normalized=True, _reduced=reduced
            )
        reduced = self.reduced and other.reduced
        try:
            g1 = _pgcd(fq, n1, d2)
            if _pdeg(g1) > 0 or min(g1) > 0:
                n1_new = _pdiv_exact(fq, n1, g1)
                d2_new = _pdiv_exact(fq, d2, g1)
                n1, d2 = n1_new, d2_new
        except ReductionOverflowError:
            reduced = False
        try:
            g2 = _pgcd(fq, n2, d1)
            if _pdeg(g2) > 0 or min(g2) > 0:
                n2_new = _pdiv_exact(fq, n2, g2)
                d1_new = _pdiv_exact(fq, d1, g2)
                n2, d1 = n2_new, d1_new
        except ReductionOverflowError:
            reduced = False
        num = _pmul(fq, n1, n2)
        den = _pmul(fq, d1, d2)
        lc = _plc(den)
        if lc != 1:
            inv = fq.inv(lc)
            num = _pscale(fq, num, inv)
            den = _pscale(fq, den, inv)
        lvl, num, den = _minimize_level(cfg, lvl, num, den)
        return PerfectFieldElement(cfg, lvl, num, den, _normalized=True, _reduced=reduced)

    def inverse(self):
        if not self.num:
            raise FieldDivisionError("division by zero in K")
        fq = self.cfg.fq
        num, den = self.den, self.num
        lc = _plc(den)
        if lc != 1:
            inv = fq.inv(lc)
            num = _pscale(fq, num, inv)
            den = _pscale(fq, den, inv)
        return PerfectFieldElement(
            self.cfg, self.level, num, den, _normalized=True, _reduced=self.reduced
        )

    def __truediv__(self, other):
        if not isinstance(other, PerfectFieldElement):
            return NotImplemented
        return self * other.inverse()

    def twist(self, k):
        """The q^k-th power x^(k); q-th roots for negative k (K is perfect)."""
        if k == 0 or not self.num:
            return self
        cache = self._twists
        if cache is None:
            cache = {}
            object.__setattr__(self, "_twists", cache)
        hit = cache.get(k)
        if hit is None:
            hit = self._twist_impl(k)
            cache[k] = hit
        return hit

    def _twist_impl(self, k):
        cfg = self.cfg
        if cfg.mode == MODE_FINITE or self.level == 0 and _pdeg(self.num) == 0 and _pdeg(self.den) == 0:
            return self  # F_q is fixed by x -> x^q
        if k < 0:
            # raising the level can expose a shallower form when the source
            # was at level 0 with exponents divisible by q
            lvl, num, den = _minimize_level(cfg, self.level - k, self.num, self.den)
            return PerfectFieldElement(
                cfg, lvl, num, den, _normalized=True, _reduced=self.reduced
            )
        if self.level >= k:
            return PerfectFieldElement(
                cfg, self.level - k, self.num, self.den,
                _normalized=True, _reduced=self.reduced,
            )
        scale = cfg.q ** (k - self.level)
        num = {e * scale: c for e, c in self.num.items()}
        den = {e * scale: c for e, c in self.den.items()}
        return PerfectFieldElement(
            cfg, 0, num, den, _normalized=True, _reduced=self.reduced
        )

    def __pow__(self, n):
        if n == 0:
            return PerfectFieldElement.one(self.cfg)
        base = self if n > 0 else self.inverse()
        n = abs(n)
        out = PerfectFieldElement.one(self.cfg)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison / hashing

    def __eq__(self, other):
        if not isinstance(other, PerfectFieldElement):
            return NotImplemented
        if self.cfg != other.cfg:
            return False
        if self.reduced and other.reduced:
            return (
                self.level == other.level
                and self.num == other.num
                and self.den == other.den
            )
        lvl = max(self.level, other.level)
        n1, d1 = self._lifted(lvl)
        n2, d2 = other._lifted(lvl)
        fq = self.cfg.fq
        return _pmul(fq, n1, d2) == _pmul(fq, n2, d1)

    def __hash__(self):
        if not self.reduced:
            raise TypeError("unreduced field element is not hashable")
        h = self._hash
        if h is None:
            h = hash(
                (
                    self.level,
                    frozenset(self.num.items()),
                    frozenset(self.den.items()),
                )
            )
            object.__setattr__(self, "_hash", h)
        return h

    # rendering

    def to_text(self):
        """Textual form using ``th`` for theta and root(E, m) for E^(1/q^m)."""
        if not self.num:
            return "0"
        inner = _render_fraction(self.cfg, self.num, self.den)
        if self.level == 0:
            return inner
        return f"root({inner}, {self.level})"

    def __repr__(self):
        return f"<K {self.to_text()}>"


def _render_poly(cfg, poly):
    if not poly:
        return "0"
    parts = []
    for e in sorted(poly, reverse=True):
        c = poly[e]
        if e == 0:
            parts.append(str(c))
        else:
            var = "th" if e == 1 else f"th^{e}"
            parts.append(var if c == 1 else f"{c}*{var}")
    return " + ".join(parts)


def _render_fraction(cfg, num, den):
    ns = _render_poly(cfg, num)
    if den == {0: 1}:
        return ns
    ds = _render_poly(cfg, den)
    if len(num) > 1:
        ns = f"({ns})"
    if len(den) > 1:
        ds = f"({ds})"
    return f"{ns}/{ds}"


def _minimize_level(cfg, level, num, den):
    q = cfg.q
    while level > 0:
        if all(e % q == 0 for e in num) and all(e % q == 0 for e in den):
            num = {e // q: c for e, c in num.items()}
            den = {e // q: c for e, c in den.items()}
            level -= 1
        else:
            break
    return level, num, den


def _normalize(cfg, level, num, den):
    fq = cfg.fq
    if not den:
        raise FieldDivisionError("zero denominator")
    if not num:
        return 0, {}, {0: 1}, True
    reduced = True
    if den != {0: 1}:
        try:
            g = _pgcd(fq, num, den)
            if _pdeg(g) > 0 or min(g) > 0:
                num_new = _pdiv_exact(fq, num, g)
                den_new = _pdiv_exact(fq, den, g)
                num, den = num_new, den_new
        except ReductionOverflowError:
            reduced = False
            shift = min(min(num), min(den))
            if shift > 0:  # monomial content is always cheap to strip
                num = {e - shift: c for e, c in num.items()}
                den = {e - shift: c for e, c in den.items()}
    lc = _plc(den)
    if lc != 1:
        inv = fq.inv(lc)
        num = _pscale(fq, num, inv)
        den = _pscale(fq, den, inv)
    lvl, num, den = _minimize_level(cfg, level, num, den)
    return lvl, num, den, reduced
