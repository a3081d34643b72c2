"""Skew Laurent series in sigma over K, with sigma * a = a^(1/q) * sigma.

A series is either Exact (finite support, every coefficient authoritative)
or Truncated(N): coefficients are known for all exponents < N and unknown
from N on.  The valuation (order in sigma) of a truncated series with empty
known support is a three-valued answer, see SigmaValuation.

Also provides exact arithmetic in the finite quotients K{sigma}/(sigma^s)
used by the rank computations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AmbiguousZeroError, FieldDivisionError, NotAUnitError
from .field import PerfectFieldElement

_INF = float("inf")

KNOWN = "known"
ZERO = "zero"
UNKNOWN = "indistinguishable"


@dataclass(frozen=True)
class SigmaValuation:
    """Valuation answer: Known(v), ZeroExact, or Indistinguishable(bound)."""

    kind: str
    value: int | None = None
    bound: int | None = None

    @property
    def is_known(self):
        return self.kind == KNOWN

    @property
    def is_zero(self):
        return self.kind == ZERO

    @property
    def is_ambiguous(self):
        return self.kind == UNKNOWN

    def lower_bound(self):
        """A sound lower bound on the valuation (inf for exact zero)."""
        if self.kind == KNOWN:
            return self.value
        if self.kind == ZERO:
            return _INF
        return self.bound


class SkewLaurent:
    """Element of K((sigma)), exact or truncated at an absolute precision."""

    __slots__ = ("cfg", "coeffs", "prec")

    def __init__(self, cfg, coeffs=None, prec=None):
        clean = {}
        if coeffs:
            for k, c in coeffs.items():
                if not c.is_zero() and (prec is None or k < prec):
                    clean[k] = c
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("SkewLaurent is immutable")

    # constructors

    @classmethod
    def zero(cls, cfg):
        return cls(cfg, {})

    @classmethod
    def one(cls, cfg):
        return cls(cfg, {0: PerfectFieldElement.one(cfg)})

    @classmethod
    def monomial(cls, c, k):
        return cls(c.cfg, {k: c})

    @classmethod
    def sigma(cls, cfg, k=1):
        return cls(cfg, {k: PerfectFieldElement.one(cfg)})

    @classmethod
    def constant(cls, c):
        return cls(c.cfg, {0: c})

    @classmethod
    def from_tau_poly(cls, f):
        """Embedding of K{tau}: tau^i goes to sigma^(-i)."""
        return cls(f.cfg, {-k: c for k, c in f.coeffs.items()})

    # inspection

    def is_exact(self):
        return self.prec is None

    def is_exact_zero(self):
        return self.prec is None and not self.coeffs

    def is_zero_to_precision(self):
        """No known-nonzero coefficient (exact zero or indistinguishable)."""
        return not self.coeffs

    def valuation(self) -> SigmaValuation:
        if self.coeffs:
            return SigmaValuation(KNOWN, value=min(self.coeffs))
        if self.prec is None:
            return SigmaValuation(ZERO)
        return SigmaValuation(UNKNOWN, bound=self.prec)

    def valuation_lower_bound(self):
        return self.valuation().lower_bound()

    def coefficient(self, k):
        return self.coeffs.get(k, PerfectFieldElement.zero(self.cfg))

    def leading_coefficient(self):
        v = self.valuation()
        if not v.is_known:
            raise AmbiguousZeroError(self.prec if self.prec is not None else 0,
                                     "no leading coefficient")
        return self.coeffs[v.value]

    # arithmetic

    def _merged_prec(self, other):
        pa = _INF if self.prec is None else self.prec
        pb = _INF if other.prec is None else other.prec
        p = min(pa, pb)
        return None if p == _INF else int(p)

    def __add__(self, other):
        if not isinstance(other, SkewLaurent):
            return NotImplemented
        prec = self._merged_prec(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return SkewLaurent(self.cfg, out, prec)

    def __neg__(self):
        return SkewLaurent(self.cfg, {k: -c for k, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        if not isinstance(other, SkewLaurent):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, SkewLaurent):
            return NotImplemented
        cfg = self.cfg
        if self.is_exact_zero() or other.is_exact_zero():
            return SkewLaurent.zero(cfg)
        pa = _INF if self.prec is None else self.prec
        pb = _INF if other.prec is None else other.prec
        va = self.valuation_lower_bound()
        vb = other.valuation_lower_bound()
        prec = min(pa + vb, pb + va)
        prec = None if prec == _INF else int(prec)
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if prec is not None and k >= prec:
                    continue
                term = a * b.twist(-i)
                s = out.get(k)
                s = term if s is None else s + term
                if s.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = s
        return SkewLaurent(cfg, out, prec)

    def scale_left(self, c):
        """c * x for c in K."""
        if c.is_zero():
            return SkewLaurent(self.cfg, {}, self.prec)
        return SkewLaurent(self.cfg, {k: c * a for k, a in self.coeffs.items()}, self.prec)

    def scale_right(self, c):
        """x * c for c in K; coefficients pick up exponent-dependent twists."""
        if c.is_zero():
            return SkewLaurent(self.cfg, {}, self.prec)
        return SkewLaurent(
            self.cfg, {k: a * c.twist(-k) for k, a in self.coeffs.items()}, self.prec
        )

    def mul_sigma_left(self, k):
        """sigma^k * x = twist(x, -k) * sigma^k."""
        prec = None if self.prec is None else self.prec + k
        return SkewLaurent(
            self.cfg, {i + k: c.twist(-k) for i, c in self.coeffs.items()}, prec
        )

    def mul_sigma_right(self, k):
        """x * sigma^k: exponent shift without twisting."""
        prec = None if self.prec is None else self.prec + k
        return SkewLaurent(self.cfg, {i + k: c for i, c in self.coeffs.items()}, prec)

    def twist(self, k):
        """Coefficient-wise q^k-th power; precision preserved."""
        if k == 0:
            return self
        return SkewLaurent(self.cfg, {i: c.twist(k) for i, c in self.coeffs.items()}, self.prec)

    def truncate(self, n):
        prec = n if self.prec is None else min(self.prec, n)
        return SkewLaurent(self.cfg, {k: c for k, c in self.coeffs.items() if k < prec}, prec)

    def invert(self, target_prec):
        """y with x*y = y*x = 1 up to the requested absolute precision.

        Exact monomials invert exactly; otherwise precision-doubling
        iteration y <- y + y*(1 - x*y) from the leading-term inverse.
        """
        val = self.valuation()
        if val.is_zero:
            raise FieldDivisionError("inverse of exact zero in K((sigma))")
        if val.is_ambiguous:
            raise AmbiguousZeroError(val.bound)
        v = val.value
        c = self.coeffs[v]
        seed = SkewLaurent.monomial(c.inverse().twist(v), -v)
        if self.prec is None and len(self.coeffs) == 1:
            return seed
        if self.prec is not None:
            # an O(sigma^P) error in x perturbs the inverse at order P - 2v
            target_prec = min(target_prec, self.prec - 2 * v)
        one = SkewLaurent.one(self.cfg)
        y = seed.truncate(target_prec)
        err_prec = target_prec + v
        for _ in range(128):
            e = (one - self * y).truncate(err_prec)
            if e.is_zero_to_precision():
                break
            y = (y + y * e).truncate(target_prec)
        else:
            raise AmbiguousZeroError(target_prec, "inversion failed to converge")
        return y

    # comparison

    def __eq__(self, other):
        """Syntactic equality (coefficients and precision marker)."""
        if not isinstance(other, SkewLaurent):
            return NotImplemented
        return self.cfg == other.cfg and self.prec == other.prec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.prec, frozenset(self.coeffs.items())))

    def agrees_to_precision(self, other, upto=None):
        """True when all coefficients known to both sides coincide below
        the common precision bound (and `upto` when given)."""
        p = min(
            _INF if self.prec is None else self.prec,
            _INF if other.prec is None else other.prec,
            _INF if upto is None else upto,
        )
        keys = set(self.coeffs) | set(other.coeffs)
        for k in keys:
            if k >= p:
                continue
            if self.coefficient(k) != other.coefficient(k):
                return False
        return True

    def to_text(self):
        parts = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            cs = c.to_text()
            if ("+" in cs or "/" in cs) and k != 0:
                cs = f"({cs})"
            if k == 0:
                parts.append(cs)
            else:
                var = "s" if k == 1 else f"s^{k}"
                parts.append(var if c.is_one() else f"{cs}*{var}")
        if self.prec is not None:
            parts.append(f"O(s^{self.prec})")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"<K((s)) {self.to_text()}>"


class QuotientSigmaElement:
    """Element of K{sigma}/(sigma^s), dense coefficient list of length s."""

    __slots__ = ("cfg", "s", "coeffs")

    def __init__(self, cfg, s, coeffs):
        if s < 1:
            raise ValueError("modulus exponent must be >= 1")
        coeffs = list(coeffs)
        if len(coeffs) != s:
            raise ValueError("coefficient list must have length s")
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("QuotientSigmaElement is immutable")

    @classmethod
    def zero(cls, cfg, s):
        z = PerfectFieldElement.zero(cfg)
        return cls(cfg, s, [z] * s)

    @classmethod
    def one(cls, cfg, s):
        z = PerfectFieldElement.zero(cfg)
        row = [z] * s
        row[0] = PerfectFieldElement.one(cfg)
        return cls(cfg, s, row)

    @classmethod
    def from_laurent(cls, x: SkewLaurent, s):
        """Reduce an exact series with v >= 0 modulo sigma^s."""
        if x.coeffs and min(x.coeffs) < 0:
            raise ValueError("negative valuation entry is not in the valuation ring")
        if x.prec is not None and x.prec < s:
            raise ValueError("series precision below quotient modulus")
        z = PerfectFieldElement.zero(x.cfg)
        return cls(x.cfg, s, [x.coeffs.get(i, z) for i in range(s)])

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def val(self):
        """Index of the first nonzero coefficient; s when zero mod sigma^s."""
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        return self.s

    def is_unit(self):
        return not self.coeffs[0].is_zero()

    def __add__(self, other):
        return QuotientSigmaElement(
            self.cfg, self.s, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __neg__(self):
        return QuotientSigmaElement(self.cfg, self.s, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QuotientSigmaElement):
            return NotImplemented
        s = self.s
        z = PerfectFieldElement.zero(self.cfg)
        out = [z] * s
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(s - i):
                b = other.coeffs[j]
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b.twist(-i)
        return QuotientSigmaElement(self.cfg, s, out)

    def inv(self):
        """Two-sided inverse of a unit, by triangular lifting."""
        if not self.is_unit():
            raise NotAUnitError("sigma^0 coefficient is zero")
        s = self.s
        u = self.coeffs
        u0_inv = u[0].inverse()
        z = [PerfectFieldElement.zero(self.cfg)] * s
        z[0] = u0_inv
        for k in range(1, s):
            acc = PerfectFieldElement.zero(self.cfg)
            for i in range(1, k + 1):
                if not u[i].is_zero():
                    acc = acc + u[i] * z[k - i].twist(-i)
            z[k] = -(u0_inv * acc)
        return QuotientSigmaElement(self.cfg, s, z)

    def shift_down(self, nu):
        """x * sigma^(-nu): coefficient indices drop by nu, no twisting.

        Only sound when val() >= nu; the top nu slots become unknown-but-
        harmless zeros (tracked by the caller's valuation discipline).
        """
        s = self.s
        z = PerfectFieldElement.zero(self.cfg)
        out = [z] * s
        for i in range(nu, s):
            out[i - nu] = self.coeffs[i]
        return QuotientSigmaElement(self.cfg, s, out)

    def twisted_shift_down(self, nu):
        """sigma^(-nu) * x: indices drop by nu, coefficients twist by +nu."""
        s = self.s
        z = PerfectFieldElement.zero(self.cfg)
        out = [z] * s
        for i in range(nu, s):
            out[i - nu] = self.coeffs[i].twist(nu)
        return QuotientSigmaElement(self.cfg, s, out)

    def __eq__(self, other):
        if not isinstance(other, QuotientSigmaElement):
            return NotImplemented
        return self.cfg == other.cfg and self.s == other.s and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.s, self.coeffs))

    def __repr__(self):
        parts = [f"{c.to_text()}*s^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero()]
        return "<quot " + (" + ".join(parts) if parts else "0") + f" mod s^{self.s}>"
