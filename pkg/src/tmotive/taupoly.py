"""Skew polynomials in tau over K (tau * a = a^q * tau) and matrices of them.

The product follows the twisted convolution: the tau^k coefficient of a*b is
sum over i of a_i * (b_{k-i})^(i), where x^(i) denotes the q^i-th power.
Sparse dict representation {degree: nonzero coefficient}; the zero polynomial
has empty support and degree -inf.
"""

from __future__ import annotations

from .field import PerfectFieldElement

NEG_INF = float("-inf")


class SkewTauPoly:
    """Element of K{tau}; immutable, sparse."""

    __slots__ = ("cfg", "coeffs")

    def __init__(self, cfg, coeffs=None):
        object.__setattr__(self, "cfg", cfg)
        clean = {}
        if coeffs:
            for k, c in coeffs.items():
                if k < 0:
                    raise ValueError("tau-degree must be non-negative")
                if not c.is_zero():
                    clean[k] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SkewTauPoly is immutable")

    @classmethod
    def zero(cls, cfg):
        return cls(cfg, {})

    @classmethod
    def one(cls, cfg):
        return cls(cfg, {0: PerfectFieldElement.one(cfg)})

    @classmethod
    def tau(cls, cfg, k=1):
        return cls(cfg, {k: PerfectFieldElement.one(cfg)})

    @classmethod
    def constant(cls, c):
        return cls(c.cfg, {0: c})

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return max(self.coeffs) if self.coeffs else NEG_INF

    def coefficient(self, k):
        return self.coeffs.get(k, PerfectFieldElement.zero(self.cfg))

    def constant_coefficient(self):
        return self.coefficient(0)

    def __add__(self, other):
        if not isinstance(other, SkewTauPoly):
            return NotImplemented
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return SkewTauPoly(self.cfg, out)

    def __neg__(self):
        return SkewTauPoly(self.cfg, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, SkewTauPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, SkewTauPoly):
            return NotImplemented
        out = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                term = a * b.twist(i)
                s = out.get(k)
                s = term if s is None else s + term
                if s.is_zero():
                    out.pop(k, None)
                else:
                    out[k] = s
        return SkewTauPoly(self.cfg, out)

    def scale(self, c):
        """Left multiplication by c in K."""
        return SkewTauPoly(self.cfg, {k: c * a for k, a in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, SkewTauPoly):
            return NotImplemented
        return self.cfg == other.cfg and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def to_text(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            cs = c.to_text()
            needs_parens = ("+" in cs or "/" in cs) and k > 0
            if needs_parens:
                cs = f"({cs})"
            if k == 0:
                parts.append(cs)
            else:
                var = "tau" if k == 1 else f"tau^{k}"
                parts.append(var if c.is_one() else f"{cs}*{var}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<K{{tau}} {self.to_text()}>"


class TauMatrix:
    """Square matrix over K{tau}."""

    __slots__ = ("cfg", "d", "entries")

    def __init__(self, cfg, entries):
        d = len(entries)
        if d < 1 or any(len(row) != d for row in entries):
            raise ValueError("matrix must be square and non-empty")
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "entries", tuple(tuple(row) for row in entries))

    def __setattr__(self, name, value):
        raise AttributeError("TauMatrix is immutable")

    @classmethod
    def identity(cls, cfg, d):
        one = SkewTauPoly.one(cfg)
        zero = SkewTauPoly.zero(cfg)
        return cls(cfg, [[one if i == j else zero for j in range(d)] for i in range(d)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, TauMatrix):
            return NotImplemented
        return self.cfg == other.cfg and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __mul__(self, other):
        if not isinstance(other, TauMatrix):
            return NotImplemented
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        d = self.d
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = SkewTauPoly.zero(self.cfg)
                for k in range(d):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(row)
        return TauMatrix(self.cfg, rows)

    def degree(self):
        """Max tau-degree over entries; -inf for the zero matrix."""
        return max((e.degree() for row in self.entries for e in row), default=NEG_INF)

    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)

    def constant_matrix(self):
        """The tau^0 coefficient matrix, as a grid of K elements."""
        return [
            [e.constant_coefficient() for e in row]
            for row in self.entries
        ]


def power_prefix(m: TauMatrix, n: int):
    """[m, m^2, ..., m^n]; the whole prefix is needed by the rank conditions."""
    if n < 1:
        raise ValueError("n must be >= 1")
    powers = [m]
    for _ in range(n - 1):
        powers.append(powers[-1] * m)
    return powers


def mat_pow(m: TauMatrix, n: int) -> TauMatrix:
    return power_prefix(m, n)[-1]


def s_n(d_matrix: TauMatrix, n: int, powers=None) -> int:
    """Least s >= 0 with every entry of D..D^n of sigma-valuation >= -s.

    Equals max(0, max tau-degree over the power prefix).  A precomputed
    prefix may be passed to avoid repeated powering.
    """
    if d_matrix.is_zero():
        raise ValueError("s_n undefined for the zero matrix")
    if powers is None:
        powers = power_prefix(d_matrix, n)
    best = 0
    for k in range(n):
        deg = powers[k].degree()
        if deg != NEG_INF and deg > best:
            best = deg
    return int(best)
