"""Polynomials over K((sigma)) in a central variable t.

Carries the Newton-polygon machinery: the polygon is the lower convex hull
of the points (i, v(a_i)) over nonzero coefficients, built by a monotone
chain; edges have integer length and exact rational slope, strictly
increasing along the polygon.  The family of valuations v_c, division with
remainder on both sides, and first-edge factor splitting (with its
iterative refinement) live here too.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AmbiguousValuationError,
    PolyDivisionError,
    PrecisionExhaustedError,
    SingleEdgeError,
)
from .sigmaseries import SkewLaurent

_INF = float("inf")

LEFT = "left"
RIGHT = "right"


class SigmaTPoly:
    """Element of K((sigma))[t]; coefficients indexed by t-degree."""

    __slots__ = ("cfg", "coeffs")

    def __init__(self, cfg, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_exact_zero():
            coeffs.pop()
        object.__setattr__(self, "cfg", cfg)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("SigmaTPoly is immutable")

    @classmethod
    def zero(cls, cfg):
        return cls(cfg, ())

    @classmethod
    def one(cls, cfg):
        return cls(cfg, (SkewLaurent.one(cfg),))

    @classmethod
    def t_power(cls, cfg, k, coeff=None):
        c = coeff if coeff is not None else SkewLaurent.one(cfg)
        return cls(cfg, [SkewLaurent.zero(cfg)] * k + [c])

    @classmethod
    def from_series(cls, x: SkewLaurent):
        return cls(x.cfg, (x,))

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_zero_to_precision(self):
        return all(c.is_zero_to_precision() for c in self.coeffs)

    def coefficient(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return SkewLaurent.zero(self.cfg)

    def leading_coefficient(self):
        if not self.coeffs:
            raise PolyDivisionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic_to_precision(self):
        if not self.coeffs:
            return False
        lead = self.coeffs[-1]
        return lead.agrees_to_precision(SkewLaurent.one(self.cfg)) and not \
            lead.is_zero_to_precision()

    def __add__(self, other):
        if not isinstance(other, SigmaTPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return SigmaTPoly(
            self.cfg, [self.coefficient(k) + other.coefficient(k) for k in range(n)]
        )

    def __neg__(self):
        return SigmaTPoly(self.cfg, [-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, SigmaTPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, SigmaTPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return SigmaTPoly.zero(self.cfg)
        out = [SkewLaurent.zero(self.cfg)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_exact_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_exact_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return SigmaTPoly(self.cfg, out)

    def scale_left(self, x: SkewLaurent):
        return SigmaTPoly(self.cfg, [x * c for c in self.coeffs])

    def scale_right(self, x: SkewLaurent):
        return SigmaTPoly(self.cfg, [c * x for c in self.coeffs])

    def shift_t(self, k):
        """Multiply by t^k."""
        if self.is_zero():
            return self
        return SigmaTPoly(self.cfg, [SkewLaurent.zero(self.cfg)] * k + list(self.coeffs))

    def truncate_coeffs(self, n):
        return SigmaTPoly(self.cfg, [c.truncate(n) for c in self.coeffs])

    def agrees_to_precision(self, other, upto=None):
        n = max(len(self.coeffs), len(other.coeffs))
        return all(
            self.coefficient(k).agrees_to_precision(other.coefficient(k), upto)
            for k in range(n)
        )

    def __eq__(self, other):
        if not isinstance(other, SigmaTPoly):
            return NotImplemented
        return self.cfg == other.cfg and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def to_text(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_exact_zero():
                continue
            cs = c.to_text()
            if k == 0:
                parts.append(cs if len(c.coeffs) < 2 and c.prec is None else f"({cs})")
            else:
                var = "t" if k == 1 else f"t^{k}"
                if c.coeffs == {0: _one_k(self.cfg)} and c.prec is None:
                    parts.append(var)
                else:
                    parts.append(f"({cs})*{var}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"<L[t] {self.to_text()}>"


def _one_k(cfg):
    from .field import PerfectFieldElement

    return PerfectFieldElement.one(cfg)


# ---------------------------------------------------------------------------
# Newton polygons


@dataclass(frozen=True)
class Edge:
    length: int
    slope: Fraction

    def as_pair(self):
        return (self.length, self.slope)


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple
    edges: tuple

    @classmethod
    def from_points(cls, points):
        hull = lower_hull(points)
        edges = []
        for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
            edges.append(Edge(x1 - x0, Fraction(y1 - y0, x1 - x0)))
        return cls(tuple(hull), tuple(edges))

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def slopes(self):
        return [e.slope for e in self.edges]

    def edge_multiset(self):
        return sorted((e.length, e.slope) for e in self.edges)

    def to_json_dict(self):
        return {
            "vertices": [[x, y] for x, y in self.vertices],
            "edges": [{"length": e.length, "slope": str(e.slope)} for e in self.edges],
        }


def lower_hull(points):
    """Lower convex hull by monotone chain; collinear points are dropped so
    edge slopes strictly increase."""
    pts = sorted(points)
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            # keep only strictly convex turns
            if (x1 - x0) * (p[1] - y0) - (p[0] - x0) * (y1 - y0) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_polygon(f: SigmaTPoly) -> NewtonPolygon:
    """Newton polygon of a nonzero polynomial; every nonzero coefficient must
    have a known valuation."""
    if f.is_zero():
        raise PolyDivisionError("Newton polygon of the zero polynomial")
    points = []
    for i, c in enumerate(f.coeffs):
        val = c.valuation()
        if val.is_zero:
            continue
        if val.is_ambiguous:
            raise AmbiguousValuationError(i, val.bound)
        points.append((i, val.value))
    if not points:
        raise AmbiguousValuationError(0, min(c.prec for c in f.coeffs if c.prec is not None))
    return NewtonPolygon.from_points(points)


def hull_height(np: NewtonPolygon, x):
    """Height of the polygon above x (linear interpolation), or None outside."""
    verts = np.vertices
    if x < verts[0][0] or x > verts[-1][0]:
        return None
    for (x0, y0), (x1, y1) in zip(verts, verts[1:]):
        if x0 <= x <= x1:
            return Fraction(y0) + Fraction(y1 - y0, x1 - x0) * (x - x0)
    return Fraction(verts[0][1])


def newton_polygon_tolerant(f: SigmaTPoly) -> NewtonPolygon:
    """Newton polygon that certifies truncated-zero coefficients harmless.

    Coefficients indistinguishable from zero are ignored when their
    truncation bound provably keeps any true value on or above the hull of
    the known points; otherwise AmbiguousValuationError is raised (higher
    precision genuinely needed)."""
    if f.is_zero():
        raise PolyDivisionError("Newton polygon of the zero polynomial")
    points = []
    unknown = []
    for i, c in enumerate(f.coeffs):
        val = c.valuation()
        if val.is_zero:
            continue
        if val.is_ambiguous:
            unknown.append((i, val.bound))
        else:
            points.append((i, val.value))
    if not points:
        raise AmbiguousValuationError(unknown[0][0], unknown[0][1])
    np = NewtonPolygon.from_points(points)
    x_min, x_max = np.vertices[0][0], np.vertices[-1][0]
    for i, bound in unknown:
        if i < x_min or i > x_max:
            raise AmbiguousValuationError(i, bound)
        if bound < hull_height(np, i):
            raise AmbiguousValuationError(i, bound)
    return np


def v_c(f: SigmaTPoly, c) -> Fraction:
    """min_i v(f_i) + i*c; infinity for the zero polynomial."""
    if f.is_zero():
        return _INF
    c = Fraction(c)
    best = None
    for i, coeff in enumerate(f.coeffs):
        val = coeff.valuation()
        if val.is_zero:
            continue
        if val.is_ambiguous:
            raise AmbiguousValuationError(i, val.bound)
        cand = val.value + i * c
        if best is None or cand < best:
            best = cand
    return best if best is not None else _INF


def v_c_lower_bound(f: SigmaTPoly, c):
    """Sound lower bound on v_c; never raises (truncation bounds are used
    for coefficients indistinguishable from zero)."""
    if f.is_zero():
        return _INF
    c = Fraction(c)
    best = _INF
    for i, coeff in enumerate(f.coeffs):
        lb = coeff.valuation_lower_bound()
        if lb == _INF:
            continue
        cand = lb + i * c
        if cand < best:
            best = cand
    return best


# ---------------------------------------------------------------------------
# division with remainder


def right_divide(h: SigmaTPoly, f: SigmaTPoly, prec):
    """h = q*f + r with r = 0 or deg r < deg f, computed at the given
    working precision for coefficient inversions."""
    return _divide(h, f, prec, RIGHT)


def left_divide(h: SigmaTPoly, f: SigmaTPoly, prec):
    """h = f*q + r, mirror of right_divide."""
    return _divide(h, f, prec, LEFT)


def _divide(h, f, prec, side):
    cfg = h.cfg
    if f.is_zero() or f.is_zero_to_precision():
        raise PolyDivisionError("division by (effectively) zero polynomial")
    d = f.degree()
    fd = f.coeffs[d]
    n = h.degree()
    if n < d:
        return SigmaTPoly.zero(cfg), h
    fd_inv = fd.invert(prec)
    rem = list(h.coeffs)
    q = [SkewLaurent.zero(cfg)] * (n - d + 1)
    for e in range(n, d - 1, -1):
        c = rem[e]
        if c.is_zero_to_precision():
            continue
        if side == RIGHT:
            qc = c * fd_inv
        else:
            qc = fd_inv * c
        q[e - d] = qc
        for j, fj in enumerate(f.coeffs):
            if fj.is_exact_zero():
                continue
            if side == RIGHT:
                rem[e - d + j] = rem[e - d + j] - qc * fj
            else:
                rem[e - d + j] = rem[e - d + j] - fj * qc
    return SigmaTPoly(cfg, q), SigmaTPoly(cfg, rem[:d])


# ---------------------------------------------------------------------------
# slope factorization


def factor_first_edge(h: SigmaTPoly, side, prec, gain=None):
    """Split off a factor carrying the first (least-slope) edge of N_h.

    side RIGHT: h = f*g; side LEFT: h = g*f.  In both cases deg f equals the
    x-coordinate of the first break point and N_f is the first edge.  The
    refinement adds the division remainder to f and the quotient to g until
    v_c(h - f*g) has gained `gain` over v_c(h) (or the residual is
    indistinguishable from zero at the working precision when gain is None).
    """
    np = newton_polygon_tolerant(h)
    if len(np.edges) < 2:
        raise SingleEdgeError("Newton polygon has a single edge")
    d, _ = np.vertices[1]
    slope = np.edges[0].slope
    c = -slope
    vch = v_c_lower_bound(h, c)

    f = SigmaTPoly(h.cfg, h.coeffs[: d + 1])
    g = SigmaTPoly.one(h.cfg)

    rho = h - f * g
    if rho.is_zero_to_precision():
        return f, g
    alpha = v_c_lower_bound(rho, c) - vch
    if alpha <= 0:
        raise PrecisionExhaustedError("no initial valuation gain in first-edge split")
    if gain is not None:
        max_iters = int(Fraction(gain) / Fraction(alpha)) + 8
    else:
        max_iters = 4 * (prec + h.degree() + 8)

    for _ in range(max_iters):
        lb = v_c_lower_bound(rho, c)
        if rho.is_zero_to_precision():
            return f, g
        if gain is not None and lb - vch >= gain:
            return f, g
        if side == RIGHT:
            qq, rr = left_divide(rho, f, prec)
        elif side == LEFT:
            qq, rr = right_divide(rho, f, prec)
        else:
            raise ValueError(f"unknown side {side!r}")
        f = f + rr
        g = g + qq
        rho = h - (f * g if side == RIGHT else g * f)
    raise PrecisionExhaustedError(
        "first-edge refinement did not reach the requested gain", restart_hint=2 * prec
    )


def slope_decomposition(h: SigmaTPoly, prec, gain=None):
    """Factor a monic polynomial into single-edge factors f_1 * ... * f_k,
    one per edge of N_h in increasing slope order."""
    factors = []
    current = h
    while True:
        np = newton_polygon_tolerant(current)
        if len(np.edges) < 2:
            factors.append(current)
            return factors
        f, g = factor_first_edge(current, RIGHT, prec, gain)
        lead = f.leading_coefficient()
        lead_inv = lead.invert(prec)
        factors.append(f.scale_right(lead_inv))
        current = g.scale_left(lead)


# ---------------------------------------------------------------------------
# rendering


def newton_polygon_svg(np: NewtonPolygon, title=""):
    """Standalone SVG: lower hull polyline with labeled integer grid points.

    The y-axis is inverted so the hull reads as in the usual figures
    (valuations grow downward on screen means upward math-wise)."""
    unit = 42
    pad = 48
    xs = [x for x, _ in np.vertices]
    ys = [y for _, y in np.vertices]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    w = (x1 - x0 + 1) * unit + 2 * pad
    h = (y1 - y0 + 1) * unit + 2 * pad

    def px(x):
        return pad + (x - x0) * unit

    def py(y):
        return h - pad - (y - y0) * unit

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
    ]
    if title:
        lines.append(f'<text x="{pad}" y="{pad // 2}" font-size="13">{title}</text>')
    # light grid
    for gx in range(x0, x1 + 1):
        lines.append(
            f'<line x1="{px(gx)}" y1="{py(y0)}" x2="{px(gx)}" y2="{py(y1)}" '
            'stroke="#ddd" stroke-width="1"/>'
        )
    for gy in range(y0, y1 + 1):
        lines.append(
            f'<line x1="{px(x0)}" y1="{py(gy)}" x2="{px(x1)}" y2="{py(gy)}" '
            'stroke="#ddd" stroke-width="1"/>'
        )
    pts = " ".join(f"{px(x)},{py(y)}" for x, y in np.vertices)
    lines.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="2"/>')
    for x, y in np.vertices:
        lines.append(f'<circle cx="{px(x)}" cy="{py(y)}" r="3.5" fill="black"/>')
        lines.append(
            f'<text x="{px(x) + 6}" y="{py(y) - 6}" font-size="11">({x},{y})</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
