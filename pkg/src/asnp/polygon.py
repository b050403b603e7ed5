"""Newton polygon geometry over exact rationals.

Lower convex hulls of (index, valuation) points, the Hodge lower bound,
symmetry completion for the upper half of the coefficient range, and the
certification rule deciding when finitely many exact values pin the polygon.

Certification logic: the hull H of all stated points is a pointwise lower
bound for the true polygon P (bound points can only move up), and P is at
most the hull of the exact points.  H is therefore pinned (P = H) when every
hull vertex is exact; with the slope-symmetry functional equation it is
already pinned when the vertices on [0, (d-1)/2] are exact and H's slope
multiset is symmetric under s -> a - s.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .padic import Valuation


@dataclass(frozen=True)
class ValuationPoint:
    index: int
    val: Valuation


def _frac_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class NewtonPolygon:
    """Lower hull with slope multiset; `certified` means the slopes are pinned."""

    def __init__(self, vertices, slopes, certified: bool, diagnostics=()):
        self.vertices = [(int(x), Fraction(y)) for x, y in vertices]
        self.slopes = [(Fraction(s), int(m)) for s, m in slopes]
        self.certified = bool(certified)
        self.diagnostics = tuple(diagnostics)

    def slope_multiset(self) -> dict:
        out = {}
        for s, m in self.slopes:
            out[s] = out.get(s, 0) + m
        return out

    def length(self) -> int:
        if not self.vertices:
            return 0
        return self.vertices[-1][0] - self.vertices[0][0]

    def ordinate(self, x: int) -> Fraction:
        """Hull value at integer abscissa x (must lie within the span)."""
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            if x0 <= x <= x1:
                return y0 + Fraction(y1 - y0, x1 - x0) * (x - x0) if x1 > x0 else y0
        if self.vertices and x == self.vertices[0][0]:
            return self.vertices[0][1]
        raise ValueError(f"abscissa {x} outside polygon span")

    def is_slope_symmetric(self, a: int) -> bool:
        ms = self.slope_multiset()
        return all(ms.get(a - s, 0) == m for s, m in ms.items())

    def __eq__(self, other):
        return (isinstance(other, NewtonPolygon)
                and self.vertices == other.vertices
                and self.slopes == other.slopes
                and self.certified == other.certified)

    def __repr__(self):
        sl = ", ".join(f"{_frac_str(s)}x{m}" for s, m in self.slopes)
        flag = "certified" if self.certified else "uncertified"
        return f"NewtonPolygon([{sl}], {flag})"

    def to_json(self):
        return {
            "vertices": [[x, _frac_str(y)] for x, y in self.vertices],
            "slopes": [[_frac_str(s), m] for s, m in self.slopes],
            "certified": self.certified,
        }


def _hull(points):
    """Monotone-chain lower hull; points = [(x, Fraction, exact)] sorted by x."""
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x0, y0, _), (x1, y1, _) = hull[-2], hull[-1]
            x2, y2 = pt[0], pt[1]
            # keep the chain strictly convex: pop when the middle point is on
            # or above the segment (x0,y0)-(x2,y2)
            if (y1 - y0) * (x2 - x0) >= (y2 - y0) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def lower_hull(points) -> NewtonPolygon:
    """Lower convex hull of valuation points; bounds participate at their bound.

    Abscissae must be distinct and the extreme points exact.  The result is
    flagged certified only under the simple rule (every hull vertex exact);
    use :func:`certify` for the symmetry-aware rule.
    """
    pts = sorted(points, key=lambda t: t.index)
    if not pts:
        raise ValueError("no points")
    for u, v in zip(pts, pts[1:]):
        if u.index == v.index:
            raise ValueError(f"duplicate abscissa {u.index}")
    if not pts[0].val.exact or not pts[-1].val.exact:
        raise ValueError("missing exact endpoint")
    triples = [(pt.index, pt.val.value, pt.val.exact) for pt in pts]
    hull = _hull(triples)
    vertices = [(x, y) for x, y, _ in hull]
    slopes = []
    for (x0, y0), (x1, y1) in zip(vertices, vertices[1:]):
        slopes.append((Fraction(y1 - y0, x1 - x0), x1 - x0))
    for (s0, _), (s1, _) in zip(slopes, slopes[1:]):
        assert s0 < s1, "hull slopes must increase"
    certified = all(exact for _, _, exact in hull)
    return NewtonPolygon(vertices, slopes, certified)


def hodge_polygon(d: int, a: int) -> NewtonPolygon:
    """Universal lower bound: slopes a*k/d for k = 1..d-1."""
    if d < 2:
        raise ValueError("degree must be >= 2")
    vertices = [(k, hodge_ordinate(d, a, k)) for k in range(d)]
    slopes = [(Fraction(a * k, d), 1) for k in range(1, d)]
    return NewtonPolygon(vertices, slopes, certified=True)


def hodge_ordinate(d: int, a: int, k: int) -> Fraction:
    return Fraction(a * k * (k + 1), 2 * d)


def symmetry_bounds(known, d: int, a: int):
    """Mirror known points through the functional-equation pairing.

    For each known (i, t_i) this yields the valid lower bound
    t_{D-i} >= t_i + a*(D/2 - i), D = d-1, together with the exact endpoint
    (D, a*D/2).  Bound inputs propagate to bound outputs.
    """
    D = d - 1
    half = Fraction(a * D, 2)
    out = [ValuationPoint(D, Valuation(half, exact=True))]
    for pt in known:
        i = pt.index
        if not 1 <= i <= D - 1:
            continue
        j = D - i
        if j == i:
            continue
        out.append(ValuationPoint(j, Valuation(pt.val.value + a * (Fraction(D, 2) - i),
                                               exact=False)))
    return out


def certify(exact, bounds, d: int, a: int) -> NewtonPolygon:
    """Hull over exact and bound points with the certification flag.

    Preconditions: exact contains (0, 0) and the endpoint (d-1, a(d-1)/2).
    Certified iff the stated points cover every abscissa 0..d-1 and either
    every hull vertex is exact, or the hull slope multiset is symmetric
    under s -> a-s and every vertex with abscissa <= (d-1)/2 is exact.
    """
    D = d - 1
    exact_by_idx = {}
    for pt in exact:
        if not pt.val.exact:
            raise ValueError(f"point at index {pt.index} passed as exact but is a bound")
        if pt.index in exact_by_idx and exact_by_idx[pt.index] != pt.val.value:
            raise ValueError(f"conflicting exact values at index {pt.index}")
        exact_by_idx[pt.index] = pt.val.value
    if exact_by_idx.get(0) != 0:
        raise ValueError("exact points must include (0, 0)")
    if exact_by_idx.get(D) != Fraction(a * D, 2):
        raise ValueError(f"exact points must include the endpoint ({D}, {Fraction(a * D, 2)})")

    bound_by_idx = {}
    for pt in bounds:
        v = pt.val.value
        if pt.index in exact_by_idx:
            if v > exact_by_idx[pt.index]:
                raise ArithmeticError(
                    f"lower bound {v} exceeds exact value at index {pt.index}")
            continue
        bound_by_idx[pt.index] = max(v, bound_by_idx.get(pt.index, v))

    merged = [ValuationPoint(i, Valuation(v, exact=True)) for i, v in exact_by_idx.items()]
    merged += [ValuationPoint(i, Valuation(v, exact=False)) for i, v in bound_by_idx.items()]

    missing = [i for i in range(D + 1)
               if i not in exact_by_idx and i not in bound_by_idx]
    poly = lower_hull(merged)
    if poly.certified and not missing:
        return poly

    diagnostics = []
    if missing:
        diagnostics.append("no valuation information at indices " + repr(missing))
        return NewtonPolygon(poly.vertices, poly.slopes, False, diagnostics)

    half = Fraction(D, 2)
    blocking = [x for x, _ in poly.vertices if x <= half and x not in exact_by_idx]
    symmetric = poly.is_slope_symmetric(a)
    if not blocking and symmetric:
        return NewtonPolygon(poly.vertices, poly.slopes, True)
    if blocking:
        diagnostics.append(f"hull vertices at {blocking} carry only lower bounds")
    if not symmetric:
        diagnostics.append("hull slope multiset is not symmetric")
    return NewtonPolygon(poly.vertices, poly.slopes, False, diagnostics)


def incompatible_with(P: NewtonPolygon, points) -> str | None:
    """Rigorous certificate that valuation data cannot belong to polygon P.

    If the Newton polygon of some L-function equalled P, every coefficient
    valuation would lie on or above P with equality at P's vertices.  Returns
    a human-readable reason when the data violates that, else None.
    """
    vertex_x = {x: y for x, y in P.vertices}
    for pt in points:
        i = pt.index
        try:
            ordinate = P.ordinate(i)
        except ValueError:
            continue
        if pt.val.exact and pt.val.value < ordinate:
            return (f"exact ord c_{i} = {_frac_str(pt.val.value)} lies below the "
                    f"polygon value {_frac_str(ordinate)}")
        if i in vertex_x:
            if pt.val.exact and pt.val.value != ordinate:
                return (f"vertex at x = {i} forces ord c_{i} = {_frac_str(ordinate)}, "
                        f"but ord c_{i} = {_frac_str(pt.val.value)} exactly")
            if not pt.val.exact and pt.val.value > ordinate:
                return (f"vertex at x = {i} forces ord c_{i} = {_frac_str(ordinate)}, "
                        f"but ord c_{i} >= {_frac_str(pt.val.value)}")
    return None


def polygon_eq(P: NewtonPolygon, Q: NewtonPolygon) -> bool:
    """Exact slope-multiset equality; both polygons must be certified."""
    if not (P.certified and Q.certified):
        raise ValueError("cannot compare uncertified polygons")
    return P.slope_multiset() == Q.slope_multiset()


def polygon_diff(P: NewtonPolygon, Q: NewtonPolygon) -> dict:
    """Slope -> (multiplicity in P, multiplicity in Q) where they differ."""
    mp, mq = P.slope_multiset(), Q.slope_multiset()
    out = {}
    for s in sorted(set(mp) | set(mq)):
        if mp.get(s, 0) != mq.get(s, 0):
            out[s] = (mp.get(s, 0), mq.get(s, 0))
    return out


def with_trivial_factor(P: NewtonPolygon) -> NewtonPolygon:
    """Polygon of (1-s) * L: prepend a slope-zero segment of length one."""
    vertices = [(0, Fraction(0))] + [(x + 1, y) for x, y in P.vertices]
    slopes = [(Fraction(0), 1)] + P.slopes
    return NewtonPolygon(vertices, slopes, P.certified, P.diagnostics)


# ---------------------------------------------------------------------------
# SVG rendering (deterministic: fixed geometry, fixed float formatting)


def render_svg(polygon: NewtonPolygon, hodge: NewtonPolygon | None = None,
               points=()) -> str:
    width, height, margin = 480.0, 360.0, 40.0
    xs = [x for x, _ in polygon.vertices] or [0, 1]
    ys = [float(y) for _, y in polygon.vertices] or [0.0, 1.0]
    if hodge is not None:
        ys += [float(y) for _, y in hodge.vertices]
    for pt in points:
        ys.append(float(pt.val.value))
    xmax = max(max(xs), 1)
    ymax = max(max(ys), 1.0)
    sx = (width - 2 * margin) / xmax
    sy = (height - 2 * margin) / ymax

    def X(x):
        return margin + float(x) * sx

    def Y(y):
        return height - margin - float(y) * sy

    def path(vertices):
        return " ".join(f"{X(x):.2f},{Y(y):.2f}" for x, y in vertices)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<line x1="{X(0):.2f}" y1="{Y(0):.2f}" x2="{X(xmax):.2f}" y2="{Y(0):.2f}" '
        'stroke="#888" stroke-width="1"/>',
        f'<line x1="{X(0):.2f}" y1="{Y(0):.2f}" x2="{X(0):.2f}" y2="{Y(ymax):.2f}" '
        'stroke="#888" stroke-width="1"/>',
    ]
    for x in range(0, xmax + 1):
        parts.append(f'<line x1="{X(x):.2f}" y1="{Y(0) - 3:.2f}" x2="{X(x):.2f}" '
                     f'y2="{Y(0) + 3:.2f}" stroke="#888" stroke-width="1"/>')
    if hodge is not None and hodge.vertices:
        parts.append(f'<polyline points="{path(hodge.vertices)}" fill="none" '
                     'stroke="red" stroke-width="1.5"/>')
    if polygon.vertices:
        parts.append(f'<polyline points="{path(polygon.vertices)}" fill="none" '
                     'stroke="black" stroke-width="2"/>')
    for pt in sorted(points, key=lambda t: t.index):
        cx, cy = X(pt.index), Y(pt.val.value)
        if pt.val.exact:
            parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3.5" fill="black"/>')
        else:
            parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3.5" fill="white" '
                         'stroke="black" stroke-width="1.5"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
