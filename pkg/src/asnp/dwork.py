"""Truncated Dwork-Frobenius matrices, power traces and characteristic-series
coefficients, assembled into the end-to-end Newton polygon pipeline.

The operator restricted to the subspace of series vanishing at 0 has matrix
A = [F(p*i - j)] for 1 <= i, j <= n over T, where F is the splitting table;
its Frobenius-twisted product M = A tau^(a-1)(A) ... tau(A) carries the
L-function data: det(1 - M s) = sum C_i s^i, recovered from Tr(M^k) through
the Newton-identity recurrence with exact divisions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _fastring
from .finite_field import FieldCtx, PolyFq
from .padic import PadicCtx, PiElement, UnramifiedScalar, Valuation, pi_ord
from .polygon import (NewtonPolygon, ValuationPoint, certify, hodge_ordinate,
                      hodge_polygon, symmetry_bounds)
from .splitting import SplittingCoefficients, splitting_coeffs


def truncation_dim(p: int, a: int, d: int, N: int) -> int:
    """Safe principal-minor size: traces of the n x n truncation with n = d*N
    agree with the full operator modulo p^N (every dropped diagonal path has
    pi-order at least (p-1)(i + ak - 1)/d >= (p-1)N)."""
    return d * N


class DworkMatrix:
    """n x n matrix over T, stored flattened for the vectorized kernels."""

    def __init__(self, ctx: PadicCtx, n: int, arr: np.ndarray, d: int):
        self.ctx = ctx
        self.n = n
        self.arr = arr
        self.d = d

    def entry(self, i: int, j: int) -> PiElement:
        """1-based entry, matching the mathematical indexing."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError("matrix index out of range")
        return _fastring.vec_to_pi(self.ctx, self.arr[i - 1, j - 1])

    def trace(self) -> PiElement:
        return _fastring.mat_trace(self.ctx, self.arr)

    def __matmul__(self, other: "DworkMatrix") -> "DworkMatrix":
        return DworkMatrix(self.ctx, self.n,
                           _fastring.mat_mul(self.ctx, self.arr, other.arr), self.d)


def build_matrix(F: SplittingCoefficients, n: int, ctx: PadicCtx) -> DworkMatrix:
    """A[i, j] = F[p*i - j] (zero when p*i - j < 0), 1 <= i, j <= n."""
    p = ctx.p
    if F.D < p * n - 1:
        raise ValueError(f"splitting table truncated at {F.D} < p*n - 1 = {p * n - 1}")
    src = F.array()
    if src is None:
        src = np.stack([_fastring.pi_to_vec(x) for x in F.F])
    i = np.arange(1, n + 1)[:, None]
    j = np.arange(1, n + 1)[None, :]
    idx = p * i - j
    arr = np.where((idx >= 0)[..., None], src[np.clip(idx, 0, F.D)], 0)
    return DworkMatrix(ctx, n, arr.astype(np.int64), F.f.degree)


def frobenius_power_matrix(A: DworkMatrix) -> DworkMatrix:
    """M = A * tau^(a-1)(A) * tau^(a-2)(A) * ... * tau(A)."""
    ctx = A.ctx
    M = A
    for i in range(1, ctx.a):
        twisted = DworkMatrix(ctx, A.n,
                              _fastring.mat_apply(ctx, A.arr, _fastring.frob_table(ctx, ctx.a - i)),
                              A.d)
        M = M @ twisted
    return M


def power_traces(M: DworkMatrix, m: int):
    """[Tr(M), Tr(M^2), ..., Tr(M^m)] by iterated multiplication."""
    if m < 1:
        raise ValueError("need at least one power")
    traces = [M.trace()]
    Mk = M
    for _ in range(m - 1):
        Mk = Mk @ M
        traces.append(Mk.trace())
    return traces


@dataclass
class CharCoeffs:
    """C_1..C_m of det(1 - M s) with per-coefficient effective precision."""

    m: int
    C: list
    vals: list
    precisions: list

    def to_json(self):
        return {
            "m": self.m,
            "C": [x.to_matrix() for x in self.C],
            "valuations": [{"index": i + 1, **v.to_json()} for i, v in enumerate(self.vals)],
            "precisions": self.precisions,
        }


def _divide_power_of_p(x: PiElement, pv: int) -> PiElement:
    ctx = x.ctx
    comps = []
    for s in x.comps:
        cs = []
        for c in s.coords:
            if c % pv:
                raise ArithmeticError("inexact division in trace recurrence (internal bug)")
            cs.append(c // pv)
        comps.append(UnramifiedScalar(ctx, tuple(cs)))
    return PiElement(ctx, tuple(comps))


def char_coeffs_from_traces(traces, ctx: PadicCtx, report_N: int | None = None) -> CharCoeffs:
    """Newton-identity recurrence i*C_i = -sum_{k<=i} t_k C_{i-k}.

    Divisions by the prime-to-p part of i are modular inverses; dividing out
    p^v costs v digits of absolute precision, tracked per coefficient.  The
    reported coefficients are reduced to min(report_N, precision) digits and
    coefficients whose window closes are marked bound-only.
    """
    if report_N is None:
        report_N = ctx.N
    m = len(traces)
    p, pN, Nw = ctx.p, ctx.pN, ctx.N
    work = [ctx.one()]
    prec = [Nw]
    for i in range(1, m + 1):
        acc = ctx.zero()
        pr = Nw
        for k in range(1, i + 1):
            acc = acc - traces[k - 1] * work[i - k]
            pr = min(pr, prec[i - k])
        v, w = 0, i
        while w % p == 0:
            w //= p
            v += 1
        if v:
            acc = _divide_power_of_p(acc, p ** v)
            pr -= v
        if w != 1:
            acc = pow(w, -1, pN) * acc
        work.append(acc)
        prec.append(pr)
    C, vals, precs = [], [], []
    for i in range(1, m + 1):
        cap = min(report_N, prec[i])
        if cap < 1:
            C.append(ctx.zero())
            vals.append(Valuation(0, exact=False))
            precs.append(0)
            continue
        C.append(work[i].reduce_digits(cap))
        vals.append(pi_ord(work[i], cap=cap))
        precs.append(cap)
    return CharCoeffs(m, C, vals, precs)


# ---------------------------------------------------------------------------
# end-to-end pipeline


@dataclass
class PipelineResult:
    p: int
    a: int
    min_poly: list
    f: list
    lam: list
    d: int
    N: int
    N_work: int
    m: int
    n: int
    char_coeffs: CharCoeffs | None
    polygon: NewtonPolygon
    hodge: NewtonPolygon | None
    certified: bool
    constant_stripped: bool = False
    message: str = ""
    attempts: list = field(default_factory=list)
    f_table: SplittingCoefficients | None = None
    traces: list | None = None

    def valuation_points(self):
        """(index, Valuation) pairs for the computed coefficients, 1-based."""
        if self.char_coeffs is None:
            return []
        return [ValuationPoint(i + 1, v) for i, v in enumerate(self.char_coeffs.vals)]

    def to_json(self, include_f_table=False, include_traces=False):
        out = {
            "p": self.p,
            "a": self.a,
            "min_poly": self.min_poly,
            "f": self.f,
            "lambda": self.lam,
            "d": self.d,
            "N": self.N,
            "m": self.m,
            "truncation_dim": self.n,
            "constant_stripped": self.constant_stripped,
            "valuations": (self.char_coeffs.to_json()["valuations"]
                           if self.char_coeffs else []),
            "polygon": self.polygon.to_json(),
            "hodge": self.hodge.to_json() if self.hodge else None,
            "certified": self.certified,
        }
        if self.message:
            out["message"] = self.message
        if include_f_table and self.f_table is not None:
            out["f_table"] = self.f_table.to_json()
        if include_traces and self.traces is not None:
            out["traces"] = [t.to_matrix() for t in self.traces]
        return out


def _precision_buffer(p: int, m: int) -> int:
    """Extra digits needed so divisions by multiples of p land on full
    precision: floor(log_p m) + 1 when any k <= m is divisible by p."""
    if m < p:
        return 0
    e = 0
    while p ** (e + 1) <= m:
        e += 1
    return e + 1


def np_pipeline(p: int, a: int, min_poly, f, lam, N: int | None = None,
                m: int | None = None, *, q_cap=None,
                want_f_table: bool = False, want_traces: bool = False) -> PipelineResult:
    """Full pipeline: splitting table -> Dwork matrix -> traces -> C_i ->
    certified Newton polygon of the degree-(d-1) L-function of lam*f.

    With N=None the precision escalates 2, 3, ..., min(p, 4) until the
    polygon certifies; an uncertified result is returned (never a wrong
    polygon) when the ladder is exhausted.
    """
    kwargs = {} if q_cap is None else {"q_cap": q_cap}
    fld = FieldCtx(p, a, min_poly, **kwargs)
    if not isinstance(f, PolyFq):
        f = PolyFq(fld, f)
    lam = fld.elem(lam)
    if lam.is_zero():
        raise ValueError("lambda must be nonzero")
    stripped = not f.constant_term().is_zero()
    f = f.drop_constant()
    if f.is_zero():
        raise ValueError("f must be nonconstant")
    d = f.degree
    if math.gcd(d, p) != 1:
        raise ValueError(f"deg f = {d} must be coprime to p = {p}")

    if m is None:
        m = max(0, -(-(d - 1) // 2))
    m = min(m, d - 1)

    if N is not None:
        ladder = [N]
    else:
        ladder = list(range(2, min(p, 4) + 1)) or [min(p, 2)]

    result = None
    attempts = []
    for Ntry in ladder:
        result = _attempt(fld, f, lam, Ntry, m, stripped,
                          want_f_table=want_f_table, want_traces=want_traces)
        attempts.append((Ntry, result.certified))
        result.attempts = list(attempts)
        if result.certified:
            break
    if not result.certified:
        result.message = ("insufficient precision: increase N or m "
                          f"(tried N = {[t for t, _ in attempts]})")
    return result


def _attempt(fld: FieldCtx, f: PolyFq, lam, N: int, m: int, stripped: bool,
             want_f_table=False, want_traces=False) -> PipelineResult:
    p, a, d = fld.p, fld.a, f.degree
    D = d - 1
    min_poly_list = list(fld.min_poly)
    f_list = f.coords_list()
    lam_list = list(lam.coords)

    if D == 0:
        poly = NewtonPolygon([(0, Fraction(0))], [], certified=True)
        return PipelineResult(p, a, min_poly_list, f_list, lam_list, d, N, N, 0, 0,
                              None, poly, None, True, stripped)

    e = _precision_buffer(p, m)
    N_work = min(p, N + e)
    ctx = PadicCtx(fld, N_work)
    n = truncation_dim(p, a, d, N_work)
    sc = splitting_coeffs(f, lam, ctx, p * n - 1)
    A = build_matrix(sc, n, ctx)
    M = frobenius_power_matrix(A)
    traces = power_traces(M, m) if m >= 1 else []
    cc = char_coeffs_from_traces(traces, ctx, report_N=N) if m >= 1 else CharCoeffs(0, [], [], [])

    endpoint = Fraction(a * D, 2)
    exact_pts = [ValuationPoint(0, Valuation(0))]
    bound_pts = []
    computed = []
    for i in range(1, min(m, D) + 1):
        v = cc.vals[i - 1]
        if i == D:
            # the endpoint value is forced; the computed coefficient must agree
            if v.exact and v.value != endpoint:
                raise ArithmeticError(
                    f"computed ord C_{D} = {v.value} contradicts the forced endpoint {endpoint}")
            if not v.exact and v.value > endpoint:
                raise ArithmeticError(
                    f"lower bound ord C_{D} >= {v.value} contradicts the endpoint {endpoint}")
            continue
        pt = ValuationPoint(i, v)
        computed.append(pt)
        if v.exact:
            exact_pts.append(pt)
        else:
            bound_pts.append(pt)
    exact_pts.append(ValuationPoint(D, Valuation(endpoint)))

    bound_pts.extend(sym for sym in symmetry_bounds(computed, d, a)
                     if sym.index != D)
    for i in range(1, D):
        bound_pts.append(ValuationPoint(i, Valuation(hodge_ordinate(d, a, i), exact=False)))

    poly = certify(exact_pts, bound_pts, d, a)
    hodge = hodge_polygon(d, a)
    for x, y in poly.vertices:
        if y < hodge_ordinate(d, a, x) and x not in (0,):
            raise ArithmeticError("computed polygon dips below the Hodge bound (internal bug)")

    return PipelineResult(p, a, min_poly_list, f_list, lam_list, d, N, N_work, m, n,
                          cc, poly, hodge, poly.certified, stripped,
                          f_table=sc if want_f_table else None,
                          traces=traces if want_traces else None)
