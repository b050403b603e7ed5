"""Vectorized kernels for bulk arithmetic over T = (Z_q/p^N)[pi]/(pi^(p-1)+p).

Elements are flattened to int64 vectors of length (p-1)*a indexed by
pi_power * a + gen_power.  A structure-constant tensor S (built once per
context from the scalar reference arithmetic) turns ring multiplication into
integer tensor contractions; everything is reduced mod p^N after each
contraction, and the intermediate magnitudes stay far below 2^63 for the
supported parameter ranges (p <= 7, a <= 3, N <= p, dimensions <= a few
hundred).
"""

from __future__ import annotations

import numpy as np

from .padic import PadicCtx, PiElement, UnramifiedScalar


def dim(ctx: PadicCtx) -> int:
    return (ctx.p - 1) * ctx.a


def pi_to_vec(x: PiElement) -> np.ndarray:
    ctx = x.ctx
    out = np.zeros(dim(ctx), dtype=np.int64)
    a = ctx.a
    for i, comp in enumerate(x.comps):
        for s, c in enumerate(comp.coords):
            out[i * a + s] = c
    return out


def vec_to_pi(ctx: PadicCtx, v) -> PiElement:
    a = ctx.a
    comps = []
    for i in range(ctx.p - 1):
        comps.append(UnramifiedScalar(ctx, tuple(int(v[i * a + s]) % ctx.pN for s in range(a))))
    return PiElement(ctx, tuple(comps))


def structure_tensor(ctx: PadicCtx) -> np.ndarray:
    """S[i, j, :] = coordinates of basis_i * basis_j; cached on the context."""
    if ctx._struct is not None:
        return ctx._struct
    D = dim(ctx)
    basis = []
    for i in range(ctx.p - 1):
        for s in range(ctx.a):
            comps = [[0] * ctx.a for _ in range(ctx.p - 1)]
            comps[i][s] = 1
            basis.append(ctx.pi_elem(comps))
    S = np.zeros((D, D, D), dtype=np.int64)
    for i in range(D):
        for j in range(i, D):
            vec = pi_to_vec(basis[i] * basis[j])
            S[i, j] = vec
            S[j, i] = vec
    ctx._struct = S
    return S


def mul_table(ctx: PadicCtx, y: PiElement) -> np.ndarray:
    """Matrix My with (x * y) = x @ My for flattened x."""
    S = structure_tensor(ctx)
    return np.tensordot(S, pi_to_vec(y), axes=([1], [0])) % ctx.pN


def frob_table(ctx: PadicCtx, power: int = 1) -> np.ndarray:
    """Matrix Ft with vec(tau^power(x)) = x @ Ft (acts on the gen axis only)."""
    a = ctx.a
    rows = ctx._frob_pows[power % a]
    D = dim(ctx)
    out = np.zeros((D, D), dtype=np.int64)
    for i in range(ctx.p - 1):
        for s in range(a):
            for u in range(a):
                out[i * a + s, i * a + u] = rows[s][u]
    return out


def mat_mul(ctx: PadicCtx, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Product of (n, n, D) matrices over T."""
    S = structure_tensor(ctx)
    T1 = np.tensordot(A, S, axes=([2], [0])) % ctx.pN          # (n, t, j, k)
    C = np.einsum("ntjk,tmj->nmk", T1, B)
    return C % ctx.pN


def mat_apply(ctx: PadicCtx, A: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Apply an elementwise linear map (e.g. Frobenius) given by `table`."""
    return np.tensordot(A, table, axes=([2], [0])) % ctx.pN


def mat_trace(ctx: PadicCtx, A: np.ndarray) -> PiElement:
    return vec_to_pi(ctx, np.einsum("iik->k", A) % ctx.pN)


def series_mul_sparse(ctx: PadicCtx, F: np.ndarray, terms) -> np.ndarray:
    """Multiply the truncated series F (rows = x-degree) by sum_j c_j x^(s_j).

    `terms` is a list of (shift, PiElement) pairs; the result keeps F's
    truncation degree.
    """
    D1 = F.shape[0]
    out = np.zeros_like(F)
    for shift, coeff in terms:
        if shift >= D1 or coeff.is_zero():
            continue
        My = mul_table(ctx, coeff)
        block = F[: D1 - shift] @ My
        out[shift:] += block % ctx.pN
        out[shift:] %= ctx.pN
    return out
