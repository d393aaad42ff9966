"""Multiplication by z on a truncated space.

Truncation convention: an element ``f`` of M lies in the domain of
``T_z**n`` when its top ``n`` coefficients vanish, so that ``z**n f`` still
fits in the D-coefficient window.  No zero-padding is used; the operator
matrix acts as ``T_z`` on the domain of ``T_z`` and annihilates its
M-orthogonal complement (for H^2(beta) this is the familiar subdiagonal
shift with a zero last column).

Internally everything is also expressed in an M-orthonormal frame: with
``G = L L^H`` the frame coordinates of ``x`` are ``L^H x``, and the operator
becomes ``C = L^H A L^{-H}``, so that M-adjoints become conjugate transposes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .core import DiagonalSpace, GramSpace, as_gram, shift_coeffs
from .errors import BudgetExceeded, DimensionMismatch, NotInvariant

TOL_INVARIANCE = 1e-10
TOL_EIG = 1e-12


def apply_shift(f):
    """Coefficients of ``z * f``; the top coefficient of ``f`` must be zero."""
    return shift_coeffs(f, 1)


def _domain_coords(V, n, tol):
    """Coordinates (m x d) spanning {x : the top n coefficients of V x vanish}."""
    D, m = V.shape
    if n == 0:
        return np.eye(m, dtype=complex)
    if n >= D:
        return np.zeros((m, 0), dtype=complex)
    top = V[D - n:, :]
    colnorm = np.linalg.norm(V, axis=0)
    free = np.all(np.abs(top) <= tol * colnorm, axis=0)
    cols = [np.eye(m, dtype=complex)[:, j] for j in np.flatnonzero(free)]
    tied = np.flatnonzero(~free)
    if tied.size:
        ns = sla.null_space(top[:, tied], rcond=tol)
        for c in ns.T:
            v = np.zeros(m, dtype=complex)
            v[tied] = c
            cols.append(v)
    if not cols:
        return np.zeros((m, 0), dtype=complex)
    return np.column_stack(cols)


@dataclass(frozen=True, eq=False)
class OperatorOnSpace:
    """T_z on a space, in the space's stored basis.

    ``matrix[:, j]`` holds the coordinates of ``T_z`` applied to the j-th
    basis vector whenever that vector lies in the domain of ``T_z``.
    """

    space: GramSpace
    matrix: np.ndarray
    residuals: np.ndarray
    diagonal: DiagonalSpace | None = None
    tol: float = TOL_INVARIANCE
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    @property
    def metric(self):
        return self.space.gram

    @property
    def dim(self):
        return self.space.dim

    @property
    def ambient_dim(self):
        return self.space.ambient_dim

    @property
    def frame(self):
        """Matrix of T_z in the M-orthonormal frame."""
        if "frame" not in self._cache:
            L = self.space.cholesky
            LA = L.conj().T @ self.matrix
            self._cache["frame"] = sla.solve_triangular(L, LA.conj().T, lower=True).conj().T
        return self._cache["frame"]

    def domain(self, n):
        """Coordinate basis of the domain of T_z**n."""
        key = ("dom", n)
        if key not in self._cache:
            self._cache[key] = _domain_coords(self.space.basis, n, self.tol)
        return self._cache[key]

    def domain_frame(self, n):
        """M-orthonormal frame basis (m x d_n) of the domain of T_z**n."""
        key = ("domf", n)
        if key not in self._cache:
            P = self.domain(n)
            if P.shape[1] == 0:
                Q = np.zeros((self.dim, 0), dtype=complex)
            else:
                Q, _ = np.linalg.qr(self.space.cholesky.conj().T @ P)
            self._cache[key] = Q
        return self._cache[key]

    def max_power(self):
        """Largest n for which the domain of T_z**n is nonzero."""
        n = 0
        while n + 1 < self.ambient_dim and self.domain(n + 1).shape[1] > 0:
            n += 1
        return n

    def require_power(self, n):
        if n < 0:
            raise BudgetExceeded("power must be non-negative")
        if n > 0 and self.domain(n).shape[1] == 0:
            raise BudgetExceeded(
                f"T_z^{n} has an empty domain at D={self.ambient_dim}, dim M={self.dim}"
            )

    def power_frame(self, n):
        """Frame matrix of T_z**n restricted to its domain (m x d_n)."""
        self.require_power(n)
        U = self.domain_frame(n)
        return np.linalg.matrix_power(self.frame, n) @ U

    def to_coords(self, xi):
        """Stored-basis coordinates of frame vector(s) xi."""
        return sla.solve_triangular(self.space.cholesky, xi, lower=True, trans="C")

    def to_frame(self, x):
        return self.space.cholesky.conj().T @ x

    def to_coeffs(self, x):
        return self.space.basis @ x


def build_operator(space, tol=TOL_INVARIANCE):
    """Matrix of T_z on ``space``; raises NotInvariant if z*M leaves M.

    Accepts a DiagonalSpace (kept for the diagonal fast paths) or a GramSpace.
    """
    diag = space if isinstance(space, DiagonalSpace) else None
    gs = as_gram(space)
    V, G = gs.basis, gs.gram
    P = _domain_coords(V, 1, tol)
    if P.shape[1] == 0:
        raise BudgetExceeded("no element of M can be shifted inside the window")
    F = V @ P
    S = np.zeros_like(F)
    S[1:] = F[:-1]
    Y, *_ = np.linalg.lstsq(V, S, rcond=None)
    res = np.linalg.norm(V @ Y - S, axis=0) / np.maximum(
        np.linalg.norm(S, axis=0), np.finfo(float).tiny
    )
    worst = int(np.argmax(res))
    if res[worst] > tol:
        col = P[:, worst]
        unit = np.flatnonzero(np.abs(col) > 0)
        index = int(unit[0]) if unit.size == 1 else worst
        raise NotInvariant(index, float(res[worst]))
    # A = Y (P^H G P)^{-1} P^H G: T_z on the domain, zero on its M-complement.
    H = P.conj().T @ G @ P
    A = Y @ sla.cho_solve(sla.cho_factor(H, lower=True), P.conj().T @ G)
    A.setflags(write=False)
    res.setflags(write=False)
    return OperatorOnSpace(gs, A, res, diagonal=diag, tol=tol)


def adjoint(op):
    """M-adjoint of T_z in stored coordinates: ``G^{-1} A^H G`` via Cholesky solves."""
    G = op.metric
    return sla.cho_solve((op.space.cholesky, True), op.matrix.conj().T @ G)


def _diagonal_ratios(beta, n):
    """``beta_{k+n} / beta_k`` for every k with k + n inside the window."""
    return beta[n:] / beta[: beta.size - n]


def metric_singular_values(op, n=1, generic=False):
    """Extremal values of ``||T_z^n f||_M / ||f||_M`` over the domain of T_z^n.

    On H^2(beta) these are the min and max of beta_{k+n}/beta_k; pass
    ``generic=True`` to force the dense route.
    """
    op.require_power(n)
    if op.diagonal is not None and not generic:
        r = _diagonal_ratios(op.diagonal.beta, n)
        return float(r.min()), float(r.max())
    s = np.linalg.svd(op.power_frame(n), compute_uv=False)
    return float(s[-1]), float(s[0])


def operator_power_image(op, n):
    """Coordinate matrix whose column space is T_z^n(M) within the window."""
    op.require_power(n)
    P = op.domain(n)
    return np.linalg.matrix_power(np.asarray(op.matrix), n) @ P


def apply_operator(op, f):
    """T_z applied to a coefficient vector of M, returned as coefficients."""
    f = np.asarray(f, dtype=complex)
    if f.shape != (op.ambient_dim,):
        raise DimensionMismatch("vector does not match the ambient dimension")
    op.space.coords(f)
    return apply_shift(f)
