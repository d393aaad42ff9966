"""Truncated coefficient spaces: coefficient vectors, diagonal weighted
spaces H^2(beta) and general Gram-metric polynomial subspaces.

Every analytic function is represented by its first ``D`` Taylor
coefficients (a polynomial of degree < D).  Two models of a Hilbert space
M contained in H^2 are provided:

* :class:`DiagonalSpace` -- all polynomials of degree < D with inner
  product ``<f, g> = sum_n f_n conj(g_n) beta_n**2``;
* :class:`GramSpace` -- the span of ``m`` coefficient vectors (the columns
  of ``basis``) with an explicit Hermitian positive-definite Gram matrix,
  ``gram[i, j] = <basis_j, basis_i>_M``.

In coordinates, ``<V x, V y>_M = y^H G x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    NotPositiveDefinite,
    NotRepresentable,
    SubHardyError,
)

# Relative tolerances used by the validators below.
HERMITIAN_TOL = 1e-12
REPRESENT_TOL = 1e-10
RANK_TOL = 1e-10


def as_coeffs(values, ambient_dim=None):
    """Return a read-only complex coefficient vector.

    Shorter inputs are zero-padded up to ``ambient_dim``; longer inputs are
    rejected rather than truncated.
    """
    arr = np.array(values, dtype=complex).ravel()
    if ambient_dim is not None:
        if arr.size > ambient_dim:
            raise DimensionMismatch(
                f"{arr.size} coefficients do not fit in ambient dimension {ambient_dim}"
            )
        arr = np.concatenate([arr, np.zeros(ambient_dim - arr.size, dtype=complex)])
    if arr.size == 0:
        raise DimensionMismatch("coefficient vector must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise SubHardyError("coefficients must be finite")
    arr.setflags(write=False)
    return arr


def degree(f):
    """Index of the last nonzero coefficient, or -1 for the zero vector."""
    nz = np.flatnonzero(np.asarray(f))
    return int(nz[-1]) if nz.size else -1


def shift_coeffs(f, k=1):
    """Coefficients of ``z**k * f`` in the same ambient dimension.

    Raises BudgetExceeded if nonzero coefficients would fall off the top.
    """
    f = np.asarray(f, dtype=complex)
    if k < 0:
        raise ValueError("shift must be non-negative")
    if k == 0:
        return as_coeffs(f)
    if np.any(f[f.size - k:] != 0):
        raise BudgetExceeded(
            f"shifting by {k} loses nonzero coefficients (degree {degree(f)}, D={f.size})"
        )
    out = np.zeros_like(f)
    out[k:] = f[: f.size - k]
    return as_coeffs(out)


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Positive sequence beta_0, ..., beta_{D-1}.

    No normalisation is imposed; ``normalized()`` returns the beta_0 = 1 form.
    """

    beta: np.ndarray

    def __post_init__(self):
        beta = np.array(self.beta, dtype=float).ravel()
        if beta.size == 0:
            raise SubHardyError("weight sequence must be non-empty")
        if not np.all(np.isfinite(beta)) or np.any(beta <= 0):
            raise SubHardyError("every beta_n must be finite and positive")
        w = beta[1:] / beta[:-1]
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise SubHardyError("shift weights beta_{n+1}/beta_n must be finite and positive")
        beta.setflags(write=False)
        object.__setattr__(self, "beta", beta)

    def __len__(self):
        return self.beta.size

    @property
    def shift_weights(self):
        return weights_from_beta(self)

    def normalized(self):
        return WeightSequence(self.beta / self.beta[0])


def weights_from_beta(beta):
    """Shift weights ``w_n = beta_{n+1} / beta_n`` for ``0 <= n <= D-2``."""
    if not isinstance(beta, WeightSequence):
        beta = WeightSequence(beta)
    b = beta.beta
    w = b[1:] / b[:-1]
    w.setflags(write=False)
    return w


def beta_from_weights(w):
    """Inverse of :func:`weights_from_beta` in the ``beta_0 = 1`` convention.

    ``beta_n = w_0 * ... * w_{n-1}``; the result has one more entry than ``w``.
    """
    w = np.array(w, dtype=float).ravel()
    if np.any(~np.isfinite(w)) or np.any(w <= 0):
        raise SubHardyError("shift weights must be finite and positive")
    return WeightSequence(np.concatenate([[1.0], np.cumprod(w)]))


@dataclass(frozen=True, eq=False)
class DiagonalSpace:
    """The truncated weighted Hardy space H^2(beta), monomial basis."""

    weights: WeightSequence

    def __post_init__(self):
        if not isinstance(self.weights, WeightSequence):
            object.__setattr__(self, "weights", WeightSequence(self.weights))

    @classmethod
    def from_beta(cls, beta):
        return cls(WeightSequence(beta))

    @property
    def beta(self):
        return self.weights.beta

    @property
    def ambient_dim(self):
        return len(self.weights)

    @property
    def dim(self):
        return self.ambient_dim

    def inner(self, f, g):
        return inner_product_beta(f, g, self)

    def norm(self, f):
        return norm_M(f, self)

    def as_gram(self):
        """The same space in the general Gram model (monomial basis, G = diag(beta^2))."""
        D = self.ambient_dim
        return GramSpace(np.eye(D, dtype=complex), np.diag(self.beta**2).astype(complex))


@dataclass(frozen=True, eq=False)
class GramSpace:
    """Span of the columns of ``basis`` (D x m) with Gram matrix ``gram`` (m x m)."""

    basis: np.ndarray
    gram: np.ndarray
    _chol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        V = np.array(self.basis, dtype=complex)
        if V.ndim == 1:
            V = V[:, None]
        G = np.array(self.gram, dtype=complex)
        if V.ndim != 2 or G.shape != (V.shape[1], V.shape[1]):
            raise DimensionMismatch(
                f"gram must be {V.shape[1]}x{V.shape[1]}, got {G.shape}"
            )
        if not (np.all(np.isfinite(V)) and np.all(np.isfinite(G))):
            raise SubHardyError("basis and gram must be finite")
        scale = max(np.abs(G).max(), np.finfo(float).tiny)
        if np.abs(G - G.conj().T).max() > HERMITIAN_TOL * scale:
            raise NotPositiveDefinite("gram matrix is not Hermitian")
        G = 0.5 * (G + G.conj().T)
        try:
            L = np.linalg.cholesky(G)
        except np.linalg.LinAlgError:
            raise NotPositiveDefinite("gram matrix is not positive definite") from None
        s = np.linalg.svd(V, compute_uv=False)
        if s.size == 0 or s[-1] <= RANK_TOL * s[0]:
            raise SubHardyError("basis vectors are not linearly independent")
        for a in (V, G, L):
            a.setflags(write=False)
        object.__setattr__(self, "basis", V)
        object.__setattr__(self, "gram", G)
        object.__setattr__(self, "_chol", L)

    @property
    def ambient_dim(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def cholesky(self):
        """Lower-triangular L with ``gram = L L^H``."""
        return self._chol

    def coords(self, f, tol=REPRESENT_TOL):
        """Coordinates x with ``basis @ x == f``; raises NotRepresentable otherwise."""
        f = np.asarray(f, dtype=complex)
        if f.shape[0] != self.ambient_dim:
            raise DimensionMismatch(
                f"vector has {f.shape[0]} coefficients, space has D={self.ambient_dim}"
            )
        x, *_ = np.linalg.lstsq(self.basis, f, rcond=None)
        res = np.linalg.norm(self.basis @ x - f, axis=0)
        scale = np.maximum(np.linalg.norm(f, axis=0), 1.0)
        worst = float(np.max(res / scale)) if np.size(res) else 0.0
        if worst > tol:
            raise NotRepresentable(
                f"vector is not in the span of the basis (residual {worst:.3e})", worst
            )
        return x

    def inner_coords(self, x, y):
        return complex(np.vdot(y, self.gram @ x))

    def inner(self, f, g):
        return self.inner_coords(self.coords(f), self.coords(g))

    def norm(self, f):
        return norm_M(f, self)


def inner_product_beta(f, g, space):
    """``sum_n f_n conj(g_n) beta_n**2`` on a DiagonalSpace."""
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    D = space.ambient_dim
    if f.shape != (D,) or g.shape != (D,):
        raise DimensionMismatch(f"expected vectors of length {D}, got {f.shape} and {g.shape}")
    return complex(np.sum(f * np.conj(g) * space.beta**2))


def norm_M(f, space):
    """Norm of ``f`` in the space (square root of the inner product)."""
    if isinstance(space, DiagonalSpace):
        val = inner_product_beta(f, f, space).real
    else:
        x = space.coords(f)
        val = space.inner_coords(x, x).real
    return float(np.sqrt(max(val, 0.0)))


def gramspace_from_generator(b, ambient_dim, model_norm=True, beta=None):
    """The model space span{b z^k : deg(b) + k < D}.

    With ``model_norm`` the Gram matrix is the identity, i.e. the norm
    ``||b f||_M = ||f||_2``.  Otherwise the metric is induced from the
    diagonal weights ``beta`` on the ambient coefficient space (``beta=None``
    means the plain H^2 metric).
    """
    b = as_coeffs(b)
    d = degree(b)
    if d < 0:
        raise SubHardyError("generator b must be nonzero")
    D = int(ambient_dim)
    if d >= D:
        raise DimensionMismatch(f"deg(b) = {d} does not fit in ambient dimension {D}")
    core = b[: d + 1]
    m = D - d
    V = np.zeros((D, m), dtype=complex)
    for k in range(m):
        V[k : k + d + 1, k] = core
    if model_norm:
        G = np.eye(m, dtype=complex)
    else:
        w = np.ones(D) if beta is None else np.asarray(
            beta.beta if isinstance(beta, WeightSequence) else beta, dtype=float
        )
        if w.shape != (D,):
            raise DimensionMismatch("beta must have one entry per ambient coefficient")
        G = V.conj().T @ (w[:, None] ** 2 * V)
    return GramSpace(V, G)


def as_gram(space):
    """View any space in the general Gram model."""
    return space.as_gram() if isinstance(space, DiagonalSpace) else space
