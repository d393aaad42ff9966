"""Constructive side of the structure theorem: wandering subspace, generator,
orthogonal decomposition, contraction bound and closedness of b H^2.

At truncation the closure statement ``M = closure(b H^2)`` becomes exact span
equality: the vectors ``b z^k`` that fit in the window must span M.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import complement, first_nonzero_phase, numerical_rank, orth
from .core import GramSpace, as_gram, degree, shift_coeffs
from .errors import (
    BudgetExceeded,
    HypothesesNotVerified,
    SubHardyError,
    WanderingDimNotOne,
)
from .hypotheses import CHOP_RTOL, INE1_DELTA, TOL, check_ine1
from .shift import build_operator

SEED = 0x5EED
DECOMPOSITION_DEPTH = 6
VANISHING_RTOL = 1e-12


@dataclass(frozen=True)
class WanderingSubspace:
    """N = M minus T_z(M): G-orthonormal coordinates and coefficient vectors."""

    basis: np.ndarray
    coeffs: np.ndarray

    @property
    def dim(self):
        return self.basis.shape[1]


@dataclass(frozen=True)
class Closedness:
    holds: bool  # both sides of the equivalence agree
    closed: bool  # delta ||f||_2 <= ||b f||_M <= ||f||_2 over the probed window
    ine1_holds: bool
    c_low: float  # lower constant for b rescaled to unit H^2 norm
    c_low_unit: float  # lower constant for the unit M-norm generator
    ine1_delta_max: float
    delta: float
    n_max: int


@dataclass(frozen=True)
class ContractionCheck:
    margin: float
    identity_residual: float
    trials: int


@dataclass(frozen=True)
class StructureReport:
    vanishing_order: int
    wandering_dim: int
    b: np.ndarray
    shift_weights: np.ndarray
    orbit_norms: np.ndarray
    orthogonality_residual: float
    shift_residual: float
    span_deficiency: int
    decomposition_depth: int
    decomposition_residual: float
    contraction_margin: float
    closedness: Closedness

    def ok(self, tol=TOL):
        return (
            self.wandering_dim == 1
            and self.orthogonality_residual < tol
            and self.shift_residual < tol
            and self.span_deficiency == 0
            and self.decomposition_residual < tol
            and self.contraction_margin <= tol
        )


def _chop(f):
    f = np.asarray(f, dtype=complex)
    return np.where(np.abs(f) > CHOP_RTOL * np.abs(f).max(), f, 0) + 0.0


def wandering_subspace(op):
    """G-orthogonal complement of T_z(M) in M."""
    R = orth(op.power_frame(1))
    Nf = complement(R, op.dim)
    coeffs = np.column_stack([_chop(op.to_coeffs(op.to_coords(v))) for v in Nf.T]) \
        if Nf.shape[1] else np.zeros((op.ambient_dim, 0), dtype=complex)
    if Nf.shape[1] == 1:
        ph = first_nonzero_phase(coeffs[:, 0])
        Nf, coeffs = Nf * ph, coeffs * ph
    return WanderingSubspace(op.to_coords(Nf), coeffs)


def orthogonality_lemma_defect(space, vectors):
    """Largest |f(0) g(0)| over M-orthonormal pairs f, g in span(vectors).

    A genuine wandering subspace with an element nonvanishing at 0 has
    dimension one, so the defect is zero; for a span of dimension >= 2 it is
    ``||e||^2 / 2`` where ``e`` collects the values at 0 of an orthonormal basis.
    """
    gs = as_gram(space)
    V = np.atleast_2d(np.asarray(vectors, dtype=complex).T).T
    X = np.column_stack([gs.coords(v) for v in V.T])
    Q = orth(gs.cholesky.conj().T @ X)
    if Q.shape[1] < 2:
        return 0.0
    F = gs.basis @ np.linalg.solve(gs.cholesky.conj().T, Q)
    e = F[0]
    return float(np.vdot(e, e).real / 2)


def detect_vanishing_order(space):
    """Smallest j such that some element of M has a nonzero j-th coefficient."""
    V = as_gram(space).basis
    rows = np.abs(V).max(axis=1)
    nz = np.flatnonzero(rows > VANISHING_RTOL * rows.max())
    if nz.size == 0:
        raise SubHardyError("space has no nonzero element")
    return int(nz[0])


def deflate(space, order):
    """K = {g : z^order g in M} with the pushed-back metric ||g||_K = ||z^order g||_M."""
    gs = as_gram(space)
    if order <= 0:
        raise SubHardyError("nothing to deflate: order must be positive")
    if order > detect_vanishing_order(gs):
        raise SubHardyError(f"elements of M do not all vanish to order {order}")
    return GramSpace(gs.basis[order:], gs.gram)


def _orbit(op, b):
    """Coordinates of b z^k (columns) for every k that fits in the window."""
    count = op.ambient_dim - degree(b)
    return np.column_stack([op.space.coords(shift_coeffs(b, k)) for k in range(count)])


def _mnorms(op, B):
    return np.sqrt(np.einsum("ij,ij->j", B.conj(), op.metric @ B).real)


def verify_decomposition(op, n):
    """Residual of M = N + T N + ... + T^n N + T^{n+1} M (orthogonal sum).

    Returns the larger of the worst inner product between unit vectors of
    distinct summands and the rank deficiency of their concatenation.
    """
    op.require_power(n + 1)
    C = op.frame
    N = complement(orth(op.power_frame(1)), op.dim)
    blocks = [N]
    for j in range(1, n + 1):
        blocks.append(np.linalg.matrix_power(C, j) @ N)
    blocks.append(op.power_frame(n + 1))
    Qs = [orth(B) for B in blocks]
    worst = 0.0
    for i in range(len(Qs)):
        for j in range(i + 1, len(Qs)):
            if Qs[i].shape[1] and Qs[j].shape[1]:
                worst = max(worst, float(np.abs(Qs[i].conj().T @ Qs[j]).max()))
    deficiency = op.dim - numerical_rank(np.column_stack(blocks))
    return max(worst, float(deficiency))


def verify_contraction(op, b, trials=100, seed=SEED):
    """Check ||b g||_M <= ||g||_2 on random unit-norm polynomials g.

    Also checks the orthogonal expansion ``||b g||^2 = sum |g_k|^2 ||b z^k||^2``.
    """
    b = np.asarray(b, dtype=complex)
    db = degree(b)
    count = op.ambient_dim - db
    if count < 1:
        raise BudgetExceeded("b leaves no room for multipliers")
    norms = _mnorms(op, _orbit(op, b))
    rng = np.random.default_rng(seed)
    margin, ident = -np.inf, 0.0
    for _ in range(trials):
        dg = int(rng.integers(0, count))
        g = rng.standard_normal(dg + 1) + 1j * rng.standard_normal(dg + 1)
        g /= np.linalg.norm(g)
        bg = np.zeros(op.ambient_dim, dtype=complex)
        bg[: db + dg + 1] = np.convolve(b[: db + 1], g)
        x = op.space.coords(bg)
        nbg2 = float(np.vdot(x, op.metric @ x).real)
        expected = float(np.sum(np.abs(g) ** 2 * norms[: dg + 1] ** 2))
        ident = max(ident, abs(nbg2 - expected) / max(nbg2, np.finfo(float).tiny))
        margin = max(margin, np.sqrt(nbg2) - 1.0)
    return ContractionCheck(float(margin), float(ident), trials)


def check_closedness(op, b, n_max, delta=INE1_DELTA, tol=TOL):
    """Closedness of b H^2 in M versus Ine1, both probed to depth n_max."""
    b = np.asarray(b, dtype=complex)
    B = _orbit(op, b)
    kmax = min(n_max, B.shape[1] - 1)
    norms = _mnorms(op, B[:, : kmax + 1])
    bnorm = norms[0]
    c_low_unit = float(norms.min() / bnorm)
    c_low = float(norms.min() / np.linalg.norm(b))
    closed = bool(c_low_unit >= delta - tol and norms.max() / bnorm <= 1 + tol)
    ine = check_ine1(op, n_max, delta, tol)
    return Closedness(
        holds=closed == ine.holds,
        closed=closed,
        ine1_holds=ine.holds,
        c_low=c_low,
        c_low_unit=c_low_unit,
        ine1_delta_max=ine.delta_max,
        delta=delta,
        n_max=n_max,
    )


def _generator(op):
    ws = wandering_subspace(op)
    if ws.dim != 1:
        raise WanderingDimNotOne(ws.dim)
    return ws.coeffs[:, 0]


def extract_generator(
    op,
    hypotheses=None,
    *,
    assume_verified=False,
    n_max=8,
    depth=DECOMPOSITION_DEPTH,
    delta=INE1_DELTA,
):
    """Recover the unit-norm generator b with M = span{b z^k} and its diagnostics.

    ``hypotheses`` must be a HypothesisReport in which conditions (i) and (ii)
    hold, unless ``assume_verified`` is set.  When every element of M vanishes
    at 0 the space is first deflated by the vanishing order and the generator
    of the deflated space is multiplied back by that power of z.
    """
    if not assume_verified:
        if hypotheses is None:
            raise HypothesesNotVerified("conditions (i) and (ii) have not been checked")
        if not hypotheses.theorem_hypotheses_hold:
            raise HypothesesNotVerified("conditions (i) and (ii) do not both hold")
    order = detect_vanishing_order(op.space)
    if order > 0:
        op_k = build_operator(deflate(op.space, order), tol=op.tol)
        d = _generator(op_k)
        b = np.zeros(op.ambient_dim, dtype=complex)
        b[order:] = d
    else:
        b = _generator(op)
    b = _chop(b)

    B = _orbit(op, b)
    norms = _mnorms(op, B)
    U = B / norms
    gram = U.conj().T @ (op.metric @ U)
    off = gram - np.diag(np.diag(gram))
    ortho = float(np.abs(off).max()) if off.size else 0.0
    shifted = op.matrix @ B[:, :-1]
    shift_res = 0.0
    if shifted.size:
        shift_res = float(
            np.max(_mnorms(op, shifted - B[:, 1:]) / np.maximum(norms[1:], np.finfo(float).tiny))
        )
    deficiency = op.dim - numerical_rank(B)
    n_dec = max(0, min(depth, op.max_power() - 1))
    return StructureReport(
        vanishing_order=order,
        wandering_dim=1,
        b=b,
        shift_weights=norms[1:] / norms[:-1],
        orbit_norms=norms,
        orthogonality_residual=ortho,
        shift_residual=shift_res,
        span_deficiency=int(deficiency),
        decomposition_depth=n_dec,
        decomposition_residual=verify_decomposition(op, n_dec),
        contraction_margin=float(norms.max() - 1.0),
        closedness=check_closedness(op, b, min(n_max, op.max_power()), delta),
    )
