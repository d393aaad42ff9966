"""Small dense linear-algebra helpers shared by the pipeline modules."""

import numpy as np

RANK_RTOL = 1e-10


def numerical_rank(X, rtol=RANK_RTOL):
    X = np.atleast_2d(X)
    if X.size == 0:
        return 0
    s = np.linalg.svd(X, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def orth(X, rtol=RANK_RTOL):
    """Orthonormal basis for the column space of X."""
    X = np.atleast_2d(X)
    if X.size == 0:
        return np.zeros((X.shape[0], 0), dtype=complex)
    U, s, _ = np.linalg.svd(X, full_matrices=False)
    r = int(np.sum(s > rtol * s[0])) if s[0] > 0 else 0
    return U[:, :r]


def complement(Q, n):
    """Orthonormal basis of the orthogonal complement of range(Q) in C^n."""
    if Q.shape[1] == 0:
        return np.eye(n, dtype=complex)
    U, _, _ = np.linalg.svd(Q, full_matrices=True)
    return U[:, Q.shape[1]:]


def lowest_degree_combination(R, rtol=1e-9):
    """Unit vector c minimising the degree of ``R @ c``.

    ``R`` holds the coefficient rows of a family of vectors, ordered by
    increasing degree.  The returned combination has the largest possible
    number of trailing zero rows; it is unique up to phase.
    """
    k = R.shape[1]
    if k == 1:
        return np.ones(1, dtype=complex)
    scale = max(np.abs(R).max(), np.finfo(float).tiny)
    for d in range(R.shape[0]):
        top = R[d + 1:]
        if top.size == 0:
            break
        _, s, Vh = np.linalg.svd(top, full_matrices=True)
        s = np.concatenate([s, np.zeros(k - s.size)])
        if s[-1] <= rtol * scale:
            return Vh[-1].conj()
    return np.eye(k, dtype=complex)[:, 0]


def first_nonzero_phase(v, rtol=1e-9):
    """Unimodular scalar that rotates the first significant entry of v onto the positive reals."""
    v = np.asarray(v)
    a = np.abs(v)
    if a.max() == 0:
        return 1.0
    j = int(np.flatnonzero(a > rtol * a.max())[0])
    return np.conj(v[j]) / a[j]


def unit_modulus_round(x, rtol=1e-6):
    """Replace each significant entry of x by its phase and drop the rest."""
    a = np.abs(x)
    if a.max() == 0:
        return np.zeros_like(x)
    keep = a > rtol * a.max()
    out = np.zeros_like(x, dtype=complex)
    out[keep] = x[keep] / a[keep]
    return out
