"""Slow, independent reference implementations for cross-checking in tests.

Nothing here reuses the main pipeline's numerics.  The oracles only read the
raw data of a space (coefficient basis V and Gram matrix G) and redo
everything else from scratch: coefficient shifts, coordinate solves through
the normal equations, naive Gram-Schmidt, a cyclic Jacobi eigenvalue
iteration, a Kronecker-product solve for the adjoint and brute-force sampling
of the inequalities.  Dimensions are capped so all of this stays cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import SubHardyError

ADJOINT_CAP = 12
QUANTIFIER_CAP = 6
ORACLE_SEED = 20240607
MIN_SAMPLES = 10_000


class OracleDimensionError(SubHardyError):
    pass


@dataclass(frozen=True)
class QuantifierVerdict:
    kind: str
    holds: bool
    samples: int
    low: float  # smallest sampled ratio, or largest (lhs - rhs) / (lhs + rhs)
    high: float
    worst: object  # coefficients (or a pair) at the most violating sample


# -- raw data and elementary operations -------------------------------------

def _data(space_or_op):
    s = getattr(space_or_op, "space", space_or_op)
    if hasattr(s, "beta") and not hasattr(s, "gram"):
        beta = np.asarray(s.beta, dtype=float)
        return np.eye(beta.size, dtype=complex), np.diag(beta**2).astype(complex)
    return np.asarray(s.basis, dtype=complex), np.asarray(s.gram, dtype=complex)


def _coords(V, F):
    """Solve V x = F through the normal equations, insisting on an exact fit."""
    F = np.asarray(F, dtype=complex)
    X = np.linalg.solve(V.conj().T @ V, V.conj().T @ F)
    scale = max(np.abs(F).max(), 1.0)
    if np.abs(V @ X - F).max() > 1e-9 * scale:
        raise SubHardyError("oracle: vector is not in the space")
    return X


def _shift(F, n):
    """Multiply coefficient columns by z^n; refuse to drop nonzero coefficients."""
    F = np.asarray(F, dtype=complex)
    D = F.shape[0]
    if n == 0:
        return F.copy()
    if np.abs(F[D - n:]).max(initial=0.0) > 1e-12 * max(np.abs(F).max(), 1.0):
        raise SubHardyError("oracle: shift leaves the coefficient window")
    out = np.zeros_like(F)
    out[n:] = F[: D - n]
    return out


def _gram_schmidt(X, G=None, tol=1e-10):
    """Modified Gram-Schmidt in the inner product y^H G x, dropping dependent columns."""
    m = X.shape[0]
    G = np.eye(m) if G is None else G
    out = []
    for v in X.T:
        v = v.astype(complex)
        ref = np.sqrt(abs(np.vdot(v, G @ v)))
        for q in out:
            v = v - np.vdot(q, G @ v) * q
        nv = np.sqrt(abs(np.vdot(v, G @ v)))
        if nv > tol * max(ref, 1.0):
            out.append(v / nv)
    return np.array(out).T if out else np.zeros((m, 0), dtype=complex)


def _domain(V, n):
    """Coordinate basis of {x : the top n coefficients of V x vanish}."""
    D, m = V.shape
    if n == 0:
        return np.eye(m, dtype=complex)
    rows = _gram_schmidt(V[D - n:].conj().T)
    E = np.eye(m, dtype=complex)
    E = E - rows @ (rows.conj().T @ E)
    return _gram_schmidt(E)


def _jacobi_eigvalsh(H, tol=1e-15, max_sweeps=100):
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    The complex matrix is replaced by its real symmetric form
    [[Re, -Im], [Im, Re]], whose spectrum repeats each eigenvalue twice.
    """
    H = np.asarray(H, dtype=complex)
    H = (H + H.conj().T) / 2
    A = np.block([[H.real, -H.imag], [H.imag, H.real]])
    n = A.shape[0]
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        if np.linalg.norm(A[offdiag]) <= tol * max(np.linalg.norm(A), 1e-300):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2 * A[p, q])
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta else 1.0
                c = 1 / np.sqrt(t * t + 1)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q], J[q, p] = s, -s
                A = J.T @ A @ J
    w = np.sort(np.diag(A))
    return w[::2]


def _check_cap(m, cap):
    if m > cap:
        raise OracleDimensionError(f"oracle limited to dim <= {cap}, got {m}")


# -- adjoint ----------------------------------------------------------------

def _operator(V, G):
    """T_z on its domain and zero on the G-orthogonal complement of the domain."""
    D, m = V.shape
    P = _domain(V, 1)
    AP = _coords(V, _shift(V @ P, 1))
    if P.shape[1] == m:
        return AP @ np.linalg.inv(P)
    q = np.linalg.solve(G, V[D - 1].conj())
    B = np.column_stack([P, q])
    return np.column_stack([AP, np.zeros(m)]) @ np.linalg.inv(B)


def oracle_adjoint(op):
    """M-adjoint of T_z from the m^2 equations <A e_i, e_j> = <e_i, A* e_j>.

    With <u, v> = v^H G u the equations read (A*)^H G = G A, solved as one
    dense Kronecker system for the entries of (A*)^H.
    """
    V, G = _data(op)
    m = V.shape[1]
    _check_cap(m, ADJOINT_CAP)
    A = _operator(V, G)
    K = np.kron(G.T, np.eye(m))
    y = np.linalg.solve(K, (G @ A).reshape(-1, order="F"))
    return y.reshape(m, m, order="F").conj().T


# -- condition (ii) ---------------------------------------------------------

def oracle_cond_ii_scalar(beta, n, k):
    """Check T*^n T^{n+1} z^k = (beta_{n+k+1}^2 / beta_{k+1}^2) z^{k+1} on H^2(beta).

    Composes the coefficient shift with the diagonal adjoint formula
    T* z^j = (beta_j^2 / beta_{j-1}^2) z^{j-1}, one step at a time.  Returns
    the coefficient vector and the predicted scalar; raises if the indices
    leave the window or if the result is not a multiple of z.
    """
    beta = np.asarray(beta, dtype=float)
    D = beta.size
    if n < 0 or k < 0 or k + n + 1 >= D:
        raise SubHardyError(f"window exceeded: need k + n + 1 < {D}")
    f = np.zeros(D)
    f[k] = 1.0
    for _ in range(n + 1):
        f = np.concatenate([[0.0], f[:-1]])
    for _ in range(n):
        g = np.zeros(D)
        g[:-1] = f[1:] * beta[1:] ** 2 / beta[:-1] ** 2
        f = g
    if f[0] != 0:
        raise SubHardyError("result has a constant term: not in z M")
    expected = beta[n + k + 1] ** 2 / beta[k + 1] ** 2
    return f, expected


def oracle_cond_ii_residual(op, n, f):
    """Relative M-distance from T*^n T^{n+1} f to T_z(M), by Gram-Schmidt."""
    V, G = _data(op)
    A = _operator(V, G)
    Astar = oracle_adjoint(op)
    x = _coords(V, _shift(np.asarray(f, dtype=complex)[:, None], n + 1))[:, 0]
    for _ in range(n):
        x = Astar @ x
    nx = np.sqrt(abs(np.vdot(x, G @ x)))
    if nx == 0:
        return 0.0
    Q = _gram_schmidt(A @ _domain(V, 1), G)
    r = x - Q @ (Q.conj().T @ G @ x)
    return float(np.sqrt(abs(np.vdot(r, G @ r))) / nx)


def oracle_cond_ii(op, n_max):
    """Largest containment residual over a plain basis of each domain."""
    V, _ = _data(op)
    worst = 0.0
    for n in range(1, n_max + 1):
        for x in _domain(V, n + 1).T:
            worst = max(worst, oracle_cond_ii_residual(op, n, V @ x))
    return worst


# -- extremal values by Jacobi iteration ------------------------------------

def _images(V, G, n):
    """G-orthonormal basis W of the domain of T^n together with T^j W, j <= n."""
    W = _gram_schmidt(_domain(V, n), G)
    F = V @ W
    return W, [_coords(V, _shift(F, j)) for j in range(n + 1)]


def oracle_extremes(kind, op, n=1):
    """Reference values of the quantities the eigen-based checks report.

    ``cond_i``: (sigma_min, sigma_max) of T^n.  ``shimorin_1`` and
    ``shimorin_2``: the smallest eigenvalue of the defining Hermitian form.
    """
    V, G = _data(op)
    _check_cap(V.shape[1], ADJOINT_CAP)
    if kind == "cond_i":
        _, T = _images(V, G, n)
        w = _jacobi_eigvalsh(T[n].conj().T @ G @ T[n])
        w = np.sqrt(np.clip(w, 0, None))
        return float(w[0]), float(w[-1])
    if kind == "shimorin_1":
        W, T = _images(V, G, 2)
        Q = 2 * T[1].conj().T @ G @ T[1] - T[2].conj().T @ G @ T[2] - np.eye(W.shape[1])
        return float(_jacobi_eigvalsh(Q)[0])
    if kind == "shimorin_2":
        W, T = _images(V, G, 1)
        d = W.shape[1]
        K = T[1].conj().T @ G @ T[1]
        H = W.conj().T @ G @ T[1]
        Q = np.block([[2 * np.eye(d) - K, -H.conj().T], [-H, 2 * K - np.eye(d)]])
        return float(_jacobi_eigvalsh(Q)[0])
    raise ValueError(f"unknown inequality {kind!r}")


# -- brute-force quantifiers ------------------------------------------------

def _grid(d, density):
    """Sparse coefficient grid: axes, and pairs e_i + r e^{i theta} e_j."""
    pts = [np.eye(d, dtype=complex)[i] for i in range(d)]
    phases = np.exp(2j * np.pi * np.arange(density) / density)
    for i, j in combinations(range(d), 2):
        for r in (0.5, 1.0, 2.0):
            for ph in phases:
                v = np.zeros(d, dtype=complex)
                v[i], v[j] = 1.0, r * ph
                pts.append(v)
    return np.array(pts).T


def _directions(d, density, samples, seed):
    rng = np.random.default_rng(seed)
    R = rng.standard_normal((d, samples)) + 1j * rng.standard_normal((d, samples))
    return np.column_stack([_grid(d, density), R])


def _sq_norms(V, G, F):
    X = _coords(V, F)
    return np.einsum("ij,ij->j", X.conj(), G @ X).real


def oracle_quantifier(kind, op, grid_density=8, samples=MIN_SAMPLES, seed=ORACLE_SEED,
                      n_max=8, delta=None, tol=1e-10):
    """Sample the inequality ``kind`` on at least ``samples`` directions.

    ``kind`` is ``cond_i``, ``ine1``, ``shimorin_1`` or ``shimorin_2``.  The
    verdict is "holds" when no sampled direction violates the inequality by
    more than ``tol`` (relative).
    """
    V, G = _data(op)
    _check_cap(V.shape[1], QUANTIFIER_CAP)
    samples = max(int(samples), MIN_SAMPLES)

    if kind in ("cond_i", "ine1"):
        powers = [1] if kind == "cond_i" else range(0, n_max + 1)
        lo, hi, worst, count = np.inf, -np.inf, None, np.inf
        for n in powers:
            P = _domain(V, n)
            if P.shape[1] == 0:
                raise SubHardyError(f"oracle: T^{n} has an empty domain")
            F = V @ (P @ _directions(P.shape[1], grid_density, samples, seed + n))
            r = np.sqrt(_sq_norms(V, G, _shift(F, n)) / _sq_norms(V, G, F))
            count = min(count, r.size)
            if r.min() < lo:
                lo = float(r.min())
                if hi <= 1 + tol:
                    worst = (n, F[:, int(np.argmin(r))])
            if r.max() > hi:
                hi = float(r.max())
                if hi > 1 + tol:
                    worst = (n, F[:, int(np.argmax(r))])
        lower_ok = lo > tol if delta is None else lo >= delta - tol
        holds = bool(lower_ok and hi <= 1 + tol)
        if kind == "cond_i" and worst is not None:
            worst = worst[1]
        return QuantifierVerdict(kind, holds, int(count), lo, hi, None if holds else worst)

    if kind == "shimorin_1":
        P = _domain(V, 2)
        F = V @ (P @ _directions(P.shape[1], grid_density, samples, seed))
        lhs = _sq_norms(V, G, _shift(F, 2)) + _sq_norms(V, G, F)
        rhs = 2 * _sq_norms(V, G, _shift(F, 1))
        pick = lambda j: F[:, j]  # noqa: E731
    elif kind == "shimorin_2":
        P = _domain(V, 1)
        d = P.shape[1]
        Z = _directions(2 * d, grid_density, samples, seed)
        X, Y = V @ (P @ Z[:d]), V @ (P @ Z[d:])
        lhs = _sq_norms(V, G, _shift(X, 1) + Y)
        rhs = 2 * (_sq_norms(V, G, X) + _sq_norms(V, G, _shift(Y, 1)))
        pick = lambda j: (X[:, j], Y[:, j])  # noqa: E731
    else:
        raise ValueError(f"unknown inequality {kind!r}")
    gap = (lhs - rhs) / np.maximum(lhs + rhs, np.finfo(float).tiny)
    j = int(np.argmax(gap))
    holds = bool(gap[j] <= tol)
    return QuantifierVerdict(kind, holds, gap.size, float(gap.min()), float(gap[j]),
                             None if holds else pick(j))

