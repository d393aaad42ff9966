"""Named example spaces and generators for synthetic ones.

Catalog names are a stable part of the command-line interface.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    DiagonalSpace,
    GramSpace,
    WeightSequence,
    as_coeffs,
    gramspace_from_generator,
)
from .errors import SubHardyError

BLASCHKE_TAIL = 1e-9

# cond2-breaker: H^2(beta) with beta_n = 0.8^n plus a Gram coupling between
# 1 and z.  Found by a small grid search over (ratio, coupling, index pair);
# condition (i) keeps sigma in [0.7016, 0.9562] and the condition-(ii)
# residual equals the coupling, 0.3, at n = 1.
BREAKER_RATIO = 0.8
BREAKER_COUPLING = 0.3


def blaschke_coeffs(zeros, D, tail_tol=BLASCHKE_TAIL):
    """Taylor coefficients c_0..c_{D-1} of the finite Blaschke product with ``zeros``.

    Each factor is ``(|a|/a) (a - z) / (1 - conj(a) z)``, or ``z`` when a = 0.
    Raises if the neglected tail mass ``1 - sum |c_n|^2`` exceeds ``tail_tol``.
    """
    c = np.zeros(D, dtype=complex)
    c[0] = 1.0
    n = np.arange(1, D)
    for a in zeros:
        a = complex(a)
        if abs(a) >= 1:
            raise SubHardyError(f"zero {a} is not inside the unit disk")
        f = np.zeros(D, dtype=complex)
        if a == 0:
            if D > 1:
                f[1] = 1.0
        else:
            r = abs(a)
            f[0] = r
            f[1:] = (r / a) * np.conj(a) ** (n - 1) * (r * r - 1)
        c = np.convolve(c, f)[:D]
    tail = 1.0 - float(np.sum(np.abs(c) ** 2))
    if tail > tail_tol:
        raise SubHardyError(
            f"D={D} leaves tail mass {tail:.2e} > {tail_tol:.0e}; increase D"
        )
    return as_coeffs(c)


def blaschke_min_length(zeros, tail_tol=BLASCHKE_TAIL, limit=4096):
    """Shortest truncation whose tail mass is below ``tail_tol``."""
    for D in range(1, limit + 1):
        try:
            blaschke_coeffs(zeros, D, tail_tol)
        except SubHardyError as e:
            if "inside the unit disk" in str(e):
                raise
            continue
        return D
    raise SubHardyError("no admissible truncation length below the limit")


def random_monotone_beta(seed, D, delta):
    """Nonincreasing beta with beta_0 = 1 and every beta_n >= delta.

    Every shift weight then lies in [delta, 1], so Ine1 holds with constant
    at least ``delta``.
    """
    if not 0 < delta <= 1:
        raise SubHardyError("delta must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    steps = rng.random(D - 1)
    frac = np.concatenate([[0.0], np.cumsum(steps)]) / (steps.sum() + rng.random() + 1e-12)
    beta = 1.0 - (1.0 - delta) * frac
    return WeightSequence(beta)


def alternating_beta(D):
    """1, 1, 1/2, 1/2, 1/4, 1/4, ...: beta_n = 2^(-floor(n/2))."""
    return WeightSequence(2.0 ** -(np.arange(D) // 2))


def n3_beta(D):
    n = np.arange(D, dtype=float)
    return WeightSequence((n + 3) ** (1 / (n + 3)))


def breaker_gram(D):
    beta = BREAKER_RATIO ** np.arange(D)
    G = np.diag(beta**2).astype(complex)
    G[0, 1] = G[1, 0] = BREAKER_COUPLING * beta[0] * beta[1]
    return GramSpace(np.eye(D, dtype=complex), G)


def blaschke_model(D, zeros=(0.5,)):
    L = blaschke_min_length(zeros)
    if D < L + 1:
        raise SubHardyError(f"blaschke-model needs D >= {L + 1}")
    return gramspace_from_generator(blaschke_coeffs(zeros, L), D, model_norm=True)


def vanishing_order_space(D, order=2):
    """H^2(beta) with beta from n3_beta, restricted to z^order H^2."""
    if D < order + 3:
        raise SubHardyError(f"vanishing-order needs D >= {order + 3}")
    beta = n3_beta(D).beta
    V = np.eye(D, dtype=complex)[:, order:]
    return GramSpace(V, np.diag(beta[order:] ** 2))


@dataclass(frozen=True)
class Fact:
    """An expected property of an entry's analysis.

    ``path`` is a dotted attribute path into the analysis; ``check`` is one of
    ``==``, ``approx``, ``<=``, ``>=``, ``all_approx``, ``all_le``,
    ``leading_zeros``.
    """

    path: str
    check: str
    value: object
    tol: float = 0.0
    source: str = "trivial"  # published, derived or trivial
    note: str = ""


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    build: object
    default_dim: int
    min_dim: int
    n_max: int = 8
    params: dict = field(default_factory=dict)
    provenance: str = ""
    expected: tuple = ()


_ALT_NOTE = "satisfies conditions (i)-(ii) but neither Shimorin inequality"

ENTRIES = {
    e.name: e
    for e in [
        CatalogEntry(
            "classical-h2",
            "diagonal",
            lambda D: DiagonalSpace(WeightSequence(np.ones(D))),
            default_dim=16,
            min_dim=4,
            params={"beta": "1"},
            provenance="classical Hardy space H^2; T_z is an isometry",
            expected=(
                Fact("hypotheses.cond_i.holds", "==", True),
                Fact("hypotheses.cond_i.delta_max", "approx", 1.0, 1e-12),
                Fact("hypotheses.cond_ii.holds", "==", True),
                Fact("hypotheses.ine1.holds", "==", True),
                Fact("hypotheses.shimorin_1.holds", "==", True),
                Fact("hypotheses.shimorin_2.holds", "==", True),
                Fact("structure.wandering_dim", "==", 1),
                Fact("structure.shift_weights", "all_approx", 1.0, 1e-12),
                Fact("structure.contraction_margin", "approx", 0.0, 1e-12),
                Fact("structure.closedness.holds", "==", True),
            ),
        ),
        CatalogEntry(
            "paper-alternating",
            "diagonal",
            lambda D: DiagonalSpace(alternating_beta(D)),
            default_dim=32,
            min_dim=4,
            params={"beta_n": "2^(-n/2) for even n, 2^(-(n-1)/2) for odd n"},
            provenance="weighted space that " + _ALT_NOTE,
            expected=(
                Fact("hypotheses.cond_i.holds", "==", True, source="published", note=_ALT_NOTE),
                Fact("hypotheses.cond_i.delta_max", "approx", 0.5, 1e-12, "derived"),
                Fact("hypotheses.cond_ii.holds", "==", True, source="published", note=_ALT_NOTE),
                Fact("hypotheses.shimorin_1.holds", "==", False, source="published", note=_ALT_NOTE),
                Fact("hypotheses.shimorin_1.lhs", "approx", 1.25, 1e-12, "derived"),
                Fact("hypotheses.shimorin_1.rhs", "approx", 0.5, 1e-12, "derived"),
                Fact("hypotheses.shimorin_2.holds", "==", False, source="published", note=_ALT_NOTE),
                Fact("hypotheses.shimorin_2.lhs", "approx", 4.0, 1e-12, "derived"),
                Fact("hypotheses.shimorin_2.rhs", "approx", 2.5, 1e-12, "derived"),
                Fact("structure.wandering_dim", "==", 1, source="derived"),
                Fact("structure.shift_weights", "all_le", 1.0, 1e-10, "derived"),
                Fact("structure.decomposition_residual", "<=", 1e-10, source="derived"),
            ),
        ),
        CatalogEntry(
            "paper-n3",
            "diagonal",
            lambda D: DiagonalSpace(n3_beta(D)),
            default_dim=64,
            min_dim=4,
            params={"beta_n": "(n+3)^(1/(n+3))"},
            provenance="decreasing weights bounded away from zero: Ine1 holds, T_z not an isometry",
            expected=(
                Fact("hypotheses.cond_i.holds", "==", True, source="derived"),
                Fact(
                    "hypotheses.cond_i.delta_max", "approx",
                    5 ** (1 / 5) / 4 ** (1 / 4), 1e-12, "derived",
                    "smallest weight is w_1",
                ),
                Fact("hypotheses.cond_i.sup_ratio", "<=", 1.0, source="derived"),
                Fact("hypotheses.ine1.holds", "==", True, source="published"),
                Fact("structure.closedness.closed", "==", True, source="published"),
                Fact("structure.closedness.holds", "==", True, source="derived"),
                Fact("structure.closedness.c_low", ">=", 1 - 1e-12, source="derived"),
            ),
        ),
        CatalogEntry(
            "blaschke-model",
            "gram",
            blaschke_model,
            default_dim=32,
            min_dim=17,
            params={"zeros": "[1/2]", "gram": "identity"},
            provenance="isometric model b H^2 with ||b f||_M = ||f||_2, b a Blaschke factor",
            expected=(
                Fact("hypotheses.cond_i.delta_max", "approx", 1.0, 1e-10, "derived"),
                Fact("hypotheses.cond_i.sup_ratio", "approx", 1.0, 1e-10, "derived"),
                Fact("hypotheses.cond_ii.holds", "==", True),
                Fact("hypotheses.shimorin_1.holds", "==", True),
                Fact("hypotheses.shimorin_2.holds", "==", True),
                Fact("structure.wandering_dim", "==", 1, source="derived"),
                Fact("structure.shift_weights", "all_approx", 1.0, 1e-10, "derived"),
                Fact("structure.contraction_margin", "approx", 0.0, 1e-10, "derived"),
                Fact("contraction.margin", "approx", 0.0, 1e-10, "derived"),
            ),
        ),
        CatalogEntry(
            "cond2-breaker",
            "gram",
            breaker_gram,
            default_dim=12,
            min_dim=4,
            params={"beta_n": f"{BREAKER_RATIO}^n", "coupling(1, z)": str(BREAKER_COUPLING)},
            provenance="synthetic: condition (i) holds, condition (ii) fails",
            expected=(
                Fact("hypotheses.cond_i.holds", "==", True, source="derived"),
                Fact("hypotheses.cond_ii.holds", "==", False, source="derived"),
                Fact("hypotheses.cond_ii.max_residual", ">=", 0.1, source="derived"),
                Fact("structure", "==", None, source="derived"),
            ),
        ),
        CatalogEntry(
            "vanishing-order",
            "gram",
            vanishing_order_space,
            default_dim=32,
            min_dim=5,
            params={"order": "2", "beta_n": "(n+3)^(1/(n+3))"},
            provenance="z^2 times H^2(beta): every element vanishes to order 2 at 0",
            expected=(
                Fact("hypotheses.cond_i.holds", "==", True, source="derived"),
                Fact("hypotheses.cond_ii.holds", "==", True, source="derived"),
                Fact("structure.vanishing_order", "==", 2),
                Fact("structure.wandering_dim", "==", 1, source="derived"),
                Fact("structure.b", "leading_zeros", 2, source="derived"),
            ),
        ),
    ]
}

NAMES = tuple(sorted(ENTRIES))


def entry(name):
    try:
        return ENTRIES[name]
    except KeyError:
        raise SubHardyError(
            f"unknown catalog entry {name!r}; choose from {', '.join(NAMES)}"
        ) from None


def builtin(name, D=None):
    """Instantiate a catalog entry at ambient dimension D (default per entry)."""
    e = entry(name)
    D = e.default_dim if D is None else int(D)
    if D < e.min_dim:
        raise SubHardyError(f"{name} needs D >= {e.min_dim}")
    return e.build(D)
