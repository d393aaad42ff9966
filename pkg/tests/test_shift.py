import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_complex, random_gram_space
from subhardy import (
    DiagonalSpace,
    GramSpace,
    adjoint,
    apply_shift,
    build_operator,
    gramspace_from_generator,
    metric_singular_values,
    operator_power_image,
)
from subhardy.catalog import alternating_beta, blaschke_model, n3_beta
from subhardy.errors import BudgetExceeded, DimensionMismatch, NotInvariant
from subhardy.shift import apply_operator

positive = st.floats(min_value=0.05, max_value=20.0)


def test_apply_shift_examples():
    assert apply_shift([1, 0, 0, 0]).tolist() == [0, 1, 0, 0]
    assert apply_shift([2, 3, 0, 0]).tolist() == [0, 2, 3, 0]
    with pytest.raises(BudgetExceeded):
        apply_shift([0, 0, 0, 1])


def test_subdiagonal_matrix_for_monomials():
    op = build_operator(gramspace_from_generator([1], 4))
    expected = np.diag(np.ones(3), -1)
    assert np.array_equal(op.matrix, expected)
    op = build_operator(DiagonalSpace(alternating_beta(6)))
    assert np.allclose(op.matrix, np.diag(np.ones(5), -1), atol=0)


def test_non_invariant_span():
    space = GramSpace(np.array([[1], [1], [0], [0]], dtype=complex), np.eye(1))
    with pytest.raises(NotInvariant) as exc:
        build_operator(space)
    assert exc.value.index == 0 and exc.value.residual > 0.1


def test_blaschke_model_operator():
    op = build_operator(blaschke_model(24))
    m = op.dim
    assert np.abs(op.matrix - np.diag(np.ones(m - 1), -1)).max() < 1e-10
    assert np.max(op.residuals) < 1e-10


def test_matrix_columns_are_coordinates_of_shifted_basis():
    space = blaschke_model(22)
    op = build_operator(space)
    V = space.basis
    for j in range(op.dim - 1):
        shifted = np.concatenate([[0], V[:-1, j]])
        assert np.abs(V @ op.matrix[:, j] - shifted).max() < 1e-12


def test_diagonal_adjoint_formula():
    beta = alternating_beta(8).beta
    op = build_operator(DiagonalSpace.from_beta(beta))
    As = adjoint(op)
    for n in range(1, 8):
        e = np.zeros(8)
        e[n] = 1
        expected = np.zeros(8)
        expected[n - 1] = beta[n] ** 2 / beta[n - 1] ** 2
        assert np.allclose(As @ e, expected, atol=1e-15)
    assert np.all(As[:, 0] == 0)
    # T* z^2 = (1/4) z
    assert As[1, 2] == pytest.approx(0.25)
    h2 = build_operator(DiagonalSpace.from_beta(np.ones(5)))
    assert np.allclose(adjoint(h2), np.diag(np.ones(4), 1))


def _adjoint_defect(op, rng, pairs=100):
    G, A, As = op.metric, op.matrix, adjoint(op)
    worst = 0.0
    for _ in range(pairs):
        x, y = random_complex(rng, op.dim), random_complex(rng, op.dim)
        lhs = np.vdot(y, G @ (A @ x))
        rhs = np.vdot(As @ y, G @ x)
        nx, ny = np.sqrt(np.vdot(x, G @ x).real), np.sqrt(np.vdot(y, G @ y).real)
        worst = max(worst, abs(lhs - rhs) / (nx * ny))
    return worst


@pytest.mark.parametrize("D", [3, 8, 20])
def test_adjoint_contract_random_gram(rng, D):
    op = build_operator(random_gram_space(rng, D))
    assert _adjoint_defect(op, rng) <= 1e-10


def test_adjoint_contract_catalog(rng):
    from subhardy import catalog

    for name in catalog.NAMES:
        op = build_operator(catalog.builtin(name))
        assert _adjoint_defect(op, rng) <= 1e-10, name


def test_singular_value_examples():
    assert metric_singular_values(build_operator(DiagonalSpace.from_beta(np.ones(8)))) == (1.0, 1.0)
    lo, hi = metric_singular_values(build_operator(DiagonalSpace(alternating_beta(8))))
    assert (lo, hi) == (0.5, 1.0)
    w = n3_beta(64).shift_weights
    lo, hi = metric_singular_values(build_operator(DiagonalSpace(n3_beta(64))))
    assert hi == w.max() < 1
    # the smallest weight is w_1, after which the weights increase toward 1
    assert lo == w[1] == pytest.approx(5 ** 0.2 / 4 ** 0.25, rel=1e-15)
    assert np.all(np.diff(w[1:]) > 0)


@given(st.lists(positive, min_size=3, max_size=24), st.integers(1, 3))
def test_diagonal_fast_path_matches_dense(beta, n):
    if n >= len(beta):
        n = 1
    op = build_operator(DiagonalSpace.from_beta(beta))
    fast = metric_singular_values(op, n)
    dense = metric_singular_values(op, n, generic=True)
    assert np.allclose(fast, dense, rtol=1e-12, atol=0)


@pytest.mark.parametrize("D", [4, 10])
def test_ratio_bounds_on_random_vectors(rng, D):
    op = build_operator(random_gram_space(rng, D))
    lo, hi = metric_singular_values(op)
    space = op.space
    P = op.domain(1)
    for _ in range(50):
        f = space.basis @ (P @ random_complex(rng, P.shape[1]))
        f[-1] = 0  # rounding noise; the domain is exactly "top coefficient zero"
        r = space.norm(apply_operator(op, f)) / space.norm(f)
        assert lo * (1 - 1e-10) <= r <= hi * (1 + 1e-10)


def test_full_rank_when_condition_i_holds():
    op = build_operator(blaschke_model(24))
    assert np.linalg.matrix_rank(op.matrix @ op.domain(1)) == op.dim - 1
    op = build_operator(DiagonalSpace(n3_beta(16)))
    assert np.linalg.matrix_rank(op.matrix) == op.dim - 1


def test_power_image():
    op = build_operator(DiagonalSpace(alternating_beta(6)))
    assert np.allclose(operator_power_image(op, 0), np.eye(6))
    img = operator_power_image(op, 1)
    assert np.linalg.matrix_rank(img) == 5 and np.all(img[0] == 0)

    space = blaschke_model(22)
    op = build_operator(space)
    img = operator_power_image(op, 2)
    b = space.basis[:, 0]
    for k in range(op.dim - 2):
        target = np.concatenate([np.zeros(k + 2), b[: 22 - k - 2]])
        x = space.coords(target)
        resid = img @ np.linalg.lstsq(img, x, rcond=None)[0] - x
        assert np.linalg.norm(resid) < 1e-10
    with pytest.raises(BudgetExceeded):
        operator_power_image(op, 99)


def test_apply_operator_checks():
    op = build_operator(DiagonalSpace.from_beta(np.ones(4)))
    assert apply_operator(op, np.array([1, 0, 0, 0])).tolist() == [0, 1, 0, 0]
    with pytest.raises(DimensionMismatch):
        apply_operator(op, np.ones(3))
