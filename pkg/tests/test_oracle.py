import numpy as np
import pytest

from conftest import random_gram_space
from subhardy import (
    DiagonalSpace,
    GramSpace,
    adjoint,
    build_operator,
    catalog,
    check_hypotheses,
    gramspace_from_generator,
)
from subhardy.catalog import alternating_beta
from subhardy.hypotheses import evaluate_witness
from subhardy.oracle import (
    OracleDimensionError,
    oracle_adjoint,
    oracle_cond_ii,
    oracle_cond_ii_residual,
    oracle_cond_ii_scalar,
    oracle_extremes,
    oracle_quantifier,
)

SMALL = {"blaschke-model": 21, "vanishing-order": 8}


def small(name):
    return build_operator(catalog.builtin(name, SMALL.get(name, 6)))


def test_adjoint_backward_shift():
    op = build_operator(DiagonalSpace.from_beta(np.ones(4)))
    assert np.allclose(oracle_adjoint(op), np.diag(np.ones(3), 1), atol=1e-14)


def test_adjoint_alternating_formula():
    beta = alternating_beta(6).beta
    X = oracle_adjoint(build_operator(DiagonalSpace.from_beta(beta)))
    expected = np.zeros((6, 6))
    for n in range(1, 6):
        expected[n - 1, n] = beta[n] ** 2 / beta[n - 1] ** 2
    assert np.allclose(X, expected, atol=1e-14)


@pytest.mark.parametrize("D", [6, 12])
def test_adjoint_matches_pipeline(D):
    op = build_operator(random_gram_space(np.random.default_rng(7), D))
    assert np.abs(oracle_adjoint(op) - adjoint(op)).max() < 1e-9


def test_adjoint_matches_pipeline_on_generator_space():
    rng = np.random.default_rng(7)
    b = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    V = gramspace_from_generator(b, 9).basis
    G = random_gram_space(rng, 5).gram
    op = build_operator(GramSpace(V, G))
    assert np.abs(oracle_adjoint(op) - adjoint(op)).max() < 1e-9


def test_dimension_caps():
    with pytest.raises(OracleDimensionError):
        oracle_adjoint(build_operator(DiagonalSpace.from_beta(np.ones(13))))
    with pytest.raises(OracleDimensionError):
        oracle_quantifier("cond_i", build_operator(DiagonalSpace.from_beta(np.ones(7))))


def test_quantifier_examples():
    op = build_operator(DiagonalSpace(alternating_beta(4)))
    v = oracle_quantifier("shimorin_1", op)
    assert not v.holds and v.samples >= 10_000
    assert np.flatnonzero(v.worst).tolist() == [1]

    v = oracle_quantifier("shimorin_2", op)
    x, y = v.worst
    assert not v.holds and v.samples >= 10_000
    assert np.flatnonzero(x).tolist() == [0] and np.flatnonzero(y).tolist() == [1]

    v = oracle_quantifier("cond_i", build_operator(DiagonalSpace.from_beta(np.ones(6))))
    assert v.holds and v.samples >= 10_000
    assert v.low == pytest.approx(1, abs=1e-12) and v.high == pytest.approx(1, abs=1e-12)


def test_unknown_inequality():
    op = build_operator(DiagonalSpace.from_beta(np.ones(4)))
    with pytest.raises(ValueError):
        oracle_quantifier("shimorin_3", op)
    with pytest.raises(ValueError):
        oracle_extremes("shimorin_3", op)


def test_cond_ii_scalar_examples():
    f, c = oracle_cond_ii_scalar(np.ones(6), 2, 0)
    assert c == 1 and np.array_equal(f, np.eye(6)[1])
    beta = alternating_beta(8).beta
    f, c = oracle_cond_ii_scalar(beta, 1, 0)
    assert c == 0.25 and np.array_equal(f, 0.25 * np.eye(8)[1])
    f, c = oracle_cond_ii_scalar(beta, 2, 1)
    assert c == 0.25 and np.array_equal(f, 0.25 * np.eye(8)[2])
    with pytest.raises(ValueError):
        oracle_cond_ii_scalar(beta, 4, 3)


@pytest.mark.parametrize("seed", range(10))
def test_cond_ii_scalar_identity_random(seed):
    rng = np.random.default_rng(seed)
    beta = np.exp(rng.uniform(-1, 1, 16))
    for n in range(1, 6):
        for k in range(16 - n - 1):
            f, c = oracle_cond_ii_scalar(beta, n, k)
            assert f[k + 1] == pytest.approx(c, rel=1e-12)
            assert np.count_nonzero(f) == 1


def test_breaker_validated_by_oracle():
    op = build_operator(catalog.builtin("cond2-breaker"))
    h = check_hypotheses(op)
    assert oracle_cond_ii(op, 8) > 0.1
    n, f = h.cond_ii.witness
    assert oracle_cond_ii_residual(op, n, f) == pytest.approx(h.cond_ii.max_residual, rel=1e-8)


@pytest.mark.parametrize("name", catalog.NAMES)
def test_numbers_agree_with_pipeline(name):
    op = small(name)
    assert op.dim <= 6
    h = check_hypotheses(op, n_max=min(8, op.max_power() - 1))
    lo, hi = oracle_extremes("cond_i", op)
    assert lo == pytest.approx(h.cond_i.delta_max, abs=1e-8)
    assert hi == pytest.approx(h.cond_i.sup_ratio, abs=1e-8)
    assert oracle_extremes("shimorin_1", op) == pytest.approx(h.shimorin_1.min_eigenvalue, abs=1e-8)
    assert oracle_extremes("shimorin_2", op) == pytest.approx(h.shimorin_2.min_eigenvalue, abs=1e-8)
    assert oracle_cond_ii(op, h.cond_ii.n_checked) == pytest.approx(h.cond_ii.max_residual, abs=1e-8)


@pytest.mark.parametrize("name", catalog.NAMES)
def test_sampled_violations_reproduced_by_eigen_witness(name):
    op = small(name)
    h = check_hypotheses(op, n_max=min(8, op.max_power() - 1))
    for kind in ("shimorin_1", "shimorin_2"):
        v = oracle_quantifier(kind, op)
        verdict = getattr(h, kind)
        assert v.holds == verdict.holds
        if not v.holds:
            lhs, rhs = evaluate_witness(op, kind, verdict.witness)
            assert lhs > rhs
            lhs, rhs = evaluate_witness(op, kind, v.worst)
            assert lhs > rhs
