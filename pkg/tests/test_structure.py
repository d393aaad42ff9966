import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_gram_space
from subhardy import (
    DiagonalSpace,
    GramSpace,
    beta_from_weights,
    build_operator,
    catalog,
    check_closedness,
    check_hypotheses,
    deflate,
    detect_vanishing_order,
    extract_generator,
    gramspace_from_generator,
    verify_contraction,
    verify_decomposition,
    wandering_subspace,
)
from subhardy.catalog import alternating_beta, blaschke_coeffs, n3_beta
from subhardy.errors import HypothesesNotVerified, SubHardyError, WanderingDimNotOne
from subhardy.structure import orthogonality_lemma_defect


def analyse(space, n_max=8):
    op = build_operator(space)
    return op, extract_generator(op, check_hypotheses(op, n_max=n_max), n_max=n_max)


def _wandering_checks(op, ws):
    G = op.metric
    R = op.matrix @ op.domain(1)
    assert np.abs(ws.basis.conj().T @ G @ R).max() < 1e-10
    assert np.abs(ws.basis.conj().T @ G @ ws.basis - np.eye(ws.dim)).max() < 1e-10


def test_wandering_subspace_examples():
    op = build_operator(DiagonalSpace.from_beta(np.ones(8)))
    ws = wandering_subspace(op)
    assert ws.dim == 1 and np.allclose(ws.coeffs[:, 0], np.eye(8)[0])
    _wandering_checks(op, ws)

    op = build_operator(DiagonalSpace(alternating_beta(16)))
    ws = wandering_subspace(op)
    assert ws.dim == 1 and np.allclose(ws.coeffs[:, 0], np.eye(16)[0])

    b = blaschke_coeffs([0.5], 16)
    op = build_operator(gramspace_from_generator(b, 24))
    ws = wandering_subspace(op)
    assert ws.dim == 1
    assert np.abs(ws.coeffs[:, 0] - np.concatenate([b, np.zeros(8)])).max() < 1e-12
    _wandering_checks(op, ws)


@given(st.integers(2, 10), st.integers(0, 2**31))
def test_wandering_dim_is_one_at_truncation(D, seed):
    op = build_operator(random_gram_space(np.random.default_rng(seed), D))
    ws = wandering_subspace(op)
    assert ws.dim == 1
    _wandering_checks(op, ws)


def test_vanishing_order_examples():
    assert detect_vanishing_order(DiagonalSpace.from_beta(np.ones(5))) == 0
    assert detect_vanishing_order(GramSpace(np.eye(6)[:, 2:5], np.eye(3))) == 2
    zb = np.concatenate([[0], blaschke_coeffs([0.5], 16)])
    assert detect_vanishing_order(gramspace_from_generator(zb, 24)) == 1


def test_deflate_examples():
    k = deflate(GramSpace(np.eye(4)[:, 2:], np.eye(2)), 2)
    assert np.array_equal(k.basis, np.eye(2)) and np.array_equal(k.gram, np.eye(2))

    b = blaschke_coeffs([0.5], 16)
    zb = gramspace_from_generator(np.concatenate([[0], b]), 24)
    k = deflate(zb, 1)
    assert np.array_equal(k.basis, gramspace_from_generator(b, 23).basis)
    assert np.array_equal(k.gram, zb.gram)

    beta = n3_beta(10).beta
    restricted = GramSpace(np.eye(10)[:, 2:], np.diag(beta[2:] ** 2))
    k = deflate(restricted, 2)
    assert np.array_equal(k.basis, np.eye(8))
    assert np.allclose(np.sqrt(np.diag(k.gram).real), beta[2:], rtol=1e-15)

    with pytest.raises(SubHardyError):
        deflate(restricted, 0)
    with pytest.raises(SubHardyError):
        deflate(restricted, 3)


def test_deflation_preserves_verdicts():
    space = catalog.builtin("vanishing-order")
    k = deflate(space, detect_vanishing_order(space))
    a = check_hypotheses(build_operator(space))
    b = check_hypotheses(build_operator(k))
    for kind in ("cond_i", "cond_ii", "ine1", "shimorin_1", "shimorin_2"):
        assert getattr(a, kind).holds == getattr(b, kind).holds, kind
    assert a.cond_i.delta_max == pytest.approx(b.cond_i.delta_max, rel=1e-12)


def test_generator_examples():
    _, r = analyse(DiagonalSpace.from_beta(np.ones(16)))
    assert np.allclose(r.b, np.eye(16)[0]) and np.allclose(r.shift_weights, 1)
    assert r.contraction_margin == 0

    _, r = analyse(DiagonalSpace(alternating_beta(16)))
    assert np.allclose(r.b, np.eye(16)[0])
    assert np.allclose(r.shift_weights, [1, 0.5] * 7 + [1])
    assert np.all(r.shift_weights <= 1)

    b = blaschke_coeffs([0.5], 16)
    op, r = analyse(gramspace_from_generator(b, 32))
    assert np.abs(r.b - np.concatenate([b, np.zeros(16)])).max() < 1e-12
    assert np.allclose(r.shift_weights, 1, atol=1e-10)
    assert op.space.norm(r.b) == pytest.approx(1, abs=1e-12)


def test_generator_requires_verified_hypotheses():
    op = build_operator(DiagonalSpace.from_beta(np.ones(8)))
    with pytest.raises(HypothesesNotVerified):
        extract_generator(op)
    breaker = build_operator(catalog.builtin("cond2-breaker"))
    with pytest.raises(HypothesesNotVerified):
        extract_generator(breaker, check_hypotheses(breaker))
    r = extract_generator(op, assume_verified=True)
    assert r.wandering_dim == 1


def test_wandering_dim_error_carries_dimension():
    err = WanderingDimNotOne(2)
    assert err.dim == 2 and "2" in str(err)


def test_case_two_generator_has_leading_zeros():
    op, r = analyse(catalog.builtin("vanishing-order"))
    assert r.vanishing_order == 2
    assert r.b[0] == 0 and r.b[1] == 0 and r.b[2] != 0
    assert r.ok()


def test_decomposition_examples():
    assert verify_decomposition(build_operator(DiagonalSpace.from_beta(np.ones(12))), 3) < 1e-12
    assert verify_decomposition(build_operator(DiagonalSpace(alternating_beta(16))), 5) < 1e-10
    assert verify_decomposition(build_operator(catalog.builtin("cond2-breaker")), 3) > 1e-10


def test_contraction_examples():
    op = build_operator(DiagonalSpace.from_beta(np.ones(12)))
    c = verify_contraction(op, np.eye(12)[0])
    assert c.margin == pytest.approx(0, abs=1e-15) and c.identity_residual < 1e-10

    alt = DiagonalSpace(alternating_beta(12))
    assert alt.norm(np.eye(12)[1]) == 1.0 and alt.norm(np.eye(12)[2]) == 0.5
    c = verify_contraction(build_operator(alt), np.eye(12)[0])
    assert c.margin <= 1e-10 and c.identity_residual < 1e-10 and c.trials == 100

    op, r = analyse(catalog.builtin("blaschke-model"))
    c = verify_contraction(op, r.b)
    assert abs(c.margin) < 1e-12


def test_contraction_is_seeded():
    op, r = analyse(DiagonalSpace(n3_beta(24)))
    assert verify_contraction(op, r.b, seed=3) == verify_contraction(op, r.b, seed=3)


def test_closedness_examples():
    op, r = analyse(DiagonalSpace.from_beta(np.ones(16)))
    c = r.closedness
    assert c.holds and c.closed and c.ine1_holds and c.c_low == 1 and c.ine1_delta_max == 1

    op, r = analyse(DiagonalSpace(n3_beta(64)))
    c = r.closedness
    assert c.holds and c.closed and c.ine1_holds
    beta = n3_beta(64).beta
    # b = 1 / beta_0, so ||b z^k||_M / ||b||_2 = beta_k
    assert c.c_low == pytest.approx(beta[:9].min(), rel=1e-12)
    assert c.c_low >= 1 - 1e-12

    op, r = analyse(DiagonalSpace(alternating_beta(32)), n_max=20)
    c = r.closedness
    assert c.holds and not c.closed and not c.ine1_holds
    assert c.c_low_unit == pytest.approx(2.0**-10)

    c = check_closedness(op, r.b, 6)
    assert c.holds and c.closed and c.ine1_holds


@pytest.mark.parametrize("name", [n for n in catalog.NAMES if n != "cond2-breaker"])
def test_weighted_shift_identification(name):
    op, r = analyse(catalog.builtin(name))
    assert r.orthogonality_residual < 1e-10 and r.shift_residual < 1e-10
    assert r.span_deficiency == 0
    assert op.space.norm(r.b) == pytest.approx(1, abs=1e-12)
    assert np.all(r.shift_weights > 0) and np.all(r.shift_weights <= 1 + 1e-10)
    assert np.allclose(r.shift_weights, r.orbit_norms[1:] / r.orbit_norms[:-1])


@pytest.mark.parametrize("name", [n for n in catalog.NAMES if n != "cond2-breaker"])
def test_weights_rebuild_equivalent_space(name):
    op, r = analyse(catalog.builtin(name))
    h = check_hypotheses(op)
    rebuilt = build_operator(DiagonalSpace(beta_from_weights(r.shift_weights)))
    g = check_hypotheses(rebuilt)
    assert g.cond_i.delta_max == pytest.approx(h.cond_i.delta_max, abs=1e-10)
    assert g.shimorin_1.holds == h.shimorin_1.holds
    assert g.shimorin_2.holds == h.shimorin_2.holds


def test_orthogonality_lemma_defect():
    h2 = DiagonalSpace.from_beta(np.ones(6))
    e = np.eye(6)
    assert orthogonality_lemma_defect(h2, e[0]) == 0.0
    # both vanish at 0: the mechanism gives f(0) g(0) = 0 for every orthonormal pair
    assert orthogonality_lemma_defect(h2, np.column_stack([e[1], e[2]])) < 1e-8
    # synthetic span {1, z}: not a wandering subspace of any space satisfying (ii);
    # a rotated orthonormal pair has f(0) g(0) = 1/2
    assert orthogonality_lemma_defect(h2, np.column_stack([e[0], e[1]])) == pytest.approx(0.5)
