import math

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from qca_lab.dynamics import orbit
from qca_lab.expectation import (
    BetaSpec, ProductStateParams, ball_volume, beta_coefficients, build_automaton,
    c_beta, certify, check_translates_commute, dense_oracle, evaluate, expect_evolved,
    expect_series, group_word, lambda_of_state, moments_from_bloch,
    thermalization_certificate,
)
from qca_lab.pauli import I, X, Y, Z, letter_word
from qca_lab.symplectic import ModuleVector, PolyMatrix
from qca_lab.fpoly import parse_poly

FRACTAL_L = PolyMatrix.palindromic(parse_poly("u + 1 + u^-1"))
X0 = ModuleVector(["1", "0"])
Y0 = ModuleVector(["1", "1"])
Z0 = ModuleVector(["0", "1"])
FIG4 = ProductStateParams(0.0, 30.0, 45.0)

states = st.builds(
    ProductStateParams,
    st.floats(0, 0.5),
    st.floats(0, 180),
    st.floats(0, 360),
)
words = st.lists(st.integers(0, 3), min_size=0, max_size=6)
angles = st.floats(0, 2 * math.pi)


def test_moments_examples():
    assert np.allclose(moments_from_bloch(ProductStateParams(0.5, 17, 99)), [1, 0, 0, 0])
    assert np.allclose(moments_from_bloch(ProductStateParams(0, 0, 0)), [1, 0, 0, 1])
    m = moments_from_bloch(FIG4)
    assert m[1] == pytest.approx(0.5 * math.sqrt(0.5))
    assert m[1] == pytest.approx(0.35355, abs=1e-5)


@given(states)
def test_density_matrix_matches_moments(s):
    rho = s.density_matrix()
    w = np.linalg.eigvalsh(rho)
    assert w.min() >= -1e-12 and np.trace(rho).real == pytest.approx(1)
    m = moments_from_bloch(s)
    from qca_lab.pauli import SIGMA
    assert np.allclose([np.trace(rho @ SIGMA[a]) for a in range(4)], m)
    assert max(abs(m[1:])) <= 1 + 1e-12


def test_state_validation_and_parse():
    with pytest.raises(ValueError):
        ProductStateParams(0.6, 0, 0)
    with pytest.raises(ValueError):
        ProductStateParams(-0.1, 0, 0)
    assert ProductStateParams.parse("p=0.1,theta=30,phi=45") == ProductStateParams(0.1, 30, 45)
    for bad in ("theta=30", "p=x,theta=1,phi=2", "p=0.1,theta=30,phi=45,z=1", "garbage"):
        with pytest.raises(ValueError):
            ProductStateParams.parse(bad)


def test_lambda_examples():
    assert lambda_of_state(moments_from_bloch(ProductStateParams(0.5, 30, 45))) == 0
    assert lambda_of_state(moments_from_bloch(ProductStateParams(0, 0, 0))) == pytest.approx(1)
    lam = lambda_of_state(moments_from_bloch(ProductStateParams(0.1, 30, 45)))
    assert lam == pytest.approx(0.8 * math.cos(math.radians(30)))
    assert lam == pytest.approx(0.6928, abs=1e-4)


def test_certificate_examples():
    assert ball_volume(1, 1) == 3 and ball_volume(2, 2) == 25
    assert c_beta(1, 1, 1) == 512
    for R in (1, 2, 3):
        assert thermalization_certificate([1, 0, 0, 0], 1, R, 1)
    assert not thermalization_certificate(moments_from_bloch(FIG4), 1, 1, 1)
    rep = certify(FIG4)
    assert not rep.certified and rep.c_beta == 512
    assert rep.to_json()["lambda"] == pytest.approx(math.cos(math.radians(30)))
    assert certify(ProductStateParams(0, 0, 0)).stabilizer


def test_beta_spec():
    assert BetaSpec.parse("xx:g=0.7,R=1") == BetaSpec(0.7, 1)
    assert BetaSpec(2 * math.pi + 0.5).g == pytest.approx(0.5)
    for bad in ("zz:g=1", "xx:g=1,R=3", "xx:g=1,foo=2", "xx:g=abc", "xx:g=1,R=0"):
        with pytest.raises(ValueError):
            BetaSpec.parse(bad)


@pytest.mark.parametrize("R", [1, 2])
def test_translates_commute(R):
    assert check_translates_commute(BetaSpec(0.7, R)) <= 1e-12


def test_beta_examples():
    beta = beta_coefficients(BetaSpec(0.0))
    target = np.zeros((4, 4, 4, 4))
    for a in range(4):
        target[a, I, a, I] = 1
    assert np.allclose(beta, target, atol=1e-12)
    for g in (0.3, 1.0, 2.5):
        beta = beta_coefficients(BetaSpec(g))
        expect = np.zeros((4, 4, 4))
        expect[I, X, I] = 1
        assert np.allclose(beta[X], expect, atol=1e-12)


@pytest.mark.parametrize("R,g", [(1, 0.7), (1, 1.0), (2, 0.7)])
def test_beta_rows_have_unit_norm(R, g):
    beta = beta_coefficients(BetaSpec(g, R))
    norms = (np.abs(beta) ** 2).reshape(beta.shape[0], -1).sum(axis=1)
    assert np.allclose(norms, 1, atol=1e-12)


def test_group_word():
    assert group_word([X, Z, Y], 2) == [4 * X + Z, 4 * Y]
    assert group_word([X, Z, Y], 1) == [X, Z, Y]
    assert group_word([], 2) == []


def test_automaton_examples():
    aut = build_automaton(moments_from_bloch(ProductStateParams(0.5, 0, 0)), beta_coefficients(BetaSpec(0.0)))
    assert evaluate(aut, []) == pytest.approx(1)
    assert evaluate(aut, [I, I, I]) == pytest.approx(1)
    assert evaluate(aut, [X]) == pytest.approx(0)
    with pytest.raises(ValueError):
        build_automaton([1, 0, 0, 0], np.zeros((4, 4, 4)))


@given(states, words)
@settings(max_examples=30)
def test_identity_beta_gives_product_of_moments(s, word):
    m = moments_from_bloch(s)
    aut = build_automaton(m, beta_coefficients(BetaSpec(0.0)))
    assert evaluate(aut, word) == pytest.approx(np.prod([m[a] for a in word]), abs=1e-12)


@given(angles, words)
@settings(max_examples=20)
def test_maximally_mixed_kills_nontrivial_words(g, word):
    s = ProductStateParams(0.5, 10, 20)
    aut = build_automaton(moments_from_bloch(s), beta_coefficients(BetaSpec(g)))
    expect = 1.0 if all(a == I for a in word) else 0.0
    assert abs(evaluate(aut, word) - expect) < 1e-12


@given(states, angles, words)
@settings(max_examples=60)
def test_automaton_matches_dense_oracle(s, g, word):
    b = BetaSpec(g)
    aut = build_automaton(moments_from_bloch(s), beta_coefficients(b))
    assert abs(evaluate(aut, word) - dense_oracle(word, s, b)) < 1e-9


@given(states, angles, st.lists(st.integers(0, 3), min_size=1, max_size=5))
@settings(max_examples=10)
def test_supersite_automaton_matches_dense_oracle(s, g, word):
    b = BetaSpec(g, 2)
    aut = build_automaton(moments_from_bloch(s), beta_coefficients(b))
    assert abs(evaluate(aut, word) - dense_oracle(word, s, b)) < 1e-9


@given(states, angles, words)
@settings(max_examples=30)
def test_real_and_reflection_symmetric(s, g, word):
    aut = build_automaton(moments_from_bloch(s), beta_coefficients(BetaSpec(g)))
    v = evaluate(aut, word)
    assert abs(v.imag) < 1e-12
    assert abs(abs(v) - abs(evaluate(aut, word[::-1]))) < 1e-12


@given(states, angles, words)
@settings(max_examples=30)
def test_translation_invariance(s, g, word):
    aut = build_automaton(moments_from_bloch(s), beta_coefficients(BetaSpec(g)))
    # a leading identity shifts the word one site to the right
    assert abs(evaluate(aut, word) - evaluate(aut, [I] + word + [I])) < 1e-12


def test_dense_oracle_examples():
    s = ProductStateParams(0.2, 40, 10)
    m = moments_from_bloch(s)
    assert dense_oracle([I, I], s, BetaSpec(1.0)) == pytest.approx(1)
    assert dense_oracle([X, Z, Y], s, BetaSpec(0.0)) == pytest.approx(m[X] * m[Z] * m[Y])
    with pytest.raises(ValueError):
        dense_oracle([X] * 13, s, BetaSpec(1.0))


def test_expect_evolved_examples():
    assert expect_evolved(FRACTAL_L, Z0, 0, ProductStateParams(0, 0, 0), BetaSpec(0.0)) == pytest.approx(1)
    for n in range(4):
        assert expect_evolved(FRACTAL_L, X0, n, ProductStateParams(0.5, 0, 0), BetaSpec(1.0)) < 1e-12
    with pytest.raises(ValueError):
        expect_evolved(FRACTAL_L, ModuleVector(["0", "0"]), 2, FIG4, BetaSpec(1.0))
    with pytest.raises(ValueError):
        expect_evolved(PolyMatrix.identity(4), ModuleVector(["1", "0", "0", "0"]), 1, FIG4, BetaSpec(1.0))


@pytest.mark.parametrize("q0", [X0, Y0, Z0], ids=["X0", "Y0", "Z0"])
def test_fractal_series_matches_oracle_and_decays(q0):
    b = BetaSpec(1.0)
    series = expect_series(FRACTAL_L, q0, 10, FIG4, b)
    for (n, start, val), (_, q) in zip(series[:5], orbit(FRACTAL_L, q0, 4)):
        _, word = letter_word(q)
        assert start == letter_word(q)[0]
        assert abs(val - abs(dense_oracle(word, FIG4, b))) < 1e-9
    assert series[-1][2] < 0.05


@given(st.sampled_from([X0, Y0, Z0]), st.integers(0, 12), states)
@settings(max_examples=30)
def test_lambda_decay_bound_identity_beta(q0, n, s):
    lam = lambda_of_state(moments_from_bloch(s))
    q = q0
    for _ in range(n):
        q = FRACTAL_L @ q
    from qca_lab.dynamics import support_size
    val = expect_evolved(FRACTAL_L, q0, n, s, BetaSpec(0.0))
    assert val <= lam ** support_size(q) + 1e-12
