import itertools
import json
import math

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from qca_lab.dynamics import (
    FRACTAL,
    GLIDER,
    PERIODIC,
    ClassifierReport,
    SolitonWitness,
    b_sequence,
    brute_force_soliton_oracle,
    classify,
    classify_palindromic,
    cone_offsets,
    mixing_test,
    orbit,
    soliton_search,
    support_size,
    weight_trajectory,
    witness_extract,
)
from qca_lab.fpoly import LaurentPoly, parse_poly
from qca_lab.symplectic import ModuleVector, PolyMatrix, determinant, double, mat_pow

from conftest import palindromic_polys


def P(s):
    return parse_poly(s)


def fam(t):
    return PolyMatrix.palindromic(P(t))


GLIDER_L = fam("u + u^-1")
FRACTAL_L = fam("u + 1 + u^-1")
SHIFT_L = PolyMatrix.scalar(P("u"), 2)
X0 = ModuleVector(["1", "0"])
Z0 = ModuleVector(["0", "1"])
Y0 = ModuleVector(["1", "1"])


def test_trajectory_examples():
    tx = weight_trajectory(FRACTAL_L, X0, 1)
    assert tx.samples[1] == (1, 1, 1)
    tz = weight_trajectory(FRACTAL_L, Z0, 1)
    assert tz.samples[1] == (1, 4, 3)
    t0 = weight_trajectory(GLIDER_L, Y0, 0)
    assert t0.samples == [(0, 2, 1)]
    with pytest.raises(ValueError):
        weight_trajectory(FRACTAL_L, ModuleVector(["0", "0"]), 3)


def test_trajectory_csv():
    csv = weight_trajectory(FRACTAL_L, Z0, 2).to_csv()
    assert csv == "n,hamming,support\n0,1,1\n1,4,3\n2,5,5\n"


def test_support_size_examples():
    assert support_size(ModuleVector(["1", "u + 1 + u^-1"])) == 3
    assert support_size(ModuleVector(["0", "0"])) == 0
    assert support_size(ModuleVector(["u^5", "u^5"])) == 1


def test_mixing_examples():
    assert mixing_test(fam("1"), 10).period == 3
    assert mixing_test(GLIDER_L, 20).is_mixing
    assert mixing_test(PolyMatrix.identity(2), 5).period == 1


def test_soliton_examples():
    w = soliton_search(GLIDER_L, 4)
    assert (w.n, w.k, w.q) == (1, (1,), ModuleVector(["1", "u"]))
    assert soliton_search(FRACTAL_L, 16) is None
    w = soliton_search(fam("u^2 + u^-2"), 4)
    assert (w.n, w.k, w.q) == (1, (2,), ModuleVector(["1", "u^2"]))
    w = soliton_search(SHIFT_L, 2)
    assert (w.n, w.k, w.q) == (1, (1,), X0)


def test_soliton_search_threads_are_deterministic():
    for L in (GLIDER_L, SHIFT_L, fam("u^3 + u^-3")):
        assert soliton_search(L, 4, workers=4) == soliton_search(L, 4)


def test_witness_extract():
    assert witness_extract(GLIDER_L, 1, (1,), 4) == ModuleVector(["1", "u"])
    # det(L - u^0) = t != 0 for the glider: no kernel
    assert witness_extract(GLIDER_L, 1, (0,), 4) is None
    q = witness_extract(fam("1"), 3, (0,), 2)
    assert mat_pow(fam("1"), 3) @ q == q


def test_witness_is_verified_on_construction():
    with pytest.raises(ValueError):
        SolitonWitness(1, (0,), X0, GLIDER_L)
    with pytest.raises(ValueError):
        SolitonWitness(1, (1,), ModuleVector(["0", "0"]), GLIDER_L)


def test_cone_order():
    assert cone_offsets(GLIDER_L, 1) == [(0,), (1,), (-1,)]
    assert cone_offsets(fam("1"), 3) == [(0,)]


def test_classify_examples():
    r = classify(fam("1"), 8)
    assert r.verdict == PERIODIC and r.certificate == 3 and not r.exact
    r = classify(GLIDER_L, 8)
    assert r.verdict == GLIDER and r.witness.q == ModuleVector(["1", "u"])
    r = classify(FRACTAL_L, 16)
    assert r.verdict == FRACTAL and r.horizon == 16 and not r.exact


def test_classify_palindromic_examples():
    r = classify_palindromic(P("u + 1 + u^-1"))
    assert (r.verdict, r.exact, r.horizon) == (FRACTAL, True, None)
    r = classify_palindromic(P("u^3 + u^-3"))
    assert r.verdict == GLIDER and r.witness.k == (3,) and r.witness.q == ModuleVector(["1", "u^3"])
    r = classify_palindromic(P("1"))
    assert r.verdict == PERIODIC and r.certificate == 3
    assert classify_palindromic(P("0")).certificate == 1
    with pytest.raises(ValueError):
        classify_palindromic(P("u + 1"))


def test_report_invariants_and_json():
    with pytest.raises(ValueError):
        ClassifierReport(PERIODIC, 4, False)
    with pytest.raises(ValueError):
        ClassifierReport(GLIDER, 4, False)
    js = classify(GLIDER_L, 2).to_json()
    assert json.loads(json.dumps(js)) == {
        "verdict": "glider", "horizon": 2, "exact": False,
        "witness": {"n": 1, "k": 1, "q": ["1", "u"]}, "certificate": None,
    }


@given(palindromic_polys(max_deg=3).filter(lambda t: not t.is_constant()))
@settings(max_examples=25)
def test_exact_classifier_agrees_with_search(t):
    exact = classify_palindromic(t)
    searched = classify(PolyMatrix.palindromic(t), 4)
    assert exact.verdict == searched.verdict
    if exact.verdict == GLIDER:
        assert exact.witness.k == searched.witness.k


def test_b_sequence_examples():
    assert b_sequence(P("u"), 3) == [P("0"), P("1"), P("u"), P("1 + u^2")]
    t = P("u^2 + 1 + u^-3")
    assert b_sequence(t, 2)[2] == t


@given(palindromic_polys(max_deg=4), st.integers(1, 30))
def test_cassini_and_det_shortcut(t, n):
    b = b_sequence(t, n + 1)
    one = LaurentPoly.one()
    assert b[n - 1] * b[n + 1] + b[n] * b[n] == one
    L = PolyMatrix.palindromic(t)
    Ln = mat_pow(L, n)
    assert Ln == PolyMatrix([[b[n - 1], b[n]], [b[n], b[n + 1]]])
    assert determinant(Ln - PolyMatrix.identity(2)) == b[n - 1] + b[n + 1]


@given(st.sampled_from([GLIDER_L, FRACTAL_L, SHIFT_L, fam("u^2 + 1 + u^-2")]),
       st.lists(st.integers(-3, 3), min_size=1, max_size=4), st.integers(0, 40))
def test_cone_bound(L, exps, steps):
    q = ModuleVector([LaurentPoly([(e,) for e in exps]), P("0")])
    if not q:
        return
    (D,) = L.max_abs_exponents()
    lo, hi = min(exps), max(exps)
    for n, v in orbit(L, q, steps):
        for e in v:
            if e:
                (a, b), = e.deg_extremes()
                assert lo - n * D <= a and b <= hi + n * D


def test_oracle_examples():
    w = brute_force_soliton_oracle(GLIDER_L, 2, 2)
    assert (w.n, w.k, w.q) == (1, (1,), ModuleVector(["1", "u"]))
    assert brute_force_soliton_oracle(FRACTAL_L, 6, 4) is None
    w = brute_force_soliton_oracle(SHIFT_L, 1, 1)
    assert (w.n, w.k, w.q) == (1, (1,), X0)
    with pytest.raises(ValueError):
        brute_force_soliton_oracle(FRACTAL_L, 2, 5000)


def small_family():
    """All [[0, 1], [1, t]] with palindromic t of degree <= 2."""
    basis = [P("1"), P("u + u^-1"), P("u^2 + u^-2")]
    for bits in itertools.product([0, 1], repeat=3):
        t = LaurentPoly.zero()
        for b, p in zip(bits, basis):
            if b:
                t = t + p
        yield t


@pytest.mark.parametrize("t", list(small_family()), ids=str)
def test_search_agrees_with_oracle(t):
    L = PolyMatrix.palindromic(t)
    fast = soliton_search(L, 6)
    slow = brute_force_soliton_oracle(L, 6, 4)
    assert (fast is None) == (slow is None)
    if fast is not None:
        assert (fast.n, fast.k) == (slow.n, slow.k)


def test_doubled_cas_are_soliton_free_up_to_horizon():
    F = PolyMatrix([["0", "1"], ["1", "u"]])
    G = PolyMatrix([["0", "1"], ["1", "1 + u"]])
    for a in (F, G):
        assert classify(double(a), 5).verdict == FRACTAL


def test_x_orbit_is_z_orbit_one_step_later():
    tx = weight_trajectory(FRACTAL_L, X0, 300)
    tz = weight_trajectory(FRACTAL_L, Z0, 300)
    assert tx.samples[1:] == [(n + 1, h, s) for n, h, s in tz.samples[:-1]]


def test_F_weight_bound_along_powers_of_two():
    F = PolyMatrix([["0", "1"], ["1", "u"]])
    for q in (X0, Z0, Y0, ModuleVector(["u + 1", "u^-2"])):
        v = q
        for n in range(1, 2 ** 6 + 1):
            v = F @ v
            r = math.log2(n)
            if r.is_integer() and r >= 1:
                assert v.total_weight() <= (2 * int(r) + 1) * q.total_weight()
