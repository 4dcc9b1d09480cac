import math

import numpy as np
import pytest

from fixtures import reference_p16
from stacksort.asymptotics import (
    NoRootFound,
    bound_constant,
    convergents,
    growth_per_element,
    min_positive_root,
    optimize_weights,
    rationalize_weights,
    root_bracket,
    weighted_growth,
)
from stacksort.gf import cluster_gf, letter_weights, series_coefficients
from stacksort.poly import MultiPoly, RationalGF

U_R = MultiPoly.univariate([1, -3, 1, 0, 2])
z = [MultiPoly.var(i, 3) for i in range(3)]
DEN_R = 1 - z[0] - z[1] - z[2] + z[0] * z[2] + 2 * z[0] * z[1] ** 2 * z[2]


def test_root_basic():
    assert min_positive_root(MultiPoly.univariate([1, -2])) == pytest.approx(0.5, abs=1e-12)
    assert min_positive_root([2, -3, 1]) == pytest.approx(1.0, abs=1e-12)  # (1-x)(2-x)
    with pytest.raises(NoRootFound):
        min_positive_root([1, 1])
    with pytest.raises(NoRootFound):
        min_positive_root([-1, 2])


def test_root_residual_and_bracket():
    for p in (U_R, MultiPoly.univariate([1, -3, 1, 0, 2, 0, 2]), MultiPoly.univariate([1, -2, 0, 0, 0, 0, 2])):
        lam = min_positive_root(p)
        assert abs(p(lam)) < 1e-10
        a, b = root_bracket(p)
        assert p(a) > 0 >= p(b) and a <= lam <= b
        # nothing smaller
        assert all(p(t) > 0 for t in np.linspace(0, lam * (1 - 1e-9), 2000))


def test_growth_matches_coefficient_ratio():
    gf = RationalGF(MultiPoly.univariate([1]), U_R)
    rep = growth_per_element(gf, 3)
    coeffs = series_coefficients(gf, degree_cap=200)
    ratio = coeffs[(200,)] / coeffs[(199,)]
    assert ratio == pytest.approx(rep.per_string_growth, rel=1e-6)
    assert rep.per_element_growth == pytest.approx(rep.lambda_min**-3)


def test_weighted_growth_and_bound():
    rep = weighted_growth(DEN_R, (1, 2, 1))
    assert rep.letters_per_element == 4
    assert rep.per_element_growth == pytest.approx(13.708, rel=1e-4)
    assert bound_constant(1, 4).constant == 0.5
    with pytest.raises(ValueError):
        bound_constant(2, 1.0)


def test_bound_constant_monotone_and_linear():
    bs = [2, 4, 8, 13.7, 14.9, 100]
    cs = [bound_constant(2, b).constant for b in bs]
    assert cs == sorted(cs, reverse=True)
    assert bound_constant(6, 14.0).constant == pytest.approx(3 * bound_constant(2, 14.0).constant)


def test_optimize_r_denominator():
    res = optimize_weights(DEN_R)
    assert res.point == pytest.approx((0.5, 1 - math.sqrt(2) / 2, 0.5), abs=1e-9)
    assert res.objective == pytest.approx(8 + 4 * math.sqrt(2), abs=1e-9)
    assert res.constraint_residual < 1e-10 and res.stationarity_residual < 1e-8
    same = optimize_weights(DEN_R, identify=[[0, 2], [1]])
    assert same.objective == pytest.approx(res.objective, abs=1e-9)
    assert same.expanded_point() == pytest.approx(res.point, abs=1e-9)


def test_optimize_trivial():
    x, y = MultiPoly.var(0, 2), MultiPoly.var(1, 2)
    res = optimize_weights(1 - x - y, identify=[[0, 1]])
    assert res.point == pytest.approx((0.5,)) and res.objective == pytest.approx(4)
    assert optimize_weights(1 - x - y).point == pytest.approx((0.5, 0.5))


def test_optimize_is_minimum_on_first_surface():
    # objective never exceeds 1 / prod(t(d) d) along sampled rays
    res = optimize_weights(DEN_R, identify=[[0, 2], [1]])
    q = DEN_R.identify([[0, 2], [1]])
    for s in np.linspace(-2, 2, 41):
        d = np.array([1.0, math.exp(s)])
        d /= d.max()
        t = min_positive_root(q.along_ray(d), upper=1 / d.max())
        y = t * d
        assert 1 / (y[0] ** 2 * y[1]) >= res.objective - 1e-9


def test_optimize_reference_p():
    res = optimize_weights(reference_p16(), multiplicities=(2, 1))
    assert res.point == pytest.approx((0.47565, 0.37405), abs=1e-5)
    assert res.objective == pytest.approx(11.817, abs=1e-2)


def test_optimize_deterministic():
    a = optimize_weights(reference_p16(), multiplicities=(2, 1))
    b = optimize_weights(reference_p16(), multiplicities=(2, 1))
    assert a.to_record() == b.to_record()


def test_integer_weights_never_beat_optimum():
    res = optimize_weights(DEN_R)
    for alpha in [(1, 1, 1), (1, 2, 1), (4, 7, 4), (2, 3, 2), (3, 5, 3), (5, 9, 5), (1, 3, 2)]:
        b = weighted_growth(DEN_R, alpha).per_element_growth
        assert b >= res.objective - 1e-6


def test_convergents():
    assert convergents(1.75)[-1] == 1.75
    assert [str(c) for c in convergents(math.pi, 4)] == ["3", "22/7", "333/106", "355/113"]


def test_rationalize():
    x1 = 0.5
    assert rationalize_weights((x1, x1**1.77155, x1), 8) == (4, 7, 4)
    assert rationalize_weights((0.3, 0.3, 0.3), 8) == (1, 1, 1)
    res = optimize_weights(DEN_R)
    assert rationalize_weights(res.point, 8) == (4, 7, 4)
    assert weighted_growth(DEN_R, (4, 7, 4)).per_element_growth == pytest.approx(13.657, rel=1e-4)
    with pytest.raises(ValueError):
        rationalize_weights((0.5, 1.5), 8)


def test_r6_true_gf_growth():
    # the overlap term shifts the root relative to the printed denominator
    gf = cluster_gf(["13", "1223", "1232", "112223", "122233"], letter_weights(3, [[0, 1, 2]]))
    assert growth_per_element(gf, 3).lambda_min == pytest.approx(0.411428, abs=1e-6)
