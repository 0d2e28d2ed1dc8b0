import numpy as np
import pytest

from edgeworth_rmt.edgeworth import (ExpansionResult, TunedConstants, convergence_report,
                                     edgeworth_cdf, inverse_transform, loglog_slope, transform)
from edgeworth_rmt.kernels import EnsembleSpec
from edgeworth_rmt.painleve import e_function, tw2_cdf


def test_transform_examples():
    assert transform(EnsembleSpec("GUE", 50), 0.0) == pytest.approx(10.0, abs=1e-14)
    assert transform(EnsembleSpec("LUE", 2, 0.0, 0.0), 0.0) == pytest.approx(8.0, abs=1e-14)


@pytest.mark.parametrize("spec", [EnsembleSpec("GUE", 17, c=0.4), EnsembleSpec("LUE", 33, 1.5, -0.7)])
def test_transform_roundtrip(spec):
    s = np.linspace(-8, 6, 29)
    t = transform(spec, s)
    assert np.all(np.diff(t) > 0)
    assert np.max(np.abs(inverse_transform(spec, t) - s)) < 1e-14


def test_constants():
    assert TunedConstants(0.0, 0.0).a_g == 0.0
    assert TunedConstants(0.0, 0.0).a_l == 0.0
    k = TunedConstants(0.3, 0.4)
    assert k.a_g == 0.3
    assert k.a_l == pytest.approx(2 ** (2 / 3) * 0.4, rel=1e-15)
    assert k.b_g == -1 / 20
    assert k.b_l == 2 ** (1 / 3) / 10
    assert k.on_circle()
    assert TunedConstants.universal(0.1).on_circle()
    assert not TunedConstants(0.1, 0.1).on_circle()


def test_total_is_sum(table):
    res = edgeworth_cdf(EnsembleSpec("GUE", 20, c=0.3), np.linspace(-5, 3, 17), table)
    np.testing.assert_array_equal(res.total, res.leading + res.corr1 + res.corr2)
    np.testing.assert_array_equal(res.leading, tw2_cdf(table, np.linspace(-5, 3, 17)))


def test_scalar_input(table):
    res = edgeworth_cdf(EnsembleSpec("LUE", 20, 0.5, 0.2), -1.0, table)
    assert isinstance(res, ExpansionResult)
    assert isinstance(res.total, float)


def test_vanishing_at_right_end(table):
    for spec in (EnsembleSpec("GUE", 10, c=0.4), EnsembleSpec("LUE", 10, 0.5, -0.3)):
        assert abs(edgeworth_cdf(spec, table.s_max, table).total - 1.0) < 1e-9


def test_first_correction_vanishes_at_zero_c(table):
    s = np.linspace(-6, 4, 21)
    for spec in (EnsembleSpec("GUE", 30), EnsembleSpec("LUE", 30, 0.5)):
        assert np.all(edgeworth_cdf(spec, s, table).corr1 == 0.0)


def test_second_correction_formula(table):
    s = np.array([-2.0, 0.5])
    spec = EnsembleSpec("LUE", 27, 0.5, 0.2)
    res = edgeworth_cdf(spec, s, table)
    expected = 2 ** (1 / 3) / 10 * e_function(table, s, "L", 0.2) * tw2_cdf(table, s) / 9.0
    np.testing.assert_allclose(res.corr2, expected, rtol=1e-13)
    expected1 = 2 ** (2 / 3) * 0.2 * table.interp("u0", s) * tw2_cdf(table, s) / 3.0
    np.testing.assert_allclose(res.corr1, expected1, rtol=1e-13)


def test_orders(table):
    s = np.linspace(-4, 2, 7)
    spec = EnsembleSpec("GUE", 20, c=0.3)
    r0 = edgeworth_cdf(spec, s, table, order=0)
    r1 = edgeworth_cdf(spec, s, table, order=1)
    np.testing.assert_array_equal(r0.total, r0.leading)
    assert np.all(r1.corr2 == 0)
    with pytest.raises(ValueError):
        edgeworth_cdf(spec, s, table, order=3)


@pytest.mark.parametrize("c_g", [0.0, 0.3, -0.45])
def test_universal_mode_shared_e(table, c_g):
    s = np.array([-3.0, -1.0, 0.0, 2.0])
    c_l = TunedConstants.universal(c_g).c_l
    g = edgeworth_cdf(EnsembleSpec("GUE", 40, c=c_g), s, table, mode="universal")
    l = edgeworth_cdf(EnsembleSpec("LUE", 40, 0.5, c_l), s, table, mode="universal")
    eg = g.corr2 / (-1 / 20 * g.leading * 40 ** (-2 / 3))
    el = l.corr2 / (2 ** (1 / 3) / 10 * l.leading * 40 ** (-2 / 3))
    assert np.max(np.abs(eg - el)) < 1e-12


def test_universal_mode_range(table):
    with pytest.raises(ValueError):
        edgeworth_cdf(EnsembleSpec("GUE", 40, c=0.7), 0.0, table, mode="universal")
    with pytest.raises(ValueError):
        edgeworth_cdf(EnsembleSpec("GUE", 40), 0.0, table, mode="other")


def test_out_of_range(table):
    with pytest.raises(ValueError):
        edgeworth_cdf(EnsembleSpec("GUE", 40), 9.0, table)


def test_overshoot_flag():
    assert ExpansionResult(0.0, 1.0, 0.0, 0.01, 1.01).overshoot
    assert not ExpansionResult(0.0, 0.5, 0.0, 0.01, 0.51).overshoot


def test_total_bounded_on_standard_range(table):
    s = np.linspace(-8, 6, 57)
    for spec in (EnsembleSpec("GUE", 10, c=0.5), EnsembleSpec("LUE", 10, 0.5, 0.5)):
        tot = edgeworth_cdf(spec, s, table).total
        assert np.all((tot > -0.1) & (tot < 1.1))


def test_corrections_shrink_with_n(table):
    # at c = 0 only the n^{-2/3} term is present and |total - F2| decreases strictly
    ns = (10, 20, 40, 80, 160, 320)
    for spec in (EnsembleSpec("GUE", 10), EnsembleSpec("LUE", 10, 0.5)):
        for s in (-3.0, -1.0, 1.0):
            diffs = [abs(edgeworth_cdf(spec.with_n(n), s, table).total - tw2_cdf(table, s)) for n in ns]
            assert all(b < a + 1e-8 for a, b in zip(diffs, diffs[1:]))


def test_corrections_shrink_eventually(table):
    # for c != 0 the two corrections can cancel at moderate n; the scaled
    # difference still tends to the first-order coefficient a u0 F2
    spec = EnsembleSpec("LUE", 10, 0.5, 0.2)
    s = -3.0
    lead = 2 ** (2 / 3) * 0.2 * table.interp("u0", s) * tw2_cdf(table, s)
    gaps = [abs((edgeworth_cdf(spec.with_n(n), s, table).total - tw2_cdf(table, s)) * n ** (1 / 3) - lead)
            for n in (10 ** 3, 10 ** 5, 10 ** 7)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_direct_moments_option(table):
    spec = EnsembleSpec("GUE", 20, c=0.3)
    a = edgeworth_cdf(spec, -1.0, table)
    b = edgeworth_cdf(spec, -1.0, table, moments="direct")
    assert a.leading == b.leading
    assert a.total != b.total


def test_loglog_slope():
    ns = [10, 20, 40, 80]
    assert loglog_slope(ns, [n ** -1.0 * 3 for n in ns]) == pytest.approx(-1.0)
    assert np.isnan(loglog_slope(ns, [1, 0, 1, 1]))


def test_report_needs_three_sizes(table):
    with pytest.raises(ValueError):
        convergence_report(EnsembleSpec("GUE", 10), [10, 20], [0.0], table)


def test_order_one_rate(table):
    rep = convergence_report(EnsembleSpec("GUE", 10, c=0.3), [10, 20, 40, 80],
                             np.linspace(-5, 2, 25), table, order=1)
    assert len(rep.sup_errors) == 4
    assert abs(rep.slope + 2 / 3) < 0.2
