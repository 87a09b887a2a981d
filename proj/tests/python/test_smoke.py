import math

import pytest

import nlspec


def test_residue_matches_contour():
    p = nlspec.LameParameters(mu=1.0, lam=1.0)
    for q in (0.25, 1.0, 4.0):
        r = nlspec.residue_heat_symbol(2, p, q, 1.0)
        c = nlspec.contour_heat_symbol(2, p, q, 1.0)
        assert r == pytest.approx(c, rel=1e-10)


def test_disk_prediction():
    p = nlspec.LameParameters(1.0, 1.0)
    pred = nlspec.predict_coefficients(2, p, math.pi, 2 * math.pi)
    assert pred.a0 == pytest.approx(1.0 / 3.0, rel=1e-12)
    exact_a1 = 0.5 * math.pi * (1 / math.sqrt(4 * math.pi) + 1 / math.sqrt(12 * math.pi))
    assert pred.a1 == pytest.approx(exact_a1, rel=1e-12)


def test_invalid_parameters_raise():
    with pytest.raises(nlspec.Error) as info:
        nlspec.LameParameters(1.0, -2.0)
    assert info.value.kind == "InvalidArgument"


def test_interval_trace_and_fit():
    p = nlspec.LameParameters(1.0, 0.0)
    s = nlspec.interval_spectrum(math.pi, p, "dirichlet", 500)
    assert len(s) == 500
    assert s.eigenvalues[0] == pytest.approx(2.0)
    h = nlspec.heat_trace(s, 0.01)
    assert h.truncation_bound <= nlspec.TRUNCATION_TOLERANCE * h.value
    fit = nlspec.fit_spectrum(s)
    assert fit.sign == -1
    assert fit.a0_hat == pytest.approx(math.pi / math.sqrt(8 * math.pi), rel=1e-3)


def test_disk_spectrum_is_sorted():
    p = nlspec.LameParameters(1.0, 1.0)
    s = nlspec.disk_spectrum(1.0, p, 8, 20)
    ev = s.eigenvalues
    assert all(a < b for a, b in zip(ev, ev[1:]))
    assert s.method == "bessel"
