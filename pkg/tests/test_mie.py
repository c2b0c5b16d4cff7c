import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compact_rcs.errors import DomainError
from compact_rcs.mie import (GUARD_TERMS, ScatteringRegion, SphereSpec, classify_region,
                             riccati_hankel2_sequence, series_terms, sphere_rcs, sphere_rcs_exact,
                             sphere_rcs_optical, sphere_rcs_rayleigh, wiscombe_terms)
from compact_rcs.units import SPEED_OF_LIGHT, to_dbsm, wavenumber

TWELVE_INCH = SphereSpec(0.1524)

# Frozen oracle values; tests/data/make_mie_reference.py regenerates them with mpmath.
# Riccati-Hankel values from half-integer Bessel functions at 40 digits
H_AT_79_8 = {
    1: 0.29371038176637443339 - 0.95597659272187952415j,
    5: 0.12242132075849614531 - 0.99366811629423473852j,
    20: 0.70422876475018401463 + 0.73399978284245800656j,
    50: -0.95770426301078333569 + 0.61155982593937874646j,
    80: 0.98990810033023477319 + 2.316048148782299794j,
    98: 0.00012621947810272389881 + 5480.0123303228313437j,
}
# exact RCS (m^2) from a 40-digit mpmath series with 30 guard terms
SIGMA_12IN = {24.5e9: 0.072833085545833073422, 25e9: 0.073089566702766712506,
              25.13e9: 0.072977709766705062679, 25.5e9: 0.073002531082697283368}
# (ka, radius at 1 GHz, exact sigma) in Rayleigh and resonance regions
SMALL_SPHERES = [
    (0.02, 0.0009542690318473884517777797, 4.1192851600212034151e-12),
    (0.05, 0.002385672579618471129444449, 1.0052939929919519663e-9),
    (0.1, 0.004771345159236942258888898, 6.4249630519160561456e-8),
    (0.5, 0.02385672579618471129444449, 0.00094689118604901575001),
    (3.0, 0.143140354777108267766667, 0.033520940612288346813),
    (12.0, 0.5725614191084330710666678, 1.1478013170911873897),
]


def test_sphere_spec_rejects_bad_radius():
    for r in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(DomainError):
            SphereSpec(r)


class TestRiccatiHankel:
    def test_order_one_closed_form_at_one(self):
        h, _ = riccati_hankel2_sequence(1.0, 1)
        j1 = math.sin(1) - math.cos(1)
        y1 = -math.cos(1) - math.sin(1)
        assert h[0] == pytest.approx(complex(j1, -y1), rel=1e-14)
        assert j1 == pytest.approx(0.30117, abs=1e-5)
        assert y1 == pytest.approx(-1.38177, abs=1e-5)

    def test_derivative_consistent_with_three_term_recurrence(self):
        x, n_max = 10.0, 20
        h, dh = riccati_hankel2_sequence(x, n_max + 1)
        # independent form: H'_n = -H_{n+1} + (n+1)/x H_n
        for n in range(1, n_max + 1):
            alt = -h[n] + (n + 1) / x * h[n - 1]
            assert abs(dh[n - 1] - alt) <= 1e-10 * abs(alt)

    def test_wronskian_of_riccati_bessel_pair(self):
        # H = psi - i chi for real x, with psi chi' - psi' chi = 1
        h, dh = riccati_hankel2_sequence(10.0, 20)
        psi, chi = h.real, -h.imag
        dpsi, dchi = dh.real, -dh.imag
        w = psi * dchi - dpsi * chi
        np.testing.assert_allclose(w, 1.0, rtol=1e-10)

    def test_against_mpmath_reference(self):
        assert math.ceil(79.8) + 18 == 98
        h, dh = riccati_hankel2_sequence(79.8, 98)
        assert np.all(np.isfinite(h)) and np.all(np.isfinite(dh))
        for n, ref in H_AT_79_8.items():
            assert abs(h[n - 1] - ref) <= 1e-9 * abs(ref)

    def test_against_scipy_spherical_bessel(self):
        special = pytest.importorskip("scipy.special")
        x = 7.3
        n = np.arange(1, 26)
        ref = x * (special.spherical_jn(n, x) - 1j * special.spherical_yn(n, x))
        h, _ = riccati_hankel2_sequence(x, 25)
        np.testing.assert_allclose(h, ref, rtol=1e-10)

    @pytest.mark.parametrize("x,n", [(0.0, 3), (-1.0, 3), (1.0, 0), (1.0, 2.5)])
    def test_domain_errors(self, x, n):
        with pytest.raises(DomainError):
            riccati_hankel2_sequence(x, n)


class TestExact:
    def test_twelve_inch_anchor_25ghz(self):
        sigma = sphere_rcs_exact(TWELVE_INCH, 25e9)
        assert abs(to_dbsm(sigma) - (-11.37)) <= 0.5
        assert abs(to_dbsm(sigma) - to_dbsm(math.pi * 0.1524**2)) <= 1.0

    @pytest.mark.parametrize("freq,ref", sorted(SIGMA_12IN.items()))
    def test_matches_high_precision_series(self, freq, ref):
        assert sphere_rcs_exact(TWELVE_INCH, freq) == pytest.approx(ref, rel=1e-9)

    @pytest.mark.parametrize("ka,radius,ref", SMALL_SPHERES)
    def test_small_and_resonant_spheres(self, ka, radius, ref):
        assert sphere_rcs_exact(SphereSpec(radius), 1e9) == pytest.approx(ref, rel=1e-9)

    def test_vectorized_matches_scalar(self):
        f = np.linspace(24e9, 26e9, 7)
        vec = sphere_rcs_exact(TWELVE_INCH, f)
        assert vec.shape == f.shape
        np.testing.assert_allclose(vec, [sphere_rcs_exact(TWELVE_INCH, v) for v in f], rtol=1e-15)

    @pytest.mark.parametrize("ka", [0.3, 2.0, 26.1, 47.4, 79.85, 88.2, 150.0])
    def test_converged_beyond_cutoff(self, ka):
        f = 10e9
        sphere = SphereSpec(ka / float(wavenumber(f)))
        n0 = int(series_terms(ka))
        base = sphere_rcs_exact(sphere, f)
        assert abs(sphere_rcs_exact(sphere, f, n_terms=n0 + 10) / base - 1) <= 1e-9
        nw = int(wiscombe_terms(ka))
        assert n0 == nw + GUARD_TERMS
        wide = sphere_rcs_exact(sphere, f, n_terms=nw + 20)
        assert abs(sphere_rcs_exact(sphere, f, n_terms=nw + 10) / wide - 1) <= 1e-9

    def test_wiscombe_cutoff_at_25ghz(self):
        ka = float(wavenumber(25e9)) * 0.1524
        assert ka == pytest.approx(79.85, abs=0.01)
        assert int(wiscombe_terms(ka)) == math.ceil(ka + 4 * ka ** (1 / 3) + 2)

    def test_rejects_nonpositive_frequency(self):
        for f in (0.0, -1e9):
            with pytest.raises(DomainError):
                sphere_rcs_exact(TWELVE_INCH, f)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(1e-3, 0.5), st.floats(1e8, 4e10))
    def test_positive_and_finite(self, radius, freq):
        s = sphere_rcs_exact(SphereSpec(radius), freq)
        assert s > 0 and math.isfinite(s)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.05, 0.4), st.floats(5e9, 40e9))
    def test_optical_envelope(self, radius, freq):
        sphere = SphereSpec(radius)
        if classify_region(sphere, freq) is not ScatteringRegion.OPTICAL:
            return
        assert abs(to_dbsm(sphere_rcs_exact(sphere, freq)) - to_dbsm(sphere_rcs_optical(sphere))) <= 1.5

    @settings(max_examples=40, deadline=None)
    @given(st.floats(1e-3, 0.1))
    def test_rayleigh_limit(self, ka):
        f = 3e9
        sphere = SphereSpec(ka / float(wavenumber(f)))
        exact = sphere_rcs_exact(sphere, f)
        assert abs(exact / sphere_rcs_rayleigh(sphere, f) - 1) <= 0.05


class TestApproximations:
    def test_optical_twelve_inch(self):
        s = sphere_rcs_optical(TWELVE_INCH)
        assert s == pytest.approx(0.072966, abs=1e-6)
        assert to_dbsm(s) == pytest.approx(-11.368, abs=1e-3)

    def test_optical_unit_area_and_scaling(self):
        assert sphere_rcs_optical(SphereSpec(1 / math.sqrt(math.pi))) == pytest.approx(1.0, rel=1e-15)
        assert to_dbsm(sphere_rcs_optical(SphereSpec(1 / math.sqrt(math.pi)))) == pytest.approx(0.0, abs=1e-12)
        assert sphere_rcs_optical(SphereSpec(0.3048)) == pytest.approx(4 * sphere_rcs_optical(TWELVE_INCH))

    def test_rayleigh_identity(self):
        f = 1e9
        k = float(wavenumber(f))
        a = 0.1 / k
        assert sphere_rcs_rayleigh(SphereSpec(a), f) == pytest.approx(9 * math.pi * a**2 * 0.1**4, rel=1e-12)

    def test_rayleigh_monotone_to_zero(self):
        f = 1e9
        k = float(wavenumber(f))
        vals = [sphere_rcs_rayleigh(SphereSpec(ka / k), f) for ka in (0.1, 0.05, 0.01, 0.001)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-18

    def test_rayleigh_rejects_bad_freq(self):
        with pytest.raises(DomainError):
            sphere_rcs_rayleigh(TWELVE_INCH, 0.0)

    def test_dispatch(self):
        assert sphere_rcs(TWELVE_INCH, 25e9, "optical") == sphere_rcs_optical(TWELVE_INCH)
        assert sphere_rcs(TWELVE_INCH, np.array([1e9, 2e9]), "optical").shape == (2,)
        with pytest.raises(DomainError):
            sphere_rcs(TWELVE_INCH, 1e9, "physical-optics")


class TestRegions:
    def test_examples(self):
        assert SPEED_OF_LIGHT / 25e9 == pytest.approx(0.011992, abs=1e-6)
        assert classify_region(TWELVE_INCH, 25e9) is ScatteringRegion.OPTICAL
        assert classify_region(SphereSpec(0.001), 1e9) is ScatteringRegion.RAYLEIGH
        assert classify_region(SphereSpec(0.02), 5e9) is ScatteringRegion.MIE

    def test_rayleigh_boundary_inclusive(self):
        f = 1e9
        a = 0.5 / float(wavenumber(f))
        assert classify_region(SphereSpec(a * (1 - 1e-12)), f) is ScatteringRegion.RAYLEIGH
        assert classify_region(SphereSpec(a * 1.01), f) is ScatteringRegion.MIE
