import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oilleak.estimators import (CONTINUOUS_CONSTANT, INSTANTANEOUS,
                                EstimatorError, FilmObservation, SourceTerm,
                                film_volume, inventory_balance, optical_flux,
                                read_film_observations,
                                reduce_to_source_term,
                                thickness_from_appearance)
from oilleak.series import LeakTimeSeries, from_rate_samples


class TestInventoryBalance:
    def test_direct_evaluation(self):
        assert inventory_balance(1000.0, 100.0, 300.0) == 600.0

    def test_exact_cancellation(self):
        for z in (0.0, 1.0, 123.456, 9e5):
            assert inventory_balance(z, z, 0.0) == 0.0

    def test_negative_result_is_error(self):
        with pytest.raises(EstimatorError, match="inconsistent inventory"):
            inventory_balance(100.0, 80.0, 40.0)

    def test_negative_inputs_rejected(self):
        with pytest.raises(EstimatorError):
            inventory_balance(-1.0, 0.0, 0.0)

    @given(st.integers(0, 10 ** 9), st.integers(0, 10 ** 9),
           st.integers(0, 10 ** 9))
    @settings(max_examples=200, deadline=None)
    def test_algebraic_identity(self, zi, ci, ri):
        # discrete records (whole tonnes) keep the chain float-exact;
        # spilled + consumed + remaining returns the stock, exactly
        z, c, r = float(zi), float(ci), float(ri)
        if z < c + r:
            return
        spilled = inventory_balance(z, c, r)
        assert spilled + c + r == z


class TestFilmVolume:
    def test_two_region_sum(self):
        obs = [FilmObservation(50000.0, 1e-7), FilmObservation(2000.0, 1e-6)]
        # 50000*1e-7 + 2000*1e-6 = 7e-3 m^3 -> x 900 kg/m^3
        assert film_volume(obs, 900.0) == pytest.approx(6.3, rel=1e-12)

    def test_zero_thickness(self):
        assert film_volume([FilmObservation(12345.0, 0.0)], 900.0) == 0.0

    def test_single_region(self):
        assert film_volume([FilmObservation(10000.0, 1e-6)], 900.0) \
            == pytest.approx(9.0, rel=1e-12)

    def test_empty_list_rejected(self):
        with pytest.raises(EstimatorError):
            film_volume([], 900.0)

    @given(st.floats(1, 1e6), st.floats(1e-8, 1e-4),
           st.floats(0.01, 0.99), st.floats(500, 1000))
    @settings(max_examples=200, deadline=None)
    def test_additive_under_region_split(self, area, thick, frac, rho):
        whole = film_volume([FilmObservation(area, thick)], rho)
        split = film_volume([FilmObservation(area * frac, thick),
                             FilmObservation(area * (1 - frac), thick)], rho)
        assert split == pytest.approx(whole, rel=1e-12)


class TestAppearanceTable:
    def test_default_sheen(self):
        # shipped default for the silvery sheen class
        assert thickness_from_appearance("sheen/silver") == 1e-7
        assert thickness_from_appearance("sheen") == 1e-7

    def test_override_passthrough(self):
        assert thickness_from_appearance("rainbow", {"rainbow": 1e-6}) \
            == 1e-6

    def test_unknown_code(self):
        with pytest.raises(EstimatorError, match="purple"):
            thickness_from_appearance("purple")

    def test_unknown_code_in_override(self):
        with pytest.raises(EstimatorError):
            thickness_from_appearance("sheen", {"rainbow": 1e-6})

    def test_codes_resolve_in_film_volume(self):
        got = film_volume([FilmObservation(1000.0, "rainbow")], 900.0)
        assert got == pytest.approx(1000.0 * 1e-6 * 900.0)


class TestOpticalFlux:
    def test_direct_evaluation(self):
        assert optical_flux(0.01, 2.0, 900.0, 3600.0) == 64800.0

    def test_zero_duration(self):
        assert optical_flux(0.01, 2.0, 900.0, 0.0) == 0.0

    def test_zero_velocity(self):
        assert optical_flux(0.01, 0.0, 900.0, 3600.0) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(EstimatorError):
            optical_flux(-0.01, 2.0, 900.0, 1.0)


def _ramp_series(rho=900.0):
    # constant 0.1 m^3/s for 1000 s -> 100 m^3 total
    t = np.linspace(0.0, 1000.0, 101)
    q = np.full_like(t, 0.1)
    return from_rate_samples(t, q / 0.01, q, rho, ["drain"] * len(t))


class TestReduceToSourceTerm:
    def test_continuous_rate(self):
        series = _ramp_series()
        term = reduce_to_source_term(series, CONTINUOUS_CONSTANT)
        assert term.duration == pytest.approx(1000.0)
        assert term.rate == pytest.approx(90.0, rel=1e-12)
        assert term.total_mass == pytest.approx(90000.0, rel=1e-12)

    def test_instantaneous(self):
        series = _ramp_series()
        term = reduce_to_source_term(series, INSTANTANEOUS)
        assert term.mode == INSTANTANEOUS
        assert term.total_mass == series.total_mass
        assert term.start_time == 0.0
        assert term.rate is None and term.duration is None

    def test_empty_flow_series_errors_in_continuous_mode(self):
        t = np.linspace(0, 10, 5)
        z = np.zeros_like(t)
        series = LeakTimeSeries(t, z, z, z, z, ("drain",) * 5)
        with pytest.raises(EstimatorError, match="no nonzero flow"):
            reduce_to_source_term(series, CONTINUOUS_CONSTANT)

    def test_mass_conservation_exact(self):
        series = _ramp_series()
        for mode in (INSTANTANEOUS, CONTINUOUS_CONSTANT):
            term = reduce_to_source_term(series, mode)
            assert term.total_mass == series.cumulative_mass[-1]

    def test_source_term_invariant_enforced(self):
        with pytest.raises(ValueError):
            SourceTerm(mode=CONTINUOUS_CONSTANT, total_mass=100.0,
                       start_time=0.0, rate=1.0, duration=50.0)
        with pytest.raises(ValueError):
            SourceTerm(mode=INSTANTANEOUS, total_mass=100.0,
                       start_time=0.0, rate=1.0)


def test_film_csv_ingestion(tmp_path):
    path = tmp_path / "films.csv"
    path.write_text("area_m2,appearance_or_thickness_m\n"
                    "50000,1e-7\n"
                    "2000,rainbow\n")
    obs = read_film_observations(path)
    assert obs[0].appearance == 1e-7
    assert obs[1].appearance == "rainbow"
    assert film_volume(obs, 900.0) == pytest.approx(
        (50000 * 1e-7 + 2000 * 1e-6) * 900.0)


def test_film_csv_bad_header(tmp_path):
    path = tmp_path / "films.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(EstimatorError, match="header"):
        read_film_observations(path)
