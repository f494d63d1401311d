"""Unit tests for photon counting, homodyne sampling, and the PSD."""

import numpy as np
import pytest
from scipy import signal

from sqzlab.detection import (
    DetectorParams,
    LightSource,
    MeasurementWindowing,
    TimeSeries,
    add_signal_modulation,
    bhd_series,
    fano_factor,
    mean_photons_per_window,
    photon_flux,
    power_for_mean_photons,
    sample_photon_record,
    single_pd_series,
    welch_psd,
)
from sqzlab.gaussian import SqueezeSetting, squeeze, vacuum

R_10DB = np.log(10.0) / 2.0
WAVELENGTH = 1.064e-6
# power putting 1000 photons into a 0.1 ms window at 1064 nm
POWER_1000 = 1.8669603920572637e-12


def _source(power=POWER_1000):
    return LightSource(wavelength=WAVELENGTH, power=power, coherence_time=1e-2)


def _windowing(n_windows=20000):
    return MeasurementWindowing(1e-4, "rectangular", n_windows)


def test_power_for_mean_photons_frozen():
    assert power_for_mean_photons(1000.0, WAVELENGTH, 1e-4) == pytest.approx(
        POWER_1000, rel=1e-12
    )


def test_flux_round_trip():
    source = _source()
    assert photon_flux(source) * 1e-4 == pytest.approx(1000.0, rel=1e-12)
    assert mean_photons_per_window(source, _windowing()) == pytest.approx(
        1000.0, rel=1e-12
    )


def test_zero_power_source_counts_nothing():
    record = sample_photon_record(vacuum(), _source(power=0.0), _windowing(100), 1)
    assert record.counts.sum() == 0


def test_coherent_counts_are_poisson():
    record = sample_photon_record(vacuum(), _source(), _windowing(), seed=101)
    assert record.mean == pytest.approx(1000.0, rel=0.01)
    assert fano_factor(record) == pytest.approx(1.0, abs=0.03)


def test_squeezed_counts_are_sub_poisson():
    state = squeeze(vacuum(), SqueezeSetting(R_10DB))
    record = sample_photon_record(state, _source(), _windowing(), seed=102)
    assert record.mean == pytest.approx(1000.0, rel=0.01)
    assert fano_factor(record) == pytest.approx(0.1, abs=0.01)


def test_antisqueezed_counts_are_super_poisson():
    state = squeeze(vacuum(), SqueezeSetting(R_10DB, np.pi / 2))
    record = sample_photon_record(state, _source(), _windowing(), seed=103)
    assert fano_factor(record) == pytest.approx(10.0, rel=0.05)


def test_photon_record_reproducible():
    first = sample_photon_record(vacuum(), _source(), _windowing(5000), seed=7)
    second = sample_photon_record(vacuum(), _source(), _windowing(5000), seed=7)
    assert np.array_equal(first.counts, second.counts)
    third = sample_photon_record(vacuum(), _source(), _windowing(5000), seed=8)
    assert not np.array_equal(first.counts, third.counts)


def test_window_must_beat_coherence_time():
    with pytest.raises(ValueError):
        sample_photon_record(
            vacuum(),
            LightSource(WAVELENGTH, POWER_1000, coherence_time=1e-4),
            _windowing(100),
            seed=1,
        )


def test_dim_beam_rejects_gaussian_branch():
    state = squeeze(vacuum(), SqueezeSetting(R_10DB))
    with pytest.raises(ValueError):
        sample_photon_record(state, _source(power=POWER_1000 / 100), _windowing(100), 1)


def test_fano_needs_two_windows():
    record = sample_photon_record(vacuum(), _source(), _windowing(1), seed=1)
    with pytest.raises(ValueError):
        fano_factor(record)


def test_windowing_validation():
    with pytest.raises(ValueError):
        MeasurementWindowing(1e-4, "triangular", 10)
    with pytest.raises(ValueError):
        MeasurementWindowing(0.0, "rectangular", 10)
    with pytest.raises(ValueError):
        MeasurementWindowing(1e-4, "rectangular", 0)


def test_single_pd_variance():
    detector = DetectorParams(quantum_efficiency=0.9, dark_noise_variance=0.05)
    state = squeeze(vacuum(), SqueezeSetting(R_10DB))
    series = single_pd_series(state, _source(), detector, 400_000, seed=21)
    # 0.9 * 0.1 + 0.1 vacuum + 0.05 dark
    assert series.samples.var() == pytest.approx(0.24, rel=0.02)
    assert series.samples.mean() == pytest.approx(0.0, abs=0.01)


def test_single_pd_needs_bright_carrier():
    weak = LightSource(WAVELENGTH, 1e-22, 1e-2)
    with pytest.raises(ValueError):
        single_pd_series(vacuum(), weak, DetectorParams(), 100, seed=1)


def test_bhd_variance_frozen():
    # QE 0.995 and visibility 0.99 on 10 dB squeezing
    detector = DetectorParams(quantum_efficiency=0.995, visibility=0.99)
    state = squeeze(vacuum(), SqueezeSetting(R_10DB))
    series = bhd_series(state, 0.0, 0.005, detector, 2**20, seed=31)
    assert series.samples.var() == pytest.approx(0.12232045000000001, rel=0.01)


def test_bhd_lo_phase_selects_quadrature():
    state = squeeze(vacuum(), SqueezeSetting(R_10DB))
    detector = DetectorParams()
    anti = bhd_series(state, np.pi / 2, 0.005, detector, 200_000, seed=32)
    assert anti.samples.var() == pytest.approx(10.0, rel=0.02)
    mid = bhd_series(state, np.pi / 4, 0.005, detector, 200_000, seed=33)
    assert mid.samples.var() == pytest.approx(5.05, rel=0.02)


def test_bhd_reproducible():
    detector = DetectorParams()
    first = bhd_series(vacuum(), 0.0, 0.005, detector, 1000, seed=5)
    second = bhd_series(vacuum(), 0.0, 0.005, detector, 1000, seed=5)
    assert np.array_equal(first.samples, second.samples)


def test_balanced_lo_noise_cancels():
    detector = DetectorParams(balance_asymmetry=0.0)
    quiet = bhd_series(vacuum(), 0.0, 0.005, detector, 100_000, seed=41)
    noisy = bhd_series(
        vacuum(), 0.0, 0.005, detector, 100_000, seed=41, lo_noise_variance=100.0
    )
    assert np.array_equal(quiet.samples, noisy.samples)


def test_unbalanced_lo_noise_leaks():
    detector = DetectorParams(balance_asymmetry=0.25)
    noisy = bhd_series(
        vacuum(), 0.0, 0.005, detector, 400_000, seed=42, lo_noise_variance=4.0
    )
    # leak amplitude 2 * 0.25 * 2 = 1 adds unit variance on top of shot noise
    assert noisy.samples.var() == pytest.approx(2.0, rel=0.02)


def test_bhd_rejects_bright_signal():
    with pytest.raises(ValueError):
        bhd_series(vacuum(), 0.0, 0.02, DetectorParams(), 100, seed=1)


def test_detector_params_validation():
    with pytest.raises(ValueError):
        DetectorParams(quantum_efficiency=0.0)
    with pytest.raises(ValueError):
        DetectorParams(visibility=0.0)
    with pytest.raises(ValueError):
        DetectorParams(balance_asymmetry=0.6)
    with pytest.raises(ValueError):
        DetectorParams(dark_noise_variance=-0.1)


def test_modulation_adds_on_bin_peak():
    # noiseless carrier: the peak must be exactly depth^2 * nperseg / 4
    fs, n, depth = 1024.0, 8192, 0.3
    series = TimeSeries(fs, np.zeros(n))
    series = add_signal_modulation(series, 128.0, depth)
    spectrum = welch_psd(series, 8.0)
    nperseg = 128
    peak_bin = int(np.argmin(np.abs(spectrum.frequencies - 128.0)))
    assert spectrum.psd[peak_bin] == pytest.approx(
        depth**2 * nperseg / 4, rel=1e-9
    )
    off = np.delete(spectrum.psd, peak_bin)
    assert np.all(off < 1e-18)


def test_modulation_validation():
    series = TimeSeries(100.0, np.zeros(64))
    with pytest.raises(ValueError):
        add_signal_modulation(series, 50.0, 0.1)
    with pytest.raises(ValueError):
        add_signal_modulation(series, 0.0, 0.1)


def test_white_noise_psd_is_flat_at_one():
    rng = np.random.default_rng(55)
    series = TimeSeries(4096.0, rng.normal(size=2**20))
    spectrum = welch_psd(series, 32.0)
    assert spectrum.psd.mean() == pytest.approx(1.0, abs=0.01)
    assert spectrum.psd.max() < 1.3
    assert spectrum.psd.min() > 0.7


def test_psd_mean_tracks_variance():
    # Parseval consistency: mean over bins estimates the sample variance
    rng = np.random.default_rng(56)
    samples = rng.normal(0.0, np.sqrt(0.1), size=2**20)
    spectrum = welch_psd(TimeSeries(1.0, samples), 1.0 / 256)
    assert spectrum.psd.mean() == pytest.approx(samples.var(), rel=0.01)


def test_psd_matches_scipy_welch():
    rng = np.random.default_rng(57)
    fs, nperseg = 2048.0, 256
    samples = rng.normal(size=2**16)
    spectrum = welch_psd(TimeSeries(fs, samples), fs / nperseg)
    freqs, pxx = signal.welch(
        samples,
        fs=fs,
        window="boxcar",
        nperseg=nperseg,
        noverlap=0,
        detrend=False,
    )
    # same estimator up to the one-sided density scaling of fs / 2
    interior = slice(1, (nperseg + 1) // 2)
    np.testing.assert_allclose(spectrum.frequencies, freqs[interior], rtol=1e-12)
    np.testing.assert_allclose(
        spectrum.psd, pxx[interior] * fs / 2.0, rtol=1e-10
    )


def test_psd_frequency_grid():
    spectrum = welch_psd(TimeSeries(1000.0, np.random.default_rng(1).normal(size=4000)), 100.0)
    assert spectrum.resolution_bandwidth == pytest.approx(100.0)
    np.testing.assert_allclose(spectrum.frequencies, [100.0, 200.0, 300.0, 400.0])


def test_psd_segment_bounds():
    series = TimeSeries(100.0, np.zeros(64) + 1.0)
    with pytest.raises(ValueError):
        welch_psd(series, 25.0)  # segments of 4 samples are too short
    with pytest.raises(ValueError):
        welch_psd(series, 0.5)  # segment longer than the series


def test_time_series_validation():
    with pytest.raises(ValueError):
        TimeSeries(0.0, np.zeros(8))
    with pytest.raises(ValueError):
        TimeSeries(1.0, np.zeros((2, 4)))
    with pytest.raises(ValueError):
        TimeSeries(1.0, np.array([1.0, np.nan]))


def test_series_samples_read_only():
    series = TimeSeries(1.0, np.zeros(8))
    with pytest.raises(ValueError):
        series.samples[0] = 1.0
