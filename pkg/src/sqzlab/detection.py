"""Simulated photodetection: photon counting, photocurrents, and spectra.

The Gaussian state passed to these routines describes the quantum noise of
the detected mode (the sideband mode around a bright carrier), while the
carrier itself enters as classical parameters: a :class:`LightSource` for
direct detection, a local-oscillator phase and power ratio for balanced
homodyne detection.  All sampling is driven by an explicit integer seed and
is reproducible bit for bit; identical seeds give identical records no
matter how the caller schedules the work.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants

from .decoherence import visibility_efficiency
from .gaussian import GaussianState, apply_loss, quadrature_variance

__all__ = [
    "LightSource",
    "MeasurementWindowing",
    "PhotonRecord",
    "DetectorParams",
    "TimeSeries",
    "NoiseSpectrum",
    "photon_flux",
    "mean_photons_per_window",
    "power_for_mean_photons",
    "sample_photon_record",
    "fano_factor",
    "single_pd_series",
    "bhd_series",
    "add_signal_modulation",
    "welch_psd",
]

WINDOW_SHAPES = ("rectangular", "gaussian")

# Counting windows must be much shorter than the source coherence time for
# the per-window statistics to be meaningful.
_MAX_WINDOW_TO_COHERENCE = 0.1
# Below this mean count the Gaussian bright-beam approximation for
# non-Poissonian light is not trustworthy.
_GAUSSIAN_REGIME_MIN_COUNT = 100.0
# A single photodiode linearizes quadrature noise only against a carrier of
# many photons per sample.
_BRIGHT_CARRIER_MIN_PHOTONS = 100.0
# Balanced homodyne detection assumes the signal beam is much dimmer than
# the local oscillator.
_MAX_SIGNAL_TO_LO_RATIO = 0.01

_POISSON_VARIANCE_TOL = 1e-9
_MIN_PSD_SEGMENT = 8


@dataclass(frozen=True)
class LightSource:
    """Carrier beam: wavelength (m), optical power (W), coherence time (s).

    Power may be zero (blocked beam); wavelength and coherence time must be
    positive.
    """

    wavelength: float
    power: float
    coherence_time: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.wavelength) or self.wavelength <= 0.0:
            raise ValueError("wavelength must be finite and > 0")
        if not np.isfinite(self.power) or self.power < 0.0:
            raise ValueError("power must be finite and >= 0")
        if not np.isfinite(self.coherence_time) or self.coherence_time <= 0.0:
            raise ValueError("coherence_time must be finite and > 0")


@dataclass(frozen=True)
class MeasurementWindowing:
    """Counting-window layout for direct detection."""

    duration: float
    shape: str = "rectangular"
    n_windows: int = 1

    def __post_init__(self) -> None:
        if not np.isfinite(self.duration) or self.duration <= 0.0:
            raise ValueError("window duration must be finite and > 0")
        if self.shape not in WINDOW_SHAPES:
            raise ValueError(f"window shape must be one of {WINDOW_SHAPES}")
        if not isinstance(self.n_windows, (int, np.integer)) or self.n_windows < 1:
            raise ValueError("n_windows must be a positive integer")


@dataclass(frozen=True, eq=False)
class PhotonRecord:
    """Photon counts per window plus the sampling context."""

    windowing: MeasurementWindowing
    counts: np.ndarray
    mean: float
    seed: int

    def __post_init__(self) -> None:
        counts = np.array(self.counts, dtype=np.int64, copy=True)
        counts.setflags(write=False)
        if counts.ndim != 1 or counts.size != self.windowing.n_windows:
            raise ValueError("counts length must equal n_windows")
        if counts.min(initial=0) < 0:
            raise ValueError("counts must be non-negative")
        if abs(float(counts.mean()) - self.mean) > 1e-9 * max(1.0, abs(self.mean)):
            raise ValueError("stored mean inconsistent with counts")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "mean", float(self.mean))


@dataclass(frozen=True)
class DetectorParams:
    """Photodiode and interference imperfections.

    ``visibility`` is the fringe visibility against the reference beam and
    enters the effective efficiency as its square.  ``balance_asymmetry`` is
    the deviation of the homodyne splitter from 50/50 (0 means balanced,
    bounded by 0.5).
    """

    quantum_efficiency: float = 1.0
    dark_noise_variance: float = 0.0
    visibility: float = 1.0
    balance_asymmetry: float = 0.0

    def __post_init__(self) -> None:
        if (
            not np.isfinite(self.quantum_efficiency)
            or not 0.0 < self.quantum_efficiency <= 1.0
        ):
            raise ValueError("quantum_efficiency must lie in (0, 1]")
        if (
            not np.isfinite(self.dark_noise_variance)
            or self.dark_noise_variance < 0.0
        ):
            raise ValueError("dark_noise_variance must be finite and >= 0")
        # Visibility 0 would null the signal entirely; reject it here so
        # downstream variance formulas never divide by zero.
        visibility_efficiency(self.visibility)
        if (
            not np.isfinite(self.balance_asymmetry)
            or not 0.0 <= self.balance_asymmetry <= 0.5
        ):
            raise ValueError("balance_asymmetry must lie in [0, 0.5]")


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Evenly sampled photocurrent fluctuations in shot-noise units."""

    sample_rate: float
    samples: np.ndarray
    lo_phase: float = 0.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.sample_rate) or self.sample_rate <= 0.0:
            raise ValueError("sample_rate must be finite and > 0")
        samples = np.array(self.samples, dtype=float, copy=True)
        samples.setflags(write=False)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a non-empty 1-D array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if not np.isfinite(self.lo_phase):
            raise ValueError("lo_phase must be finite")
        object.__setattr__(self, "samples", samples)


@dataclass(frozen=True, eq=False)
class NoiseSpectrum:
    """One-sided PSD relative to shot noise (unit-variance white reads 1.0)."""

    frequencies: np.ndarray
    psd: np.ndarray
    resolution_bandwidth: float

    def __post_init__(self) -> None:
        freqs = np.array(self.frequencies, dtype=float, copy=True)
        psd = np.array(self.psd, dtype=float, copy=True)
        freqs.setflags(write=False)
        psd.setflags(write=False)
        if freqs.ndim != 1 or freqs.size == 0 or freqs.shape != psd.shape:
            raise ValueError("frequencies and psd must be matching 1-D arrays")
        if np.any(np.diff(freqs) <= 0.0) or freqs[0] <= 0.0:
            raise ValueError("frequencies must be positive and increasing")
        if np.any(psd < 0.0) or not np.all(np.isfinite(psd)):
            raise ValueError("psd values must be finite and >= 0")
        if not np.isfinite(self.resolution_bandwidth) or self.resolution_bandwidth <= 0.0:
            raise ValueError("resolution_bandwidth must be finite and > 0")
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "psd", psd)


def photon_flux(source: LightSource) -> float:
    """Photons per second carried by the source power."""
    return source.power * source.wavelength / (constants.h * constants.c)


def mean_photons_per_window(
    source: LightSource, windowing: MeasurementWindowing
) -> float:
    """Average photon count per window, flux times window duration."""
    return photon_flux(source) * windowing.duration


def power_for_mean_photons(
    mean_photons: float, wavelength: float, window_duration: float
) -> float:
    """Optical power that puts ``mean_photons`` into one counting window."""
    if not np.isfinite(mean_photons) or mean_photons < 0.0:
        raise ValueError("mean_photons must be finite and >= 0")
    return mean_photons * constants.h * constants.c / (wavelength * window_duration)


def sample_photon_record(
    state: GaussianState,
    source: LightSource,
    windowing: MeasurementWindowing,
    seed: int,
) -> PhotonRecord:
    """Draw per-window photon counts for a carrier with the given noise state.

    A state at exact shot noise in the amplitude quadrature gives Poisson
    counts of the carrier mean.  Any other amplitude variance v uses the
    bright-beam Gaussian approximation (mean n, variance v * n), which is
    only accepted for mean counts of at least 100.  The window shape is
    bookkeeping metadata and does not change the statistics.

    Raises
    ------
    ValueError
        If the window is not much shorter than the coherence time, or if a
        non-Poissonian state is sampled with too few photons per window.
    """
    if windowing.duration >= _MAX_WINDOW_TO_COHERENCE * source.coherence_time:
        raise ValueError(
            "window duration must be below a tenth of the coherence time"
        )
    n_bar = mean_photons_per_window(source, windowing)
    v_amp = quadrature_variance(state, 0.0)
    rng = np.random.default_rng(seed)
    if abs(v_amp - 1.0) <= _POISSON_VARIANCE_TOL:
        counts = rng.poisson(n_bar, size=windowing.n_windows).astype(np.int64)
    else:
        if n_bar < _GAUSSIAN_REGIME_MIN_COUNT:
            raise ValueError(
                "non-Poissonian sampling needs at least "
                f"{_GAUSSIAN_REGIME_MIN_COUNT:.0f} photons per window"
            )
        draws = rng.normal(n_bar, np.sqrt(v_amp * n_bar), size=windowing.n_windows)
        counts = np.rint(np.clip(draws, 0.0, None)).astype(np.int64)
    return PhotonRecord(windowing, counts, float(counts.mean()), seed)


def fano_factor(record: PhotonRecord) -> float:
    """Count variance over count mean; 1 for Poisson, below 1 for squeezed."""
    if record.counts.size < 2:
        raise ValueError("need at least two windows for a variance")
    mean = record.counts.mean()
    if mean == 0.0:
        raise ValueError("mean count is zero, Fano factor undefined")
    return float(record.counts.var(ddof=1) / mean)


def single_pd_series(
    state: GaussianState,
    source: LightSource,
    detector: DetectorParams,
    n_samples: int,
    seed: int,
    sample_rate: float = 1.0,
) -> TimeSeries:
    """Amplitude-quadrature fluctuations seen by one photodiode.

    The carrier must be bright (at least 100 photons per sample) for the
    linearized readout to hold.  Quantum efficiency mixes in vacuum before
    detection; dark noise adds on top.  The mean is removed, only
    fluctuations are returned.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if photon_flux(source) / sample_rate < _BRIGHT_CARRIER_MIN_PHOTONS:
        raise ValueError(
            "single-diode readout needs a bright carrier "
            f"(>= {_BRIGHT_CARRIER_MIN_PHOTONS:.0f} photons per sample)"
        )
    detected = apply_loss(state, 1.0 - detector.quantum_efficiency)
    variance = quadrature_variance(detected, 0.0) + detector.dark_noise_variance
    rng = np.random.default_rng(seed)
    samples = rng.normal(0.0, np.sqrt(variance), size=n_samples)
    return TimeSeries(sample_rate, samples, lo_phase=0.0)


def bhd_series(
    signal_state: GaussianState,
    lo_phase: float,
    signal_to_lo_power_ratio: float,
    detector: DetectorParams,
    n_samples: int,
    seed: int,
    sample_rate: float = 1.0,
    lo_noise_variance: float = 0.0,
) -> TimeSeries:
    """Balanced homodyne readout of the quadrature selected by the LO phase.

    The effective efficiency is ``quantum_efficiency * visibility**2``.
    Classical local-oscillator noise cancels in the balanced difference
    current; a splitter asymmetry ``eps`` lets an amplitude fraction
    ``2 * eps`` of it leak through, so ``lo_noise_variance`` contributes
    ``(2 * eps)**2`` times itself to the output variance.

    Raises
    ------
    ValueError
        If the signal beam is not much weaker than the local oscillator
        (power ratio >= 0.01).
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if not np.isfinite(lo_phase):
        raise ValueError("lo_phase must be finite")
    if (
        not np.isfinite(signal_to_lo_power_ratio)
        or not 0.0 <= signal_to_lo_power_ratio < _MAX_SIGNAL_TO_LO_RATIO
    ):
        raise ValueError(
            "signal beam must stay below "
            f"{_MAX_SIGNAL_TO_LO_RATIO:.0%} of the local-oscillator power"
        )
    if not np.isfinite(lo_noise_variance) or lo_noise_variance < 0.0:
        raise ValueError("lo_noise_variance must be finite and >= 0")
    efficiency = detector.quantum_efficiency * visibility_efficiency(
        detector.visibility
    )
    detected = apply_loss(signal_state, 1.0 - efficiency)
    variance = quadrature_variance(detected, lo_phase) + detector.dark_noise_variance
    rng = np.random.default_rng(seed)
    samples = rng.normal(0.0, np.sqrt(variance), size=n_samples)
    leak_amplitude = 2.0 * detector.balance_asymmetry * np.sqrt(lo_noise_variance)
    if leak_amplitude > 0.0:
        samples = samples + leak_amplitude * rng.normal(size=n_samples)
    return TimeSeries(sample_rate, samples, lo_phase=float(lo_phase))


def add_signal_modulation(
    series: TimeSeries, frequency: float, depth: float
) -> TimeSeries:
    """Return a copy of the series with a coherent sine added.

    ``depth`` is the modulation amplitude in the same shot-noise-relative
    units as the samples.  The frequency must sit below Nyquist.
    """
    if not np.isfinite(depth):
        raise ValueError("modulation depth must be finite")
    if not np.isfinite(frequency) or not 0.0 < frequency < series.sample_rate / 2.0:
        raise ValueError("modulation frequency must lie below Nyquist")
    t = np.arange(series.samples.size) / series.sample_rate
    samples = series.samples + depth * np.sin(2.0 * np.pi * frequency * t)
    return TimeSeries(series.sample_rate, samples, lo_phase=series.lo_phase)


def welch_psd(series: TimeSeries, resolution_bandwidth: float) -> NoiseSpectrum:
    """Averaged-periodogram PSD calibrated so shot noise reads 1.0 per bin.

    The series is cut into non-overlapping segments of
    ``sample_rate / resolution_bandwidth`` samples; per segment and bin the
    squared rFFT magnitude over the segment length estimates the variance
    contribution, and segments are averaged.  DC and Nyquist bins are
    dropped.  For a white unit-variance input every returned bin averages to
    1.0, and the mean over bins estimates the total sample variance
    (Parseval consistency).

    Raises
    ------
    ValueError
        If the requested resolution is finer than the series length allows,
        or so coarse that segments have fewer than 8 samples.
    """
    if not np.isfinite(resolution_bandwidth) or resolution_bandwidth <= 0.0:
        raise ValueError("resolution_bandwidth must be finite and > 0")
    n_segment = int(round(series.sample_rate / resolution_bandwidth))
    if n_segment < _MIN_PSD_SEGMENT:
        raise ValueError("resolution bandwidth too coarse: segments too short")
    if n_segment > series.samples.size:
        raise ValueError(
            "resolution bandwidth finer than the series length supports"
        )
    n_runs = series.samples.size // n_segment
    segments = series.samples[: n_runs * n_segment].reshape(n_runs, n_segment)
    spectra = np.abs(np.fft.rfft(segments, axis=1)) ** 2 / n_segment
    interior = slice(1, (n_segment + 1) // 2)
    psd = spectra.mean(axis=0)[interior]
    actual_rbw = series.sample_rate / n_segment
    freqs = actual_rbw * np.arange(1, (n_segment + 1) // 2)
    return NoiseSpectrum(freqs, psd, actual_rbw)
