"""Quantum noise budget of a squeezed-light-enhanced interferometer.

Free-mass two-photon model of a Michelson readout.  Radiation pressure
couples the amplitude quadrature of the dark-port field into the phase
readout with strength ``kappa``, so the detected quadrature is effectively
rotated away from the phase axis by ``arctan(kappa)``.  The strain-referred
total is

    total = (sql / 2) * (1 / kappa + kappa) * e_b

where ``e_b`` is the variance of the injected dark-port state at that
effective readout angle.  With vacuum at the dark port this reduces to the
familiar shot plus radiation-pressure budget ``(sql / 2) * (1/kappa + kappa)``
that touches the standard quantum limit exactly where ``kappa = 1``.

The reported shot and radiation-pressure components are the projections of
the injected state on the phase and amplitude quadratures of the readout
frame.  Whenever the injected noise ellipse is axis-aligned in that frame
(no injection, or squeezing oriented along a quadrature) the two components
add up to the total exactly.  A frequency-dependent or tilted injection
correlates the two pathways and the correlated total can drop below either
projection; the components are still reported as projections because their
ratios to the vacuum budget stay exact per frequency bin.

Absolute scales are intentionally uncalibrated: ``sql_scale`` multiplies the
standard free-mass envelope and defaults to 1.  Shapes and ratios are the
meaningful outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants

from .gaussian import SqueezeSetting, apply_loss, squeeze, vacuum

__all__ = [
    "FilterCavityParams",
    "IfoConfig",
    "BudgetCurve",
    "kappa",
    "crossover_frequency",
    "filter_cavity_angle",
    "standard_quantum_limit",
    "quantum_noise_budget",
    "snr_equivalent_power_gain",
    "recycling_as_loss",
]


@dataclass(frozen=True)
class FilterCavityParams:
    """Detuned rotation cavity on the squeezed-light injection path.

    ``half_linewidth`` and ``detuning`` are in Hz; the detuning may take
    either sign and flips the rotation direction with it.
    """

    half_linewidth: float
    detuning: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.half_linewidth) or self.half_linewidth <= 0.0:
            raise ValueError("half_linewidth must be finite and > 0")
        if not np.isfinite(self.detuning):
            raise ValueError("detuning must be finite")


@dataclass(frozen=True)
class IfoConfig:
    """Interferometer and injection parameters for the noise budget.

    ``injected_squeeze`` with r = 0 means a plain vacuum dark port.  Exactly
    one of ``filter_cavity`` (a physical single-pole rotation) and
    ``matched_rotation`` (the idealized limit where the squeeze ellipse is
    kept aligned with the effective readout quadrature at every frequency)
    may be active.
    """

    arm_power: float
    mirror_mass: float
    arm_length: float
    wavelength: float
    detection_efficiency: float = 1.0
    injection_loss: float = 0.0
    injected_squeeze: SqueezeSetting = SqueezeSetting(0.0, 0.0)
    filter_cavity: FilterCavityParams | None = None
    matched_rotation: bool = False
    sql_scale: float = 1.0

    def __post_init__(self) -> None:
        for name in ("arm_power", "mirror_mass", "arm_length", "wavelength"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be finite and > 0")
        if (
            not np.isfinite(self.detection_efficiency)
            or not 0.0 < self.detection_efficiency <= 1.0
        ):
            raise ValueError("detection_efficiency must lie in (0, 1]")
        if not np.isfinite(self.injection_loss) or not 0.0 <= self.injection_loss < 1.0:
            raise ValueError("injection_loss must lie in [0, 1)")
        if not np.isfinite(self.sql_scale) or self.sql_scale <= 0.0:
            raise ValueError("sql_scale must be finite and > 0")
        if self.matched_rotation and self.filter_cavity is not None:
            raise ValueError(
                "choose either a filter cavity or matched_rotation, not both"
            )


@dataclass(frozen=True, eq=False)
class BudgetCurve:
    """Noise budget sampled on a frequency grid (strain-referred PSDs)."""

    frequencies: np.ndarray
    shot: np.ndarray
    rpn: np.ndarray
    total: np.ndarray
    sql: np.ndarray

    def __post_init__(self) -> None:
        arrays = {}
        for name in ("frequencies", "shot", "rpn", "total", "sql"):
            arr = np.array(getattr(self, name), dtype=float, copy=True)
            arr.setflags(write=False)
            arrays[name] = arr
        n = arrays["frequencies"].size
        if n == 0 or any(a.shape != (n,) for a in arrays.values()):
            raise ValueError("budget arrays must be matching non-empty 1-D arrays")
        for name, arr in arrays.items():
            if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
                raise ValueError(f"{name} must be finite and > 0")
            object.__setattr__(self, name, arr)


def kappa(config: IfoConfig, frequency) -> np.ndarray | float:
    """Radiation-pressure coupling strength at a sideband frequency (Hz).

    ``kappa = 8 P omega0 / (m c^2 Omega^2)`` with ``Omega = 2 pi f``:
    proportional to arm power over mirror mass and falling as 1 / f^2.
    Scaling power and mass together leaves it unchanged.
    """
    f = np.asarray(frequency, dtype=float)
    if np.any(~np.isfinite(f)) or np.any(f <= 0.0):
        raise ValueError("frequency must be finite and > 0")
    omega0 = 2.0 * np.pi * constants.c / config.wavelength
    out = (
        8.0
        * config.arm_power
        * omega0
        / (config.mirror_mass * constants.c**2 * (2.0 * np.pi * f) ** 2)
    )
    return out if out.ndim else float(out)


def crossover_frequency(config: IfoConfig) -> float:
    """Frequency where ``kappa = 1``: the shot / radiation-pressure crossing."""
    omega0 = 2.0 * np.pi * constants.c / config.wavelength
    return float(
        np.sqrt(8.0 * config.arm_power * omega0 / (config.mirror_mass * constants.c**2))
        / (2.0 * np.pi)
    )


def standard_quantum_limit(config: IfoConfig, frequency) -> np.ndarray | float:
    """Free-mass strain-PSD envelope, scaled by ``sql_scale``."""
    f = np.asarray(frequency, dtype=float)
    if np.any(~np.isfinite(f)) or np.any(f <= 0.0):
        raise ValueError("frequency must be finite and > 0")
    out = (
        config.sql_scale
        * 8.0
        * constants.hbar
        / (config.mirror_mass * (2.0 * np.pi * f) ** 2 * config.arm_length**2)
    )
    return out if out.ndim else float(out)


def filter_cavity_angle(cavity: FilterCavityParams, frequency) -> np.ndarray | float:
    """Quadrature rotation of a detuned cavity at a sideband frequency.

    ``0.5 * (arctan((detuning + f) / hwhm) + arctan((detuning - f) / hwhm))``:
    zero at zero detuning, approaching ``arctan(detuning / hwhm)`` for
    frequencies far below the linewidth and falling to zero far above it,
    monotonically for positive detuning.
    """
    f = np.asarray(frequency, dtype=float)
    if np.any(~np.isfinite(f)) or np.any(f < 0.0):
        raise ValueError("frequency must be finite and >= 0")
    gamma = cavity.half_linewidth
    out = 0.5 * (
        np.arctan((cavity.detuning + f) / gamma)
        + np.arctan((cavity.detuning - f) / gamma)
    )
    return out if out.ndim else float(out)


def _variance_profile(cov: np.ndarray, angle: np.ndarray) -> np.ndarray:
    """Quadrature variance of a covariance matrix at an array of angles."""
    c, s = np.cos(angle), np.sin(angle)
    return c * c * cov[0, 0] + 2.0 * c * s * cov[0, 1] + s * s * cov[1, 1]


def quantum_noise_budget(config: IfoConfig, frequencies) -> BudgetCurve:
    """Evaluate shot, radiation-pressure, total, and SQL curves.

    Parameters
    ----------
    config : IfoConfig
    frequencies : array_like
        Sideband frequencies in Hz, all > 0, at least one.

    Returns
    -------
    BudgetCurve
        ``total`` uses the exact correlated projection of the injected state
        on the effective readout quadrature; ``shot`` and ``rpn`` are the
        phase- and amplitude-quadrature projections of the same state.
    """
    f = np.atleast_1d(np.asarray(frequencies, dtype=float))
    if f.size == 0:
        raise ValueError("need at least one frequency")
    if np.any(~np.isfinite(f)) or np.any(f <= 0.0):
        raise ValueError("frequencies must be finite and > 0")

    state = squeeze(vacuum(), config.injected_squeeze)
    state = apply_loss(state, config.injection_loss)
    cov = state.cov

    k = kappa(config, f)
    readout_angle = 0.5 * np.pi + np.arctan(k)
    if config.matched_rotation:
        # Idealized frequency-dependent injection: the minor axis of the
        # noise ellipse tracks the effective readout quadrature exactly.
        eigvals, eigvecs = np.linalg.eigh(cov)
        minor = eigvecs[:, int(np.argmin(eigvals))]
        rotation = readout_angle - np.arctan2(minor[1], minor[0])
    elif config.filter_cavity is not None:
        rotation = filter_cavity_angle(config.filter_cavity, f)
    else:
        rotation = np.zeros_like(f)

    eta = config.detection_efficiency
    vac = 1.0 - eta

    def detected_variance(angle):
        return eta * _variance_profile(cov, angle - rotation) + vac

    e_total = detected_variance(readout_angle)
    e_shot = detected_variance(0.5 * np.pi)
    e_rpn = detected_variance(0.0)

    half_sql = 0.5 * standard_quantum_limit(config, f)
    curve = BudgetCurve(
        frequencies=f,
        shot=half_sql / k * e_shot,
        rpn=half_sql * k * e_rpn,
        total=half_sql * (1.0 / k + k) * e_total,
        sql=2.0 * half_sql,
    )
    return curve


def snr_equivalent_power_gain(improvement_db: float) -> float:
    """Carrier-power multiple matching a given shot-noise improvement.

    A squeezing improvement of x dB raises a shot-noise-limited SNR exactly
    like multiplying the carrier power by ``10**(x / 10)``.
    """
    if not np.isfinite(improvement_db):
        raise ValueError("improvement_db must be finite")
    return 10.0 ** (improvement_db / 10.0)


def recycling_as_loss(mirror_transmission: float, internal_loss: float) -> float:
    """Effective efficiency of a recycling cavity, lumped.

    The cavity is modeled as the single lumped efficiency
    ``1 - internal_loss``; build-up scaling with the mirror transmission is
    out of scope, the transmission is validated but does not enter.  The
    returned efficiency composes multiplicatively with injection and
    detection efficiencies.
    """
    if not np.isfinite(mirror_transmission) or not 0.0 <= mirror_transmission <= 1.0:
        raise ValueError("mirror_transmission must lie in [0, 1]")
    if not np.isfinite(internal_loss) or not 0.0 <= internal_loss <= 1.0:
        raise ValueError("internal_loss must lie in [0, 1]")
    return 1.0 - internal_loss
