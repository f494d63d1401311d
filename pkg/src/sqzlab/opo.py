"""Squeezing spectra of a below-threshold optical parametric oscillator.

The cavity is parametrized by the pump amplitude relative to threshold
(``pump_ratio``, 0 at no pump, 1 at threshold), the escape efficiency (the
fraction of intracavity photons that leave through the coupling mirror), and
the cavity half linewidth in Hz.  Sideband variances follow the standard
Lorentzian input-output result: at zero sideband frequency and unit escape
efficiency the squeezed and anti-squeezed variances are
``((1 - x) / (1 + x))**2`` and its inverse, and both relax to shot noise far
outside the linewidth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import GaussianState

__all__ = [
    "OpoParams",
    "SqueezeSpectrumPoint",
    "parametric_gain",
    "pump_ratio_from_gain",
    "opo_spectrum",
    "spectrum_to_state",
]

_PRODUCT_TOL = 1e-9


@dataclass(frozen=True)
class OpoParams:
    """Below-threshold cavity description.

    Attributes
    ----------
    pump_ratio : float
        Pump amplitude over threshold amplitude, in [0, 1).
    escape_efficiency : float
        Probability for an intracavity photon to leave through the output
        coupler rather than be lost, in [0, 1].
    half_linewidth : float
        Cavity half linewidth (amplitude decay rate) in Hz, > 0.
    """

    pump_ratio: float
    escape_efficiency: float
    half_linewidth: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.pump_ratio) or not 0.0 <= self.pump_ratio < 1.0:
            raise ValueError("pump_ratio must lie in [0, 1)")
        if (
            not np.isfinite(self.escape_efficiency)
            or not 0.0 <= self.escape_efficiency <= 1.0
        ):
            raise ValueError("escape_efficiency must lie in [0, 1]")
        if not np.isfinite(self.half_linewidth) or self.half_linewidth <= 0.0:
            raise ValueError("half_linewidth must be finite and > 0")


@dataclass(frozen=True)
class SqueezeSpectrumPoint:
    """Squeezed and anti-squeezed variances at one sideband frequency."""

    frequency: float
    v_squeeze: float
    v_antisqueeze: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.frequency) or self.frequency < 0.0:
            raise ValueError("sideband frequency must be finite and >= 0")
        if not 0.0 < self.v_squeeze <= 1.0 + _PRODUCT_TOL:
            raise ValueError("squeezed variance must lie in (0, 1]")
        if self.v_antisqueeze < 1.0 - _PRODUCT_TOL:
            raise ValueError("anti-squeezed variance must be >= 1")
        if self.v_squeeze * self.v_antisqueeze < 1.0 - _PRODUCT_TOL:
            raise ValueError("variance product violates the uncertainty bound")


def parametric_gain(pump_ratio: float) -> float:
    """Classical parametric amplification at zero sideband frequency.

    Diverges as the pump approaches threshold: ``g = 1 / (1 - x)**2``.
    """
    if not np.isfinite(pump_ratio) or not 0.0 <= pump_ratio < 1.0:
        raise ValueError("pump_ratio must lie in [0, 1)")
    return 1.0 / (1.0 - pump_ratio) ** 2


def pump_ratio_from_gain(gain: float) -> float:
    """Invert :func:`parametric_gain`; a gain of 1 means no pump."""
    if not np.isfinite(gain) or gain < 1.0:
        raise ValueError("parametric gain must be finite and >= 1")
    return 1.0 - 1.0 / np.sqrt(gain)


def opo_spectrum(params: OpoParams, frequency: float) -> SqueezeSpectrumPoint:
    """Sideband variances of the cavity output at one sideband frequency.

    Parameters
    ----------
    params : OpoParams
    frequency : float
        Sideband frequency in Hz, >= 0.

    Returns
    -------
    SqueezeSpectrumPoint
        With unit escape efficiency the two variances multiply to exactly 1
        (pure squeezed state); any escape deficit pulls both toward shot
        noise and makes the product exceed 1.
    """
    if not np.isfinite(frequency) or frequency < 0.0:
        raise ValueError("sideband frequency must be finite and >= 0")
    x = params.pump_ratio
    eta = params.escape_efficiency
    detuning = (frequency / params.half_linewidth) ** 2
    v_squeeze = 1.0 - eta * 4.0 * x / ((1.0 + x) ** 2 + detuning)
    v_antisqueeze = 1.0 + eta * 4.0 * x / ((1.0 - x) ** 2 + detuning)
    return SqueezeSpectrumPoint(frequency, v_squeeze, v_antisqueeze)


def spectrum_to_state(point: SqueezeSpectrumPoint, angle: float) -> GaussianState:
    """Zero-mean Gaussian state with the point's variances on its axes.

    The squeezed axis sits at ``angle`` from the amplitude quadrature.
    """
    if not np.isfinite(angle):
        raise ValueError("orientation angle must be finite")
    c, s = np.cos(angle), np.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    cov = rot @ np.diag([point.v_squeeze, point.v_antisqueeze]) @ rot.T
    return GaussianState(np.zeros(2), cov)
