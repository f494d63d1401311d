"""Why measured squeezing falls short: optical loss and phase jitter.

The forward model chains three stages that are kept separately testable:
a pure squeezed state from the cavity model, a lumped loss channel, and a
Gaussian phase-jitter average.  The same chain runs in reverse as a
deterministic least-squares fit that infers intrinsic loss and jitter from a
sweep of deliberately added loss.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize

from .opo import OpoParams, opo_spectrum, pump_ratio_from_gain

__all__ = [
    "LossBudget",
    "PhaseNoise",
    "SqueezeMeasurement",
    "FitResult",
    "total_efficiency",
    "visibility_efficiency",
    "apply_phase_noise",
    "forward_model",
    "fit_loss_phase",
    "effective_improvement",
    "loss_for_improvement",
]

# Fit search ranges: intrinsic loss in [0, _LOSS_BOUND], jitter in
# [0, _PHASE_BOUND_DEG] degrees.  Grid resolution only needs to land the
# local refinement in the right basin.
_LOSS_BOUND = 0.5
_PHASE_BOUND_DEG = 5.0
_GRID_LOSS_POINTS = 41
_GRID_PHASE_POINTS = 26


@dataclass(frozen=True)
class PhaseNoise:
    """Zero-mean Gaussian jitter of the measured quadrature angle.

    ``sigma`` is the RMS angle in radians, >= 0.
    """

    sigma: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.sigma) or self.sigma < 0.0:
            raise ValueError("phase-noise sigma must be finite and >= 0")

    @classmethod
    def from_degrees(cls, degrees: float) -> "PhaseNoise":
        return cls(float(np.deg2rad(degrees)))

    @property
    def degrees(self) -> float:
        return float(np.rad2deg(self.sigma))


@dataclass(frozen=True)
class LossBudget:
    """Labelled chain of efficiencies between source and detector output."""

    entries: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        normalized = []
        for label, efficiency in self.entries:
            if not np.isfinite(efficiency) or not 0.0 <= efficiency <= 1.0:
                raise ValueError(
                    f"efficiency for {label!r} must lie in [0, 1]"
                )
            normalized.append((str(label), float(efficiency)))
        object.__setattr__(self, "entries", tuple(normalized))


@dataclass(frozen=True)
class SqueezeMeasurement:
    """One point of a loss sweep: variances in dB at a known added loss."""

    added_loss: float
    squeeze_db: float
    antisqueeze_db: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.added_loss) or not 0.0 <= self.added_loss <= 1.0:
            raise ValueError("added_loss must lie in [0, 1]")
        if not np.isfinite(self.squeeze_db) or self.squeeze_db > 0.0:
            raise ValueError("squeeze_db must be finite and <= 0")
        if not np.isfinite(self.antisqueeze_db) or self.antisqueeze_db < 0.0:
            raise ValueError("antisqueeze_db must be finite and >= 0")


@dataclass(frozen=True)
class FitResult:
    """Outcome of :func:`fit_loss_phase`.

    ``converged`` reports the optimizer verdict; a False value is returned
    rather than raised so callers can inspect the partial result.
    """

    intrinsic_loss: float
    phase_noise: PhaseNoise
    residual: float
    converged: bool


def total_efficiency(budget: LossBudget) -> float:
    """Product of all efficiencies in the budget."""
    out = 1.0
    for _, efficiency in budget.entries:
        out *= efficiency
    return out


def visibility_efficiency(visibility: float) -> float:
    """Efficiency equivalent of imperfect mode overlap.

    A fringe visibility V between signal and reference beam acts on the
    measured variance exactly like a power efficiency of V**2.
    """
    if not np.isfinite(visibility) or not 0.0 < visibility <= 1.0:
        raise ValueError("visibility must lie in (0, 1]")
    return visibility * visibility


def apply_phase_noise(
    v_squeeze: float, v_antisqueeze: float, noise: PhaseNoise
) -> tuple[float, float]:
    """Average the two variances over Gaussian angle jitter.

    For jitter sigma the squeezed reading becomes
    ``w * v_squeeze + (1 - w) * v_antisqueeze`` with
    ``w = (1 + exp(-2 sigma^2)) / 2``, the exact Gaussian expectation of
    cos^2 of the jitter angle.  The sum of the two variances is conserved.
    """
    if not np.isfinite(v_squeeze) or v_squeeze <= 0.0:
        raise ValueError("v_squeeze must be finite and > 0")
    if not np.isfinite(v_antisqueeze) or v_antisqueeze <= 0.0:
        raise ValueError("v_antisqueeze must be finite and > 0")
    weight = 0.5 * (1.0 + np.exp(-2.0 * noise.sigma**2))
    return (
        weight * v_squeeze + (1.0 - weight) * v_antisqueeze,
        weight * v_antisqueeze + (1.0 - weight) * v_squeeze,
    )


def forward_model(
    gain: float,
    intrinsic_loss: float,
    added_loss: float,
    phase_noise: PhaseNoise,
    frequency: float = 0.0,
    half_linewidth: float = 1.0,
) -> tuple[float, float]:
    """Predicted (squeeze_db, antisqueeze_db) for a loss-sweep point.

    A pure cavity output at the given parametric gain passes through the
    combined loss ``1 - (1 - intrinsic_loss) * (1 - added_loss)`` and the
    phase-jitter average.  With ``added_loss = 1`` both values are 0 dB.
    """
    if not np.isfinite(intrinsic_loss) or not 0.0 <= intrinsic_loss <= 1.0:
        raise ValueError("intrinsic_loss must lie in [0, 1]")
    if not np.isfinite(added_loss) or not 0.0 <= added_loss <= 1.0:
        raise ValueError("added_loss must lie in [0, 1]")
    pump = pump_ratio_from_gain(gain)
    point = opo_spectrum(OpoParams(pump, 1.0, half_linewidth), frequency)
    combined = 1.0 - (1.0 - intrinsic_loss) * (1.0 - added_loss)
    v_s = (1.0 - combined) * point.v_squeeze + combined
    v_a = (1.0 - combined) * point.v_antisqueeze + combined
    v_s, v_a = apply_phase_noise(v_s, v_a, phase_noise)
    return 10.0 * np.log10(v_s), 10.0 * np.log10(v_a)


def _sweep_model_db(
    v_squeeze_pure: float,
    v_antisqueeze_pure: float,
    added: np.ndarray,
    loss0,
    sigma,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized forward model over a loss sweep; leading axes broadcast."""
    loss0 = np.asarray(loss0, dtype=float)[..., np.newaxis]
    sigma = np.asarray(sigma, dtype=float)[..., np.newaxis]
    combined = 1.0 - (1.0 - loss0) * (1.0 - added)
    v_s = (1.0 - combined) * v_squeeze_pure + combined
    v_a = (1.0 - combined) * v_antisqueeze_pure + combined
    weight = 0.5 * (1.0 + np.exp(-2.0 * sigma**2))
    v_s, v_a = (
        weight * v_s + (1.0 - weight) * v_a,
        weight * v_a + (1.0 - weight) * v_s,
    )
    return 10.0 * np.log10(v_s), 10.0 * np.log10(v_a)


def fit_loss_phase(
    measurements: Sequence[SqueezeMeasurement],
    gain: float,
    frequency: float = 0.0,
    half_linewidth: float = 1.0,
    *,
    fixed_phase_noise: PhaseNoise | None = None,
) -> FitResult:
    """Infer intrinsic loss (and optionally jitter) from a loss sweep.

    Runs a deterministic coarse grid search over loss in [0, 0.5] and jitter
    in [0, 5 degrees], then refines the best cell with a derivative-free
    local optimizer.  Residuals are summed squared dB errors over both the
    squeezed and anti-squeezed readings.  With ``fixed_phase_noise`` given,
    only the loss is fitted.

    Raises
    ------
    ValueError
        If fewer than two measurements are supplied (under-determined).
    """
    if len(measurements) < 2:
        raise ValueError("need at least two measurements to fit")
    pump = pump_ratio_from_gain(gain)
    point = opo_spectrum(OpoParams(pump, 1.0, half_linewidth), frequency)
    added = np.array([m.added_loss for m in measurements])
    data_s = np.array([m.squeeze_db for m in measurements])
    data_a = np.array([m.antisqueeze_db for m in measurements])

    def cost(loss0, sigma):
        model_s, model_a = _sweep_model_db(
            point.v_squeeze, point.v_antisqueeze, added, loss0, sigma
        )
        return ((model_s - data_s) ** 2 + (model_a - data_a) ** 2).sum(axis=-1)

    loss_grid = np.linspace(0.0, _LOSS_BOUND, _GRID_LOSS_POINTS)
    if fixed_phase_noise is not None:
        sigma = fixed_phase_noise.sigma
        start = loss_grid[np.argmin(cost(loss_grid, sigma))]
        bracket = (max(start - 0.05, 0.0), min(start + 0.05, 0.999))
        res = optimize.minimize_scalar(
            lambda l: float(cost(l, sigma)),
            bounds=bracket,
            method="bounded",
            options={"xatol": 1e-12},
        )
        return FitResult(
            float(res.x), fixed_phase_noise, float(res.fun), bool(res.success)
        )

    sigma_grid = np.deg2rad(np.linspace(0.0, _PHASE_BOUND_DEG, _GRID_PHASE_POINTS))
    loss_mesh, sigma_mesh = np.meshgrid(loss_grid, sigma_grid, indexing="ij")
    grid_cost = cost(loss_mesh.ravel(), sigma_mesh.ravel())
    best = int(np.argmin(grid_cost))
    start = np.array([loss_mesh.ravel()[best], sigma_mesh.ravel()[best]])

    def objective(params: np.ndarray) -> float:
        loss0, sigma = params
        if not -1e-9 <= loss0 <= 0.999:
            return 1e15 * (1.0 + abs(loss0))
        # The cost is even in sigma, so the jitter axis is left unconstrained
        # and folded back at the end.
        return float(cost(np.clip(loss0, 0.0, 0.999), abs(sigma)))

    res = optimize.minimize(
        objective,
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-11, "fatol": 1e-22, "maxiter": 4000, "maxfev": 8000},
    )
    loss0 = float(np.clip(res.x[0], 0.0, 1.0))
    return FitResult(
        loss0, PhaseNoise(abs(float(res.x[1]))), float(res.fun), bool(res.success)
    )


def effective_improvement(injected_db: float, loss: float) -> float:
    """Noise reduction that survives a lossy path.

    ``injected_db`` is the squeezing magnitude entering the path, quoted as a
    positive number of dB.  Returns the output improvement in dB:
    ``-10 log10((1 - loss) * 10**(-injected_db / 10) + loss)``.  Total loss
    returns 0 dB.
    """
    if not np.isfinite(injected_db) or injected_db < 0.0:
        raise ValueError("injected_db must be finite and >= 0")
    if not np.isfinite(loss) or not 0.0 <= loss <= 1.0:
        raise ValueError("loss must lie in [0, 1]")
    variance = (1.0 - loss) * 10.0 ** (-injected_db / 10.0) + loss
    return -10.0 * np.log10(variance)


def loss_for_improvement(injected_db: float, effective_db: float) -> float:
    """Loss that degrades ``injected_db`` of squeezing to ``effective_db``.

    Closed-form inverse of :func:`effective_improvement`.
    """
    if not np.isfinite(injected_db) or injected_db <= 0.0:
        raise ValueError("injected_db must be finite and > 0")
    if not np.isfinite(effective_db) or not 0.0 <= effective_db <= injected_db:
        raise ValueError("effective_db must lie in [0, injected_db]")
    floor = 10.0 ** (-injected_db / 10.0)
    return (10.0 ** (-effective_db / 10.0) - floor) / (1.0 - floor)
