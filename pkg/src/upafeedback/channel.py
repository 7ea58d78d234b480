"""UPA spatial-correlation channel model with Gauss-Markov temporal evolution.

Antenna (k, l) of an N_v x N_h planar array (k-th row, l-th column, 1-based)
maps to linear index l + N_h (k - 1) of the channel vector, i.e. the vector is
the row-major flattening of the array.  All geometry enters only through the
spacing/wavelength ratios.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.special

from .linalg import hermitian_sqrt

__all__ = [
    "SPEED_OF_LIGHT_MPS",
    "AngularRanges",
    "ChannelTrajectory",
    "SpatialCorrelation",
    "UpaGeometry",
    "UserAngularProfile",
    "build_domain_correlations",
    "build_full_correlation",
    "build_spatial_correlation",
    "evolve_channel",
    "init_channel",
    "jakes_coefficient",
    "rng_stream",
    "sample_profile",
]

SPEED_OF_LIGHT_MPS = 2.998e8


@dataclass(frozen=True)
class UpaGeometry:
    """Planar-array dimensions and element spacings in wavelengths."""

    n_v: int
    n_h: int
    d1_wavelengths: float = 0.9
    d2_wavelengths: float = 0.5

    def __post_init__(self):
        if self.n_v < 1 or self.n_h < 1:
            raise ValueError(f"antenna counts must be >= 1, got {self.n_v}x{self.n_h}")
        if self.d1_wavelengths <= 0 or self.d2_wavelengths <= 0:
            raise ValueError("antenna spacings must be positive")

    @property
    def n_p(self) -> int:
        return self.n_v * self.n_h

    @property
    def label(self) -> str:
        return f"{self.n_v}x{self.n_h}"


@dataclass(frozen=True)
class UserAngularProfile:
    """Mean/spread angles of departure plus the temporal correlation coefficient.

    phi/theta are the mean horizontal/vertical AoD in radians, sigma/xi the
    corresponding standard deviations, eta the per-block Gauss-Markov
    coefficient.
    """

    phi: float
    theta: float
    sigma: float
    xi: float
    eta: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.phi < np.pi and 0.0 < self.theta < np.pi):
            raise ValueError("mean angles must lie in (0, pi)")
        if self.sigma <= 0 or self.xi <= 0:
            raise ValueError("angle spreads must be positive")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must be in [0, 1], got {self.eta}")


@dataclass(frozen=True)
class SpatialCorrelation:
    """Full N_p x N_p correlation with its per-domain factors and cached sqrt."""

    geometry: UpaGeometry
    profile: UserAngularProfile
    full: np.ndarray
    vertical: np.ndarray
    horizontal: np.ndarray
    sqrt_full: np.ndarray


@dataclass(frozen=True)
class ChannelTrajectory:
    """One user's channel state at fading block ``block_index``."""

    correlation: SpatialCorrelation
    current: np.ndarray
    block_index: int

    @property
    def geometry(self) -> UpaGeometry:
        return self.correlation.geometry

    @property
    def profile(self) -> UserAngularProfile:
        return self.correlation.profile


def build_full_correlation(geom: UpaGeometry, prof: UserAngularProfile) -> np.ndarray:
    """Correlation between every antenna pair of the planar array.

    Evaluates the closed-form Gaussian-AoD model: for row/column offsets
    (p - k, q - l) between two elements the entry combines a pure vertical
    factor (phase ramp times spread damping), a horizontal term whose phase
    and damping are renormalized by the spread-dependent variance scale, and
    a vertical-horizontal cross coupling.
    """
    a1 = 2.0 * np.pi * geom.d1_wavelengths
    a2 = 2.0 * np.pi * geom.d2_wavelengths
    rows = np.repeat(np.arange(geom.n_v), geom.n_h)
    cols = np.tile(np.arange(geom.n_h), geom.n_v)
    dk = rows[None, :] - rows[:, None]  # p - k
    dl = cols[None, :] - cols[:, None]  # q - l

    sin_t, cos_t = np.sin(prof.theta), np.cos(prof.theta)
    sin_p, cos_p = np.sin(prof.phi), np.cos(prof.phi)
    spread_h = prof.sigma * sin_p

    vert_factor = np.exp(1j * a1 * dk * cos_t) * np.exp(
        -0.5 * (prof.xi * a1) ** 2 * dk**2 * sin_t**2
    )
    horiz_phase = a2 * dl * sin_t
    tilt_coupling = prof.xi * a2 * dl * cos_t
    cross_coupling = 0.5 * prof.xi**2 * a1 * a2 * dk * dl * np.sin(2.0 * prof.theta)
    var_scale = tilt_coupling**2 * spread_h**2 + 1.0
    phase_term = cross_coupling * spread_h**2 + cos_p
    damping_term = (
        tilt_coupling**2 * cos_p**2
        - cross_coupling**2 * spread_h**2
        - 2.0 * cross_coupling * cos_p
    )
    magnitude = np.exp(-(damping_term + (horiz_phase * spread_h) ** 2) / (2.0 * var_scale))
    return (
        (vert_factor / np.sqrt(var_scale))
        * magnitude
        * np.exp(1j * horiz_phase * phase_term / var_scale)
    )


def build_domain_correlations(
    geom: UpaGeometry, prof: UserAngularProfile
) -> Tuple[np.ndarray, np.ndarray]:
    """Per-domain correlation factors (R_v, R_h) of the separable approximation.

    R_v is the same-column restriction of the full model and R_h the same-row
    restriction; their Kronecker product approximates the full matrix.
    """
    a1 = 2.0 * np.pi * geom.d1_wavelengths
    a2 = 2.0 * np.pi * geom.d2_wavelengths
    sin_t, cos_t = np.sin(prof.theta), np.cos(prof.theta)
    sin_p, cos_p = np.sin(prof.phi), np.cos(prof.phi)
    spread_h = prof.sigma * sin_p

    dk = np.subtract.outer(np.arange(geom.n_v), np.arange(geom.n_v)).T  # p - k
    r_v = np.exp(-0.5 * (prof.xi * a1) ** 2 * dk**2 * sin_t**2) * np.exp(
        1j * a1 * dk * cos_t
    )

    dl = np.subtract.outer(np.arange(geom.n_h), np.arange(geom.n_h)).T  # q - l
    horiz_phase = a2 * dl * sin_t
    tilt_coupling = prof.xi * a2 * dl * cos_t
    var_scale = tilt_coupling**2 * spread_h**2 + 1.0
    r_h = (
        np.exp(-(tilt_coupling**2 * cos_p**2 + (horiz_phase * spread_h) ** 2) / (2.0 * var_scale))
        / np.sqrt(var_scale)
        * np.exp(1j * horiz_phase * cos_p / var_scale)
    )
    return r_v, r_h


def build_spatial_correlation(
    geom: UpaGeometry, prof: UserAngularProfile
) -> SpatialCorrelation:
    """Bundle the full correlation, its domain factors and the cached PSD sqrt."""
    full = build_full_correlation(geom, prof)
    r_v, r_h = build_domain_correlations(geom, prof)
    return SpatialCorrelation(
        geometry=geom,
        profile=prof,
        full=full,
        vertical=r_v,
        horizontal=r_h,
        sqrt_full=hermitian_sqrt(full),
    )


def jakes_coefficient(carrier_hz: float, speed_mps: float, interval_s: float) -> float:
    """Temporal correlation J_0(2 pi f_D tau) for the given Doppler setup."""
    if carrier_hz < 0 or speed_mps < 0 or interval_s < 0:
        raise ValueError("carrier, speed and interval must all be >= 0")
    doppler_hz = speed_mps * carrier_hz / SPEED_OF_LIGHT_MPS
    return float(scipy.special.j0(2.0 * np.pi * doppler_hz * interval_s))


@dataclass(frozen=True)
class AngularRanges:
    """Half-open sampling ranges for the per-user angular profile fields.

    Defaults are the simulation setup: phi in [pi/6, 5pi/6), theta in
    [pi/12, pi/3), both spreads in [pi/18, pi/12).  ``eta`` is a degenerate
    range by default; temporal experiments overwrite it with the Jakes value.
    """

    phi: Tuple[float, float] = (np.pi / 6, 5 * np.pi / 6)
    theta: Tuple[float, float] = (np.pi / 12, np.pi / 3)
    sigma: Tuple[float, float] = (np.pi / 18, np.pi / 12)
    xi: Tuple[float, float] = (np.pi / 18, np.pi / 12)
    eta: Tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        for name in ("phi", "theta", "sigma", "xi", "eta"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"range for {name} has lo > hi: ({lo}, {hi})")

    def with_eta(self, eta: float) -> "AngularRanges":
        return AngularRanges(self.phi, self.theta, self.sigma, self.xi, (eta, eta))


def sample_profile(rng: np.random.Generator, ranges: AngularRanges) -> UserAngularProfile:
    """Draw one profile, each field uniform on its range (degenerate allowed)."""
    phi, theta, sigma, xi, eta = (
        float(rng.uniform(lo, hi))
        for lo, hi in (ranges.phi, ranges.theta, ranges.sigma, ranges.xi, ranges.eta)
    )
    return UserAngularProfile(phi=phi, theta=theta, sigma=sigma, xi=xi, eta=eta)


def _complex_gaussian(rng: np.random.Generator, n: int) -> np.ndarray:
    """i.i.d. circularly-symmetric CN(0, 1): real/imag each N(0, 1/2)."""
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)


def init_channel(corr: SpatialCorrelation, rng: np.random.Generator) -> ChannelTrajectory:
    """Draw the block-0 channel: sqrt(R) times a white CN(0, I) innovation."""
    current = corr.sqrt_full @ _complex_gaussian(rng, corr.geometry.n_p)
    return ChannelTrajectory(correlation=corr, current=current, block_index=0)


def evolve_channel(traj: ChannelTrajectory, rng: np.random.Generator) -> ChannelTrajectory:
    """Advance one fading block: eta * h + sqrt(1 - eta^2) * sqrt(R) * fresh noise."""
    eta = traj.profile.eta
    innovation = traj.correlation.sqrt_full @ _complex_gaussian(rng, traj.geometry.n_p)
    current = eta * traj.current + np.sqrt(max(1.0 - eta**2, 0.0)) * innovation
    return ChannelTrajectory(
        correlation=traj.correlation,
        current=current,
        block_index=traj.block_index + 1,
    )


def rng_stream(master_seed: int, *key: int) -> np.random.Generator:
    """Independent deterministic Philox stream for (master seed, *key).

    Every user x trial x fading-block combination gets its own stream, so
    results are bit-reproducible under any work distribution.
    """
    seq = np.random.SeedSequence((master_seed, *key))
    return np.random.Generator(np.random.Philox(seq))
