"""Experiment configuration and its flat key-value file format.

Config files are plain text, one ``key = value`` pair per line, ``#`` starts
a comment.  Lists are comma separated; geometries use the ``NvxNh`` form.
Every key has a default matching the evaluation setup, so an empty file is a
valid (if slow) configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Tuple

import numpy as np

from .channel import AngularRanges, UpaGeometry

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "parse_config_text"]

SCHEME_KRONECKER = "kronecker"
SCHEME_BLOCKWISE = "blockwise"
SCHEME_DOMAIN = "blockwise+domain-bit"
KNOWN_SCHEMES = (SCHEME_KRONECKER, SCHEME_BLOCKWISE, SCHEME_DOMAIN)


class ConfigError(ValueError):
    """Invalid configuration key, value or invariant."""


@dataclass(frozen=True)
class ExperimentConfig:
    geometries: Tuple[Tuple[int, int], ...] = ((4, 8), (6, 8), (8, 8))
    k_users: int = 10
    rho_db: float = 10.0
    trials: int = 2000
    fading_blocks: int = 1
    schemes: Tuple[str, ...] = (SCHEME_KRONECKER, SCHEME_BLOCKWISE, SCHEME_DOMAIN)
    block_len: int = 4
    block_bits: int = 2
    phase_grid: int = 16
    refinement_rounds: int = 2
    d1_wavelengths: float = 0.9
    d2_wavelengths: float = 0.5
    carrier_hz: float = 2.5e9
    speed_mps: float = 3.0 / 3.6
    interval_s: float = 5e-3
    phi_range: Tuple[float, float] = (np.pi / 6, 5 * np.pi / 6)
    theta_range: Tuple[float, float] = (np.pi / 12, np.pi / 3)
    sigma_range: Tuple[float, float] = (np.pi / 18, np.pi / 12)
    xi_range: Tuple[float, float] = (np.pi / 18, np.pi / 12)
    master_seed: int = 0
    output: str = "results.csv"

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.fading_blocks < 1:
            raise ConfigError(f"fading_blocks must be >= 1, got {self.fading_blocks}")
        if self.k_users < 1:
            raise ConfigError(f"k_users must be >= 1, got {self.k_users}")
        if self.d1_wavelengths <= 0 or self.d2_wavelengths <= 0:
            raise ConfigError("antenna spacings must be positive")
        if self.block_len < 1:
            raise ConfigError(f"block_len must be >= 1, got {self.block_len}")
        if self.block_bits < 0:
            raise ConfigError(f"block_bits must be >= 0, got {self.block_bits}")
        if self.phase_grid < 2:
            raise ConfigError(f"phase_grid must be >= 2, got {self.phase_grid}")
        if self.refinement_rounds < 0:
            raise ConfigError("refinement_rounds must be >= 0")
        if not self.geometries:
            raise ConfigError("at least one geometry is required")
        if not self.schemes:
            raise ConfigError("at least one scheme is required")
        for scheme in self.schemes:
            if scheme not in KNOWN_SCHEMES:
                raise ConfigError(
                    f"unknown scheme {scheme!r}; expected one of {KNOWN_SCHEMES}"
                )
        if not np.isfinite(self.rho_db):
            raise ConfigError(f"rho_db must be finite, got {self.rho_db}")
        for n_v, n_h in self.geometries:
            if n_v < 1 or n_h < 1:
                raise ConfigError(f"bad geometry {n_v}x{n_h}: counts must be >= 1")
            if self.k_users > n_v * n_h:
                raise ConfigError(
                    f"k_users={self.k_users} exceeds N_p={n_v * n_h} for {n_v}x{n_h}"
                )
            if (n_v * n_h) % self.block_len:
                raise ConfigError(
                    f"block_len={self.block_len} does not divide N_p={n_v * n_h}"
                )
        for name in ("phi_range", "theta_range", "sigma_range", "xi_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ConfigError(f"{name} has lo > hi: ({lo}, {hi})")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be non-negative")
        if self.carrier_hz < 0 or self.speed_mps < 0 or self.interval_s < 0:
            raise ConfigError("carrier_hz, speed_mps and interval_s must be >= 0")

    @property
    def rho_linear(self) -> float:
        return 10.0 ** (self.rho_db / 10.0)

    def geometry(self, n_v: int, n_h: int) -> UpaGeometry:
        return UpaGeometry(n_v, n_h, self.d1_wavelengths, self.d2_wavelengths)

    def angular_ranges(self, eta: float = 1.0) -> AngularRanges:
        return AngularRanges(
            phi=self.phi_range,
            theta=self.theta_range,
            sigma=self.sigma_range,
            xi=self.xi_range,
            eta=(eta, eta),
        )

    def override(self, **kwargs) -> "ExperimentConfig":
        return replace(self, **kwargs)


def _parse_geometry(token: str) -> Tuple[int, int]:
    parts = token.lower().split("x")
    if len(parts) != 2:
        raise ConfigError(f"bad geometry {token!r}; expected like 4x8")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ConfigError(f"bad geometry {token!r}") from exc


def _parse_range(value: str) -> Tuple[float, float]:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"bad range {value!r}; expected 'lo, hi'")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ConfigError(f"bad range {value!r}") from exc


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse the flat key-value format into an :class:`ExperimentConfig`."""
    known = {f.name: f for f in fields(ExperimentConfig)}
    updates = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            if key == "geometries":
                updates[key] = tuple(
                    _parse_geometry(tok.strip()) for tok in value.split(",") if tok.strip()
                )
            elif key == "schemes":
                updates[key] = tuple(tok.strip() for tok in value.split(",") if tok.strip())
            elif key.endswith("_range"):
                updates[key] = _parse_range(value)
            elif key == "output":
                updates[key] = value
            elif key in ("k_users", "trials", "fading_blocks", "block_len", "block_bits",
                         "phase_grid", "refinement_rounds", "master_seed"):
                updates[key] = int(value)
            else:
                updates[key] = float(value)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    cfg = ExperimentConfig(**updates)
    cfg.validate()
    return cfg


def load_config(path: str) -> ExperimentConfig:
    """Read and validate a config file; raises ConfigError / OSError."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())
