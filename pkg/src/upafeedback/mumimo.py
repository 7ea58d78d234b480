"""Zero-forcing multiuser precoding and sum-rate evaluation.

Beamformers are computed from the users' quantized CSI directions; rates are
evaluated against the true channels under equal power allocation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .linalg import gram_solve

__all__ = [
    "PrecodingResult",
    "RateReport",
    "evaluate_rates",
    "full_rank_gate",
    "zf_precoder",
]

DEFAULT_GATE_TOL = 1e-6


@dataclass(frozen=True)
class PrecodingResult:
    """ZF beamformers (columns, unit norm when admitted) plus the gate outcome."""

    beamformers: Optional[np.ndarray]
    admitted: bool


@dataclass(frozen=True)
class RateReport:
    """Per-user linear SINRs and the resulting sum rate in bps/Hz."""

    per_user_sinr: np.ndarray
    sum_rate_bps_hz: float


def _as_columns(vectors: Sequence[np.ndarray]) -> np.ndarray:
    mat = np.stack([np.asarray(v, dtype=np.complex128).ravel() for v in vectors], axis=1)
    return mat


def full_rank_gate(quantized_dirs: Sequence[np.ndarray], tol: float = DEFAULT_GATE_TOL) -> bool:
    """True iff the composite quantized matrix is numerically full column rank.

    The test is sigma_min > tol * sigma_max; realizations failing it are
    discarded by the experiment loop (a minimal scheduling stand-in).
    """
    mat = _as_columns(quantized_dirs)
    n_p, k = mat.shape
    if k > n_p:
        raise ValueError(f"more users ({k}) than antennas ({n_p})")
    sv = np.linalg.svd(mat, compute_uv=False)
    return bool(sv[-1] > tol * sv[0])


def zf_precoder(
    quantized_dirs: Sequence[np.ndarray],
    tol: float = DEFAULT_GATE_TOL,
    normalize_columns: bool = True,
) -> PrecodingResult:
    """Zero-forcing beamformers from the quantized directions.

    Columns of Hq (Hq^H Hq)^{-1} are rescaled to unit norm by default (the
    per-user beams are declared unit norm in the signal model; rescaling
    preserves the zero-forcing nulls).  ``normalize_columns=False`` keeps the
    raw pseudo-inverse columns for studying the alternative convention.
    Returns ``admitted=False`` when the rank gate rejects the realization.
    """
    mat = _as_columns(quantized_dirs)
    if not full_rank_gate(quantized_dirs, tol):
        return PrecodingResult(beamformers=None, admitted=False)
    w = gram_solve(mat)
    if normalize_columns:
        w = w / np.linalg.norm(w, axis=0, keepdims=True)
    return PrecodingResult(beamformers=w, admitted=True)


def evaluate_rates(
    true_channels: Sequence[np.ndarray], beamformers: np.ndarray, rho: float
) -> RateReport:
    """Per-user SINR and sum rate under equal power allocation.

    SINR_i = |h_i^H w_i|^2 / (sum_{u != i} |h_i^H w_u|^2 + K / rho) with rho
    the linear transmit SNR; sum rate is sum of log2(1 + SINR_i).
    """
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    h = _as_columns(true_channels)
    k = h.shape[1]
    if beamformers.shape != h.shape:
        raise ValueError(
            f"beamformer shape {beamformers.shape} does not match channels {h.shape}"
        )
    cross = h.conj().T @ beamformers  # [i, u] = h_i^H w_u
    signal = np.abs(np.diag(cross)) ** 2
    interference = np.sum(np.abs(cross) ** 2, axis=1) - signal
    sinr = signal / (interference + k / rho)
    return RateReport(
        per_user_sinr=sinr,
        sum_rate_bps_hz=float(np.log2(1.0 + sinr).sum()),
    )
