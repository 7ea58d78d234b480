"""The three CSI quantization schemes.

* Kronecker-product baseline: independent per-domain codeword searches on the
  channel matrix, reconstruction c_v kron conj(c_h).
* Block-wise noncoherent: length-L sub-vectors quantized independently under a
  single common phase rotation, solved by a phase-grid sweep plus alternating
  refinement.
* One-bit preferred domain: runs the block-wise quantizer on the channel and
  on its vertically re-indexed copy, feeds back whichever candidate matches
  the channel better plus one bit naming the winning domain.

Quantizers return unit-norm directions in the ORIGINAL antenna indexing; only
the channel direction is quantized, never its magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import UpaGeometry
from .codebooks import Codebook
from .linalg import kronecker

__all__ = [
    "HORIZONTAL",
    "NOT_APPLICABLE",
    "VERTICAL",
    "BlockQuantizerConfig",
    "QuantizedCsi",
    "domain_select_quantize",
    "fidelity",
    "inverse_reindex",
    "kronecker_quantize",
    "noncoherent_blockwise",
    "reindex_vertical",
    "reshape_to_matrix",
]

HORIZONTAL = "horizontal"
VERTICAL = "vertical"
NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class QuantizedCsi:
    """Unit-norm quantized channel direction plus bookkeeping.

    ``fidelity`` is |h^H direction|^2 / ||h||^2 against the source channel;
    ``domain_bit`` is the extra feedback bit of the preferred-domain scheme
    and :data:`NOT_APPLICABLE` for the other quantizers.
    """

    direction: np.ndarray
    fidelity: float
    feedback_bits: int
    domain_bit: str = NOT_APPLICABLE


@dataclass(frozen=True)
class BlockQuantizerConfig:
    """Block length L, the L-dim block codebook, and phase-search controls."""

    block_len: int
    block_codebook: Codebook
    phase_grid: int = 16
    refinement_rounds: int = 2

    def __post_init__(self):
        if self.block_len < 1:
            raise ValueError(f"block_len must be >= 1, got {self.block_len}")
        if self.phase_grid < 2:
            raise ValueError(f"phase_grid must be >= 2, got {self.phase_grid}")
        if self.refinement_rounds < 0:
            raise ValueError("refinement_rounds must be >= 0")
        if self.block_codebook.dim != self.block_len:
            raise ValueError(
                f"block codebook dimension {self.block_codebook.dim} does not "
                f"match block_len {self.block_len}"
            )


def fidelity(h: np.ndarray, direction: np.ndarray) -> float:
    """Chordal quality |h^H d|^2 / ||h||^2 of a unit-norm direction d."""
    return float(np.abs(np.vdot(h, direction)) ** 2 / np.vdot(h, h).real)


def reshape_to_matrix(h: np.ndarray, geom: UpaGeometry) -> np.ndarray:
    """Unstack the channel vector into its N_v x N_h antenna-grid matrix.

    Row k of the result is the k-th length-N_h sub-vector of h, matching the
    row-major antenna indexing.
    """
    h = np.asarray(h)
    if h.size != geom.n_p:
        raise ValueError(f"channel has {h.size} entries, geometry needs {geom.n_p}")
    return h.reshape(geom.n_v, geom.n_h)


def kronecker_quantize(
    h: np.ndarray, geom: UpaGeometry, cb_v: Codebook, cb_h: Codebook
) -> QuantizedCsi:
    """Independent exhaustive per-domain searches, product reconstruction.

    c_h maximizes ||H_mat c|| over the horizontal codebook, c_v maximizes
    ||c^H H_mat|| over the vertical one; the fed-back direction is
    c_v kron conj(c_h).  Ties break to the lowest codeword index.
    """
    if cb_v.dim != geom.n_v or cb_h.dim != geom.n_h:
        raise ValueError(
            f"codebook dims ({cb_v.dim}, {cb_h.dim}) do not match geometry "
            f"{geom.n_v}x{geom.n_h}"
        )
    h_mat = reshape_to_matrix(h, geom)
    # ||H c||^2 = c^H (H^H H) c and ||c^H H||^2 = c^H (H H^H) c: both searches
    # are quadratic forms in Hermitian Gram matrices, which the codebooks
    # score efficiently.
    idx_h = int(np.argmax(cb_h.quadratic_scores(h_mat.conj().T @ h_mat)))
    idx_v = int(np.argmax(cb_v.quadratic_scores(h_mat @ h_mat.conj().T)))
    direction = kronecker(cb_v[idx_v], cb_h[idx_h].conj())
    return QuantizedCsi(
        direction=direction,
        fidelity=fidelity(h, direction),
        feedback_bits=cb_v.bits + cb_h.bits,
        domain_bit=NOT_APPLICABLE,
    )


def _select_blocks(inner: np.ndarray, phase: float) -> np.ndarray:
    """Per-block codeword indices maximizing Re(e^{-j phase} h_n^H f)."""
    return np.argmax((np.exp(-1j * phase) * inner).real, axis=1)


def _alignment(inner: np.ndarray, selection: np.ndarray) -> complex:
    """Sum of the selected per-block inner products h_n^H f_n."""
    return complex(inner[np.arange(inner.shape[0]), selection].sum())


def noncoherent_blockwise(h: np.ndarray, cfg: BlockQuantizerConfig) -> QuantizedCsi:
    """Quantize length-L blocks under one common phase rotation.

    Sweeps a P-point phase grid (per grid phase: per-block argmax of the
    rotated real part, scored by |sum of selected inner products|), then runs
    up to T alternating refinement rounds: close the phase on the current
    selection, re-select, stop when the selection is stable.  The objective
    never decreases across refinement.

    The grid is referenced to the phase of the channel's strongest entry, so
    the selection (and hence the fidelity) is exactly invariant to a global
    phase rotation and positive scaling of h.
    """
    h = np.asarray(h, dtype=np.complex128)
    L = cfg.block_len
    if h.size % L:
        raise ValueError(f"block length {L} does not divide channel size {h.size}")
    n_blocks = h.size // L
    codebook = cfg.block_codebook
    canonical = h * np.exp(-1j * np.angle(h[np.argmax(np.abs(h))]))
    inner = canonical.reshape(n_blocks, L).conj() @ codebook.codewords.T  # [n, c] = h_n^H f_c

    best_score = -1.0
    best_sel = None
    for p in range(cfg.phase_grid):
        sel = _select_blocks(inner, 2.0 * np.pi * p / cfg.phase_grid)
        score = abs(_alignment(inner, sel))
        if score > best_score:
            best_score, best_sel = score, sel
    sel = best_sel

    for _ in range(cfg.refinement_rounds):
        refined = _select_blocks(inner, float(np.angle(_alignment(inner, sel))))
        if np.array_equal(refined, sel):
            break
        sel = refined

    direction = codebook.codewords[sel].reshape(-1) / np.sqrt(n_blocks)
    return QuantizedCsi(
        direction=direction,
        fidelity=fidelity(h, direction),
        feedback_bits=n_blocks * codebook.bits,
        domain_bit=NOT_APPLICABLE,
    )


@lru_cache(maxsize=None)
def _vertical_permutation(n_v: int, n_h: int, L: int) -> np.ndarray:
    """Fixed re-indexing map: output position -> original linear index.

    Output block n (length L) walks DOWN the array columns: it covers rows
    L*m(n)..L*(m(n)+1)-1 of column c(n) with c(n) = ceil(n L / N_v) and
    m(n) = (n-1) mod (N_v / L), i.e. the blocks tile the column-major
    flattening of the antenna grid.  The column-major form also covers array
    heights that are not multiples of L (blocks then straddle a column
    boundary), which the per-column formulas cannot express.
    """
    if (n_v * n_h) % L:
        raise ValueError(f"block length {L} does not divide array size {n_v * n_h}")
    rows = np.tile(np.arange(n_v), n_h)
    cols = np.repeat(np.arange(n_h), n_v)
    perm = rows * n_h + cols  # column-major walk over the row-major vector
    perm.flags.writeable = False
    return perm


def reindex_vertical(h: np.ndarray, geom: UpaGeometry, L: int) -> np.ndarray:
    """Rearrange the channel so length-L blocks run vertically down columns."""
    h = np.asarray(h)
    if h.size != geom.n_p:
        raise ValueError(f"channel has {h.size} entries, geometry needs {geom.n_p}")
    return h[_vertical_permutation(geom.n_v, geom.n_h, L)]


def inverse_reindex(ht: np.ndarray, geom: UpaGeometry, L: int) -> np.ndarray:
    """Undo :func:`reindex_vertical` (base-station-side reconstruction)."""
    ht = np.asarray(ht)
    if ht.size != geom.n_p:
        raise ValueError(f"vector has {ht.size} entries, geometry needs {geom.n_p}")
    out = np.empty_like(ht)
    out[_vertical_permutation(geom.n_v, geom.n_h, L)] = ht
    return out


def domain_select_quantize(
    h: np.ndarray, cfg: BlockQuantizerConfig, geom: UpaGeometry
) -> QuantizedCsi:
    """Block-wise quantization of both domain arrangements plus one choice bit.

    The horizontal candidate quantizes h as-is, the vertical candidate
    quantizes the re-indexed copy; whichever matches its input better wins
    (ties go horizontal) and the vertical winner is un-permuted back to the
    original antenna indexing before being returned.
    """
    horizontal = noncoherent_blockwise(h, cfg)
    tilde_h = reindex_vertical(h, geom, cfg.block_len)
    vertical = noncoherent_blockwise(tilde_h, cfg)

    bits = horizontal.feedback_bits + 1
    if horizontal.fidelity >= vertical.fidelity:
        return QuantizedCsi(
            direction=horizontal.direction,
            fidelity=horizontal.fidelity,
            feedback_bits=bits,
            domain_bit=HORIZONTAL,
        )
    return QuantizedCsi(
        direction=inverse_reindex(vertical.direction, geom, cfg.block_len),
        fidelity=vertical.fidelity,
        feedback_bits=bits,
        domain_bit=VERTICAL,
    )
