"""Limited-feedback FDD massive MIMO link simulator for uniform planar arrays.

Building blocks: UPA spatial correlation channels with Gauss-Markov temporal
evolution, oversampled DFT codebooks, three CSI quantizers (Kronecker-product,
block-wise noncoherent, and block-wise with a one-bit preferred-domain
selector), zero-forcing multiuser rate evaluation, and a seeded Monte-Carlo
experiment harness with CSV output.
"""

from .channel import (
    AngularRanges,
    ChannelTrajectory,
    SpatialCorrelation,
    UpaGeometry,
    UserAngularProfile,
    build_domain_correlations,
    build_full_correlation,
    build_spatial_correlation,
    evolve_channel,
    init_channel,
    jakes_coefficient,
    rng_stream,
    sample_profile,
)
from .codebooks import Codebook, dft_codebook
from .config import ConfigError, ExperimentConfig, load_config
from .harness import (
    ResultRow,
    emit_csv,
    read_csv,
    run_snapshot_experiment,
    run_temporal_experiment,
)
from .linalg import gram_solve, hermitian_sqrt, kronecker, min_singular_value
from .mumimo import PrecodingResult, RateReport, evaluate_rates, full_rank_gate, zf_precoder
from .quantizers import (
    HORIZONTAL,
    NOT_APPLICABLE,
    VERTICAL,
    BlockQuantizerConfig,
    QuantizedCsi,
    domain_select_quantize,
    inverse_reindex,
    kronecker_quantize,
    noncoherent_blockwise,
    reindex_vertical,
    reshape_to_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AngularRanges",
    "BlockQuantizerConfig",
    "ChannelTrajectory",
    "Codebook",
    "ConfigError",
    "ExperimentConfig",
    "HORIZONTAL",
    "NOT_APPLICABLE",
    "PrecodingResult",
    "QuantizedCsi",
    "RateReport",
    "ResultRow",
    "SpatialCorrelation",
    "UpaGeometry",
    "UserAngularProfile",
    "VERTICAL",
    "build_domain_correlations",
    "build_full_correlation",
    "build_spatial_correlation",
    "domain_select_quantize",
    "dft_codebook",
    "emit_csv",
    "evaluate_rates",
    "evolve_channel",
    "full_rank_gate",
    "gram_solve",
    "hermitian_sqrt",
    "init_channel",
    "inverse_reindex",
    "jakes_coefficient",
    "kronecker",
    "kronecker_quantize",
    "load_config",
    "min_singular_value",
    "noncoherent_blockwise",
    "read_csv",
    "reindex_vertical",
    "reshape_to_matrix",
    "rng_stream",
    "run_snapshot_experiment",
    "run_temporal_experiment",
    "sample_profile",
    "zf_precoder",
]
