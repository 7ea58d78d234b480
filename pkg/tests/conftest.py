import numpy as np
import pytest

from upafeedback import (
    UpaGeometry,
    build_spatial_correlation,
    sample_profile,
)
from upafeedback.channel import AngularRanges


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)


def random_psd(rng, n):
    """Random Hermitian PSD matrix built as A A^H."""
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a @ a.conj().T


def complex_gaussian(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def correlated_channel(rng, geom: UpaGeometry, eta: float = 1.0):
    """One channel draw from the evaluation-setup angular distribution."""
    prof = sample_profile(rng, AngularRanges().with_eta(eta))
    corr = build_spatial_correlation(geom, prof)
    return corr.sqrt_full @ complex_gaussian(rng, geom.n_p)
