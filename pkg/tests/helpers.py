"""Shared strategies and oracles for the test suite."""
import numpy as np
from hypothesis import strategies as st

from gruss_lab.rng import SplitMix64

seeds = st.integers(0, 2**63 - 1)
dims = st.integers(1, 4)


def cgauss(seed, shape):
    return SplitMix64(seed).complex_normal(shape)


def np_rng(seed):
    """numpy Generator, used where an oracle should not share our PRNG."""
    return np.random.default_rng(seed)


def haar_scipy(dim, seed):
    from scipy.stats import unitary_group
    return unitary_group.rvs(dim, random_state=seed) if dim > 1 else np.array([[1.0 + 0j]])


def exact_svd_example():
    """``M`` with singular values ``2 + 2 sqrt3, 2, 2 sqrt3 - 2``."""
    M = np.array([[-2, 0, 0], [-2, -4, 0], [2, 2, -2]], dtype=complex)
    s = np.array([2 + 2 * np.sqrt(3), 2.0, 2 * np.sqrt(3) - 2])
    return M, s
