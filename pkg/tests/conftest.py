import numpy as np
from hypothesis import HealthCheck, settings

from pptwitness.bipartite import Subspace

settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def random_hermitian(rng, n, scale=1.0):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (A + A.conj().T) / 2


def random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    G = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    return G @ G.conj().T


def random_density(rng, n, rank=None):
    M = random_psd(rng, n, rank)
    return M / np.trace(M).real


def random_pure(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_subspace(rng, dA, dB, r):
    V = rng.normal(size=(dA * dB, r)) + 1j * rng.normal(size=(dA * dB, r))
    return Subspace.span(V, dA, dB)


BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)
