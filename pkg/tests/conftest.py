import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260825)


def rand_complex(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def rand_hermitian(rng, d, scale=1.0):
    g = rand_complex(rng, d)
    return scale * 0.5 * (g + g.conj().T)


def rand_density(rng, d):
    g = rand_complex(rng, d)
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def rand_pure(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def rand_unitary(rng, d):
    q, r = np.linalg.qr(rand_complex(rng, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))
