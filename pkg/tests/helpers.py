"""Random instances shared by the test modules."""

import numpy as np

from qinfo.channels import KrausChannel
from qinfo.experiment import Psm


def random_density(dim, rng, rank=None):
    rank = rank or dim
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim, rng):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_isometry(dim_in, dim_out, rng):
    z = rng.standard_normal((dim_out, dim_in)) + 1j * rng.standard_normal((dim_out, dim_in))
    q, _ = np.linalg.qr(z)
    return q


def random_channel(dim_in, dim_out, n_kraus, rng):
    w = random_isometry(dim_in, dim_out * n_kraus, rng)
    return KrausChannel(tuple(w.reshape(n_kraus, dim_out, dim_in)))


def random_psm(dim, n_outcomes, rng, kraus_per_outcome=2):
    """General PSM: split a random isometry into outcomes, then reweight."""
    k = n_outcomes * kraus_per_outcome
    w = random_isometry(dim, dim * k, rng).reshape(n_outcomes, kraus_per_outcome, dim, dim)
    mu = rng.uniform(0.2, 1.0, n_outcomes)
    outs = [(a, float(mu[a]), tuple(w[a] / np.sqrt(mu[a]))) for a in range(n_outcomes)]
    return Psm(tuple(outs))


def diagonal_joint(p):
    p = np.asarray(p, dtype=float)
    return np.diag(p / p.sum()).astype(complex)
