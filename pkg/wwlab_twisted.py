"""
Twisted (Wiener-Wintner) averages and certified suprema over the unit circle.

The degree-N polynomial p(lambda) = (1/N) sum_{n<=N} v_n lambda^n is
evaluated on M equispaced points with one zero-padded FFT per coordinate.
Bernstein's inequality |p'| <= N sup|p| turns the grid maximum into a
certified upper bound: sup|p| <= grid_max / (1 - pi N / M).
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.fft

from wwlab_core import (
    FLOAT64,
    UNIT_TOLERANCE,
    CVec,
    ContractError,
    OrbitSeq,
    RangeError,
    ResourceError,
)

logger = logging.getLogger(__name__)

DEFAULT_GRID_FACTOR = 8
MAX_GRID_SIZE = 1 << 26


@dataclass(frozen=True)
class CertifiedSup:
    """
    Two-sided bound on sup_{|lambda|=1} ||(1/N) sum_{n<=N} v_n lambda^n||.

    grid_max is attained at grid_argmax (a lower bound); certified_upper
    is a rigorous upper bound.
    """

    grid_max: float
    grid_argmax: complex
    certified_upper: float
    grid_size: int
    degree: int
    grid_index: int = 0
    offset: float = 0.0
    coordinate_maxima: tuple = ()

    @property
    def slack(self):
        return self.certified_upper - self.grid_max


def _check_unimodular(lam):
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > UNIT_TOLERANCE:
        raise ContractError(f"lambda = {lam} is not on the unit circle (|lambda| = {abs(lam)!r}).")
    return lam


def _float_values(v, N):
    if N < 1 or N > len(v):
        raise RangeError(f"N = {N} outside 1..{len(v)}.")
    return np.asarray(v.values[:N], dtype=np.complex128)


def _powers(lam, N):
    """lambda^n for n = 1..N as exp(i n arg lambda)."""
    return np.exp(1j * np.angle(lam) * np.arange(1, N + 1))


def twisted_average(v, lam, N):
    """
    The twisted average (1/N) sum_{n=1}^N v_n lambda^n.

    Summation is sequential left to right so the result does not depend
    on how numpy would block a pairwise sum.
    """
    lam = _check_unimodular(lam)
    vals = _float_values(v, N)
    terms = vals * _powers(lam, N)[:, None]
    return CVec.from_array(np.cumsum(terms, axis=0)[-1] / N)


def min_grid_size(N):
    return math.ceil(math.pi * N) + 2


def grid_sums(v, N, M, offset=0.0):
    """S[k] = sum_{n<=N} v_n e(n (offset + k/M)) for k = 0..M-1, shape (M, d)."""
    vals = _float_values(v, N)
    if M < N + 1:
        raise ContractError(f"Grid size {M} must exceed the degree {N}.")
    if M > MAX_GRID_SIZE:
        raise ResourceError(
            f"Grid size exceeds maximum limit of {MAX_GRID_SIZE} to prevent resource exhaustion."
        )
    if offset:
        vals = vals * np.exp(2j * np.pi * offset * np.arange(1, N + 1))[:, None]
    padded = np.zeros((M, vals.shape[1]), dtype=np.complex128)
    padded[1:N + 1] = vals
    return M * scipy.fft.ifft(padded, axis=0)


def sup_over_circle(v, N, M=None, offset=0.0):
    """
    Grid maximum and certified upper bound of the twisted-average norm.

    Parameters:
    -----------
    v : OrbitSeq
    N : int
        Degree / averaging horizon.
    M : int, optional
        Grid size, must exceed ceil(pi N) + 1. Default 8N.
    offset : float
        The grid is lambda_k = e(offset + k/M); any offset keeps the
        certificate valid and lets a known frequency sit on the grid.

    Returns:
    --------
    CertifiedSup
    """
    if M is None:
        M = DEFAULT_GRID_FACTOR * N
    # Security: Input validation
    if M < min_grid_size(N):
        raise ContractError(
            f"Grid size M = {M} too small for degree {N}; need M >= {min_grid_size(N)}."
        )
    S = grid_sums(v, N, M, offset) / N
    norms = np.linalg.norm(S, axis=1)
    k = int(np.argmax(norms))
    grid_max = float(norms[k])
    coord_max = np.max(np.abs(S), axis=0)
    loss = 1.0 - math.pi * N / M
    if S.shape[1] == 1:
        certified = grid_max / loss
    else:
        certified = float(np.sqrt(np.sum(coord_max ** 2))) / loss
    lam = complex(np.exp(2j * np.pi * (offset + k / M)))
    logger.debug("sup_over_circle: N=%d M=%d grid_max=%.6g certified=%.6g", N, M, grid_max, certified)
    return CertifiedSup(
        grid_max=grid_max,
        grid_argmax=lam,
        certified_upper=float(certified),
        grid_size=int(M),
        degree=int(N),
        grid_index=k,
        offset=float(offset),
        coordinate_maxima=tuple(float(c) for c in coord_max),
    )


def decay_profile(v, checkpoints, grid_factor=DEFAULT_GRID_FACTOR):
    """One CertifiedSup per checkpoint N (ascending, each <= len(v))."""
    checkpoints = [int(N) for N in checkpoints]
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise ContractError("Checkpoints must be strictly ascending.")
    if checkpoints and checkpoints[-1] > len(v):
        raise RangeError(f"Checkpoint {checkpoints[-1]} exceeds the orbit length {len(v)}.")
    return [sup_over_circle(v, N, grid_factor * N) for N in checkpoints]


def modulate(v, lam0):
    """The sequence (lambda0^n v_n)_n."""
    lam0 = _check_unimodular(lam0)
    vals = _float_values(v, len(v)) * _powers(lam0, len(v))[:, None]
    prov = dict(v.provenance)
    prov["modulation"] = lam0
    return OrbitSeq(vals, FLOAT64, prov)
