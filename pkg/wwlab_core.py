"""
Core numeric types for the Wiener-Wintner laboratory.

Holds the vector type for E = C^d, finite orbit prefixes, partial-sum
profiles and the Cesaro-space functionals that every other module uses.

Arithmetic models:
- exact-rational: Python Fractions (real-valued coordinates)
- fixed-point-128: points and phases are integers mod 2^128
- float64: numpy complex128 values
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

EXACT_RATIONAL = "exact-rational"
FIXED_POINT_128 = "fixed-point-128"
FLOAT64 = "float64"
ARITHMETIC_MODELS = (EXACT_RATIONAL, FIXED_POINT_128, FLOAT64)

FIXED_BITS = 128
FIXED_ONE = 1 << FIXED_BITS
FIXED_MASK = FIXED_ONE - 1
_FIXED_TO_FLOAT = 2.0 ** -FIXED_BITS

UNIT_TOLERANCE = 1e-12
MAX_FS_DEPTH = 20


class WWLabError(ValueError):
    """Base class for every error raised by the laboratory."""


class RangeError(WWLabError):
    """Requested index or horizon lies outside the available data."""


class ContractError(WWLabError):
    """A documented precondition of an operation was violated."""


class ResourceError(WWLabError):
    """A computation would exceed one of the configured caps."""


class ConfigError(WWLabError):
    """A scenario configuration could not be resolved."""


# --- fixed-point helpers -------------------------------------------------

def to_fixed(value):
    """
    Convert a number in [0, 1) (taken mod 1) to a 128-bit fixed-point integer.

    Ints are taken as already being fixed-point values. Strings are parsed
    with Fraction, so "1/4" and "0.25" are both exact.
    """
    if isinstance(value, (bool, np.bool_)):
        raise ContractError("A boolean is not a valid fixed-point value.")
    if isinstance(value, (int, np.integer)):
        return int(value) & FIXED_MASK
    if isinstance(value, str):
        value = Fraction(value)
    frac = Fraction(value)
    return math.floor(frac * FIXED_ONE) & FIXED_MASK


def fixed_to_float(value):
    """Float in [0, 1) nearest to the fixed-point value (correctly rounded)."""
    return float(int(value) & FIXED_MASK) * _FIXED_TO_FLOAT


def fixed_to_fraction(value):
    return Fraction(int(value) & FIXED_MASK, FIXED_ONE)


def fixed_array_to_float(values):
    """Vectorised fixed_to_float for an object array (or list) of ints."""
    arr = np.asarray(values, dtype=object)
    return arr.astype(np.float64) * _FIXED_TO_FLOAT


def fixed_sqrt2_minus_1():
    """floor((sqrt(2) - 1) * 2^128), computed with an exact integer square root."""
    return math.isqrt(2 << (2 * FIXED_BITS)) - FIXED_ONE


def fixed_e(phases):
    """e(t) = exp(2*pi*i*t) for fixed-point phases t (object array of ints)."""
    return np.exp(2j * np.pi * fixed_array_to_float(phases))


def e(x):
    """e(x) = exp(2*pi*i*x) for float input."""
    return np.exp(2j * np.pi * np.asarray(x, dtype=np.float64))


# --- vectors and sequences -----------------------------------------------

@dataclass(frozen=True)
class CVec:
    """An element of E = C^d with the Euclidean norm."""

    coords: tuple

    def __post_init__(self):
        if len(self.coords) < 1:
            raise ContractError("A CVec needs at least one coordinate.")
        object.__setattr__(self, "coords", tuple(complex(c) for c in self.coords))

    @classmethod
    def from_array(cls, arr):
        return cls(tuple(np.asarray(arr, dtype=np.complex128).ravel()))

    @property
    def dim(self):
        return len(self.coords)

    def norm(self):
        return float(np.linalg.norm(np.asarray(self.coords)))

    def as_array(self):
        return np.asarray(self.coords, dtype=np.complex128)

    def _check_dim(self, other):
        if self.dim != other.dim:
            raise ContractError(f"Dimension mismatch: {self.dim} vs {other.dim}.")

    def __add__(self, other):
        self._check_dim(other)
        return CVec.from_array(self.as_array() + other.as_array())

    def __sub__(self, other):
        self._check_dim(other)
        return CVec.from_array(self.as_array() - other.as_array())

    def scale(self, s):
        return CVec.from_array(complex(s) * self.as_array())

    def inner(self, other):
        """<self, other> = sum_j self_j * conj(other_j)."""
        self._check_dim(other)
        return complex(np.sum(self.as_array() * np.conj(other.as_array())))


@dataclass(frozen=True)
class OrbitSeq:
    """
    Finite prefix (v_1, ..., v_N) of a vector-valued orbit.

    values has shape (N, d): complex128 for the float and fixed-point models,
    an object array of Fractions for the exact-rational model.
    """

    values: np.ndarray
    exactness: str = FLOAT64
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.exactness not in ARITHMETIC_MODELS:
            raise ContractError(f"Unknown arithmetic model '{self.exactness}'.")
        if self.exactness == EXACT_RATIONAL:
            vals = np.asarray(self.values, dtype=object)
        else:
            vals = np.asarray(self.values, dtype=np.complex128)
        if vals.ndim == 1:
            vals = vals.reshape(-1, 1)
        if vals.ndim != 2 or vals.shape[0] < 1 or vals.shape[1] < 1:
            raise ContractError("An OrbitSeq needs shape (N, d) with N >= 1 and d >= 1.")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_vectors(cls, vectors, exactness=FLOAT64, provenance=None):
        dims = {v.dim for v in vectors}
        if len(dims) > 1:
            raise ContractError("Every value of an OrbitSeq must have the same dimension.")
        return cls(np.array([v.coords for v in vectors]), exactness, provenance or {})

    def __len__(self):
        return self.values.shape[0]

    @property
    def dim(self):
        return self.values.shape[1]

    @property
    def is_exact(self):
        return self.exactness == EXACT_RATIONAL

    def value(self, n):
        """v_n with 1-based n."""
        if not 1 <= n <= len(self):
            raise RangeError(f"Index {n} outside 1..{len(self)}.")
        return CVec(tuple(complex(c) for c in self.values[n - 1]))

    def prefix(self, N):
        _check_horizon(self, N)
        return OrbitSeq(self.values[:N], self.exactness, dict(self.provenance))

    def norms(self):
        """||v_n|| for n = 1..N; Fractions when exact and d == 1."""
        if self.is_exact:
            if self.dim == 1:
                return [abs(Fraction(row[0])) for row in self.values]
            return [math.sqrt(sum(Fraction(c) ** 2 for c in row)) for row in self.values]
        return np.linalg.norm(self.values, axis=1)


@dataclass(frozen=True)
class PartialSumProfile:
    """Running sums V[n] = v_1 + ... + v_n, n = 1..N, and max ||V[n]||."""

    V: np.ndarray
    maxnorm: float
    exactness: str = FLOAT64

    def norms(self):
        if self.exactness == EXACT_RATIONAL:
            return [_exact_norm(row) for row in self.V]
        return np.linalg.norm(self.V, axis=1)


def _exact_norm(row):
    sq = sum(Fraction(c) ** 2 for c in row)
    if len(row) == 1:
        return abs(Fraction(row[0]))
    return math.sqrt(sq)


def _check_horizon(seq, N):
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise RangeError("N must be a positive integer.")
    if N > len(seq):
        raise RangeError(f"N = {N} exceeds the sequence length {len(seq)}.")


# --- Cesaro functionals --------------------------------------------------

def cesaro_norm(seq, N):
    """
    Finite Cesaro norm max_{1<=M<=N} (1/M) sum_{n<=M} ||v_n||.

    Parameters:
    -----------
    seq : OrbitSeq
        Sequence prefix.
    N : int
        Horizon, 1 <= N <= len(seq).

    Returns:
    --------
    float (Fraction for exact one-dimensional data)
    """
    _check_horizon(seq, N)
    norms = seq.norms()[:N]
    if seq.is_exact:
        best, total = Fraction(0), Fraction(0)
        for M, r in enumerate(norms, start=1):
            total += r
            best = max(best, total / M)
        return best
    means = np.cumsum(norms) / np.arange(1, N + 1)
    return float(np.max(means))


def clip(v, M):
    """Radial clip v * min(1, M/||v||) of a CVec."""
    if M < 0:
        raise ContractError("Clip level M must be nonnegative.")
    r = v.norm()
    if r <= M:
        return v
    return v.scale(M / r)


def dist_to_bounded(seq, M, N):
    """
    (1/N) sum_{n<=N} ||v_n - clip_M(v_n)||, the finite distance to sequences
    bounded by M. Since v - clip_M(v) has norm max(0, ||v|| - M) this is
    evaluated without forming the clipped vectors.
    """
    if M < 0:
        raise ContractError("Clip level M must be nonnegative.")
    _check_horizon(seq, N)
    norms = seq.norms()[:N]
    if seq.is_exact and isinstance(M, (int, Fraction)):
        return sum((max(Fraction(0), r - M) for r in norms), Fraction(0)) / N
    excess = np.maximum(np.asarray(norms, dtype=np.float64) - float(M), 0.0)
    return float(np.sum(excess) / N)


def approximation_profile(seq, N, levels):
    """dist_to_bounded over a ladder of clip levels: [(M, distance), ...]."""
    return [(M, dist_to_bounded(seq, M, N)) for M in sorted(levels)]


def partial_sums(seq):
    """Running sums in the sequence's own arithmetic model (left to right)."""
    if seq.is_exact:
        V = np.empty(seq.values.shape, dtype=object)
        acc = [Fraction(0)] * seq.dim
        for n, row in enumerate(seq.values):
            acc = [a + Fraction(c) for a, c in zip(acc, row)]
            V[n] = acc
        maxnorm = max(_exact_norm(row) for row in V)
        return PartialSumProfile(V, maxnorm, seq.exactness)
    V = np.cumsum(seq.values, axis=0)
    maxnorm = float(np.max(np.linalg.norm(V, axis=1)))
    return PartialSumProfile(V, maxnorm, seq.exactness)


def shift_sequence(seq, h=1):
    """Left shift S^h: (S^h x)_n = x_{n+h}, keeping the remaining prefix."""
    if not isinstance(h, (int, np.integer)) or h < 0:
        raise RangeError("Shift amount must be a nonnegative integer.")
    if h >= len(seq):
        raise RangeError(f"Cannot shift a length-{len(seq)} prefix by {h}.")
    prov = dict(seq.provenance)
    prov["shift"] = prov.get("shift", 0) + int(h)
    return OrbitSeq(seq.values[h:], seq.exactness, prov)


def same_dimension(*seqs):
    dims = {s.dim for s in seqs}
    if len(dims) > 1:
        raise ContractError(f"Mixed dimensions {sorted(dims)} in one experiment.")
    return dims.pop()


def finite_sums(generators, depth):
    """Sorted distinct sums over nonempty subsets of the first depth generators."""
    if depth < 1:
        raise ContractError("depth must be at least 1.")
    if depth > MAX_FS_DEPTH:
        raise ResourceError(
            f"depth exceeds maximum limit of {MAX_FS_DEPTH} to prevent resource exhaustion."
        )
    gens = [int(g) for g in generators][:depth]
    if len(gens) < depth:
        raise ContractError(f"Need {depth} generators, got {len(gens)}.")
    if min(gens) < 1:
        raise ContractError("Generators must be positive integers.")
    sums = {0}
    for g in gens:
        sums |= {s + g for s in sums}
    sums.discard(0)
    return sorted(sums)
