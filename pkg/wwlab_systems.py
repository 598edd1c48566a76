"""
Point-orbit generators for the measure-preserving systems of the lab.

Irrational rotations run in 128-bit fixed point, so an orbit step is an
exact integer addition. The doubling map is realised as a Bernoulli
bitstream: the point after n steps is read off bits n+1, n+2, ... of a
seeded stream, so no precision is lost along the orbit.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.stats import qmc

from wwlab_core import (
    FIXED_MASK,
    FIXED_ONE,
    FIXED_POINT_128,
    FLOAT64,
    ContractError,
    OrbitSeq,
    RangeError,
    fixed_array_to_float,
    fixed_e,
    fixed_to_float,
    to_fixed,
)

logger = logging.getLogger(__name__)

MIN_PRECISION_BITS = 53
MAX_PRECISION_BITS = 256
MAX_ORBIT_LENGTH = 1 << 24
MAX_DEGREE = 1 << 12
DEFAULT_SAMPLE_POINTS = 32
ABS_INTEGRAL_QUADRATURE = 1 << 16


MAP_KINDS = ("rotation", "doubling", "identity")


# --- states -------------------------------------------------------------

@dataclass(frozen=True)
class MapSpec:
    """A measure-preserving map: rotation by alpha, doubling, or identity."""

    kind: str
    alpha: int = 0
    precision_bits: int = 64

    def __post_init__(self):
        if self.kind not in MAP_KINDS:
            raise ContractError(f"Unknown map '{self.kind}'; expected one of {MAP_KINDS}.")
        if self.precision_bits < MIN_PRECISION_BITS:
            raise ContractError(f"precision_bits must be at least {MIN_PRECISION_BITS}.")
        object.__setattr__(self, "alpha", to_fixed(self.alpha))

    @classmethod
    def rotation(cls, alpha):
        return cls("rotation", alpha)

    @classmethod
    def doubling(cls, precision_bits=64):
        return cls("doubling", 0, precision_bits)

    @classmethod
    def identity(cls):
        return cls("identity")


@dataclass(frozen=True)
class RotationState:
    """Point x and angle alpha of the rotation x -> x + alpha (mod 1), in fixed point."""

    x: int
    alpha: int

    def __post_init__(self):
        object.__setattr__(self, "x", to_fixed(self.x))
        object.__setattr__(self, "alpha", to_fixed(self.alpha))

    def step(self):
        return RotationState((self.x + self.alpha) & FIXED_MASK, self.alpha)

    def advance(self, n):
        return RotationState((self.x + n * self.alpha) & FIXED_MASK, self.alpha)

    def point_float(self):
        return fixed_to_float(self.x)


@dataclass(frozen=True)
class BernoulliState:
    """
    Deterministic bitstream b_1 b_2 ... read from position offset + 1.

    The stream is drawn from numpy's PCG64 generator by seed, or is the
    periodic repetition of pattern when one is given. Any prefix is
    independent of how much of the stream is requested later.
    """

    seed: int = 0
    offset: int = 0
    pattern: tuple = field(default=None)

    def __post_init__(self):
        if self.offset < 0:
            raise ContractError("BernoulliState offset must be nonnegative.")
        if self.pattern is not None:
            pat = tuple(int(b) for b in self.pattern)
            if not pat or any(b not in (0, 1) for b in pat):
                raise ContractError("Bit pattern must be a nonempty tuple of 0/1.")
            object.__setattr__(self, "pattern", pat)

    def shift(self, n=1):
        return BernoulliState(self.seed, self.offset + n, self.pattern)

    def bits(self, start, count):
        """Bits b_start .. b_{start+count-1} (1-based) of this state as uint8."""
        if start < 1 or count < 0:
            raise RangeError("Bit positions start at 1 and count must be nonnegative.")
        first = self.offset + start - 1
        stop = first + count
        if self.pattern is not None:
            pat = np.asarray(self.pattern, dtype=np.uint8)
            idx = np.arange(first, stop) % len(pat)
            return pat[idx]
        words = max(1, -(-stop // 64))
        raw = np.random.PCG64(self.seed).random_raw(words).astype("<u8")
        stream = np.unpackbits(raw.view(np.uint8))
        return stream[first:stop]

    def point(self, precision_bits=64):
        """0.b_1 b_2 ... truncated to precision_bits, as a float."""
        b = self.bits(1, precision_bits).astype(np.float64)
        return float(b @ (0.5 ** np.arange(1, precision_bits + 1)))


# --- observables ----------------------------------------------------------

class Observable:
    """
    Trigonometric polynomial f(x) = sum_j c_j e(jx) with values in C^d.

    Each coordinate has its own coefficient table; internally the union
    of frequencies is stored once with a (len(freqs), d) coefficient matrix.
    """

    def __init__(self, tables):
        # Security: Input validation
        if isinstance(tables, dict):
            tables = [tables]
        if len(tables) < 1:
            raise ContractError("An observable needs at least one coordinate table.")
        freqs = sorted({int(j) for table in tables for j in table})
        if freqs and max(abs(j) for j in freqs) > MAX_DEGREE:
            raise ContractError(
                f"Degree exceeds maximum limit of {MAX_DEGREE} to prevent resource exhaustion."
            )
        coeffs = np.zeros((len(freqs), len(tables)), dtype=np.complex128)
        index = {j: i for i, j in enumerate(freqs)}
        for c, table in enumerate(tables):
            for j, value in table.items():
                coeffs[index[int(j)], c] = complex(value)
        keep = np.any(coeffs != 0, axis=1)
        self.freqs = tuple(j for j, k in zip(freqs, keep) if k)
        self.coeffs = coeffs[keep]
        self.dim = len(tables)

    @classmethod
    def character(cls, j=1, dim=1, amplitude=1.0):
        """amplitude * e(j x) in every coordinate."""
        return cls([{j: amplitude} for _ in range(dim)])

    @classmethod
    def constant(cls, value=1.0, dim=1):
        return cls([{0: value} for _ in range(dim)])

    @classmethod
    def random(cls, rng, degree=4, dim=1, mean_zero=False):
        """Gaussian coefficients on frequencies -degree..degree."""
        tables = []
        for _ in range(dim):
            table = {}
            for j in range(-degree, degree + 1):
                if mean_zero and j == 0:
                    continue
                table[j] = complex(rng.standard_normal(), rng.standard_normal())
            tables.append(table)
        return cls(tables)

    @property
    def degree(self):
        return max((abs(j) for j in self.freqs), default=0)

    @property
    def mean_zero(self):
        return 0 not in self.freqs

    def coefficient(self, j):
        """Coefficient vector (length d) at frequency j."""
        if j in self.freqs:
            return self.coeffs[self.freqs.index(j)]
        return np.zeros(self.dim, dtype=np.complex128)

    def coefficient_map(self):
        return {j: self.coeffs[i] for i, j in enumerate(self.freqs)}

    def evaluate(self, xs):
        """Values at float points, shape (len(xs), d)."""
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        if not self.freqs:
            return np.zeros((xs.size, self.dim), dtype=np.complex128)
        basis = np.exp(2j * np.pi * np.outer(xs, np.asarray(self.freqs, dtype=np.float64)))
        return basis @ self.coeffs

    def evaluate_fixed(self, points):
        """Values at fixed-point points; each phase j*x is reduced exactly mod 1."""
        pts = np.asarray(points, dtype=object).ravel()
        out = np.zeros((pts.size, self.dim), dtype=np.complex128)
        for i, j in enumerate(self.freqs):
            phases = (pts * j) & FIXED_MASK
            out += np.outer(fixed_e(phases), self.coeffs[i])
        return out

    def sup_norm(self):
        """Upper bound sum_j ||c_j|| on max_x ||f(x)||."""
        return float(np.sum(np.linalg.norm(self.coeffs, axis=1)))

    def abs_integral(self):
        """
        Integral of ||f(x)|| over [0, 1].

        Exact when every coordinate is a single monomial (then ||f|| is
        constant); otherwise a periodic rectangle rule on 2^16 points.
        """
        if not self.freqs:
            return 0.0
        if all(np.count_nonzero(self.coeffs[:, c]) <= 1 for c in range(self.dim)):
            return float(np.linalg.norm(self.coeffs))
        xs = np.arange(ABS_INTEGRAL_QUADRATURE) / ABS_INTEGRAL_QUADRATURE
        return float(np.mean(np.linalg.norm(self.evaluate(xs), axis=1)))

    def __repr__(self):
        return f"Observable(dim={self.dim}, freqs={self.freqs})"


class StepObservable:
    """
    Piecewise-constant observable: value[i] on [breaks[i], breaks[i+1]).

    Breakpoints are exact Fractions in [0, 1] starting at 0 and ending at 1.
    """

    def __init__(self, breaks, values):
        # Security: Input validation
        breaks = [Fraction(b) for b in breaks]
        if len(breaks) < 2 or breaks[0] != 0 or breaks[-1] != 1:
            raise ContractError("Step breakpoints must run from 0 to 1.")
        if any(a >= b for a, b in zip(breaks, breaks[1:])):
            raise ContractError("Step breakpoints must be strictly increasing.")
        vals = np.asarray(values, dtype=np.complex128)
        if vals.ndim == 1:
            vals = vals.reshape(-1, 1)
        if vals.shape[0] != len(breaks) - 1:
            raise ContractError("Need one value per step interval.")
        self.breaks = tuple(breaks)
        self.values = vals
        self.dim = vals.shape[1]
        self._fixed_breaks = [to_fixed(b) if b < 1 else FIXED_ONE for b in breaks]
        self._float_breaks = np.array([float(b) for b in breaks])

    @classmethod
    def indicator(cls, a, b, dim=1):
        """Indicator of [a, b); the endpoint b only matters on a null set."""
        a, b = Fraction(a), Fraction(b)
        if not 0 <= a < b <= 1:
            raise ContractError("Indicator needs 0 <= a < b <= 1.")
        breaks, values = [Fraction(0)], []
        if a > 0:
            breaks.append(a)
            values.append([0.0] * dim)
        if b < 1:
            breaks.append(b)
            values.append([1.0] * dim)
            values.append([0.0] * dim)
        else:
            values.append([1.0] * dim)
        breaks.append(Fraction(1))
        return cls(breaks, values)

    @property
    def mean_zero(self):
        lengths = np.array([float(b - a) for a, b in zip(self.breaks, self.breaks[1:])])
        return bool(np.allclose(lengths @ self.values, 0.0))

    def _interval_index(self, positions):
        idx = positions - 1
        return np.clip(idx, 0, len(self.breaks) - 2)

    def evaluate(self, xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        pos = np.searchsorted(self._float_breaks, xs, side="right")
        return self.values[self._interval_index(pos)]

    def evaluate_fixed(self, points):
        pts = np.asarray(points, dtype=object).ravel()
        pos = np.zeros(pts.size, dtype=np.int64)
        for b in self._fixed_breaks:
            pos += (pts >= b).astype(bool)
        return self.values[self._interval_index(pos)]

    def sup_norm(self):
        return float(np.max(np.linalg.norm(self.values, axis=1)))

    def abs_integral(self):
        """Exact Fraction when every value is a real multiple of a 0/1 vector, else float."""
        norms = np.linalg.norm(self.values, axis=1)
        lengths = [b - a for a, b in zip(self.breaks, self.breaks[1:])]
        if all(float(n).is_integer() for n in norms):
            return sum((L * int(n) for L, n in zip(lengths, norms)), Fraction(0))
        return float(sum(float(L) * n for L, n in zip(lengths, norms)))

    def __repr__(self):
        return f"StepObservable(breaks={[str(b) for b in self.breaks]}, dim={self.dim})"


def evaluate_at(obs, points):
    """Dispatch on point representation: object arrays are fixed-point."""
    points = np.asarray(points)
    if points.dtype == object:
        return obs.evaluate_fixed(points)
    return obs.evaluate(points)


# --- orbits ---------------------------------------------------------------

def rotation_points(x0, alpha, N, start=1):
    """Fixed-point orbit points x0 + n*alpha (mod 1) for n = start..start+N-1."""
    x0, alpha = to_fixed(x0), to_fixed(alpha)
    n = np.arange(start, start + N, dtype=object)
    return (n * alpha + x0) & FIXED_MASK


def rotation_points_float(x0, alpha, N, start=1):
    """The same points in float64: (x0 + n*alpha) mod 1 with rounded x0 and alpha."""
    x0, alpha = fixed_to_float(to_fixed(x0)), fixed_to_float(to_fixed(alpha))
    n = np.arange(start, start + N, dtype=np.float64)
    return np.mod(x0 + n * alpha, 1.0)


def rotation_orbit(x0, alpha, f, N, arithmetic=FIXED_POINT_128):
    """
    Orbit f(x0 + n*alpha), n = 1..N.

    Parameters:
    -----------
    x0, alpha : int, Fraction, float or str
        Start point and angle; ints are fixed-point values.
    f : Observable or StepObservable
    N : int
    arithmetic : "fixed-point-128" or "float64"
        fixed-point-128 evaluates f at the exact integer points; float64
        steps the rotation in doubles.

    Returns:
    --------
    OrbitSeq tagged with the arithmetic model used
    """
    # Security: Input validation
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise RangeError("N must be a positive integer.")
    if N > MAX_ORBIT_LENGTH:
        raise RangeError(
            f"N exceeds maximum limit of {MAX_ORBIT_LENGTH} to prevent resource exhaustion."
        )
    if arithmetic == FIXED_POINT_128:
        values = f.evaluate_fixed(rotation_points(x0, alpha, N))
    elif arithmetic == FLOAT64:
        values = f.evaluate(rotation_points_float(x0, alpha, N))
    else:
        raise ContractError(f"Rotation orbits run in fixed-point-128 or float64, not {arithmetic!r}.")
    logger.debug("rotation orbit: N=%d, dim=%d, %s", N, f.dim, arithmetic)
    return OrbitSeq(
        values,
        arithmetic,
        {"system": "rotation", "x0": to_fixed(x0), "alpha": to_fixed(alpha)},
    )


def doubling_points(state, N, precision_bits=64, start=1):
    """Float points 0.b_{n+1} b_{n+2} ... (precision_bits bits) for n = start..start+N-1."""
    if precision_bits < MIN_PRECISION_BITS:
        raise ContractError(f"precision_bits must be at least {MIN_PRECISION_BITS}.")
    if precision_bits > MAX_PRECISION_BITS:
        raise ContractError(f"precision_bits exceeds maximum limit of {MAX_PRECISION_BITS}.")
    bits = state.bits(start + 1, N + precision_bits - 1).astype(np.float64)
    windows = sliding_window_view(bits, precision_bits)
    return windows @ (0.5 ** np.arange(1, precision_bits + 1))


def doubling_orbit(state, f, N, precision_bits=64):
    """Orbit of the doubling map read from the Bernoulli bitstream of state."""
    # Security: Input validation
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise RangeError("N must be a positive integer.")
    if N > MAX_ORBIT_LENGTH:
        raise RangeError(
            f"N exceeds maximum limit of {MAX_ORBIT_LENGTH} to prevent resource exhaustion."
        )
    xs = doubling_points(state, N, precision_bits)
    return OrbitSeq(
        f.evaluate(xs),
        FLOAT64,
        {"system": "doubling", "seed": state.seed, "offset": state.offset},
    )


# --- pairings -------------------------------------------------------------

def exact_trig_pairing(f, g):
    """<f, g> = sum over common frequencies of sum_c f_c conj(g_c)."""
    if f.dim != g.dim:
        raise ContractError(f"Dimension mismatch: {f.dim} vs {g.dim}.")
    gmap = g.coefficient_map()
    total = 0j
    for j, cf in f.coefficient_map().items():
        if j in gmap:
            total += complex(np.sum(cf * np.conj(gmap[j])))
    return total


def sobol_points(samples, seed):
    """Scrambled Sobol points in [0, 1), power-of-two sizes use the balanced sampler."""
    sampler = qmc.Sobol(d=1, scramble=True, seed=seed)
    m = int(math.log2(samples)) if samples > 0 else 0
    if samples == 1 << m:
        return sampler.random_base2(m).ravel()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return sampler.random(samples).ravel()


def mc_pairing_with_error(f, g, samples=1 << 16, seed=0, exact=True):
    """(estimate of int <f(x), g(x)> dx, standard error); error is 0 when exact."""
    if samples < 1:
        raise ContractError("samples must be at least 1.")
    if f.dim != g.dim:
        raise ContractError(f"Dimension mismatch: {f.dim} vs {g.dim}.")
    if exact and isinstance(f, Observable) and isinstance(g, Observable):
        return exact_trig_pairing(f, g), 0.0
    xs = sobol_points(samples, seed)
    terms = np.sum(f.evaluate(xs) * np.conj(g.evaluate(xs)), axis=1)
    stderr = float(np.std(terms) / math.sqrt(samples)) if samples > 1 else float("inf")
    return complex(np.mean(terms)), stderr


def mc_pairing(f, g, samples=1 << 16, seed=0, exact=True):
    """
    Pairing int_0^1 <f(x), g(x)> dx.

    Trig polynomials are paired exactly from their coefficients; anything
    else is estimated on scrambled Sobol points.
    """
    return mc_pairing_with_error(f, g, samples, seed, exact)[0]


# --- sampling and arithmetic helpers --------------------------------------

def sample_points(seed, count=DEFAULT_SAMPLE_POINTS):
    """Seeded battery of fixed-point points standing in for 'almost every x'."""
    if count < 1:
        raise ContractError("count must be at least 1.")
    raw = np.random.PCG64(seed).random_raw(2 * count)
    return [(int(raw[2 * i]) << 64) | int(raw[2 * i + 1]) for i in range(count)]


def continued_fraction_denominators(alpha, count):
    """
    Convergent denominators q_1 < q_2 < ... of the fixed-point rational alpha.

    The expansion stops early if alpha's continued fraction terminates.
    """
    x = Fraction(to_fixed(alpha), FIXED_ONE)
    if x == 0:
        raise ContractError("alpha = 0 has no convergents.")
    q_prev, q = 0, 1
    dens = []
    while len(dens) < count and x != 0:
        x = 1 / x
        a = math.floor(x)
        x -= a
        q_prev, q = q, a * q + q_prev
        dens.append(q)
    return dens


def map_points(system, x, count, arithmetic=FIXED_POINT_128):
    """
    Orbit points phi^k x for k = 0..count-1.

    Rotations return fixed-point object arrays (floats when arithmetic is
    float64), the doubling map returns floats read from the bitstream,
    identity repeats x.
    """
    kind = system.kind
    if kind == "rotation":
        if arithmetic == FLOAT64:
            return rotation_points_float(x, system.alpha, count, start=0)
        return rotation_points(x, system.alpha, count, start=0)
    if kind == "identity":
        if isinstance(x, BernoulliState):
            return np.full(count, x.point(system.precision_bits))
        return np.full(count, to_fixed(x), dtype=object)
    if kind == "doubling":
        if not isinstance(x, BernoulliState):
            raise ContractError("The doubling map needs a BernoulliState point.")
        return doubling_points(x, count, system.precision_bits, start=0)
    raise ContractError(f"Unknown map '{kind}'.")


def points_to_float(points):
    points = np.asarray(points)
    if points.dtype == object:
        return fixed_array_to_float(points)
    return points.astype(np.float64)
