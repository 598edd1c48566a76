"""
Operators acting on vector-valued observables.

Pointwise variants produce orbits (T^n f(x))_{n=1..N} through the
multiplicative cocycle T^n f(x) = F(x) F(phi x) ... F(phi^{n-1} x) f(phi^n x).
The dyadic operators act on integral masses over I_k = [2^{-k-1}, 2^{-k})
in exact rational arithmetic.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from wwlab_core import (
    FIXED_MASK,
    FIXED_ONE,
    FIXED_POINT_128,
    FLOAT64,
    ContractError,
    OrbitSeq,
    RangeError,
    ResourceError,
    fixed_array_to_float,
    fixed_e,
    to_fixed,
)
from wwlab_systems import (
    BernoulliState,
    MapSpec,
    Observable,
    doubling_orbit,
    evaluate_at,
    map_points,
    rotation_orbit,
    rotation_points,
    sobol_points,
)

logger = logging.getLogger(__name__)

KOOPMAN = "koopman"
MULT_OP = "mult-op"
MULT_KOOPMAN = "mult-koopman"
TWISTED_U = "twisted-u"
DYADIC_T = "dyadic-t"
DYADIC_S = "dyadic-s"
NON_CONTRACTIVE_S = "non-contractive-s"
PAIRING_KOOPMAN = "pairing-koopman"
OPERATOR_KINDS = (
    KOOPMAN,
    MULT_OP,
    MULT_KOOPMAN,
    TWISTED_U,
    DYADIC_T,
    DYADIC_S,
    NON_CONTRACTIVE_S,
    PAIRING_KOOPMAN,
)
DYADIC_KINDS = (DYADIC_T, DYADIC_S)

MAX_ORBIT_STEPS = 1 << 24
MAX_PAIRING_ORBIT = 4096
DYADIC_T_INDEX_CAP = 24
BOUND_CHECK_POINTS = 64
BOUND_TOLERANCE = 1e-12


# --- multipliers -----------------------------------------------------------

class Multiplier:
    """
    Point map x -> F(x), a d x d complex matrix with operator norm <= bound.

    Scalar multipliers (F(x) = s(x) * I) return shape (n,) from at();
    matrix multipliers return shape (n, d, d).
    """

    scalar = True

    def __init__(self, name, dim, bound):
        self.name = name
        self.dim = dim
        self.bound = float(bound)

    def at(self, xs):
        raise NotImplementedError

    def at_fixed(self, points):
        return self.at(fixed_array_to_float(points))

    def at_points(self, points):
        points = np.asarray(points)
        if points.dtype == object:
            return self.at_fixed(points)
        return self.at(points)

    def check_bound(self, xs):
        """Raise ContractError if some sampled F(x) exceeds the declared bound."""
        vals = self.at(np.asarray(xs, dtype=np.float64))
        if self.scalar:
            norms = np.abs(vals)
        else:
            norms = np.linalg.norm(vals, ord=2, axis=(1, 2))
        worst = float(np.max(norms))
        if worst > self.bound + BOUND_TOLERANCE:
            raise ContractError(
                f"Multiplier '{self.name}' has norm {worst:.6g} above its bound {self.bound}."
            )
        return worst

    def __repr__(self):
        return f"{type(self).__name__}(name={self.name!r}, dim={self.dim}, bound={self.bound})"


class CharacterMultiplier(Multiplier):
    """F(x) = radius * e(freq * x) * I_d; radius 1 and freq 1 is M_e."""

    def __init__(self, freq=1, dim=1, radius=1.0):
        if radius < 0:
            raise ContractError("radius must be nonnegative.")
        super().__init__(f"character({freq})", dim, radius)
        self.freq = int(freq)
        self.radius = float(radius)

    def at(self, xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        return self.radius * np.exp(2j * np.pi * self.freq * xs)

    def at_fixed(self, points):
        pts = np.asarray(points, dtype=object).ravel()
        return self.radius * fixed_e((pts * self.freq) & FIXED_MASK)


class StepMultiplier(Multiplier):
    """Scalar step function: values[i] on [breaks[i], breaks[i+1]), breaks in fixed point."""

    def __init__(self, breaks, values, dim=1, name="step"):
        fixed = [to_fixed(b) for b in breaks[:-1]] + [FIXED_ONE]
        if fixed[0] != 0 or any(a >= b for a, b in zip(fixed, fixed[1:])):
            raise ContractError("Step breakpoints must increase strictly from 0 to 1.")
        vals = np.asarray(values, dtype=np.complex128)
        if vals.shape != (len(fixed) - 1,):
            raise ContractError("Need one scalar value per step interval.")
        super().__init__(name, dim, float(np.max(np.abs(vals))))
        self.breaks = tuple(fixed)
        self.values = vals
        self._float_breaks = np.array([b / FIXED_ONE for b in fixed], dtype=np.float64)

    def at(self, xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        pos = np.searchsorted(self._float_breaks, xs, side="right")
        return self.values[np.clip(pos - 1, 0, len(self.values) - 1)]

    def at_fixed(self, points):
        pts = np.asarray(points, dtype=object).ravel()
        pos = np.zeros(pts.size, dtype=np.int64)
        for b in self.breaks[:-1]:
            pos += (pts >= b).astype(bool)
        return self.values[np.clip(pos - 1, 0, len(self.values) - 1)]


class MatrixMultiplier(Multiplier):
    """General matrix multiplier from a vectorised callable xs -> (n, d, d)."""

    scalar = False

    def __init__(self, fn, dim, bound, name="matrix"):
        super().__init__(name, dim, bound)
        self.fn = fn
        grid = (np.arange(BOUND_CHECK_POINTS) + 0.5) / BOUND_CHECK_POINTS
        self.check_bound(grid)

    def at(self, xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        out = np.asarray(self.fn(xs), dtype=np.complex128)
        if out.shape != (xs.size, self.dim, self.dim):
            raise ContractError(f"Multiplier '{self.name}' returned shape {out.shape}.")
        return out

    @classmethod
    def rotation(cls, radius=0.9):
        """radius * [[cos 2 pi x, -sin 2 pi x], [sin 2 pi x, cos 2 pi x]] on C^2."""

        def fn(xs):
            c, s = np.cos(2 * np.pi * xs), np.sin(2 * np.pi * xs)
            return radius * np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)

        return cls(fn, 2, radius, name=f"rotation-matrix({radius})")


def non_contractive_multiplier(alpha):
    """F = 2i on [0, a), 1/(2i) on [a, 2a), 1 on [2a, 1] for 0 < a < 1/2."""
    a = to_fixed(alpha)
    if not 0 < a < FIXED_ONE // 2:
        raise ContractError("NonContractiveS needs 0 < alpha < 1/2.")
    return StepMultiplier([0, a, 2 * a, 1], [2j, 1 / 2j, 1.0], name="non-contractive")


# --- operator specs ----------------------------------------------------------

@dataclass(frozen=True)
class OperatorSpec:
    """
    One operator variant with its parameters.

    Use the classmethod constructors; kind is one of OPERATOR_KINDS.
    """

    kind: str
    system: MapSpec = None
    multiplier: Multiplier = None
    dual: Observable = None

    def __post_init__(self):
        if self.kind not in OPERATOR_KINDS:
            raise ContractError(f"Unknown operator '{self.kind}'; expected one of {OPERATOR_KINDS}.")
        needs_system = (KOOPMAN, MULT_KOOPMAN, TWISTED_U, NON_CONTRACTIVE_S, PAIRING_KOOPMAN)
        if self.kind in needs_system and self.system is None:
            raise ContractError(f"Operator '{self.kind}' needs a map.")
        if self.kind in (MULT_OP, MULT_KOOPMAN) and self.multiplier is None:
            raise ContractError(f"Operator '{self.kind}' needs a multiplier.")
        if self.kind == PAIRING_KOOPMAN and self.dual is None:
            raise ContractError("PairingKoopman needs a dual observable.")

    @classmethod
    def koopman(cls, system):
        return cls(KOOPMAN, system=system)

    @classmethod
    def mult_op(cls, multiplier):
        return cls(MULT_OP, system=MapSpec.identity(), multiplier=multiplier)

    @classmethod
    def mult_koopman(cls, multiplier, system):
        return cls(MULT_KOOPMAN, system=system, multiplier=multiplier)

    @classmethod
    def twisted_u(cls, alpha):
        return cls(TWISTED_U, system=MapSpec.rotation(alpha), multiplier=CharacterMultiplier(1))

    @classmethod
    def non_contractive_s(cls, alpha):
        return cls(
            NON_CONTRACTIVE_S,
            system=MapSpec.rotation(alpha),
            multiplier=non_contractive_multiplier(alpha),
        )

    @classmethod
    def pairing_koopman(cls, dual, system):
        return cls(PAIRING_KOOPMAN, system=system, dual=dual)

    @classmethod
    def dyadic_t(cls):
        return cls(DYADIC_T)

    @classmethod
    def dyadic_s(cls):
        return cls(DYADIC_S)

    @property
    def is_dyadic(self):
        return self.kind in DYADIC_KINDS

    @property
    def alpha(self):
        return self.system.alpha if self.system is not None else None


# --- pointwise orbits -------------------------------------------------------

def _check_steps(N):
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise RangeError("N must be a positive integer.")
    if N > MAX_ORBIT_STEPS:
        raise ResourceError(
            f"N exceeds maximum limit of {MAX_ORBIT_STEPS} to prevent resource exhaustion."
        )


def _base_point(system, x):
    if system.kind == "doubling":
        if not isinstance(x, BernoulliState):
            raise ContractError("The doubling map needs a BernoulliState point.")
        return x
    if isinstance(x, BernoulliState):
        return x.point(system.precision_bits)
    return to_fixed(x)


def _apply_cocycle(multiplier, factor_points, fvals):
    """values[n-1] = F(p_0) ... F(p_{n-1}) f(p_n) given f at p_1..p_N."""
    factors = multiplier.at_points(factor_points)
    if multiplier.scalar:
        return np.cumprod(factors)[:, None] * fvals
    out = np.empty_like(fvals)
    P = np.eye(multiplier.dim, dtype=np.complex128)
    for n in range(fvals.shape[0]):
        P = P @ factors[n]
        out[n] = P @ fvals[n]
    return out


def twisted_u_closed_form(x, alpha, N):
    """U_alpha^n e(x) = e(C(n+1, 2) alpha + (n+1) x), n = 1..N, exact phases."""
    x, alpha = to_fixed(x), to_fixed(alpha)
    n = np.arange(1, N + 1, dtype=object)
    phases = ((n + 1) * n // 2 * alpha + (n + 1) * x) & FIXED_MASK
    return fixed_e(phases)


def _twisted_u_orbit(op, f, x, N):
    """Cumulative phase sum_{k<n} (x + k alpha) kept exactly in fixed point."""
    x = to_fixed(x)
    alpha = op.alpha
    if isinstance(f, Observable) and f.dim == 1 and f.freqs == (1,) and f.coeffs[0, 0] == 1:
        values = twisted_u_closed_form(x, alpha, N)[:, None]
    else:
        points = rotation_points(x, alpha, N + 1, start=0)
        phases = np.cumsum(points[:N]) & FIXED_MASK
        values = fixed_e(phases)[:, None] * evaluate_at(f, points[1:])
    return OrbitSeq(values, FIXED_POINT_128, {"operator": TWISTED_U, "x": x, "alpha": alpha})


def _pairing_orbit(op, f, x, N):
    """
    Orbit of S(g)(x) = <g(phi x), dual(x)> g(phi x), which is nonlinear in g.

    Writing S^m g(x) = sigma_m(x) g(phi^m x) gives
    sigma_m(x) = sigma_{m-1}(phi x)^2 <g(phi^m x), dual(x)>, so the orbit
    needs sigma_{m} along the whole remaining orbit: O(N^2) work.
    """
    if N > MAX_PAIRING_ORBIT:
        raise ResourceError(
            f"N exceeds maximum limit of {MAX_PAIRING_ORBIT} for the nonlinear pairing orbit."
        )
    if f.dim != op.dual.dim:
        raise ContractError("Observable and dual must have the same dimension.")
    points = map_points(op.system, _base_point(op.system, x), N + 1)
    G = evaluate_at(f, points)
    D = evaluate_at(op.dual, points[:N])
    sigma = np.ones(N + 1, dtype=np.complex128)
    values = np.empty((N, f.dim), dtype=np.complex128)
    with np.errstate(over="ignore", invalid="ignore"):
        for m in range(1, N + 1):
            length = N + 1 - m
            inner = np.sum(G[m:m + length] * np.conj(D[:length]), axis=1)
            sigma = sigma[1:length + 1] ** 2 * inner
            values[m - 1] = sigma[0] * G[m]
    return OrbitSeq(values, FLOAT64, {"operator": PAIRING_KOOPMAN})


def orbit_model(op, arithmetic=None):
    """
    Arithmetic model of the pointwise orbit of op. None selects the native
    model; rotation-driven cocycles also run in float64.
    """
    if op.is_dyadic:
        raise ContractError(f"Operator '{op.kind}' has no pointwise orbit.")
    if op.kind == PAIRING_KOOPMAN or op.system.kind == "doubling":
        native = FLOAT64
    else:
        native = FIXED_POINT_128
    if arithmetic is None or arithmetic == native:
        return native
    if (arithmetic == FLOAT64 and op.system.kind == "rotation"
            and op.kind in (KOOPMAN, MULT_KOOPMAN, NON_CONTRACTIVE_S)):
        return FLOAT64
    raise ContractError(
        f"Operator '{op.kind}' on the {op.system.kind} map has no {arithmetic} orbit."
    )


def orbit_values(op, f, x, N, arithmetic=None):
    """
    Pointwise orbit T^n f(x) for n = 1..N.

    Parameters:
    -----------
    op : OperatorSpec
        Any variant except the dyadic ones (use dyadic_apply for those).
    f : Observable or StepObservable
    x : fixed-point int / Fraction / str for rotations and multiplication
        operators, BernoulliState for the doubling map
    N : int
    arithmetic : str, optional
        See orbit_model.

    Returns:
    --------
    OrbitSeq
    """
    _check_steps(N)
    if op.is_dyadic:
        raise ContractError(f"Operator '{op.kind}' has no pointwise orbit; use dyadic_apply.")
    if op.multiplier is not None and op.multiplier.dim != f.dim:
        raise ContractError(
            f"Multiplier dimension {op.multiplier.dim} does not match observable dimension {f.dim}."
        )
    model = orbit_model(op, arithmetic)
    system = op.system
    if op.kind == KOOPMAN:
        if system.kind == "rotation":
            return rotation_orbit(_base_point(system, x), system.alpha, f, N, model)
        if system.kind == "doubling":
            return doubling_orbit(_base_point(system, x), f, N, system.precision_bits)
        point = _base_point(system, x)
        fx = evaluate_at(f, np.array([point], dtype=object if isinstance(point, int) else None))
        return OrbitSeq(np.repeat(fx, N, axis=0), FIXED_POINT_128, {"operator": KOOPMAN})
    if op.kind == TWISTED_U:
        return _twisted_u_orbit(op, f, _base_point(system, x), N)
    if op.kind == PAIRING_KOOPMAN:
        return _pairing_orbit(op, f, x, N)

    base = _base_point(system, x)
    points = map_points(system, base, N + 1, model)
    fvals = evaluate_at(f, points[1:])
    values = _apply_cocycle(op.multiplier, points[:N], fvals)
    exactness = FIXED_POINT_128 if points.dtype == object else FLOAT64
    return OrbitSeq(values, exactness, {"operator": op.kind, "multiplier": op.multiplier.name})


def ucalpha_polynomial_weight(x, alpha, N):
    """Weights e(p_x(n)) with p_x(n) = -C(n+1, 2) alpha - (n+1) x, n = 1..N."""
    return np.conj(twisted_u_closed_form(x, alpha, N))


# --- batched orbits (Monte-Carlo fallback) ------------------------------------

def batch_sample_points(op, samples, steps, seed):
    """
    Sample points for batch_orbit: Sobol floats, or for the doubling map a
    (samples, steps + precision_bits) matrix of seeded random bits.
    """
    if op.system is not None and op.system.kind == "doubling":
        rng = np.random.default_rng(seed)
        width = steps + op.system.precision_bits
        return rng.integers(0, 2, size=(samples, width), dtype=np.uint8)
    return sobol_points(samples, seed)


def batch_points(system, xs, steps):
    """Float points phi^k x for k = 0..steps, shape (n, steps + 1)."""
    if system.kind == "doubling":
        bits = np.asarray(xs, dtype=np.float64)
        p = system.precision_bits
        if bits.ndim != 2 or bits.shape[1] < steps + p:
            raise ContractError("Doubling batches need a bit matrix of width steps + precision_bits.")
        windows = sliding_window_view(bits[:, :steps + p], p, axis=1)
        return windows[:, :steps + 1] @ (0.5 ** np.arange(1, p + 1))
    xs = np.asarray(xs, dtype=np.float64)
    if system.kind == "identity":
        return np.repeat(xs[:, None], steps + 1, axis=1)
    alpha = system.alpha / FIXED_ONE
    return np.mod(xs[:, None] + np.arange(steps + 1)[None, :] * alpha, 1.0)


def batch_orbit(op, f, xs, N):
    """
    T^h f(x) for h = 0..N at many points at once, shape (n, N + 1, d).

    Index 0 holds f(x) itself. Points are floats (bit matrices for the
    doubling map, see batch_sample_points); accuracy is float accuracy.
    """
    _check_steps(N)
    if op.is_dyadic or op.kind == PAIRING_KOOPMAN:
        raise ContractError(f"Operator '{op.kind}' has no batched orbit.")
    pts = batch_points(op.system, xs, N)
    n = pts.shape[0]
    fvals = f.evaluate(pts.ravel()).reshape(n, N + 1, f.dim)
    if op.kind == KOOPMAN:
        return fvals
    multiplier = op.multiplier
    factors = multiplier.at(pts[:, :N].ravel())
    if multiplier.scalar:
        cum = np.cumprod(factors.reshape(n, N), axis=1)
        fvals[:, 1:] *= cum[:, :, None]
        return fvals
    factors = factors.reshape(n, N, f.dim, f.dim)
    P = np.broadcast_to(np.eye(f.dim, dtype=np.complex128), (n, f.dim, f.dim)).copy()
    for k in range(N):
        P = P @ factors[:, k]
        fvals[:, k + 1] = np.einsum("nij,nj->ni", P, fvals[:, k + 1])
    return fvals


# --- exact pairings ---------------------------------------------------------------

def _e_fixed_scalar(phase):
    return complex(fixed_e(np.array([phase & FIXED_MASK], dtype=object))[0])


def exact_pairing(op, f, g, h):
    """
    <T^h f, g> from trig coefficients, for the variants where T^h maps a
    trig polynomial to a trig polynomial with a known table.

    Raises ContractError for any other combination (callers fall back to
    Monte-Carlo).
    """
    if not isinstance(f, Observable) or not isinstance(g, Observable):
        raise ContractError("Exact pairings need trig-polynomial observables.")
    if f.dim != g.dim:
        raise ContractError(f"Dimension mismatch: {f.dim} vs {g.dim}.")
    h = int(h)
    if h < 0:
        raise RangeError("h must be nonnegative.")
    gmap = g.coefficient_map()

    def paired(freq, coef):
        if freq not in gmap:
            return 0j
        return complex(np.sum(coef * np.conj(gmap[freq])))

    system = op.system
    if op.kind == KOOPMAN:
        if system.kind == "identity":
            return sum((paired(j, c) for j, c in f.coefficient_map().items()), 0j)
        if system.kind == "rotation":
            total = 0j
            for j, c in f.coefficient_map().items():
                total += _e_fixed_scalar(j * h * system.alpha) * paired(j, c)
            return total
        scale = 1 << h
        return sum((paired(j * scale, c) for j, c in f.coefficient_map().items()), 0j)

    multiplier = op.multiplier
    if multiplier is None or not isinstance(multiplier, CharacterMultiplier):
        raise ContractError(f"No exact pairing for operator '{op.kind}'.")
    q, r = multiplier.freq, multiplier.radius ** h
    if system.kind == "identity":
        return r * sum((paired(j + q * h, c) for j, c in f.coefficient_map().items()), 0j)
    if system.kind == "rotation":
        alpha = system.alpha
        base = (q * (h * (h - 1) // 2) * alpha) & FIXED_MASK
        total = 0j
        for j, c in f.coefficient_map().items():
            phase = (base + j * h * alpha) & FIXED_MASK
            total += _e_fixed_scalar(phase) * paired(j + q * h, c)
        return r * total
    # doubling: F(x) F(2x) ... F(2^{h-1} x) = e(q (2^h - 1) x)
    scale = 1 << h
    return r * sum((paired(j * scale + q * (scale - 1), c)
                    for j, c in f.coefficient_map().items()), 0j)


# --- dyadic mass maps ---------------------------------------------------------------

@dataclass(frozen=True)
class DyadicMass:
    """
    Sparse integrals {k: int over I_k} with I_k = [2^{-k-1}, 2^{-k}).

    masses is a sorted tuple of (index, Fraction) pairs with nonzero mass.
    """

    masses: tuple = ()

    def __post_init__(self):
        merged = {}
        for k, m in self.masses:
            k = int(k)
            if k < 0:
                raise ContractError("Dyadic indices must be nonnegative.")
            merged[k] = merged.get(k, Fraction(0)) + Fraction(m)
        cleaned = tuple(sorted((k, m) for k, m in merged.items() if m != 0))
        object.__setattr__(self, "masses", cleaned)

    @classmethod
    def from_dict(cls, masses):
        return cls(tuple(masses.items()))

    @classmethod
    def indicator_upper_half(cls):
        """f = 1 on [1/2, 1]: mass 1/2 on I_0."""
        return cls(((0, Fraction(1, 2)),))

    @classmethod
    def interval_indicator(cls, k):
        """Indicator of I_k, mass |I_k| = 2^{-k-1}."""
        return cls(((k, Fraction(1, 2 ** (k + 1))),))

    def as_dict(self):
        return dict(self.masses)

    def mass(self, k):
        return self.as_dict().get(k, Fraction(0))

    def total(self):
        return sum((m for _, m in self.masses), Fraction(0))

    def total_variation(self):
        return sum((abs(m) for _, m in self.masses), Fraction(0))

    def __len__(self):
        return len(self.masses)


def dyadic_apply(variant, m):
    """
    One application of the dyadic operator to a mass map.

    S moves the mass of I_n to I_{n+1}, T moves it to I_{(n+1)^2}; masses
    are unchanged, which is the exact integral bookkeeping of both operators.
    """
    if isinstance(variant, OperatorSpec):
        variant = variant.kind
    if variant == DYADIC_S:
        return DyadicMass(tuple((k + 1, mass) for k, mass in m.masses))
    if variant == DYADIC_T:
        return DyadicMass(tuple(((k + 1) ** 2, mass) for k, mass in m.masses))
    raise ContractError(f"'{variant}' is not a dyadic operator.")


def dyadic_iterate(variant, m, n):
    for _ in range(n):
        m = dyadic_apply(variant, m)
    return m


def dyadic_pairing(m, g_indices):
    """Exact sum of the masses at indices where the predicate holds."""
    return sum((mass for k, mass in m.masses if g_indices(k)), Fraction(0))


def dyadic_density(m, k):
    """Value of the step function on I_k: mass / |I_k| = mass * 2^{k+1}."""
    return m.mass(k) * 2 ** (k + 1)


def index_sequence(variant, n, cap=DYADIC_T_INDEX_CAP):
    """a_1 = 1 and a_n = a_{n-1} + 1 (S) or (a_{n-1} + 1)^2 (T)."""
    if isinstance(variant, OperatorSpec):
        variant = variant.kind
    if n < 1:
        raise RangeError("The index sequence starts at n = 1.")
    if variant == DYADIC_S:
        return n
    if variant != DYADIC_T:
        raise ContractError(f"'{variant}' is not a dyadic operator.")
    if n > cap:
        raise ResourceError(f"n = {n} exceeds the DyadicT index cap of {cap}.")
    a = 1
    for _ in range(n - 1):
        a = (a + 1) ** 2
    return a


def index_position(variant, k):
    """The j with a_j = k, or None when k is not a value of the index sequence."""
    if isinstance(variant, OperatorSpec):
        variant = variant.kind
    if variant == DYADIC_S:
        return k if k >= 1 else None
    if variant != DYADIC_T:
        raise ContractError(f"'{variant}' is not a dyadic operator.")
    a, j = 1, 1
    while a < k:
        a, j = (a + 1) ** 2, j + 1
    return j if a == k else None


def in_selection_set(n):
    """n in B = union over m >= 1 of [4^m, 2 * 4^m)."""
    if n < 4:
        return False
    return (n.bit_length() - 1) % 2 == 0


def selection_predicate(variant):
    """Predicate on dyadic indices: k = a_j for some j in B."""

    def predicate(k):
        j = index_position(variant, k)
        return j is not None and in_selection_set(j)

    return predicate
