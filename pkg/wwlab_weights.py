"""
Adversarial weight classes and two-sided bounds on weighted averages.

For an orbit prefix v and a class of weights W the target quantity is
sup_{c in W} ||(1/N) sum_{n<=N} v_n c_n||. It is bracketed by

- witness_search: structured piecewise-constant weights (lower bound),
- brute_force_small: exhaustive search over a root-of-unity alphabet
  (lower bound, exact on the alphabet, N <= 8),
- abel_upper_bound: summation by parts (certified upper bound).

Classes:
    I(N, delta)        (1/N) sum_{n<N} |c_n - c_{n+1}| < delta
    C(N, delta)        some unit lambda with (1/N) sum |lambda c_n - c_{n+1}| < delta
    R(lambda, N, delta, K)
                       for every w some k in K_w has
                       2k/N + (1/N) sum_{n<=N-k} |lambda c_n - c_{n+k}| < delta_w
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from wwlab_core import (
    UNIT_TOLERANCE,
    ContractError,
    RangeError,
    ResourceError,
    finite_sums,
    partial_sums,
)
from wwlab_twisted import sup_over_circle

logger = logging.getLogger(__name__)

CLASS_I = "I"
CLASS_C = "C"
CLASS_R = "R"
WEIGHT_CLASSES = (CLASS_I, CLASS_C, CLASS_R)

MAX_BRUTE_N = 8
DEFAULT_ALPHABET = 16
DEFAULT_BRUTE_BUDGET = 10 ** 8
MAX_FRONTIER_ROWS = 1 << 23
MAX_DP_N = 1024
MAX_DP_CELLS = 5 * 10 ** 7
MAX_WITNESS_WORK = 5 * 10 ** 8
MAX_DIRECTION_ROUNDS = 8
CHUNK_CELLS = 1 << 22


# --- types ---------------------------------------------------------------

@dataclass(frozen=True)
class WeightSeq:
    """Weights c_1..c_N with |c_n| <= 1."""

    c: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=np.complex128))
        if c.ndim != 1 or c.size < 1:
            raise ContractError("A weight sequence needs at least one entry.")
        if np.any(np.abs(c) > 1.0 + UNIT_TOLERANCE):
            raise ContractError("Weights must satisfy |c_n| <= 1.")
        object.__setattr__(self, "c", c)

    @property
    def N(self):
        return self.c.size

    @property
    def variation(self):
        """(1/N) sum_{n<N} |c_n - c_{n+1}|."""
        return float(np.sum(np.abs(np.diff(self.c))) / self.N)

    def modulated_variation(self, lam):
        return float(np.sum(np.abs(lam * self.c[:-1] - self.c[1:])) / self.N)

    def apply(self, v, N=None):
        """||(1/N) sum v_n c_n||."""
        N = self.N if N is None else N
        vals = np.asarray(v.values[:N], dtype=np.complex128)
        return float(np.linalg.norm(np.sum(vals * self.c[:N, None], axis=0)) / N)


@dataclass(frozen=True)
class MembershipReport:
    """Verdict of a class-membership test with the numbers behind it."""

    member: bool
    variation: float
    delta: float
    lam: complex = 1.0 + 0j
    discretization_slack: float = 0.0
    chosen_k: tuple = ()

    @property
    def slack(self):
        return self.delta - self.variation

    @property
    def excluded(self):
        """True when even the continuous minimum cannot fall below delta."""
        return self.variation - self.discretization_slack >= self.delta

    def __bool__(self):
        return bool(self.member)


@dataclass(frozen=True)
class RParams:
    """
    Parameters of the rigidity class R(lambda, N, delta, K).

    delta[w-1] and K[w-1] belong to w = 1, 2, ...; b_w = len(K[w-1]) must be
    nondecreasing. horizon limits the checked rows to w <= horizon.
    """

    delta: tuple
    K: tuple
    lam: complex = 1.0 + 0j
    horizon: int = None

    def __post_init__(self):
        delta = tuple(float(d) for d in self.delta)
        K = tuple(tuple(int(k) for k in row) for row in self.K)
        if len(delta) != len(K) or not delta:
            raise ContractError("delta and K need one entry per row w = 1..W.")
        if any(d <= 0 for d in delta) or not math.isfinite(sum(delta)):
            raise ContractError("delta_w must be positive with a finite sum.")
        if any(not row for row in K) or any(k < 1 for row in K for k in row):
            raise ContractError("Every K_w needs positive shift times.")
        b = [len(row) for row in K]
        if any(y < x for x, y in zip(b, b[1:])):
            raise ContractError("b_w = |K_w| must be nondecreasing.")
        if abs(abs(complex(self.lam)) - 1.0) > UNIT_TOLERANCE:
            raise ContractError("lambda must be on the unit circle.")
        if self.horizon is not None and self.horizon < 1:
            raise ContractError("horizon must be positive.")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "lam", complex(self.lam))

    @property
    def b(self):
        return tuple(len(row) for row in self.K)


@dataclass(frozen=True)
class AbelCertificate:
    upper: float
    max_partial: float
    delta: float
    weight_class: str
    subgrid: tuple = ()


@dataclass(frozen=True)
class WitnessResult:
    weights: WeightSeq
    value: float
    blocks: tuple
    lam: complex = 1.0 + 0j
    method: str = "dp"


@dataclass(frozen=True)
class BruteResult:
    value: float
    weights: WeightSeq
    expanded: int
    method: str = "enumeration"
    lower_start: float = field(default=0.0)


# --- rates and parameter tables ----------------------------------------------

def power_rate(N, exponent):
    """delta_N = N^{-exponent}."""
    return float(N) ** (-float(exponent))


def summable_rate(w, power=2.0):
    """delta_w = w^{-power}; summable for power > 1."""
    if power <= 1:
        raise ContractError("A summable rate needs power > 1.")
    return float(w) ** (-float(power))


def example_r_params(N, generators, depth=8, power=2.0, lam=1.0, b_max=8, horizon=None,
                     scale=1.0):
    """
    R-class parameters with delta_w = scale * w^{-power}, b_w = min(w, b_max)
    and K_w the b_w smallest finite sums of the generators below N.
    """
    W = N if horizon is None else min(horizon, N)
    pool = [k for k in finite_sums(generators, depth) if k < N]
    need = min(W, b_max)
    if len(pool) < need:
        raise ContractError(f"Only {len(pool)} finite sums below N = {N}; need {need}.")
    delta = [scale * summable_rate(w, power) for w in range(1, W + 1)]
    K = [pool[:min(w, b_max)] for w in range(1, W + 1)]
    return RParams(tuple(delta), tuple(tuple(row) for row in K), lam, horizon)


def _as_weights(c):
    return c if isinstance(c, WeightSeq) else WeightSeq(c)


def _check_class(cls):
    if cls not in (CLASS_I, CLASS_C):
        raise ContractError(f"Weight class must be '{CLASS_I}' or '{CLASS_C}', got {cls!r}.")


# --- membership -------------------------------------------------------------

def check_I(c, delta):
    """Bounded-variation membership: variation < delta."""
    c = _as_weights(c)
    var = c.variation
    return MembershipReport(var < delta, var, float(delta))


def _modulated_variations(c, G):
    """(1/N) sum_{n<N} |e(k/G) c_n - c_{n+1}| for k = 0..G-1."""
    N = c.size
    out = np.empty(G, dtype=np.float64)
    if N == 1:
        out[:] = 0.0
        return out
    rows = max(1, CHUNK_CELLS // (N - 1))
    for start in range(0, G, rows):
        k = np.arange(start, min(G, start + rows))
        lam = np.exp(2j * np.pi * k / G)
        diffs = np.abs(lam[:, None] * c[None, :-1] - c[None, 1:])
        out[start:start + k.size] = np.sum(diffs, axis=1) / N
    return out


def check_C(c, delta, lambda_grid=None):
    """
    Modulated bounded-variation membership, searched on a lambda grid of
    size >= 4N. The smallest grid index wins ties.

    member compares the grid minimum itself with delta: the minimising grid
    lambda is an explicit witness, so a True verdict needs no slack.
    discretization_slack = (pi / G)(1/N) sum_{n<N} |c_n| bounds how far the
    continuous minimum can sit below the grid minimum; report.excluded is
    the certified negative verdict variation - slack >= delta.
    """
    c = _as_weights(c)
    N = c.N
    G = 4 * N if lambda_grid is None else int(lambda_grid)
    if G < 4 * N:
        raise ContractError(f"lambda_grid = {G} must be at least 4N = {4 * N}.")
    variations = _modulated_variations(c.c, G)
    k = int(np.argmin(variations))
    best = float(variations[k])
    slack = float(math.pi / G * np.sum(np.abs(c.c[:-1])) / N)
    return MembershipReport(
        best < delta,
        best,
        float(delta),
        complex(np.exp(2j * np.pi * k / G)),
        slack,
    )


def _r_term(c, lam, k):
    N = c.size
    return 2.0 * k / N + float(np.sum(np.abs(lam * c[:N - k] - c[k:]))) / N


def check_R(c, p):
    """
    Rigidity-class membership; chosen_k[w-1] is the first k that works (None
    if none). variation and delta belong to the binding row, the row whose
    best term comes closest to (or furthest past) its delta_w, so slack reads
    the same way as for check_I and check_C.
    """
    c = _as_weights(c)
    N = c.N
    W = N if p.horizon is None else min(p.horizon, N)
    if len(p.delta) < W:
        raise RangeError(f"RParams cover {len(p.delta)} rows; {W} are needed.")
    rows = p.K[:W]
    too_big = [k for row in rows for k in row if k >= N]
    if too_big:
        raise ContractError(f"Shift time {too_big[0]} is not below N = {N}.")
    cache = {}
    chosen = []
    worst, binding = -math.inf, (0.0, 0.0)
    for w, row in enumerate(rows, start=1):
        pick = None
        best_term = math.inf
        for k in row:
            if k not in cache:
                cache[k] = _r_term(c.c, p.lam, k)
            best_term = min(best_term, cache[k])
            if cache[k] < p.delta[w - 1]:
                pick = k
                break
        chosen.append(pick)
        if best_term - p.delta[w - 1] > worst:
            worst, binding = best_term - p.delta[w - 1], (best_term, p.delta[w - 1])
    member = all(k is not None for k in chosen)
    return MembershipReport(member, binding[0], binding[1], p.lam, 0.0, tuple(chosen))


# --- Abel certificate ----------------------------------------------------------

def dyadic_subgrid(N):
    """n_2 = s, 2s, ... <= N plus N itself, with s = 2^ceil(log2(N) / 2)."""
    s = 1 << math.ceil(math.log2(N) / 2) if N > 1 else 1
    grid = list(range(s, N + 1, s))
    if not grid or grid[-1] != N:
        grid.append(N)
    return grid


def abel_certificate(v, N, delta, cls=CLASS_I):
    """
    Summation-by-parts bound for every weight in I(N, delta) or C(N, delta).

    (1/N) sum v_n c_n = (1/N)[sum_{n<N} V_n (c_n - c_{n+1}) + V_N c_N] gives
    sup <= (max_n ||V_n|| / N)(N delta + 1). For class C, ||V_n|| is replaced
    by a certified sup over lambda of ||sum_{k<=n} v_k lambda^k||, computed on
    a dyadic subgrid of n and bridged in between by the tail norms.
    """
    _check_class(cls)
    if delta <= 0:
        raise ContractError("delta must be positive.")
    if N < 1 or N > len(v):
        raise RangeError(f"N = {N} outside 1..{len(v)}.")
    factor = (N * delta + 1.0) / N
    if cls == CLASS_I:
        profile = partial_sums(v.prefix(N))
        max_partial = float(profile.maxnorm)
        return AbelCertificate(max_partial * factor, max_partial, float(delta), cls)
    norms = np.linalg.norm(np.asarray(v.values[:N], dtype=np.complex128), axis=1)
    subgrid = dyadic_subgrid(N)
    max_partial, prev = 0.0, 0
    for n2 in subgrid:
        sup_n2 = sup_over_circle(v, n2).certified_upper * n2
        bridge = float(np.sum(norms[prev + 1:n2]))
        max_partial = max(max_partial, sup_n2 + bridge)
        prev = n2
    logger.debug("class-C Abel bound: N=%d, %d subgrid points", N, len(subgrid))
    return AbelCertificate(max_partial * factor, max_partial, float(delta), cls, tuple(subgrid))


def abel_upper_bound(v, N, delta, cls=CLASS_I):
    """Certified UB with ||(1/N) sum v_n c_n|| <= UB for every c in the class."""
    return abel_certificate(v, N, delta, cls).upper


# --- witness search ---------------------------------------------------------------

def max_blocks(N, delta):
    """Largest K <= N with 2(K-1)/N < delta."""
    K = min(N, max(1, math.ceil(delta * N / 2)))
    while K > 1 and 2.0 * (K - 1) / N >= delta:
        K -= 1
    return K


def _block_phases(w, blocks):
    c = np.ones(w.size, dtype=np.complex128)
    for a, b in blocks:
        s = np.sum(w[a:b])
        if abs(s) > 0:
            c[a:b] = np.conj(s) / abs(s)
    return c


def _dp_blocks(w, K):
    """Exact best partition of 0..N into at most K blocks maximising sum |S_b|."""
    N = w.size
    P = np.concatenate([[0j], np.cumsum(w)])
    D = np.abs(P[:, None] - P[None, :])
    lower = np.tril(np.ones((N + 1, N + 1), dtype=bool), k=-1)
    best = np.full(N + 1, -np.inf)
    best[1:] = np.abs(P[1:])
    layers, args = [best.copy()], [np.zeros(N + 1, dtype=np.int64)]
    for _ in range(2, K + 1):
        cand = np.where(lower, best[None, :] + D, -np.inf)
        arg = np.argmax(cand, axis=1)
        best = cand[np.arange(N + 1), arg]
        layers.append(best.copy())
        args.append(arg)
    finals = np.array([layer[N] for layer in layers])
    k = int(np.argmax(finals))
    blocks, end = [], N
    for layer in range(k, -1, -1):
        start = int(args[layer][end]) if layer > 0 else 0
        blocks.append((start, end))
        end = start
    return tuple(reversed(blocks))


def _greedy_blocks(w, K, start=None):
    """
    Repeatedly split the block whose best cut gains the most until there are
    K blocks. start is an initial partition; the default is one block. The
    split sequence does not depend on K, so the blocks for K refine those
    for any smaller K.
    """
    N = w.size
    P = np.concatenate([[0j], np.cumsum(w)])
    tol = 1e-14 * float(np.sum(np.abs(w)))
    blocks = [(0, N)] if start is None else list(start)

    def best_cut(a, b):
        if b - a < 2:
            return -np.inf, None
        t = np.arange(a + 1, b)
        gain = np.abs(P[t] - P[a]) + np.abs(P[b] - P[t]) - abs(P[b] - P[a])
        i = int(np.argmax(gain))
        return float(gain[i]), int(t[i])

    cuts = {blk: best_cut(*blk) for blk in blocks}
    for _ in range(K - len(blocks)):
        blk = max(blocks, key=lambda bl: (cuts[bl][0], -bl[0]))
        gain, t = cuts[blk]
        if t is None or gain <= tol:
            break
        i = blocks.index(blk)
        left, right = (blk[0], t), (t, blk[1])
        blocks[i:i + 1] = [left, right]
        del cuts[blk]
        cuts[left], cuts[right] = best_cut(*left), best_cut(*right)
    return tuple(blocks)


def _choose_blocks(w, K, allow_dp=True):
    """
    Blocks for scalar data. The exact program runs up to the largest block
    count the cell limit allows; beyond it the greedy splits continue from
    the exact partition, so the achieved sum never drops as K grows.
    """
    N = w.size
    if not allow_dp or N > MAX_DP_N:
        return _greedy_blocks(w, K), "greedy"
    K_dp = min(K, MAX_DP_CELLS // (N * N))
    if K_dp >= K:
        return _dp_blocks(w, K), "dp"
    if K_dp < 1:
        return _greedy_blocks(w, K), "greedy"
    return _greedy_blocks(w, K, start=_dp_blocks(w, K_dp)), "dp+greedy"


def _initial_direction(vals):
    z = np.sum(vals, axis=0)
    if np.linalg.norm(z) > 0:
        return z / np.linalg.norm(z)
    u = np.zeros(vals.shape[1], dtype=np.complex128)
    u[int(np.argmax(np.sum(np.abs(vals), axis=0)))] = 1.0
    return u


def _direction_rounds(vals, K, u):
    """Alternate between greedy blocks along u and u = direction of the weighted sum."""
    best_val, best = -1.0, None
    for _ in range(MAX_DIRECTION_ROUNDS):
        w = vals @ np.conj(u)
        blocks, _ = _choose_blocks(w, K, allow_dp=False)
        c = _block_phases(w, blocks)
        z = np.sum(vals * c[:, None], axis=0)
        val = float(np.linalg.norm(z))
        if val <= best_val * (1 + 1e-12):
            break
        best_val, best = val, (c, blocks, u)
        if val == 0:
            break
        u = z / val
    return best_val, best


def _witness_I(vals, K):
    """
    Best block weights for the I class; vals has shape (N, d).

    For d > 1 the alternating search runs for every block count 1..K, each
    warm-started from the best direction so far, and the best of them wins.
    None of those runs depends on K, so the value is nondecreasing in K.
    """
    N, d = vals.shape
    if d == 1:
        w = vals[:, 0]
        blocks, method = _choose_blocks(w, K)
        c = _block_phases(w, blocks)
        return c, blocks, method
    # Security: Input validation
    if N * K * K > MAX_WITNESS_WORK:
        raise ResourceError(
            f"Direction search with K = {K} blocks on N = {N} terms exceeds the work limit "
            f"{MAX_WITNESS_WORK}."
        )
    u = _initial_direction(vals)
    best_val, best = -1.0, None
    for k in range(1, K + 1):
        val, found = _direction_rounds(vals, k, u)
        if val > best_val * (1 + 1e-12):
            best_val, best = val, found
            u = found[2]
    c, blocks, _ = best
    return c, blocks, "greedy-direction"


def witness_search(v, N, delta, cls=CLASS_I, K=None, lambda_grid=None):
    """
    Feasible piecewise-constant unimodular weights and their achieved value.

    Parameters:
    -----------
    v : OrbitSeq
    N : int
    delta : float
    cls : "I" or "C"
    K : int, optional
        Number of blocks; must satisfy 2(K-1)/N < delta. Defaults to the
        largest feasible value.
    lambda_grid : int, optional
        Outer demodulation grid for class C (default 4N).

    Returns:
    --------
    WitnessResult
    """
    _check_class(cls)
    if N < 1 or N > len(v):
        raise RangeError(f"N = {N} outside 1..{len(v)}.")
    if K is None:
        K = max_blocks(N, delta)
    if K < 1 or 2.0 * (K - 1) / N >= delta:
        raise ContractError(f"K = {K} blocks is infeasible: need 2(K-1)/N < delta = {delta}.")
    K = min(K, N)
    vals = np.asarray(v.values[:N], dtype=np.complex128)
    if cls == CLASS_I:
        c, blocks, method = _witness_I(vals, K)
        weights = WeightSeq(c)
        return WitnessResult(weights, weights.apply(v, N), blocks, 1.0 + 0j, method)

    G = 4 * N if lambda_grid is None else int(lambda_grid)
    ladder = K if vals.shape[1] > 1 else 1
    if G * N * K * ladder > MAX_WITNESS_WORK:
        raise ResourceError(
            f"Class-C witness search over {G} grid points exceeds the work limit {MAX_WITNESS_WORK}."
        )
    n = np.arange(1, N + 1)
    best = None
    for k in range(G):
        lam = np.exp(2j * np.pi * k / G)
        powers = np.exp(2j * np.pi * k * n / G)
        c_prime, blocks, method = _witness_I(vals * powers[:, None], K)
        c = powers * c_prime
        value = float(np.linalg.norm(np.sum(vals * c[:, None], axis=0)) / N)
        if best is None or value > best.value:
            best = WitnessResult(WeightSeq(c), value, blocks, complex(lam), method)
    return best


# --- brute force -----------------------------------------------------------------

def _alphabet(q):
    return np.exp(2j * np.pi * np.arange(q) / q)


def _angular_sweep(vals, q):
    """
    Exact alphabet maximum of |sum v_n c_n| for d = 1 without constraints:
    the optimal assignment is constant on cells between phase breakpoints.
    """
    w = vals[:, 0]
    nz = np.abs(w) > 0
    if not np.any(nz):
        return np.ones(w.size, dtype=np.complex128), 1
    args = np.angle(w[nz])
    m = np.arange(q)
    breaks = np.mod(args[:, None] + 2 * np.pi * (m[None, :] + 0.5) / q, 2 * np.pi).ravel()
    breaks = np.unique(breaks)
    mids = (breaks + np.roll(breaks, -1)) / 2
    mids[-1] = (breaks[-1] + breaks[0] + 2 * np.pi) / 2
    theta = np.mod(mids, 2 * np.pi)
    a = np.mod(np.rint((theta[:, None] - np.angle(w)[None, :]) * q / (2 * np.pi)), q).astype(int)
    sums = np.abs(np.sum(w[None, :] * _alphabet(q)[a], axis=1))
    best = int(np.argmax(sums))
    c = _alphabet(q)[a[best]]
    return c * np.conj(c[0]), theta.size


def brute_force_small(v, N, delta, cls=CLASS_I, q=DEFAULT_ALPHABET, budget=DEFAULT_BRUTE_BUDGET,
                      lambda_grid=None):
    """
    Exact maximum of ||(1/N) sum v_n c_n|| over c_n in the q-th roots of unity
    satisfying the class constraint. A lower bound of the continuous sup.

    c_1 = 1 is fixed (a common phase changes neither the norm nor class
    membership). Partial sequences are pruned by the variation budget and
    by a branch-and-bound test against a rounded block witness; when the
    constraint cannot bind and d = 1 the maximum comes from an exact
    angular sweep instead of enumeration.
    """
    _check_class(cls)
    # Security: Input validation
    if not 1 <= N <= MAX_BRUTE_N:
        raise ContractError(f"brute_force_small needs 1 <= N <= {MAX_BRUTE_N}, got {N}.")
    if N > len(v):
        raise RangeError(f"N = {N} exceeds the orbit length {len(v)}.")
    if q < 1:
        raise ContractError("Alphabet order q must be at least 1.")
    vals = np.asarray(v.values[:N], dtype=np.complex128)
    d = vals.shape[1]
    A = _alphabet(q)
    chord = np.abs(A[:, None] - A[None, :])
    worst_step = 2.0 if cls == CLASS_C else float(np.max(chord))
    budget_total = N * delta

    if d == 1 and worst_step * (N - 1) < budget_total:
        c, cells = _angular_sweep(vals, q)
        weights = WeightSeq(c)
        return BruteResult(weights.apply(v, N), weights, cells, "sweep")

    # lower start: the constant sequence, improved by a rounded block witness for class I
    start_c = np.ones(N, dtype=np.complex128)
    if cls == CLASS_I:
        wit = witness_search(v, N, delta, CLASS_I)
        rounded = A[np.mod(np.rint(np.angle(wit.weights.c) * q / (2 * np.pi)), q).astype(int)]
        rounded = rounded * np.conj(rounded[0])
        if np.sum(np.abs(np.diff(rounded))) < budget_total:
            start_c = rounded
    lower = float(np.linalg.norm(np.sum(vals * start_c[:, None], axis=0)))
    norms = np.linalg.norm(vals, axis=1)
    tail = np.concatenate([np.cumsum(norms[::-1])[::-1][1:], [0.0]])
    tol = 1e-12 * max(1.0, float(np.sum(norms)))

    if cls == CLASS_C:
        G = 4 * N if lambda_grid is None else int(lambda_grid)
        lam = np.exp(2j * np.pi * np.arange(G) / G)
        chord_c = np.abs(lam[:, None, None] * A[None, :, None] - A[None, None, :])
        var = np.zeros((1, G))
    else:
        var = np.zeros(1)

    z = vals[0][None, :].astype(np.complex128)
    last = np.zeros(1, dtype=np.int64)
    seq = np.zeros((1, 1), dtype=np.int64)
    expanded = 1
    for n in range(1, N):
        rows = last.size
        expanded += rows * q
        if expanded > budget:
            raise ResourceError(f"Brute force exceeded its budget of {budget} candidates.")
        if rows * q > MAX_FRONTIER_ROWS:
            raise ResourceError(
                f"Brute-force frontier of {rows * q} rows exceeds the limit {MAX_FRONTIER_ROWS}."
            )
        new_sym = np.tile(np.arange(q), rows)
        parent = np.repeat(np.arange(rows), q)
        if cls == CLASS_C:
            new_var = var[parent] + chord_c[:, last[parent], new_sym].T
            feasible = np.min(new_var, axis=1) < budget_total
        else:
            new_var = var[parent] + chord[last[parent], new_sym]
            feasible = new_var < budget_total
        new_z = z[parent] + vals[n][None, :] * A[new_sym][:, None]
        hopeful = np.linalg.norm(new_z, axis=1) + tail[n] >= lower - tol
        keep = feasible & hopeful
        z, var = new_z[keep], new_var[keep]
        last = new_sym[keep]
        seq = np.concatenate([seq[parent[keep]], last[:, None]], axis=1)

    finals = np.linalg.norm(z, axis=1)
    if finals.size == 0 or float(np.max(finals)) < lower:
        weights = WeightSeq(start_c)
    else:
        weights = WeightSeq(A[seq[int(np.argmax(finals))]])
    logger.debug("brute force: N=%d q=%d expanded=%d", N, q, expanded)
    return BruteResult(weights.apply(v, N), weights, expanded, "enumeration", lower / N)
