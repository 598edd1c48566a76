"""
Finite-horizon mixing diagnostics.

Correlation profiles <T^h f, g> summarised by Cesaro averages (ergodic),
absolute Cesaro averages (weak mixing), tail suprema (strong mixing) and
probes along finite-sum sets (mild mixing); empirical pointwise Cesaro
bounds; and the exact non-mean-ergodicity table of the dyadic operators.
"""

import csv
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from wwlab_core import ContractError, RangeError, ResourceError, finite_sums
from wwlab_operators import (
    DYADIC_S,
    DYADIC_T,
    DyadicMass,
    OperatorSpec,
    batch_orbit,
    batch_points,
    batch_sample_points,
    dyadic_apply,
    dyadic_pairing,
    exact_pairing,
    orbit_values,
    selection_predicate,
)

logger = logging.getLogger(__name__)

MIN_HORIZON = 16
MAX_HORIZON = 1 << 16
MAX_MC_HORIZON = 4096
MAX_PROBE_HORIZON = 1 << 20
MAX_DYADIC_M = 12
DEFAULT_MC_SAMPLES = 1 << 16
MC_CHUNK = 2048
LITERAL_PAIRINGS = {DYADIC_S: 256, DYADIC_T: 12}
PROFILE_COLUMNS = ("H", "ergodic_avg_re", "ergodic_avg_im", "abs_avg", "tail_sup")


# --- correlation pairings ---------------------------------------------------------

def _dyadic_pairings(op, f, g, count):
    if not isinstance(f, DyadicMass):
        raise ContractError("Dyadic operators pair DyadicMass observables.")
    predicate = g if callable(g) else (lambda k, keys=frozenset(g.as_dict()): k in keys)
    if op.kind == DYADIC_T and count > 25:
        raise ResourceError("DyadicT pairings beyond h = 24 would need astronomically large indices.")
    out, m = [], f
    for h in range(count):
        out.append(dyadic_pairing(m, predicate))
        if h + 1 < count:
            m = dyadic_apply(op.kind, m)
    return out


def _mc_pairings(op, f, g, count, samples, seed):
    """Quasi-Monte-Carlo <T^h f, g>, h = 0..count-1, with the largest standard error."""
    if count > MAX_MC_HORIZON:
        raise ResourceError(f"Monte-Carlo horizons are capped at {MAX_MC_HORIZON}.")
    xs = batch_sample_points(op, samples, count - 1, seed)
    total = np.zeros(count, dtype=np.complex128)
    total_sq = np.zeros(count, dtype=np.float64)
    for start in range(0, samples, MC_CHUNK):
        chunk = xs[start:start + MC_CHUNK]
        vals = batch_orbit(op, f, chunk, count - 1)
        base = batch_points(op.system, chunk, 0)[:, 0]
        gx = g.evaluate(base)
        terms = np.einsum("nhd,nd->nh", vals, np.conj(gx))
        total += terms.sum(axis=0)
        total_sq += (np.abs(terms) ** 2).sum(axis=0)
    mean = total / samples
    var = np.maximum(total_sq / samples - np.abs(mean) ** 2, 0.0)
    stderr = float(np.max(np.sqrt(var / samples)))
    return mean, stderr


def correlations(op, f, g, count, samples=DEFAULT_MC_SAMPLES, seed=0):
    """
    <T^h f, g> for h = 0..count-1 and the method used.

    Returns (pairings, method, stderr, exact) where exact holds Fractions
    for the dyadic operators and is None otherwise.
    """
    if op.is_dyadic:
        exact = _dyadic_pairings(op, f, g, count)
        return np.array([complex(p) for p in exact]), "exact-dyadic", 0.0, exact
    try:
        pairings = np.array([exact_pairing(op, f, g, h) for h in range(count)])
        return pairings, "exact-coefficients", 0.0, None
    except ContractError:
        logger.info("no exact pairing for %s; using %d QMC samples", op.kind, samples)
    pairings, stderr = _mc_pairings(op, f, g, count, samples, seed)
    return pairings, "qmc", stderr, None


# --- mixing profile -------------------------------------------------------------------

@dataclass(frozen=True)
class MixingProfile:
    """Cesaro summaries of <T^h f, g> on a dyadic grid of horizons H."""

    horizons: tuple
    ergodic_avg: tuple
    abs_avg: tuple
    tail_sup: tuple
    pairings: np.ndarray
    method: str
    stderr: float = 0.0
    exact_ergodic_avg: tuple = ()

    def rows(self):
        return [
            (H, e.real, e.imag, a, t)
            for H, e, a, t in zip(self.horizons, self.ergodic_avg, self.abs_avg, self.tail_sup)
        ]

    def hierarchy_holds(self, tol=1e-12):
        """|ergodic_avg| <= abs_avg <= max_h |<T^h f, g>| at every horizon."""
        for H, e, a in zip(self.horizons, self.ergodic_avg, self.abs_avg):
            top = float(np.max(np.abs(self.pairings[:H])))
            if abs(e) > a + tol or a > top + tol:
                return False
        return True


def horizon_grid(H_max):
    grid, H = [], MIN_HORIZON
    while H <= H_max:
        grid.append(H)
        H *= 2
    if grid[-1] != H_max:
        grid.append(H_max)
    return grid


def mixing_profile(op, f, g, H_max, samples=DEFAULT_MC_SAMPLES, seed=0):
    """
    Finite-horizon mixing profile of the pair (f, g) under op.

    Parameters:
    -----------
    op : OperatorSpec
    f, g : Observable (DyadicMass and a predicate or DyadicMass for dyadic ops)
    H_max : int
        Largest horizon, at least 16. Pairings are taken for h = 0..H_max-1.
    samples, seed :
        Quasi-Monte-Carlo fallback settings when no exact pairing exists.

    Returns:
    --------
    MixingProfile
    """
    # Security: Input validation
    if H_max < MIN_HORIZON:
        raise ContractError(f"H_max must be at least {MIN_HORIZON}.")
    if H_max > MAX_HORIZON:
        raise ResourceError(
            f"H_max exceeds maximum limit of {MAX_HORIZON} to prevent resource exhaustion."
        )
    pairings, method, stderr, exact = correlations(op, f, g, H_max, samples, seed)
    horizons = horizon_grid(H_max)
    ergodic, absolute, tail, exact_avg = [], [], [], []
    for H in horizons:
        window = pairings[:H]
        ergodic.append(complex(np.mean(window)))
        absolute.append(float(np.mean(np.abs(window))))
        tail.append(float(np.max(np.abs(pairings[H // 2:H]))))
        if exact is not None:
            exact_avg.append(sum(exact[:H], Fraction(0)) / H)
    logger.debug("mixing profile: %s, H_max=%d, method=%s", op.kind, H_max, method)
    return MixingProfile(
        tuple(horizons),
        tuple(ergodic),
        tuple(absolute),
        tuple(tail),
        pairings,
        method,
        stderr,
        tuple(exact_avg),
    )


def write_profile_csv(profile, path):
    """Write the profile with columns H, ergodic_avg_re, ergodic_avg_im, abs_avg, tail_sup."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PROFILE_COLUMNS)
        for H, re, im, a, t in profile.rows():
            writer.writerow([H, repr(float(re)), repr(float(im)), repr(float(a)), repr(float(t))])


# --- mild mixing probe ------------------------------------------------------------

@dataclass(frozen=True)
class FSSet:
    """Finite sums of the first depth generators (a truncated IP set)."""

    generators: tuple
    depth: int
    elements: tuple = ()

    def __post_init__(self):
        gens = tuple(int(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "elements", tuple(finite_sums(gens, self.depth)))

    @classmethod
    def from_generators(cls, generators, depth=None):
        generators = tuple(generators)
        return cls(generators, len(generators) if depth is None else depth)


@dataclass(frozen=True)
class ProbeResult:
    max_abs: float
    argmax_h: int
    rigidity_gap: float
    base_pairing: complex
    pairings: tuple


def mild_mixing_probe(op, f, g, fs, horizon=MAX_PROBE_HORIZON, samples=DEFAULT_MC_SAMPLES, seed=0):
    """
    max over h in fs of |<T^h f, g>| and the attaining h.

    rigidity_gap = max_h |<T^h f, g> - <f, g>| is small when T^h is close to
    the identity along the set (a rigid, non-mildly-mixing direction).
    """
    if not fs.elements:
        raise ContractError("The FS set is empty.")
    top = fs.elements[-1]
    if top > horizon:
        raise RangeError(f"FS element {top} lies beyond the probe horizon {horizon}.")
    if op.is_dyadic:
        exact = _dyadic_pairings(op, f, g, top + 1)
        values = {h: complex(exact[h]) for h in fs.elements}
        base = complex(exact[0])
    else:
        try:
            base = exact_pairing(op, f, g, 0)
            values = {h: exact_pairing(op, f, g, h) for h in fs.elements}
        except ContractError:
            series, _, _, _ = correlations(op, f, g, top + 1, samples, seed)
            base = complex(series[0])
            values = {h: complex(series[h]) for h in fs.elements}
    hs = list(fs.elements)
    mags = np.array([abs(values[h]) for h in hs])
    i = int(np.argmax(mags))
    gap = max(abs(values[h] - base) for h in hs)
    return ProbeResult(float(mags[i]), hs[i], float(gap), base, tuple((h, values[h]) for h in hs))


# --- pointwise Cesaro bounds -------------------------------------------------------

@dataclass(frozen=True)
class PacbReport:
    """Empirical constant max over members and samples of Cesaro mean / integral."""

    ratio: float
    ratios: tuple
    argmax: tuple


def pacb_ratio(op, f_family, x_samples, N):
    """
    Empirical paCb constant: (1/N) sum_{n<=N} ||T^n f(x)|| divided by the
    integral of ||f||, maximised over samples x, reported per family member.
    """
    if len(f_family) == 0 or len(x_samples) == 0:
        raise ContractError("Need at least one observable and one sample point.")
    ratios, best, where = [], -np.inf, (0, 0)
    for i, f in enumerate(f_family):
        integral = float(f.abs_integral())
        if integral <= 0:
            raise ContractError(f"Family member {i} has zero integral of ||f||.")
        member_best = -np.inf
        for s, x in enumerate(x_samples):
            orbit = orbit_values(op, f, x, N)
            r = float(np.mean(orbit.norms())) / integral
            if r > member_best:
                member_best = r
            if r > best:
                best, where = r, (i, s)
        ratios.append(member_best)
    return PacbReport(float(best), tuple(ratios), where)


def spacb_sup_ratio(op, f, x_samples, N):
    """max_n ||T^n f(x)|| over the sampled orbits, relative to f.sup_norm()."""
    bound = f.sup_norm()
    if bound <= 0:
        raise ContractError("Observable is identically zero.")
    best = 0.0
    for x in x_samples:
        best = max(best, float(np.max(orbit_values(op, f, x, N).norms())))
    return best / bound


# --- dyadic non-mean-ergodicity ----------------------------------------------------

@dataclass(frozen=True)
class DyadicErgodicityRow:
    m: int
    n_upper: int
    avg_upper: Fraction
    n_lower: int
    avg_lower: Fraction


def selected_count(N):
    """|B intersected with [1, N]| for B = union over j >= 1 of [4^j, 2 * 4^j)."""
    total, j = 0, 1
    while 4 ** j <= N:
        total += min(N, 2 * 4 ** j - 1) - 4 ** j + 1
        j += 1
    return total


def dyadic_pairing_sequence(variant, count):
    """
    <R^n f, g> for n = 0..count-1 by literally iterating the mass map, with
    f = 1 on [1/2, 1] and g the indicator of the selected intervals I_{a_j}, j in B.
    """
    predicate = selection_predicate(variant)
    out, m = [], DyadicMass.indicator_upper_half()
    for n in range(count):
        out.append(dyadic_pairing(m, predicate))
        if n + 1 < count:
            m = dyadic_apply(variant, m)
    return out


def dyadic_cesaro_average(variant, N, literal=None):
    """
    (1/N) sum_{n=0}^{N-1} <R^n f, g>, exact.

    The first terms come from the mass map itself; beyond that the pairing
    is 1/2 exactly when n lies in B, so the rest is an integer count.
    """
    if isinstance(variant, OperatorSpec):
        variant = variant.kind
    if variant not in (DYADIC_S, DYADIC_T):
        raise ContractError(f"'{variant}' is not a dyadic operator.")
    literal = LITERAL_PAIRINGS[variant] if literal is None else literal
    head = min(N, literal)
    total = sum(dyadic_pairing_sequence(variant, head), Fraction(0))
    if N > head:
        total += Fraction(selected_count(N - 1) - selected_count(head - 1), 2)
    return total / N


def dyadic_mean_ergodicity(variant, m_max=10):
    """
    Exact Cesaro averages at N = 2^{2m+1} (tending to 1/3) and N = 2^{2m+2}
    (tending to 1/6) for m = 1..m_max.
    """
    if isinstance(variant, OperatorSpec):
        variant = variant.kind
    # Security: Input validation
    if not 1 <= m_max <= MAX_DYADIC_M:
        raise ContractError(f"m_max must lie in 1..{MAX_DYADIC_M}.")
    rows = []
    for m in range(1, m_max + 1):
        n_up, n_low = 2 ** (2 * m + 1), 2 ** (2 * m + 2)
        rows.append(DyadicErgodicityRow(
            m,
            n_up,
            dyadic_cesaro_average(variant, n_up),
            n_low,
            dyadic_cesaro_average(variant, n_low),
        ))
    return tuple(rows)


