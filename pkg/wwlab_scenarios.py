"""
Named, reproducible experiments for the Wiener-Wintner laboratory.

Each scenario binds an operator, an observable and (optionally) a weight
class to one claim, runs it over a list of seeds and writes CSV curves,
a bounds.json of certified bounds and a manifest.json. Scenarios are
configured by TOML files; every name in a config is resolved against the
registries below before anything is computed.

Configuration tables:
    [scenario]   name, output, seeds, checkpoints, arithmetic
    [operator]   kind, map, alpha, multiplier, radius, precision_bits
    [observable] kind and its parameters
    [weights]    class, deltas, alphabet, exponent
    [params]     scenario-specific knobs
"""

import csv
import hashlib
import json
import logging
import math
import os
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
import scipy

from wwlab_core import (
    ARITHMETIC_MODELS,
    EXACT_RATIONAL,
    FIXED_MASK,
    FIXED_ONE,
    FIXED_POINT_128,
    FLOAT64,
    ConfigError,
    ContractError,
    OrbitSeq,
    __version__,
    cesaro_norm,
    fixed_e,
    fixed_sqrt2_minus_1,
    fixed_to_float,
    partial_sums,
    to_fixed,
)
from wwlab_diagnostics import (
    LITERAL_PAIRINGS,
    FSSet,
    dyadic_cesaro_average,
    dyadic_mean_ergodicity,
    dyadic_pairing_sequence,
    mild_mixing_probe,
    mixing_profile,
    pacb_ratio,
    spacb_sup_ratio,
)
from wwlab_operators import (
    DYADIC_S,
    DYADIC_T,
    CharacterMultiplier,
    DyadicMass,
    MatrixMultiplier,
    OperatorSpec,
    non_contractive_multiplier,
    orbit_model,
    orbit_values,
    selection_predicate,
    ucalpha_polynomial_weight,
)
from wwlab_systems import (
    BernoulliState,
    MapSpec,
    Observable,
    StepObservable,
    continued_fraction_denominators,
    sample_points,
)
from wwlab_twisted import decay_profile, grid_sums, modulate, sup_over_circle, twisted_average
from wwlab_weights import (
    CLASS_C,
    CLASS_I,
    WEIGHT_CLASSES,
    WeightSeq,
    abel_upper_bound,
    brute_force_small,
    check_R,
    example_r_params,
    power_rate,
    witness_search,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

WORKERS_ENV = "WWLAB_WORKERS"
MAX_WORKERS = 64
DEFAULT_RESULTS_DIR = "results"
TOLERANCE = 1e-9


# --- configuration -------------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioConfig:
    """One scenario run: the [scenario] fields plus the raw component tables."""

    name: str
    output: str = None
    seeds: tuple = (0,)
    checkpoints: tuple = ()
    arithmetic: str = FIXED_POINT_128
    operator: dict = field(default_factory=dict)
    observable: dict = field(default_factory=dict)
    weights: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def output_dir(self):
        return Path(self.output or os.path.join(DEFAULT_RESULTS_DIR, self.name))

    def canonical_bytes(self):
        return json.dumps(asdict(self), sort_keys=True, default=str).encode("utf-8")


@dataclass(frozen=True)
class Scenario:
    """Registry entry: the claim a scenario checks and how to run it."""

    name: str
    claim: str
    mechanism: str
    check: str
    runner: object
    defaults: ScenarioConfig
    models: tuple = (FIXED_POINT_128,)
    reads: frozenset = frozenset()
    classes: tuple = ()


@dataclass
class Table:
    header: tuple
    rows: list = field(default_factory=list)


@dataclass
class ScenarioResult:
    name: str
    passed: bool
    tables: dict
    bounds: list = field(default_factory=list)
    report: list = field(default_factory=list)


SCENARIOS = {}
COMPONENT_TABLES = ("operator", "observable", "weights")


def register(name, claim, mechanism, check, models=(FIXED_POINT_128,), classes=(), **defaults):
    """
    Decorator adding a runner to SCENARIOS with its default configuration.

    models lists the arithmetic models the runner supports, the first being
    the default. The component tables present in defaults are the only ones
    a config may set; classes restricts [weights] class when given.
    """
    reads = frozenset(t for t in COMPONENT_TABLES if defaults.get(t))
    if "weights" in reads and not classes:
        classes = (defaults["weights"]["class"],)

    def wrap(fn):
        config = ScenarioConfig(name, arithmetic=models[0], **defaults)
        SCENARIOS[name] = Scenario(name, claim, mechanism, check, fn, config, tuple(models), reads,
                                   tuple(classes))
        return fn

    return wrap


# --- component registries ------------------------------------------------------------------

def _golden_fixed():
    return (math.isqrt(5 << 256) - FIXED_ONE) >> 1


NAMED_ANGLES = {
    "sqrt2-1": fixed_sqrt2_minus_1,
    "golden": _golden_fixed,
}


def resolve_alpha(value):
    """Fixed-point angle from a named constant, a rational string or a float."""
    if isinstance(value, str) and value in NAMED_ANGLES:
        return NAMED_ANGLES[value]()
    if isinstance(value, bool) or not isinstance(value, (str, float, int)):
        raise ConfigError(f"Cannot resolve angle {value!r}.")
    try:
        frac = Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"Cannot resolve angle {value!r}.") from exc
    if not 0 < frac < 1:
        raise ConfigError(f"Angle {value!r} must lie strictly between 0 and 1.")
    return to_fixed(frac)


def _require(table, key, what):
    if key not in table:
        raise ConfigError(f"{what} needs '{key}'.")
    return table[key]


def build_map(table):
    kind = table.get("map", "rotation")
    if kind == "rotation":
        return MapSpec.rotation(resolve_alpha(_require(table, "alpha", "A rotation")))
    if kind == "doubling":
        return MapSpec.doubling(int(table.get("precision_bits", 64)))
    if kind == "identity":
        return MapSpec.identity()
    raise ConfigError(f"Unknown map '{kind}'; expected rotation, doubling or identity.")


def build_multiplier(table):
    kind = table.get("multiplier", "character")
    if kind == "character":
        return CharacterMultiplier(int(table.get("freq", 1)), int(table.get("dim", 1)),
                                   float(table.get("radius", 1.0)))
    if kind == "rotation-matrix":
        return MatrixMultiplier.rotation(float(table.get("radius", 0.9)))
    if kind == "non-contractive":
        return non_contractive_multiplier(resolve_alpha(_require(table, "alpha", "non-contractive")))
    raise ConfigError(f"Unknown multiplier '{kind}'.")


OPERATOR_BUILDERS = {
    "koopman": lambda t: OperatorSpec.koopman(build_map(t)),
    "mult-op": lambda t: OperatorSpec.mult_op(build_multiplier(t)),
    "mult-koopman": lambda t: OperatorSpec.mult_koopman(build_multiplier(t), build_map(t)),
    "twisted-u": lambda t: OperatorSpec.twisted_u(resolve_alpha(_require(t, "alpha", "twisted-u"))),
    "non-contractive-s": lambda t: OperatorSpec.non_contractive_s(
        resolve_alpha(_require(t, "alpha", "non-contractive-s"))
    ),
    "pairing-koopman": lambda t: OperatorSpec.pairing_koopman(
        build_observable(_require(t, "dual", "pairing-koopman")), build_map(t)
    ),
    "dyadic-t": lambda t: OperatorSpec.dyadic_t(),
    "dyadic-s": lambda t: OperatorSpec.dyadic_s(),
}


def _random_trig(table, seed):
    rng = np.random.default_rng(int(table.get("seed", 0)) if seed is None else seed)
    return Observable.random(rng, int(table.get("degree", 4)), int(table.get("dim", 1)),
                             bool(table.get("mean_zero", False)))


OBSERVABLE_BUILDERS = {
    "character": lambda t, s: Observable.character(int(t.get("freq", 1)), int(t.get("dim", 1)),
                                                   complex(t.get("amplitude", 1.0))),
    "constant": lambda t, s: Observable.constant(complex(t.get("value", 1.0)), int(t.get("dim", 1))),
    "random-trig": _random_trig,
    "indicator": lambda t, s: StepObservable.indicator(Fraction(str(t.get("a", 0))),
                                                       Fraction(str(t.get("b", 1))),
                                                       int(t.get("dim", 1))),
    "upper-half": lambda t, s: DyadicMass.indicator_upper_half(),
    "dyadic-interval": lambda t, s: DyadicMass.interval_indicator(int(t.get("k", 0))),
}


def build_operator(table):
    if not table:
        return None
    kind = table.get("kind")
    if kind not in OPERATOR_BUILDERS:
        raise ConfigError(f"Unknown operator '{kind}'; expected one of {sorted(OPERATOR_BUILDERS)}.")
    try:
        return OPERATOR_BUILDERS[kind](table)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"Operator '{kind}': {exc}") from exc


def build_observable(table, seed=None):
    """Observable from its table; random-trig draws its coefficients from seed."""
    if not table:
        return None
    kind = table.get("kind")
    if kind not in OBSERVABLE_BUILDERS:
        raise ConfigError(
            f"Unknown observable '{kind}'; expected one of {sorted(OBSERVABLE_BUILDERS)}."
        )
    try:
        return OBSERVABLE_BUILDERS[kind](table, seed)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"Observable '{kind}': {exc}") from exc


# --- loading and resolution ------------------------------------------------------------

def _check_tables(scenario, tables):
    unused = sorted(set(tables) - scenario.reads)
    if unused:
        raise ConfigError(f"Scenario '{scenario.name}' does not read the tables {unused}.")


def config_from_dict(data):
    """Merge a parsed TOML document onto the registered defaults of its scenario."""
    unknown = set(data) - {"scenario", "operator", "observable", "weights", "params"}
    if unknown:
        raise ConfigError(f"Unknown config tables: {sorted(unknown)}.")
    head = data.get("scenario", {})
    name = head.get("name")
    if name not in SCENARIOS:
        raise ConfigError(f"Unknown scenario '{name}'; run 'wwlab list' for the registered names.")
    base = SCENARIOS[name].defaults
    _check_tables(SCENARIOS[name], [t for t in COMPONENT_TABLES if t in data])
    extra = set(head) - {"name", "output", "seeds", "checkpoints", "arithmetic"}
    if extra:
        raise ConfigError(f"Unknown [scenario] keys: {sorted(extra)}.")
    params = dict(base.params)
    for key, value in data.get("params", {}).items():
        if key not in params:
            raise ConfigError(f"Scenario '{name}' has no parameter '{key}'.")
        params[key] = value
    return ScenarioConfig(
        name=name,
        output=head.get("output", base.output),
        seeds=tuple(int(s) for s in head.get("seeds", base.seeds)),
        checkpoints=tuple(int(n) for n in head.get("checkpoints", base.checkpoints)),
        arithmetic=head.get("arithmetic", base.arithmetic),
        operator=dict(data.get("operator", base.operator)),
        observable=dict(data.get("observable", base.observable)),
        weights=dict(data.get("weights", base.weights)),
        params=params,
    )


def load_config(path):
    """Parse a TOML scenario file; returns (ScenarioConfig, raw bytes)."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"Cannot read config {path}: {exc}") from exc
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"Config {path} does not parse: {exc}") from exc
    return config_from_dict(data), raw


def default_config(name):
    if name not in SCENARIOS:
        raise ConfigError(f"Unknown scenario '{name}'; run 'wwlab list' for the registered names.")
    return SCENARIOS[name].defaults


@dataclass(frozen=True)
class RunContext:
    """A resolved configuration: built components, worker count and verbosity."""

    config: ScenarioConfig
    operator: OperatorSpec
    workers: int = 1
    verbose: bool = False

    @property
    def params(self):
        return self.config.params

    @property
    def seeds(self):
        return self.config.seeds

    @property
    def checkpoints(self):
        return self.config.checkpoints

    def orbit(self, f, x, N):
        """Orbit of the configured operator in the configured arithmetic model."""
        return orbit_values(self.operator, f, x, N, self.config.arithmetic)

    def observable(self, seed=None):
        return build_observable(self.config.observable, seed)

    def weight_class(self):
        return self.config.weights.get("class", CLASS_I)

    def deltas(self):
        return tuple(float(d) for d in self.config.weights.get("deltas", ()))

    def alphabet(self):
        return int(self.config.weights.get("alphabet", 16))


def workers_from_env():
    value = os.environ.get(WORKERS_ENV, "1")
    try:
        workers = int(value)
    except ValueError as exc:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {value!r}.") from exc
    if not 1 <= workers <= MAX_WORKERS:
        raise ConfigError(f"{WORKERS_ENV} must lie in 1..{MAX_WORKERS}.")
    return workers


def resolve(config, workers=1, verbose=False):
    """
    Check every name in config and build its components.

    Raises ConfigError before any computation when a name does not resolve.
    """
    if config.name not in SCENARIOS:
        raise ConfigError(f"Unknown scenario '{config.name}'.")
    scenario = SCENARIOS[config.name]
    if config.arithmetic not in ARITHMETIC_MODELS:
        raise ConfigError(
            f"Unknown arithmetic model '{config.arithmetic}'; expected one of {ARITHMETIC_MODELS}."
        )
    if config.arithmetic not in scenario.models:
        raise ConfigError(
            f"Scenario '{config.name}' runs in {list(scenario.models)}, not {config.arithmetic}."
        )
    _check_tables(scenario, [t for t in COMPONENT_TABLES if getattr(config, t)])
    if not config.seeds:
        raise ConfigError("At least one seed is required.")
    if any(b <= a for a, b in zip(config.checkpoints, config.checkpoints[1:])):
        raise ConfigError("checkpoints must be strictly ascending.")
    if config.weights:
        cls = config.weights.get("class")
        if cls not in WEIGHT_CLASSES:
            raise ConfigError(f"Unknown weight class {cls!r}; expected one of {WEIGHT_CLASSES}.")
        if cls not in scenario.classes:
            raise ConfigError(f"Scenario '{config.name}' takes weight classes {list(scenario.classes)}.")
    operator = build_operator(config.operator)
    if operator is not None:
        try:
            orbit_model(operator, config.arithmetic)
        except ContractError as exc:
            raise ConfigError(str(exc)) from exc
    build_observable(config.observable, config.seeds[0])
    return RunContext(config, operator, workers, verbose)


# --- running ------------------------------------------------------------------------------

def map_seeds(ctx, fn):
    """fn(seed) for every seed; results come back in seed order whatever the worker count."""
    if ctx.workers <= 1 or len(ctx.seeds) == 1:
        return [fn(seed) for seed in ctx.seeds]
    with ThreadPoolExecutor(max_workers=ctx.workers) as pool:
        return list(pool.map(fn, ctx.seeds))


def _banner(ctx, title):
    if ctx.verbose:
        print("=" * 70)
        print(title)
        print("=" * 70)


def _step(ctx, i, n, text):
    if ctx.verbose:
        print(f"[{i}/{n}] {text}")


def _cell(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_table(table, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.header)
        for row in table.rows:
            writer.writerow([_cell(v) for v in row])


def _sha256_of_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_artifacts(result, config, config_bytes, out_dir):
    """CSV tables, bounds.json and manifest.json; no timestamps, sorted keys."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {}
    for name, table in result.tables.items():
        path = out_dir / f"{name}.csv"
        write_table(table, path)
        files[path.name] = _sha256_of_file(path)
    bounds_path = out_dir / "bounds.json"
    with open(bounds_path, "w", encoding="utf-8") as fh:
        json.dump({"scenario": result.name, "bounds": result.bounds}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    files[bounds_path.name] = _sha256_of_file(bounds_path)
    manifest = {
        "scenario": result.name,
        "passed": bool(result.passed),
        "config_sha256": hashlib.sha256(config_bytes).hexdigest(),
        "seeds": list(config.seeds),
        "arithmetic": config.arithmetic,
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "wwlab": __version__,
        },
        "files": files,
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out_dir


def run_scenario(config, config_bytes=None, out_dir=None, workers=1, verbose=False, write=True):
    """
    Resolve and run one scenario, then write its artifacts.

    Returns:
    --------
    (ScenarioResult, output directory or None)
    """
    ctx = resolve(config, workers, verbose)
    scenario = SCENARIOS[config.name]
    _banner(ctx, f"{scenario.name.upper()}\nClaim: {scenario.claim}")
    logger.info("running %s with seeds %s and %d worker(s)", config.name, config.seeds, workers)
    result = scenario.runner(ctx)
    path = None
    if write:
        path = write_artifacts(result, config, config_bytes or config.canonical_bytes(),
                               out_dir or config.output_dir())
    if verbose:
        mark = "✓" if result.passed else "✗"
        print(f"\n{mark} {scenario.name}: {'passed' if result.passed else 'FAILED'}")
        for line in result.report:
            print(f"  {line}")
    return result, path


def describe(name):
    """Human-readable mapping from a scenario to the claim it checks."""
    s = SCENARIOS.get(name)
    if s is None:
        raise ConfigError(f"Unknown scenario '{name}'.")
    lines = [
        s.name,
        f"  claim:     {s.claim}",
        f"  mechanism: {s.mechanism}",
        f"  checks:    {s.check}",
        f"  arithmetic: {', '.join(s.models)}",
    ]
    if s.defaults.operator:
        lines.append(f"  operator:  {s.defaults.operator}")
    if s.defaults.observable:
        lines.append(f"  observable: {s.defaults.observable}")
    if s.classes:
        lines.append(f"  weights:   class {', '.join(s.classes)}")
    return "\n".join(lines)


# --- shared helpers ---------------------------------------------------------------------------

def _lam_row(lam):
    return [float(np.real(lam)), float(np.imag(lam))]


def _weights_row(c):
    return [_lam_row(z) for z in np.asarray(c)]


def _bound(label, lower, upper, witness=None):
    return {"label": label, "lower": float(lower), "upper": float(upper), "witness": witness}


def _strictly_decreasing(values):
    return all(b < a for a, b in zip(values, values[1:]))


def _random_orbit(rng, N, d):
    return OrbitSeq(rng.standard_normal((N, d)) + 1j * rng.standard_normal((N, d)))


def _fixed_phase_values(phases):
    return fixed_e(np.asarray(phases, dtype=object) & FIXED_MASK)


# --- scenarios --------------------------------------------------------------------------------

@register(
    "ww-me-counterexample",
    claim="Uniform twisted averages fail for the multiplication operator M_e on L^1",
    mechanism="M_e^n f(x) = e(nx) f(x), so the average twisted by lambda_x = e(-x) is f(x) itself",
    check="|A_N(lambda_x) - f(x)| <= 1e-9 for seeded x and degree-4 f at every checkpoint",
    seeds=(0, 1, 2, 3),
    checkpoints=(10, 100, 10000),
    operator={"kind": "mult-op", "multiplier": "character", "freq": 1},
    observable={"kind": "random-trig", "degree": 4},
    params={"points_per_seed": 25, "tolerance": TOLERANCE},
)
def run_me_counterexample(ctx):
    op, Nmax = ctx.operator, ctx.checkpoints[-1]

    def per_seed(seed):
        f = ctx.observable(seed)
        rows = []
        for i, x in enumerate(sample_points(seed, ctx.params["points_per_seed"])):
            orbit = ctx.orbit(f, x, Nmax)
            lam = complex(_fixed_phase_values([-x])[0])
            fx = f.evaluate_fixed([x])[0]
            for N in ctx.checkpoints:
                avg = twisted_average(orbit, lam, N).as_array()
                rows.append((seed, i, N, float(np.linalg.norm(avg - fx))))
        return rows

    rows = [r for chunk in map_seeds(ctx, per_seed) for r in chunk]
    worst = max(r[3] for r in rows)
    passed = worst <= ctx.params["tolerance"]
    return ScenarioResult(
        ctx.config.name,
        passed,
        {"identity": Table(("seed", "point", "N", "err"), rows)},
        [_bound("max err", 0.0, worst)],
        [f"max |A_N(lambda_x) - f(x)| = {worst:.3e} over {len(rows)} evaluations"],
    )


@register(
    "ualpha-polynomial",
    claim="Uniformity fails for polynomial twists: U_alpha has a polynomially twisted average equal to 1",
    mechanism="U_alpha^n e(x) = e(C(n+1,2) alpha + (n+1) x), cancelled by the weight e(p_x(n))",
    check="(1/N) sum U_alpha^n f(x) e(p_x(n)) = 1 within 1e-6 for N up to 1e5 and 16 seeded x",
    seeds=(0,),
    checkpoints=(10, 100, 1000, 10000, 100000),
    operator={"kind": "twisted-u", "alpha": "sqrt2-1"},
    observable={"kind": "character", "freq": 1},
    params={"points_per_seed": 16, "tolerance": 1e-6},
)
def run_ualpha_polynomial(ctx):
    op, Nmax = ctx.operator, ctx.checkpoints[-1]
    f = ctx.observable()

    def per_seed(seed):
        rows = []
        for i, x in enumerate(sample_points(seed, ctx.params["points_per_seed"])):
            values = ctx.orbit(f, x, Nmax).values[:, 0]
            running = np.cumsum(values * ucalpha_polynomial_weight(x, op.alpha, Nmax))
            for N in ctx.checkpoints:
                avg = running[N - 1] / N
                rows.append((seed, i, N, avg.real, avg.imag, abs(avg - 1.0)))
        return rows

    rows = [r for chunk in map_seeds(ctx, per_seed) for r in chunk]
    worst = max(r[5] for r in rows)
    return ScenarioResult(
        ctx.config.name,
        worst <= ctx.params["tolerance"],
        {"averages": Table(("seed", "point", "N", "avg_re", "avg_im", "err"), rows)},
        [_bound("polynomially twisted average", 1.0 - worst, 1.0 + worst)],
        [f"max |average - 1| = {worst:.3e}"],
    )


def _literal_rows(variant, arithmetic):
    """
    Averages over the literally iterated prefix, as an exact OrbitSeq, against
    the averages that count B after the first pairing.
    """
    count = LITERAL_PAIRINGS[variant]
    seq = OrbitSeq(np.array(dyadic_pairing_sequence(variant, count), dtype=object), arithmetic,
                   {"operator": variant})
    V = partial_sums(seq).V
    rows, N = [], 1
    while N <= count:
        rows.append((variant, N, V[N - 1, 0] / N, dyadic_cesaro_average(variant, N, literal=1),
                     cesaro_norm(seq, N)))
        N *= 2
    return rows


@register(
    "dyadic-not-mean-ergodic",
    claim="A pointwise absolutely Cesaro bounded contraction need not be mean ergodic",
    mechanism="<R^n f, g> is 1/2 exactly when n lies in B = union of [4^m, 2 * 4^m), else 0",
    check="exact averages 1/3 - 4^-m/3 at N = 2^(2m+1) and 1/6 - 4^-m/6 at N = 2^(2m+2), equal for S and T",
    models=(EXACT_RATIONAL,),
    seeds=(0,),
    params={"m_max": 10, "variants": ["dyadic-s", "dyadic-t"]},
)
def run_dyadic_not_mean_ergodic(ctx):
    m_max = int(ctx.params["m_max"])
    variants = list(ctx.params["variants"])
    unknown = [v for v in variants if v not in (DYADIC_S, DYADIC_T)]
    if unknown:
        raise ConfigError(f"Unknown dyadic variants {unknown}.")
    tables, rows_by_variant, report, literal_rows = {}, {}, [], []
    for i, variant in enumerate(variants, start=1):
        _step(ctx, i, len(variants), f"exact Cesaro averages for {variant}")
        rows = dyadic_mean_ergodicity(variant, m_max)
        rows_by_variant[variant] = rows
        tables[f"cesaro_{variant.replace('-', '_')}"] = Table(
            ("m", "N_upper", "avg_upper", "avg_upper_float", "N_lower", "avg_lower", "avg_lower_float"),
            [(r.m, r.n_upper, r.avg_upper, float(r.avg_upper), r.n_lower, r.avg_lower,
              float(r.avg_lower)) for r in rows],
        )
        literal_rows.extend(_literal_rows(variant, ctx.config.arithmetic))
    tables["literal_prefix"] = Table(
        ("variant", "N", "mass_map_avg", "counting_avg", "cesaro_norm"), literal_rows
    )
    passed = True
    for variant, N, direct, counted, _ in literal_rows:
        if direct != counted:
            passed = False
            report.append(f"{variant}, N = {N}: mass map gives {direct}, counting gives {counted}")
    reference = rows_by_variant[variants[0]]
    for variant, rows in rows_by_variant.items():
        if [(r.avg_upper, r.avg_lower) for r in rows] != [(r.avg_upper, r.avg_lower) for r in reference]:
            passed = False
            report.append(f"{variant} disagrees with {variants[0]}")
    for r in reference:
        quarter = Fraction(1, 4 ** r.m)
        if r.avg_upper != Fraction(1, 3) - quarter / 3 or r.avg_lower != Fraction(1, 6) - quarter / 6:
            passed = False
            report.append(f"m = {r.m}: averages {r.avg_upper}, {r.avg_lower} off the closed form")
    last = reference[-1]
    report.append(f"m = {last.m}: upper {last.avg_upper} ~ {float(last.avg_upper):.6f}, "
                  f"lower {last.avg_lower} ~ {float(last.avg_lower):.6f}")
    bounds = [_bound("liminf vs limsup of the Cesaro averages", last.avg_lower, last.avg_upper, last.m)]
    return ScenarioResult(ctx.config.name, passed, tables, bounds, report)


def _bernoulli_orbit(op, f, seed, N, arithmetic=None):
    return orbit_values(op, f, BernoulliState(seed), N, arithmetic)


@register(
    "ww-doubling",
    claim="Uniform Wiener-Wintner convergence to 0 for weakly mixing vectors (Bernoulli witness)",
    mechanism="the Bernoulli orbit of a mean-zero character has no rigid frequency, so the certified sup decays",
    check="median certified sup over 32 seeds strictly decreasing along N = 2^8..2^16, and <= 0.05 at 2^16",
    models=(FLOAT64,),
    seeds=tuple(range(32)),
    checkpoints=(256, 1024, 4096, 16384, 65536),
    operator={"kind": "koopman", "map": "doubling", "precision_bits": 64},
    observable={"kind": "character", "freq": 1},
    params={"grid_factor": 8, "final_max": 0.05},
)
def run_ww_doubling(ctx):
    op, f = ctx.operator, ctx.observable()
    Nmax = ctx.checkpoints[-1]

    def per_seed(seed):
        orbit = _bernoulli_orbit(op, f, seed, Nmax, ctx.config.arithmetic)
        return decay_profile(orbit, ctx.checkpoints, ctx.params["grid_factor"])

    profiles = map_seeds(ctx, per_seed)
    seed_rows, curve = [], []
    for seed, profile in zip(ctx.seeds, profiles):
        for cs in profile:
            seed_rows.append((seed, cs.degree, cs.grid_max, cs.certified_upper))
    bounds = []
    for j, N in enumerate(ctx.checkpoints):
        lows = np.array([p[j].grid_max for p in profiles])
        ups = np.array([p[j].certified_upper for p in profiles])
        curve.append((N, float(np.median(lows)), float(np.median(ups)), float(np.max(ups))))
        bounds.append(_bound(f"N={N} median", np.median(lows), np.median(ups),
                             _lam_row(profiles[0][j].grid_argmax)))
    medians = [row[2] for row in curve]
    passed = _strictly_decreasing(medians) and medians[-1] <= ctx.params["final_max"]
    return ScenarioResult(
        ctx.config.name,
        passed,
        {
            "decay": Table(("N", "median_grid_max", "median_certified", "max_certified"), curve),
            "sup_by_seed": Table(("seed", "N", "grid_max", "certified_upper"), seed_rows),
        },
        bounds,
        [f"median certified sup: {', '.join(f'{m:.4f}' for m in medians)}"],
    )


@register(
    "ww-rotation-control",
    claim="Weak mixing is necessary: a rotation orbit keeps a twisted average of size 1",
    mechanism="(1/N) sum e(x + n alpha) e(-n alpha) = e(x), so the sup sits at lambda = e(-alpha)",
    check="grid_max >= 1 - 1e-9 at every checkpoint, with the grid shifted onto e(-alpha)",
    models=(FIXED_POINT_128, FLOAT64),
    seeds=(0,),
    checkpoints=(256, 1024, 4096, 16384, 65536),
    operator={"kind": "koopman", "map": "rotation", "alpha": "sqrt2-1"},
    observable={"kind": "character", "freq": 1},
    params={"points_per_seed": 4, "grid_factor": 8, "tolerance": TOLERANCE},
)
def run_ww_rotation_control(ctx):
    op, f = ctx.operator, ctx.observable()
    offset = -fixed_to_float(op.alpha)
    Nmax = ctx.checkpoints[-1]

    def per_seed(seed):
        rows = []
        for i, x in enumerate(sample_points(seed, ctx.params["points_per_seed"])):
            orbit = ctx.orbit(f, x, Nmax)
            for N in ctx.checkpoints:
                cs = sup_over_circle(orbit, N, ctx.params["grid_factor"] * N, offset)
                rows.append((seed, i, N, cs.grid_max, cs.certified_upper))
        return rows

    rows = [r for chunk in map_seeds(ctx, per_seed) for r in chunk]
    low = min(r[3] for r in rows)
    return ScenarioResult(
        ctx.config.name,
        low >= 1.0 - ctx.params["tolerance"],
        {"control": Table(("seed", "point", "N", "grid_max", "certified_upper"), rows)},
        [_bound("min grid_max", low, max(r[4] for r in rows), _lam_row(np.exp(2j * np.pi * offset)))],
        [f"smallest grid maximum {low:.12f}"],
    )


@register(
    "certificate-soundness",
    claim="The grid maximum and the Bernstein bound bracket the sup of a trigonometric polynomial",
    mechanism="|p'| <= N sup|p| limits the loss between grid points of spacing 1/M to pi N / M",
    check="a dense 64N-point oracle lies in [grid_max, certified_upper] with M = 8N on random data",
    models=(FLOAT64,),
    seeds=(0, 1, 2, 3, 4),
    params={"instances_per_seed": 100, "n_max": 256, "grid_factor": 8, "oracle_factor": 64},
)
def run_certificate_soundness(ctx):
    p = ctx.params

    def per_seed(seed):
        rng = np.random.default_rng(seed)
        rows = []
        for i in range(p["instances_per_seed"]):
            N = int(rng.integers(1, p["n_max"] + 1))
            d = int(rng.integers(1, 3))
            v = _random_orbit(rng, N, d)
            cs = sup_over_circle(v, N, p["grid_factor"] * N)
            dense = grid_sums(v, N, p["oracle_factor"] * N) / N
            oracle = float(np.max(np.linalg.norm(dense, axis=1)))
            tol = TOLERANCE * max(1.0, oracle)
            ok = cs.grid_max <= oracle + tol and oracle <= cs.certified_upper + tol
            rows.append((seed, i, N, d, cs.grid_max, oracle, cs.certified_upper, ok))
        return rows

    rows = [r for chunk in map_seeds(ctx, per_seed) for r in chunk]
    failures = [r for r in rows if not r[7]]
    return ScenarioResult(
        ctx.config.name,
        not failures,
        {"soundness": Table(("seed", "instance", "N", "d", "grid_max", "oracle", "certified_upper",
                             "ok"), rows)},
        [_bound(f"seed {r[0]} instance {r[1]}", r[4], r[6]) for r in rows[:10]],
        [f"{len(rows) - len(failures)}/{len(rows)} instances bracketed"],
    )


def _sandwich_rows(ctx, cls, seed, n_max, dims):
    """Witness, brute force and Abel bound on small random instances of one weight class."""
    p = ctx.params
    q = ctx.alphabet()
    deltas = ctx.deltas()
    rng = np.random.default_rng(seed)
    rows, bounds = [], []
    for i in range(p["instances_per_seed"]):
        N = int(rng.integers(2, n_max + 1))
        delta = deltas[i % len(deltas)]
        d = 1 if delta >= 2 else int(rng.choice(dims))
        v = _random_orbit(rng, N, d)
        if cls == CLASS_C:
            v = modulate(v, np.exp(2j * np.pi * rng.random()))
        wit = witness_search(v, N, delta, cls)
        brute = brute_force_small(v, N, delta, cls, q=q)
        upper = abel_upper_bound(v, N, delta, cls)
        mean_abs = float(np.mean(np.linalg.norm(v.values[:N], axis=1)))
        slack = math.pi / q * mean_abs
        tol = TOLERANCE * max(1.0, upper)
        ok = wit.value <= upper + tol and brute.value <= upper + tol
        if cls == CLASS_I:
            ok = ok and wit.value <= brute.value + slack + tol
            if delta >= 2 and d == 1:
                ok = ok and mean_abs - brute.value <= 2 * math.pi / q * mean_abs + tol
        rows.append((seed, i, N, d, delta, wit.value, brute.value, slack, upper, brute.method, ok))
        bounds.append(_bound(f"seed {seed} instance {i}", max(wit.value, brute.value), upper,
                             _weights_row(brute.weights.c)))
    return rows, bounds


SANDWICH_HEADER = ("seed", "instance", "N", "d", "delta", "witness", "brute", "rounding_slack",
                   "abel_upper", "brute_method", "ok")


def _run_sandwich(ctx, cls, n_max):
    results = map_seeds(ctx, lambda seed: _sandwich_rows(ctx, cls, seed, n_max, (1, 2)))
    rows = [r for chunk, _ in results for r in chunk]
    bounds = [b for _, chunk in results for b in chunk]
    failures = [r for r in rows if not r[-1]]
    return ScenarioResult(
        ctx.config.name,
        not failures,
        {"sandwich": Table(SANDWICH_HEADER, rows)},
        bounds,
        [f"{len(rows) - len(failures)}/{len(rows)} instances satisfy the sandwich"]
        + [f"failed: seed {r[0]} instance {r[1]} N={r[2]} delta={r[4]}" for r in failures[:5]],
    )


@register(
    "iclass-sandwich",
    claim="Weighted averages over bounded-variation weights are controlled by partial sums",
    mechanism="summation by parts: sup over I(N, delta) <= (N delta + 1)/N max ||V_n||",
    check="witness <= brute force + rounding slack <= Abel bound; delta = 2 recovers (1/N) sum |v_n|",
    models=(FLOAT64,),
    seeds=(0, 1, 2, 3),
    weights={"class": "I", "deltas": [0.1, 0.5, 2.0], "alphabet": 16},
    params={"instances_per_seed": 50, "n_max": 8},
)
def run_iclass_sandwich(ctx):
    return _run_sandwich(ctx, ctx.weight_class(), int(ctx.params["n_max"]))


@register(
    "cclass-sandwich",
    claim="Weighted averages over modulated bounded-variation weights are controlled by twisted partial sums",
    mechanism="demodulating by lambda turns C(N, delta) into I(N, delta) against lambda-twisted data",
    check="class-C witness and brute force both lie below the class-C Abel bound",
    models=(FLOAT64,),
    seeds=(0, 1),
    weights={"class": "C", "deltas": [0.5, 2.0], "alphabet": 16},
    params={"instances_per_seed": 25, "n_max": 5},
)
def run_cclass_sandwich(ctx):
    return _run_sandwich(ctx, ctx.weight_class(), int(ctx.params["n_max"]))


@register(
    "birkhoff-weights-decay",
    claim="Averages with bounded-variation weights vanish uniformly for weakly mixing vectors",
    mechanism="Abel bound with delta_N = N^(-3/4) on Bernoulli partial sums of order sqrt(N)",
    check="median Abel bound strictly decreasing along dyadic N and <= 0.1 at N = 2^16",
    models=(FLOAT64,),
    classes=(CLASS_I, CLASS_C),
    seeds=tuple(range(16)),
    checkpoints=(256, 1024, 4096, 16384, 65536),
    operator={"kind": "koopman", "map": "doubling", "precision_bits": 64},
    observable={"kind": "character", "freq": 1},
    weights={"class": "I", "exponent": 0.75},
    params={"final_max": 0.1},
)
def run_birkhoff_weights_decay(ctx):
    op, f = ctx.operator, ctx.observable()
    exponent = float(ctx.config.weights.get("exponent", 0.75))
    cls = ctx.weight_class()
    Nmax = ctx.checkpoints[-1]

    def per_seed(seed):
        orbit = _bernoulli_orbit(op, f, seed, Nmax, ctx.config.arithmetic)
        out = []
        for N in ctx.checkpoints:
            delta = power_rate(N, exponent)
            out.append((witness_search(orbit, N, delta, cls).value,
                        abel_upper_bound(orbit, N, delta, cls)))
        return out

    per = map_seeds(ctx, per_seed)
    curve, bounds = [], []
    for j, N in enumerate(ctx.checkpoints):
        lows = np.array([s[j][0] for s in per])
        ups = np.array([s[j][1] for s in per])
        curve.append((N, power_rate(N, exponent), float(np.median(lows)), float(np.median(ups))))
        bounds.append(_bound(f"N={N} median", np.median(lows), np.median(ups)))
    medians = [row[3] for row in curve]
    passed = _strictly_decreasing(medians) and medians[-1] <= ctx.params["final_max"]
    return ScenarioResult(
        ctx.config.name,
        passed,
        {"decay": Table(("N", "delta", "median_witness", "median_abel_upper"), curve)},
        bounds,
        [f"median Abel bound: {', '.join(f'{m:.4f}' for m in medians)}"],
    )


@register(
    "pacb-falsification",
    claim="M_e is not pointwise absolutely Cesaro bounded; contractive cocycles over rotations are",
    mechanism="indicators of [0, 2^-k] keep ||M_e^n f(x)|| = 1 while their integral is 2^-k; "
              "the non-contractive step cocycle only ever doubles a value",
    check="M_e ratio 2^k (above 1e3 for k >= 10); contractive ratio <= 1.1; non-contractive ratio <= 2.1",
    seeds=(0,),
    operator={"kind": "mult-op", "multiplier": "character", "freq": 1},
    params={"k_max": 16, "N": 64, "rotation_N": 4096, "alpha": "sqrt2-1", "points": 8,
            "family_size": 4, "contractive_max": 1.1, "non_contractive_max": 2.1},
)
def run_pacb_falsification(ctx):
    p = ctx.params
    rows, report = [], []
    me = ctx.operator
    _step(ctx, 1, 3, "M_e on shrinking indicators")
    me_ratios = {}
    for k in range(1, p["k_max"] + 1):
        f = StepObservable.indicator(0, Fraction(1, 2 ** k))
        x = to_fixed(Fraction(1, 2 ** (k + 1)))
        r = pacb_ratio(me, [f], [x], p["N"]).ratio
        me_ratios[k] = r
        rows.append(("mult-op", f"indicator[0,2^-{k}]", p["N"], r, 1.0))
    me_ok = all(r > 1e3 for k, r in me_ratios.items() if k >= 10)

    alpha = resolve_alpha(p["alpha"])
    system = MapSpec.rotation(alpha)
    contractive = OperatorSpec.mult_koopman(CharacterMultiplier(1), system)
    non_contractive = OperatorSpec.non_contractive_s(alpha)

    def family(seed):
        rng = np.random.default_rng(seed)
        members = [(f"trig[{i}]", Observable.random(rng, 4)) for i in range(p["family_size"])]
        members += [(f"indicator[0,2^-{k}]", StepObservable.indicator(0, Fraction(1, 2 ** k)))
                    for k in (1, 2, 3)]
        return members

    limits = {}
    for step, (name, op, limit) in enumerate(
        (("mult-koopman", contractive, p["contractive_max"]),
         ("non-contractive-s", non_contractive, p["non_contractive_max"])),
        start=2,
    ):
        _step(ctx, step, 3, f"{name} over the rotation")

        def per_seed(seed, op=op):
            xs = sample_points(seed, p["points"])
            out = []
            for label, f in family(seed):
                out.append((label, pacb_ratio(op, [f], xs, p["rotation_N"]).ratio,
                            spacb_sup_ratio(op, f, xs, p["rotation_N"])))
            return out

        worst = 0.0
        for chunk in map_seeds(ctx, per_seed):
            for label, ratio, sup_ratio in chunk:
                rows.append((name, label, p["rotation_N"], ratio, sup_ratio))
                worst = max(worst, ratio)
        limits[name] = (worst, limit)
        report.append(f"{name}: largest paCb ratio {worst:.4f} (limit {limit})")

    passed = me_ok and all(w <= lim for w, lim in limits.values())
    report.insert(0, f"M_e ratio at k = {p['k_max']}: {me_ratios[p['k_max']]:.1f}")
    bounds = [_bound(name, 0.0, w) for name, (w, _) in limits.items()]
    bounds.append(_bound("mult-op", me_ratios[p["k_max"]], me_ratios[p["k_max"]], p["k_max"]))
    return ScenarioResult(
        ctx.config.name,
        passed,
        {"ratios": Table(("operator", "observable", "N", "pacb_ratio", "sup_ratio"), rows)},
        bounds,
        report,
    )


@register(
    "mixing-hierarchy",
    claim="Strong mixing implies weak mixing implies ergodicity, and the converses fail",
    mechanism="Bernoulli pairings vanish for h >= 1, rotation pairings have modulus 1, "
              "dyadic pairings oscillate between Cesaro values near 1/3 and 1/6",
    check="|ergodic_avg| <= abs_avg <= max |pairing| everywhere; Bernoulli abs_avg = 1/H; rotation abs_avg = 1",
    seeds=(0,),
    params={"H_max": 1024, "alpha": "sqrt2-1", "qmc_H": 64, "qmc_samples": 4096},
)
def run_mixing_hierarchy(ctx):
    p = ctx.params
    alpha = resolve_alpha(p["alpha"])
    e1 = Observable.character(1)
    cases = [
        ("bernoulli", OperatorSpec.koopman(MapSpec.doubling()), e1, e1, p["H_max"]),
        ("rotation", OperatorSpec.koopman(MapSpec.rotation(alpha)), e1, e1, p["H_max"]),
        ("dyadic-s", OperatorSpec.dyadic_s(), DyadicMass.indicator_upper_half(),
         selection_predicate(DYADIC_S), p["H_max"]),
        ("non-contractive-s", OperatorSpec.non_contractive_s(alpha), e1, e1, p["qmc_H"]),
    ]
    tables, report, bounds = {}, [], []
    passed = True
    for i, (label, op, f, g, H) in enumerate(cases, start=1):
        _step(ctx, i, len(cases), f"profile for {label}")
        prof = mixing_profile(op, f, g, H, samples=p["qmc_samples"], seed=ctx.seeds[0])
        tables[f"profile_{label.replace('-', '_')}"] = Table(
            ("H", "ergodic_avg_re", "ergodic_avg_im", "abs_avg", "tail_sup"), prof.rows()
        )
        ok = prof.hierarchy_holds()
        if label == "bernoulli":
            ok = ok and all(abs(a - 1.0 / H_) <= 1e-12 for H_, a in zip(prof.horizons, prof.abs_avg))
        elif label == "rotation":
            ok = ok and all(abs(a - 1.0) <= 1e-9 for a in prof.abs_avg)
        passed = passed and ok
        report.append(f"{label}: method {prof.method}, abs_avg(H_max) = {prof.abs_avg[-1]:.6f}, "
                      f"|ergodic_avg(H_max)| = {abs(prof.ergodic_avg[-1]):.6f}"
                      + (f", stderr {prof.stderr:.2e}" if prof.stderr else ""))
        bounds.append(_bound(label, abs(prof.ergodic_avg[-1]), prof.abs_avg[-1]))
    return ScenarioResult(ctx.config.name, passed, tables, bounds, report)


@register(
    "mild-mixing-probe",
    claim="Rotations are rigid along IP sets built from continued-fraction denominators; Bernoulli is not",
    mechanism="||q_k alpha|| < 1/q_{k+1}, so e(h alpha) is close to 1 for every finite sum h of the q_k",
    check="rotation probe stays 1 with rigidity gap <= 0.1; Bernoulli and disjoint-frequency probes are 0",
    seeds=(0,),
    params={"alpha": "sqrt2-1", "skip": 4, "depth": 8, "max_gap": 0.1},
)
def run_mild_mixing_probe(ctx):
    p = ctx.params
    alpha = resolve_alpha(p["alpha"])
    dens = continued_fraction_denominators(alpha, p["skip"] + p["depth"])[p["skip"]:]
    rigid_fs = FSSet.from_generators(dens, p["depth"])
    doubling_fs = FSSet.from_generators([1 << k for k in range(p["depth"])])
    e1, e2 = Observable.character(1), Observable.character(2)
    rotation = OperatorSpec.koopman(MapSpec.rotation(alpha))
    bernoulli = OperatorSpec.koopman(MapSpec.doubling())
    probes = [
        ("rotation", rotation, e1, e1, rigid_fs),
        ("bernoulli", bernoulli, e1, e1, doubling_fs),
        ("disjoint", rotation, e1, e2, rigid_fs),
    ]
    rows, report, bounds = [], [], []
    results = {}
    for label, op, f, g, fs in probes:
        res = mild_mixing_probe(op, f, g, fs)
        results[label] = res
        rows.append((label, len(fs.elements), fs.elements[-1], res.max_abs, res.argmax_h,
                     res.rigidity_gap))
        report.append(f"{label}: max |<T^h f, g>| = {res.max_abs:.6f} at h = {res.argmax_h}, "
                      f"rigidity gap {res.rigidity_gap:.4f}")
        bounds.append(_bound(label, res.max_abs, res.max_abs, res.argmax_h))
    passed = (
        results["rotation"].rigidity_gap <= p["max_gap"]
        and abs(results["rotation"].max_abs - 1.0) <= TOLERANCE
        and results["bernoulli"].max_abs == 0.0
        and results["disjoint"].max_abs == 0.0
    )
    return ScenarioResult(
        ctx.config.name,
        passed,
        {"probes": Table(("case", "fs_size", "fs_max", "max_abs", "argmax_h", "rigidity_gap"), rows)},
        bounds,
        report,
    )


@register(
    "rclass-rigidity",
    claim="Rigidity-class weights detect rotations but not weakly mixing systems",
    mechanism="c_n = e(-n alpha) is nearly periodic along denominators k (|1 - e(-k alpha)| small), "
              "and it exactly demodulates the rotation orbit of e(.)",
    check="c lies in R(1, N, delta, K) for the first 4 rows; rotation value 1; Bernoulli median <= 0.05",
    seeds=tuple(range(8)),
    checkpoints=(65536,),
    operator={"kind": "koopman", "map": "rotation", "alpha": "sqrt2-1"},
    observable={"kind": "character", "freq": 1},
    params={"horizon": 4, "skip": 4, "depth": 8, "power": 2.0, "scale": 1.0, "b_max": 8,
            "bernoulli_max": 0.05},
)
def run_rclass_rigidity(ctx):
    p = ctx.params
    op, f = ctx.operator, ctx.observable()
    alpha = op.alpha
    N = ctx.checkpoints[-1]
    dens = continued_fraction_denominators(alpha, p["skip"] + p["depth"])[p["skip"]:]
    rp = example_r_params(N, dens, p["depth"], p["power"], 1.0, p["b_max"], p["horizon"], p["scale"])
    n = np.arange(1, N + 1, dtype=object)
    weights = WeightSeq(_fixed_phase_values(n * (-alpha)))
    member = check_R(weights.c, rp)
    modulated = weights.modulated_variation(complex(_fixed_phase_values([-alpha])[0]))
    bernoulli = OperatorSpec.koopman(MapSpec.doubling())

    def per_seed(seed):
        x = sample_points(seed, 1)[0]
        rot = weights.apply(ctx.orbit(f, x, N), N)
        bern = weights.apply(_bernoulli_orbit(bernoulli, f, seed, N), N)
        return seed, rot, bern

    rows = map_seeds(ctx, per_seed)
    rot_min = min(r[1] for r in rows)
    bern_median = float(np.median([r[2] for r in rows]))
    passed = bool(member) and rot_min >= 1.0 - TOLERANCE and bern_median <= p["bernoulli_max"]
    report = [
        f"R-class membership: {bool(member)}, chosen k per row {member.chosen_k}",
        f"modulated variation at lambda = e(-alpha): {modulated:.3e}",
        f"rotation value >= {rot_min:.12f}; Bernoulli median {bern_median:.4f}",
    ]
    return ScenarioResult(
        ctx.config.name,
        passed,
        {
            "values": Table(("seed", "rotation", "bernoulli"), rows),
            "rows": Table(("w", "delta_w", "K_w", "chosen_k"),
                          [(w, rp.delta[w - 1], " ".join(map(str, rp.K[w - 1])), member.chosen_k[w - 1])
                           for w in range(1, len(member.chosen_k) + 1)]),
        },
        [_bound("rotation vs Bernoulli", bern_median, rot_min, _weights_row(weights.c[:8]))],
        report,
    )
