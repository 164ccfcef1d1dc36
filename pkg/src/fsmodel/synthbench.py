"""Synthetic benchmark campaigns with known ground truth.

Two regimes are simulated:

``hardware``
    Configurations drawn uniformly from the hardware/workload grid, each
    metric an exact linear function of the encoded features plus Gaussian
    noise. The planted coefficients are the published per-metric regression
    table, so a correct fit must recover them.

``gluster``
    Block size, cache size and four translator switches at a fixed 100 MB
    workload. Throughput saturates hyperbolically in block size; with
    O_SYNC off the read metrics gain a cache term that saturates in cache
    size and is boosted by read-ahead. Nothing else has an effect.

All randomness comes from :class:`SplitMix64`, so a campaign is a pure
function of its :class:`GeneratorConfig`.
"""

from dataclasses import dataclass, field, asdict
import math

import numpy as np

from .errors import InputError
from .schema import GLUSTER, HARDWARE, Dataset

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_TWO_POW_53 = float(1 << 53)


def _mix64(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def prng_next(state):
    """Advance a SplitMix64 state once.

    Returns ``(value, new_state)`` where ``value`` is the top 53 bits of the
    64-bit output scaled into [0, 1).
    """
    state = (state + GOLDEN_GAMMA) & MASK64
    return (_mix64(state) >> 11) / _TWO_POW_53, state


class SplitMix64:
    """SplitMix64 stream (Steele, Lea and Flood constants).

    >>> rng = SplitMix64(1234567)
    >>> rng.next_u64()
    6457827717110365317
    """

    def __init__(self, seed):
        self.state = int(seed) & MASK64

    def next_u64(self):
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return _mix64(self.state)

    def random(self):
        value, self.state = prng_next(self.state)
        return value

    def normal(self, sigma=1.0):
        # one Box-Muller draw per pair of consecutive uniforms; the sine twin is discarded
        u1 = self.random()
        u2 = self.random()
        return sigma * math.sqrt(-2.0 * math.log1p(-u1)) * math.cos(2.0 * math.pi * u2)

    def randbelow(self, k):
        return min(int(self.random() * k), k - 1)

    def choice(self, seq):
        return seq[self.randbelow(len(seq))]

    def permutation(self, n):
        """Fisher-Yates shuffle of ``range(n)``."""
        idx = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.randbelow(i + 1)
            idx[i], idx[j] = idx[j], idx[i]
        return idx


# Published per-metric coefficients, intercept first, hardware schema order.
# The disk speed rows are printed only as "approximately 0" and planted as 0.
TABLE5_COEFFICIENTS = {
    "write_mbps":      (-120.485, 271.936, 0.0, 0.0,   4.419, 30.729, -34.359, 10.380, -59.182, -0.16),
    "read_mbps":       (-142.931, 237.502, 0.0, 0.0,  -4.406, 15.890, -21.094,  3.508, -21.058, -0.004),
    "rand_read_mbps":  ( -39.676, 162.003, 0.0, 0.0, -17.888, 14.204, -16.546, -0.961, -22.799, -0.003),
    "rand_write_mbps": (-114.066, 230.091, 0.0, 0.0,  -2.190, 34.241, -39.060, 13.538, -60.986, -0.13),
}  # fmt: skip


@dataclass(frozen=True)
class CurveParams:
    t_max: float = 110.0
    b_half: float = 64.0
    cache_gain: float = 0.0
    cache_sat: float = 256.0

    def block_term(self, block_kb):
        return self.t_max * block_kb / (block_kb + self.b_half)

    def cache_term(self, cache_mb, read_ahead):
        if self.cache_gain == 0.0:
            return 0.0
        frac = min(cache_mb, self.cache_sat) / self.cache_sat
        return self.cache_gain * frac * (0.5 + 0.5 * read_ahead)


# rand_read keeps a 40 MB/s cache gain (a 0.95/0.05 block/cache importance
# split); read needs 90 MB/s for its 0.78/0.22 split.
DEFAULT_CURVES = {
    "write_mbps": CurveParams(),
    "read_mbps": CurveParams(cache_gain=90.0),
    "rand_read_mbps": CurveParams(cache_gain=40.0),
    "rand_write_mbps": CurveParams(),
}

DEFAULT_SIGMA = {"hardware": 10.0, "gluster": 2.0}
DEFAULT_FLOOR = {"hardware": None, "gluster": 1.0}


@dataclass(frozen=True)
class GeneratorConfig:
    """Campaign settings.

    ``noise_sigma`` defaults per regime; ``floor_mbps="auto"`` picks the
    regime's floor (``None`` disables flooring). The hardware regime is
    unfloored by default: the planted table predicts negative throughput
    for every Gigabit configuration, and clamping those would take the
    data out of the linear model class.
    """

    regime: str = "hardware"
    n: int = 2000
    seed: int = 42
    noise_sigma: float = None
    o_sync: bool = True
    floor_mbps: object = "auto"
    curves: dict = None

    def __post_init__(self):
        if self.regime not in DEFAULT_SIGMA:
            raise InputError(f"unknown regime {self.regime!r} (expected hardware or gluster)")
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise InputError(f"n must be a positive integer, got {self.n!r}")
        if self.noise_sigma is None:
            object.__setattr__(self, "noise_sigma", DEFAULT_SIGMA[self.regime])
        if not math.isfinite(self.noise_sigma) or self.noise_sigma < 0:
            raise InputError(f"noise_sigma must be finite and >= 0, got {self.noise_sigma}")
        if self.floor_mbps == "auto":
            object.__setattr__(self, "floor_mbps", DEFAULT_FLOOR[self.regime])
        elif self.floor_mbps is not None and not math.isfinite(self.floor_mbps):
            raise InputError("floor_mbps must be finite or None")
        if self.curves is None:
            object.__setattr__(self, "curves", dict(DEFAULT_CURVES))

    @property
    def schema(self):
        return HARDWARE if self.regime == "hardware" else GLUSTER


@dataclass(frozen=True)
class PlantedTruth:
    regime: str
    noise_sigma: float
    coefficients: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)
    o_sync: bool = None
    population_r2: dict = field(default_factory=dict)

    def to_dict(self):
        d = {"regime": self.regime, "noise_sigma": self.noise_sigma}
        if self.regime == "hardware":
            d["coefficients"] = {k: list(v) for k, v in self.coefficients.items()}
            d["population_r2"] = dict(self.population_r2)
        else:
            d["o_sync"] = self.o_sync
            d["curves"] = {k: asdict(v) for k, v in self.curves.items()}
        return d


def _grid_levels(schema):
    # binary features vary over {0, 1}
    return [f.levels if f.levels is not None else (0.0, 1.0) for f in schema.features]


def signal_variance(metric, schema=HARDWARE, coefficients=TABLE5_COEFFICIENTS):
    """Variance of the noiseless hardware-regime response over the grid.

    Features are drawn independently and uniformly, so the variance of
    ``beta . x`` is the sum of ``beta_j**2 * Var(x_j)``.
    """
    var = np.array([np.var(lv) for lv in _grid_levels(schema)])
    beta = np.asarray(coefficients[metric][1:])
    return float(np.sum(beta**2 * var))


def population_r2(metric, sigma, schema=HARDWARE, coefficients=TABLE5_COEFFICIENTS):
    v = signal_variance(metric, schema, coefficients)
    return v / (v + sigma**2) if v + sigma**2 > 0 else 1.0


def sigma_for_r2(metric, target, schema=HARDWARE, coefficients=TABLE5_COEFFICIENTS):
    """Noise level at which the population R^2 of ``metric`` equals ``target``."""
    if not 0.0 < target <= 1.0:
        raise InputError("target R^2 must lie in (0, 1]")
    return math.sqrt(signal_variance(metric, schema, coefficients) * (1.0 - target) / target)


def _floor(y, floor):
    return y if floor is None else max(y, floor)


def _generate_hardware(cfg, rng):
    schema = HARDWARE
    levels = _grid_levels(schema)
    betas = [np.asarray(TABLE5_COEFFICIENTS[m]) for m in schema.metrics]
    X = np.empty((cfg.n, schema.p))
    Y = np.empty((cfg.n, len(schema.metrics)))
    for i in range(cfg.n):
        row = [rng.choice(lv) for lv in levels]
        X[i] = row
        for k, beta in enumerate(betas):
            mean = beta[0] + float(np.dot(beta[1:], row))
            Y[i, k] = _floor(mean + rng.normal(cfg.noise_sigma), cfg.floor_mbps)
    truth = PlantedTruth(
        regime="hardware",
        noise_sigma=cfg.noise_sigma,
        coefficients={m: TABLE5_COEFFICIENTS[m] for m in schema.metrics},
        population_r2={m: population_r2(m, cfg.noise_sigma) for m in schema.metrics},
    )
    return Dataset(schema, X, Y), truth


def gluster_mean(curve, block_kb, cache_mb, read_ahead, o_sync):
    y = curve.block_term(block_kb)
    if not o_sync:
        y += curve.cache_term(cache_mb, read_ahead)
    return y


def _generate_gluster(cfg, rng):
    schema = GLUSTER
    bs_levels = schema.feature("block_size_kb").levels
    cache_levels = schema.feature("cache_size_mb").levels
    sync = 1.0 if cfg.o_sync else 0.0
    X = np.empty((cfg.n, schema.p))
    Y = np.empty((cfg.n, len(schema.metrics)))
    for i in range(cfg.n):
        bs = rng.choice(bs_levels)
        cache = rng.choice(cache_levels)
        translators = [float(rng.randbelow(2)) for _ in range(4)]
        X[i] = [bs, cache, *translators, sync]
        read_ahead = translators[1]
        for k, metric in enumerate(schema.metrics):
            mean = gluster_mean(cfg.curves[metric], bs, cache, read_ahead, cfg.o_sync)
            Y[i, k] = _floor(mean + rng.normal(cfg.noise_sigma), cfg.floor_mbps)
    truth = PlantedTruth(
        regime="gluster",
        noise_sigma=cfg.noise_sigma,
        curves=dict(cfg.curves),
        o_sync=cfg.o_sync,
    )
    return Dataset(schema, X, Y), truth


def generate(config):
    """Simulate one benchmark campaign; returns ``(dataset, truth)``."""
    rng = SplitMix64(config.seed)
    if config.regime == "hardware":
        return _generate_hardware(config, rng)
    return _generate_gluster(config, rng)
