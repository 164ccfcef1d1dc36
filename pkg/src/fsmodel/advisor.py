"""Score and rank hypothetical cluster designs.

A design's throughput is the fitted linear prediction, capped by what its
CPUs can drive: ``cap = cap_coefficient * cpu_points``. The default
coefficient (0.02 MB/s per PassMark point) puts the cap of a 916-point Atom
(18 MB/s) well under a saturated Gigabit link (125 MB/s) and the cap of an
8306-point Xeon E3-1265 (166 MB/s) above it.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .errors import InputError, NoFeasibleCandidate, SchemaMismatch
from .regression import NegativePredictionWarning, predict
from .schema import encode_value

GIGABIT_LINE_RATE_MBPS = 125.0
DEFAULT_CAP_COEFFICIENT = 0.02
OBJECTIVES = ("perf_per_watt", "throughput")
RANK_METRIC = "write_mbps"

# name, PassMark points, power draw in watts
TABLE1_CPUS = (
    ("Low power Atom", 916.0, 8.5),
    ("Low power Xeon E3-1265", 8306.0, 45.0),
    ("Low power Xeon E3-1280", 9909.0, 95.0),
    ("Xeon E5430", 3975.0, 80.0),
    ("Xeon E5650", 7480.0, 95.0),
)


@dataclass(frozen=True)
class DesignCandidate:
    name: str
    feature_names: tuple
    feature_values: tuple
    cpu_points: float
    power_watts: float

    def __post_init__(self):
        if not self.cpu_points > 0 or not math.isfinite(self.cpu_points):
            raise InputError(f"{self.name}: cpu_points must be a positive number")
        if not self.power_watts > 0 or not math.isfinite(self.power_watts):
            raise InputError(f"{self.name}: power_watts must be a positive number")
        if len(self.feature_names) != len(self.feature_values):
            raise InputError(f"{self.name}: feature names and values differ in length")
        object.__setattr__(self, "feature_values", tuple(float(v) for v in self.feature_values))

    @classmethod
    def from_features(cls, name, schema, features, cpu_points, power_watts):
        """Build a candidate from a ``{feature: raw value or label}`` mapping."""
        unknown = set(features) - set(schema.feature_names)
        if unknown:
            raise SchemaMismatch(f"{name}: features not in schema: {', '.join(sorted(unknown))}")
        missing = [f for f in schema.feature_names if f not in features]
        if missing:
            raise SchemaMismatch(f"{name}: missing features: {', '.join(missing)}")
        values = tuple(encode_value(f, features[f.name]) for f in schema.features)
        return cls(name, schema.feature_names, values, float(cpu_points), float(power_watts))

    @classmethod
    def from_dict(cls, d, schema):
        try:
            return cls.from_features(
                d["name"], schema, d["features"], d["cpu_points"], d["power_watts"]
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed candidate entry: {exc}") from None

    def to_dict(self):
        return {
            "name": self.name,
            "features": dict(zip(self.feature_names, self.feature_values)),
            "cpu_points": self.cpu_points,
            "power_watts": self.power_watts,
        }

    def with_power(self, power_watts):
        return DesignCandidate(self.name, self.feature_names, self.feature_values,
                               self.cpu_points, power_watts)


@dataclass(frozen=True)
class DesignVerdict:
    name: str
    predicted: dict
    capped: dict
    cpu_cap: float
    limiting_factor: str
    perf_per_watt: float
    power_watts: float
    negative: tuple = ()

    def to_dict(self):
        return {
            "name": self.name,
            "predicted": dict(self.predicted),
            "capped": dict(self.capped),
            "cpu_cap": self.cpu_cap if math.isfinite(self.cpu_cap) else None,
            "limiting_factor": self.limiting_factor,
            "perf_per_watt": self.perf_per_watt,
            "power_watts": self.power_watts,
            "negative_predictions": list(self.negative),
        }


def _rank_metric(model):
    return RANK_METRIC if RANK_METRIC in model.beta else model.metrics[0]


def dominant_feature(model, x, metric):
    """Feature whose term moves the prediction furthest from the grid midpoint."""
    b = model.coefficients(metric)[1:]
    mid = np.array([f.midpoint for f in model.schema.features])
    contrib = np.abs(b * (np.asarray(x) - mid))
    return model.schema.feature_names[int(np.argmax(contrib))]


def evaluate_design(model, candidate, cap_coefficient=DEFAULT_CAP_COEFFICIENT):
    if tuple(candidate.feature_names) != model.schema.feature_names:
        raise SchemaMismatch(
            f"{candidate.name}: candidate features do not match the model schema"
        )
    if not cap_coefficient > 0:
        raise InputError("cap_coefficient must be positive (use inf to disable the cap)")
    x = np.asarray(candidate.feature_values)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NegativePredictionWarning)
        predicted = {m: predict(model, x, m) for m in model.metrics}
    cpu_cap = cap_coefficient * candidate.cpu_points
    capped = {m: min(v, cpu_cap) for m, v in predicted.items()}
    key = _rank_metric(model)
    if cpu_cap < predicted[key]:
        limiting = "cpu"
    else:
        limiting = dominant_feature(model, x, key)
    return DesignVerdict(
        name=candidate.name,
        predicted=predicted,
        capped=capped,
        cpu_cap=cpu_cap,
        limiting_factor=limiting,
        perf_per_watt=capped[key] / candidate.power_watts,
        power_watts=candidate.power_watts,
        negative=tuple(m for m, v in predicted.items() if v < 0),
    )


def rank_designs(model, candidates, power_budget=None, objective="perf_per_watt",
                 cap_coefficient=DEFAULT_CAP_COEFFICIENT):
    """Evaluate, filter by power budget and sort best first.

    Ties on the objective go to the lower power draw, then to input order.
    """
    if objective not in OBJECTIVES:
        raise InputError(f"unknown objective {objective!r} (choose from {', '.join(OBJECTIVES)})")
    candidates = list(candidates)
    if not candidates:
        raise InputError("no candidates to rank")
    feasible = [c for c in candidates if power_budget is None or c.power_watts <= power_budget]
    if not feasible:
        raise NoFeasibleCandidate(f"no candidate fits within a {power_budget} W power budget")
    verdicts = [evaluate_design(model, c, cap_coefficient) for c in feasible]
    key = _rank_metric(model)

    def score(v):
        return v.perf_per_watt if objective == "perf_per_watt" else v.capped[key]

    return sorted(verdicts, key=lambda v: (-score(v), v.power_watts))


def table1_candidates(schema, features):
    """The five CPU options of the dense low-power design, sharing ``features``."""
    return [DesignCandidate.from_features(name, schema, features, points, watts)
            for name, points, watts in TABLE1_CPUS]
