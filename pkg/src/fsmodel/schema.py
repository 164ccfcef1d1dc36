"""Feature schemas, value encoding and the shared dataset container.

Column order in a schema is the column order of every design matrix and
every coefficient vector: coefficient ``j + 1`` belongs to feature ``j``,
coefficient ``0`` is the intercept.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import (
    EmptyDataset,
    InputError,
    NonFiniteValue,
    ParseError,
    SchemaInvalid,
    UnknownFeature,
    UnknownLabel,
    UnknownMetric,
)

NUMERIC = "numeric"
BINARY = "binary-categorical"
KINDS = (NUMERIC, BINARY)
ROLES = ("hardware", "gluster", "workload")

DEFAULT_METRICS = ("write_mbps", "read_mbps", "rand_read_mbps", "rand_write_mbps")


@dataclass(frozen=True)
class FeatureDescriptor:
    """One configurable parameter.

    ``labels`` is the (0.0, 1.0) label pair of a binary feature. ``levels``
    optionally lists the values the parameter was varied over in a benchmark
    campaign; the synthetic generator samples from it and the advisor uses
    its midpoint as the reference point of a feature.
    """

    name: str
    kind: str = NUMERIC
    units: str = ""
    role: str = "hardware"
    labels: tuple = None
    levels: tuple = None

    def __post_init__(self):
        if not self.name:
            raise SchemaInvalid("feature name must be non-empty")
        if self.kind not in KINDS:
            raise SchemaInvalid(f"{self.name}: unknown kind {self.kind!r}")
        if self.role not in ROLES:
            raise SchemaInvalid(f"{self.name}: unknown role {self.role!r}")
        if self.kind == BINARY:
            if self.labels is None or len(self.labels) != 2:
                raise SchemaInvalid(f"{self.name}: binary feature needs exactly two labels")
            if self.labels[0].casefold() == self.labels[1].casefold():
                raise SchemaInvalid(f"{self.name}: labels must differ case-insensitively")
            object.__setattr__(self, "labels", tuple(self.labels))
        elif self.labels is not None:
            raise SchemaInvalid(f"{self.name}: numeric feature cannot have labels")
        if self.levels is not None:
            levels = tuple(float(v) for v in self.levels)
            if not levels or not all(math.isfinite(v) for v in levels):
                raise SchemaInvalid(f"{self.name}: levels must be finite and non-empty")
            object.__setattr__(self, "levels", levels)

    @property
    def midpoint(self):
        if self.kind == BINARY:
            return 0.5
        if self.levels is None:
            return 0.0
        return (min(self.levels) + max(self.levels)) / 2.0

    def to_dict(self):
        d = {"name": self.name, "kind": self.kind, "units": self.units, "role": self.role}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        if self.levels is not None:
            d["levels"] = list(self.levels)
        return d

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(
                name=d["name"],
                kind=d.get("kind", NUMERIC),
                units=d.get("units", ""),
                role=d.get("role", "hardware"),
                labels=tuple(d["labels"]) if d.get("labels") is not None else None,
                levels=tuple(d["levels"]) if d.get("levels") is not None else None,
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise SchemaInvalid(f"malformed feature descriptor: {exc}") from None


@dataclass(frozen=True)
class FeatureSchema:
    features: tuple
    metrics: tuple = DEFAULT_METRICS
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        names = [f.name for f in self.features]
        if not names:
            raise SchemaInvalid("schema has no features")
        if len(set(names)) != len(names):
            raise SchemaInvalid("feature names must be unique")
        if not self.metrics or len(set(self.metrics)) != len(self.metrics):
            raise SchemaInvalid("metric names must be unique and non-empty")
        if set(names) & set(self.metrics):
            raise SchemaInvalid("a name cannot be both a feature and a metric")

    @property
    def feature_names(self):
        return tuple(f.name for f in self.features)

    @property
    def p(self):
        return len(self.features)

    def feature_index(self, name):
        try:
            return self.feature_names.index(name)
        except ValueError:
            raise UnknownFeature(name) from None

    def metric_index(self, name):
        try:
            return self.metrics.index(name)
        except ValueError:
            raise UnknownMetric(name) from None

    def feature(self, name):
        return self.features[self.feature_index(name)]

    def to_dict(self):
        return {
            "name": self.name,
            "features": [f.to_dict() for f in self.features],
            "metrics": list(self.metrics),
        }

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "features" not in d:
            raise SchemaInvalid("schema document needs a 'features' list")
        return cls(
            features=tuple(FeatureDescriptor.from_dict(f) for f in d["features"]),
            metrics=tuple(d.get("metrics", DEFAULT_METRICS)),
            name=d.get("name", "custom"),
        )


def _pow2(lo, hi):
    out, v = [], lo
    while v <= hi:
        out.append(float(v))
        v *= 2
    return tuple(out)


HARDWARE = FeatureSchema(
    name="hardware",
    features=(
        FeatureDescriptor("network", BINARY, "", "hardware", ("gigabit", "infiniband")),
        FeatureDescriptor("disk_read_speed", NUMERIC, "MB/s", "hardware", levels=(117, 81)),
        FeatureDescriptor("disk_write_speed", NUMERIC, "MB/s", "hardware", levels=(148, 100)),
        FeatureDescriptor("base_filesystem", BINARY, "", "hardware", ("ext3", "xfs")),
        FeatureDescriptor("num_servers", NUMERIC, "count", "hardware", levels=(1, 2, 3, 4, 5)),
        FeatureDescriptor("num_clients", NUMERIC, "count", "hardware", levels=(1, 2, 3, 4, 5)),
        FeatureDescriptor("striping", NUMERIC, "count", "gluster", levels=(1, 2, 3, 4, 5)),
        FeatureDescriptor("replication", NUMERIC, "count", "gluster", levels=(1, 2, 3, 4, 5)),
        FeatureDescriptor("workload_size", NUMERIC, "GB", "workload",
                          levels=(0.1, 0.2, 0.5, 0.7, 1, 10, 20)),
    ),
)

_ON_OFF = ("off", "on")

GLUSTER = FeatureSchema(
    name="gluster",
    features=(
        FeatureDescriptor("block_size_kb", NUMERIC, "KB", "workload", levels=_pow2(2, 8192)),
        FeatureDescriptor("cache_size_mb", NUMERIC, "MB", "gluster", levels=_pow2(2, 256)),
        FeatureDescriptor("write_behind", BINARY, "", "gluster", _ON_OFF),
        FeatureDescriptor("read_ahead", BINARY, "", "gluster", _ON_OFF),
        FeatureDescriptor("io_cache", BINARY, "", "gluster", _ON_OFF),
        FeatureDescriptor("md_cache", BINARY, "", "gluster", _ON_OFF),
        FeatureDescriptor("o_sync", BINARY, "", "workload", _ON_OFF),
    ),
)

BUILTIN_SCHEMAS = {"hardware": HARDWARE, "gluster": GLUSTER}


def get_schema(name):
    try:
        return BUILTIN_SCHEMAS[name]
    except KeyError:
        raise SchemaInvalid(
            f"no built-in schema {name!r} (choose from {', '.join(BUILTIN_SCHEMAS)})"
        ) from None


def encode_value(descriptor, raw):
    """Map a raw cell to its numeric value.

    Numeric features pass through. Binary features map their first label
    to 0.0 and their second to 1.0, matching labels case-insensitively.
    """
    if descriptor.kind == BINARY:
        if isinstance(raw, str):
            key = raw.strip().casefold()
            for code, label in enumerate(descriptor.labels):
                if key == label.casefold():
                    return float(code)
        raise UnknownLabel(descriptor.name, raw, descriptor.labels)

    if isinstance(raw, bool):
        raise ParseError(None, descriptor.name, f"expected a number, got {raw!r}")
    try:
        value = float(raw.strip() if isinstance(raw, str) else raw)
    except (TypeError, ValueError):
        raise ParseError(None, descriptor.name, f"expected a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise NonFiniteValue(f"{descriptor.name}: value {raw!r} is not finite")
    return value


@dataclass(frozen=True)
class Record:
    feature_values: tuple
    metric_values: tuple


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable benchmark table.

    ``features`` is an (n, p) array of encoded feature values and
    ``metrics`` an (n, m) array of throughputs in MB/s, both in schema order.
    """

    schema: FeatureSchema
    features: np.ndarray
    metrics: np.ndarray = field(repr=False)

    def __post_init__(self):
        X = np.array(self.features, dtype=float, ndmin=2, copy=True)
        Y = np.array(self.metrics, dtype=float, ndmin=2, copy=True)
        if X.size == 0 and Y.size == 0:
            X = X.reshape(0, self.schema.p)
            Y = Y.reshape(0, len(self.schema.metrics))
        if X.shape[1] != self.schema.p:
            raise InputError(f"expected {self.schema.p} feature columns, got {X.shape[1]}")
        if Y.shape[1] != len(self.schema.metrics):
            raise InputError(
                f"expected {len(self.schema.metrics)} metric columns, got {Y.shape[1]}"
            )
        if X.shape[0] != Y.shape[0]:
            raise InputError("feature and metric row counts differ")
        if X.shape[0] == 0:
            raise EmptyDataset("dataset has no records")
        if not np.isfinite(X).all():
            raise NonFiniteValue("feature values must be finite")
        if not np.isfinite(Y).all():
            raise NonFiniteValue("metric values must be finite")
        X.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "metrics", Y)

    @classmethod
    def from_records(cls, schema, records):
        records = list(records)
        if not records:
            raise EmptyDataset("dataset has no records")
        return cls(
            schema,
            [r.feature_values for r in records],
            [r.metric_values for r in records],
        )

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def records(self):
        return [Record(tuple(x), tuple(y)) for x, y in zip(self.features.tolist(),
                                                         self.metrics.tolist())]

    def column(self, feature):
        return self.features[:, self.schema.feature_index(feature)]

    def metric(self, name):
        return self.metrics[:, self.schema.metric_index(name)]

    def take(self, indices):
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.schema, self.features[idx], self.metrics[idx])

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.schema == other.schema
                and np.array_equal(self.features, other.features)
                and np.array_equal(self.metrics, other.metrics))

    def __len__(self):
        return self.n


def build_design_matrix(dataset):
    """Return the n x (p+1) regression matrix with a leading column of ones."""
    if dataset is None or dataset.n == 0:
        raise EmptyDataset("cannot build a design matrix from an empty dataset")
    X = dataset.features
    return np.hstack([np.ones((X.shape[0], 1)), X])
