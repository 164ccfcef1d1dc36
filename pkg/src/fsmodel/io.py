"""CSV datasets and JSON documents (schemas, models, truth, candidates)."""

import csv
from dataclasses import dataclass
import json
import math

from .errors import (
    EmptyDataset,
    ExtraColumn,
    FsModelError,
    InputError,
    IoError,
    MissingColumn,
    ParseError,
    SchemaInvalid,
    VersionMismatch,
)
from .regression import FittedModel
from .schema import BINARY, Dataset, FeatureSchema, encode_value

FORMAT_VERSION = 1


def _open(path, mode):
    try:
        return open(path, mode, encoding="utf-8", newline="")
    except OSError as exc:
        raise IoError(f"cannot open {path}: {exc.strerror or exc}") from None


def load_csv(path, schema):
    """Read a benchmark CSV into a :class:`Dataset`.

    The header must name every feature and metric of ``schema`` exactly once,
    in any order. Row numbers in errors count the header as row 1.
    """
    with _open(path, "r") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(1, None, "file is empty") from None
        header = [h.strip() for h in header]
        expected = list(schema.feature_names) + list(schema.metrics)
        seen = set()
        for name in header:
            if name not in expected or name in seen:
                raise ExtraColumn(name)
            seen.add(name)
        for name in expected:
            if name not in seen:
                raise MissingColumn(name)
        pos = {name: i for i, name in enumerate(header)}

        X, Y = [], []
        for rowno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ParseError(rowno, None, f"expected {len(header)} fields, got {len(row)}")
            x = []
            for feat in schema.features:
                try:
                    x.append(encode_value(feat, row[pos[feat.name]]))
                except ParseError as exc:
                    raise ParseError(rowno, feat.name, str(exc).split(": ", 1)[-1]) from None
                except InputError as exc:
                    exc.row = rowno
                    raise
            y = []
            for metric in schema.metrics:
                cell = row[pos[metric]].strip()
                try:
                    value = float(cell)
                except ValueError:
                    raise ParseError(rowno, metric, f"expected a number, got {cell!r}") from None
                if not math.isfinite(value):
                    raise ParseError(rowno, metric, f"value {cell!r} is not finite")
                y.append(value)
            X.append(x)
            Y.append(y)
    if not X:
        raise EmptyDataset(f"{path} has a header but no data rows")
    return Dataset(schema, X, Y)


def format_cell(descriptor, value):
    if descriptor.kind == BINARY:
        return descriptor.labels[int(value)]
    return repr(float(value))


def dataset_to_csv(dataset, fh):
    schema = dataset.schema
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow([*schema.feature_names, *schema.metrics])
    for x, y in zip(dataset.features.tolist(), dataset.metrics.tolist()):
        writer.writerow([format_cell(f, v) for f, v in zip(schema.features, x)]
                        + [repr(float(v)) for v in y])


def save_csv(dataset, path):
    with _open(path, "w") as fh:
        dataset_to_csv(dataset, fh)


def _write_json(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    with _open(path, "w") as fh:
        try:
            fh.write(text)
        except OSError as exc:
            raise IoError(f"cannot write {path}: {exc}") from None


def _read_json(path):
    with _open(path, "r") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaInvalid(f"{path} is not valid JSON: {exc}") from None


def load_schema(path):
    return FeatureSchema.from_dict(_read_json(path))


def save_schema(schema, path):
    _write_json(schema.to_dict(), path)


@dataclass(frozen=True)
class ModelDocument:
    """Persisted form of a fitted model: schema, coefficients, fit stats."""

    schema: FeatureSchema
    coefficients: dict
    fit_stats: dict
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        p = self.schema.p
        coeffs = {}
        for metric, vec in self.coefficients.items():
            if metric not in self.schema.metrics:
                raise SchemaInvalid(f"coefficients for unknown metric {metric!r}")
            vec = [float(v) for v in vec]
            if len(vec) != p + 1:
                raise SchemaInvalid(
                    f"{metric}: coefficient vector has length {len(vec)}, "
                    f"expected {p + 1} (intercept first)"
                )
            if not all(math.isfinite(v) for v in vec):
                raise SchemaInvalid(f"{metric}: coefficients must be finite")
            coeffs[metric] = tuple(vec)
        object.__setattr__(self, "coefficients", coeffs)
        stats = {}
        for metric, st in self.fit_stats.items():
            if metric not in coeffs:
                raise SchemaInvalid(f"fit_stats for metric {metric!r} without coefficients")
            try:
                st = {"r2": float(st["r2"]), "adj_r2": float(st["adj_r2"]),
                      "n": int(st["n"]), "k": int(st["k"])}
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaInvalid(f"{metric}: malformed fit_stats ({exc})") from None
            if st["k"] != p:
                raise SchemaInvalid(f"{metric}: fit_stats.k={st['k']} but schema has {p} features")
            if st["n"] < st["k"] + 2:
                raise SchemaInvalid(f"{metric}: fit_stats.n={st['n']} is below k + 2")
            stats[metric] = st
        object.__setattr__(self, "fit_stats", stats)

    @classmethod
    def from_fit(cls, model, stats):
        return cls(
            schema=model.schema,
            coefficients={m: model.beta[m].tolist() for m in model.metrics},
            fit_stats={m: {"r2": s.r2, "adj_r2": s.adj_r2, "n": s.n, "k": s.k}
                       for m, s in stats.items()},
        )

    def to_model(self):
        return FittedModel(self.schema, {m: list(v) for m, v in self.coefficients.items()})

    def to_dict(self):
        return {
            "format_version": self.format_version,
            "schema": self.schema.to_dict(),
            "coefficients": {m: list(v) for m, v in self.coefficients.items()},
            "fit_stats": {m: dict(s) for m, s in self.fit_stats.items()},
        }

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise SchemaInvalid("model document must be a JSON object")
        version = d.get("format_version")
        if version != FORMAT_VERSION:
            raise VersionMismatch(
                f"unsupported model format_version {version!r} (expected {FORMAT_VERSION})"
            )
        for key in ("schema", "coefficients", "fit_stats"):
            if key not in d:
                raise SchemaInvalid(f"model document lacks {key!r}")
        if not isinstance(d["coefficients"], dict) or not isinstance(d["fit_stats"], dict):
            raise SchemaInvalid("coefficients and fit_stats must be objects")
        try:
            return cls(
                schema=FeatureSchema.from_dict(d["schema"]),
                coefficients=d["coefficients"],
                fit_stats=d["fit_stats"],
            )
        except SchemaInvalid:
            raise
        except (FsModelError, TypeError, ValueError) as exc:
            raise SchemaInvalid(str(exc)) from None


def save_model(model, path):
    if not isinstance(model, ModelDocument):
        raise TypeError("save_model expects a ModelDocument")
    _write_json(model.to_dict(), path)


def load_model(path):
    return ModelDocument.from_dict(_read_json(path))


def save_truth(truth, path):
    _write_json(truth.to_dict(), path)


def load_candidates(path, schema):
    """Read an advisor candidate list.

    Each entry is ``{name, features: {feature: value-or-label}, cpu_points,
    power_watts}``; feature values are encoded against ``schema``.
    """
    from .advisor import DesignCandidate

    doc = _read_json(path)
    if not isinstance(doc, list):
        raise SchemaInvalid("candidates document must be a JSON array")
    return [DesignCandidate.from_dict(entry, schema) for entry in doc]


def save_candidates(candidates, path):
    _write_json([c.to_dict() for c in candidates], path)
