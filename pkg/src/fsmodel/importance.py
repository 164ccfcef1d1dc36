"""Variance-based predictor importance.

The first-order sensitivity of feature ``X_i`` is ``Var(E[Y | X_i]) / Var(Y)``,
estimated straight from the data by grouping records on the feature and
taking the size-weighted variance of the group means. Importance is the
sensitivity normalised over all features. No model is fitted, so the ranking
holds for nonlinear responses as well.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalError, ZeroVariance

MAX_LEVELS = 32
N_BINS = 16
S_TOLERANCE = 0.02


@dataclass(frozen=True)
class Grouping:
    groups: int
    sizes: tuple
    binned: bool


@dataclass(frozen=True)
class FeatureImportance:
    feature: str
    sensitivity: float
    importance: float


@dataclass(frozen=True)
class ImportanceReport:
    """``rankings[metric]`` is a list of :class:`FeatureImportance` sorted by
    importance, or ``None`` when the metric has zero variance."""

    features: tuple
    rankings: dict
    grouping: dict

    def importance(self, metric, feature):
        ranking = self.rankings[metric]
        if ranking is None:
            return None
        for item in ranking:
            if item.feature == feature:
                return item.importance
        raise KeyError(feature)

    def sensitivity(self, metric, feature):
        for item in self.rankings[metric]:
            if item.feature == feature:
                return item.sensitivity
        raise KeyError(feature)

    def to_dict(self):
        return {
            "features": list(self.features),
            "metrics": {
                m: None if r is None else [
                    {"feature": it.feature, "S": it.sensitivity, "VI": it.importance}
                    for it in r
                ]
                for m, r in self.rankings.items()
            },
            "grouping": {
                f: {"groups": g.groups, "sizes": list(g.sizes), "binned": g.binned}
                for f, g in self.grouping.items()
            },
        }


def group_labels(x):
    """Integer group label per sample plus the grouping summary.

    Up to 32 distinct values are used as levels directly; beyond that the
    values are cut at their 1/16 quantiles. Labels depend only on values,
    never on record order.
    """
    x = np.asarray(x, dtype=float)
    levels = np.unique(x)
    if levels.size <= MAX_LEVELS:
        labels = np.searchsorted(levels, x)
        binned = False
    else:
        edges = np.unique(np.quantile(x, np.linspace(0.0, 1.0, N_BINS + 1)[1:-1]))
        labels = np.searchsorted(edges, x, side="right")
        binned = True
    present, labels = np.unique(labels, return_inverse=True)
    sizes = np.bincount(labels, minlength=present.size)
    return labels, Grouping(int(present.size), tuple(int(s) for s in sizes), binned)


def _sensitivity(x, y):
    var_y = float(np.var(y))
    if not var_y > 0.0:
        raise ZeroVariance("response has zero variance")
    labels, grouping = group_labels(x)
    sizes = np.bincount(labels)
    means = np.bincount(labels, weights=y) / sizes
    var_cond = float(np.sum(sizes * (means - y.mean()) ** 2) / y.size)
    s = var_cond / var_y
    if s > 1.0 + S_TOLERANCE or s < -S_TOLERANCE:
        raise NumericalError(f"sensitivity estimate {s} outside [0, 1]")
    return min(max(s, 0.0), 1.0), grouping


def sensitivity(dataset, feature, metric):
    x = dataset.column(feature)
    y = dataset.metric(metric)
    return _sensitivity(x, y)[0]


def importance_report(dataset):
    schema = dataset.schema
    if schema.p < 2:
        raise InputError("importance ranking needs at least two features")
    grouping = {}
    rankings = {}
    for metric in schema.metrics:
        y = dataset.metric(metric)
        if not np.var(y) > 0.0:
            rankings[metric] = None
            continue
        s = np.empty(schema.p)
        for j, name in enumerate(schema.feature_names):
            s[j], grouping[name] = _sensitivity(dataset.features[:, j], y)
        total = s.sum()
        vi = s / total if total > 0 else np.zeros_like(s)
        order = sorted(range(schema.p), key=lambda j: (-vi[j], j))
        rankings[metric] = [
            FeatureImportance(schema.feature_names[j], float(s[j]), float(vi[j]))
            for j in order
        ]
    if not grouping:
        for j, name in enumerate(schema.feature_names):
            grouping[name] = group_labels(dataset.features[:, j])[1]
    return ImportanceReport(schema.feature_names, rankings, grouping)
