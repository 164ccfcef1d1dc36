"""Goodness of fit and hold-out validation."""

from dataclasses import dataclass, asdict
import math

import numpy as np

from .errors import DegenerateDof, InputError, TooFewSamples, ZeroVariance
from .regression import fit
from .synthbench import SplitMix64


@dataclass(frozen=True)
class FitStats:
    tss: float
    sse: float
    ssr: float
    r2: float
    adj_r2: float
    n: int
    k: int

    def to_dict(self):
        return asdict(self)


def adjusted_r2(r2, n, k):
    if n <= k + 1:
        raise DegenerateDof(f"adjusted R^2 needs n > k + 1 (n={n}, k={k})")
    return 1.0 - (n - 1) / (n - k - 1) * (1.0 - r2)


def fit_stats(y, y_hat, k):
    """Sums of squares, R^2 and adjusted R^2 for predictions ``y_hat``.

    ``sse`` is the residual sum of squares and ``ssr`` the sum of squares
    of the predictions about the mean of ``y``. R^2 is ``1 - sse/tss``,
    which stays meaningful (and may go negative) for predictions that did
    not come from a least-squares fit on ``y`` itself.
    """
    y = np.asarray(y, dtype=float)
    y_hat = np.asarray(y_hat, dtype=float)
    if y.shape != y_hat.shape or y.ndim != 1:
        raise InputError("y and y_hat must be 1-D arrays of equal length")
    n = y.size
    if n < 2:
        raise TooFewSamples("fit statistics need at least two samples")
    y_bar = y.mean()
    tss = float(np.sum((y - y_bar) ** 2))
    if tss == 0.0 or tss <= (np.finfo(float).eps * n * max(abs(y_bar), 1.0)) ** 2:
        raise ZeroVariance("response has zero variance; R^2 is undefined")
    sse = float(np.sum((y - y_hat) ** 2))
    ssr = float(np.sum((y_hat - y_bar) ** 2))
    r2 = 1.0 - sse / tss
    return FitStats(tss, sse, ssr, r2, adjusted_r2(r2, n, k), n, k)


def model_fit_stats(model, dataset):
    """Training statistics of ``model`` on ``dataset`` for every metric."""
    k = dataset.schema.p
    out = {}
    for j, metric in enumerate(dataset.schema.metrics):
        y = dataset.metrics[:, j]
        out[metric] = fit_stats(y, model.predict_matrix(dataset.features, metric), k)
    return out


@dataclass(frozen=True)
class MetricValidation:
    train_r2: float
    train_adj_r2: float
    validation_r2: float
    train_size: int
    validation_size: int


@dataclass(frozen=True)
class CrossValReport:
    seed: int
    train_fraction: float
    train_size: int
    validation_size: int
    metrics: dict

    def to_dict(self):
        return {
            "seed": self.seed,
            "train_fraction": self.train_fraction,
            "train_size": self.train_size,
            "validation_size": self.validation_size,
            "metrics": {m: asdict(v) for m, v in self.metrics.items()},
        }


def split_sizes(n, train_fraction):
    # round half up; Python's round() would send 0.5 to the even neighbour
    n_train = int(math.floor(train_fraction * n + 0.5))
    return n_train, n - n_train


def cross_validate(dataset, train_fraction=0.75, seed=0):
    """Random train/validation split, fit on the first part, score both.

    Record indices are shuffled with a seeded Fisher-Yates pass over the
    SplitMix64 stream; the first ``round(f * n)`` become the training set.
    Validation R^2 uses the validation subset's own mean and is not clamped.
    """
    if not 0.0 < train_fraction < 1.0:
        raise InputError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    n = dataset.n
    n_train, n_val = split_sizes(n, train_fraction)
    p = dataset.schema.p
    if n_train < p + 2:
        raise TooFewSamples(
            f"training split of {n_train} records is too small for {p} features"
        )
    if n_val < 2:
        raise TooFewSamples(f"validation split of {n_val} records is too small")
    order = SplitMix64(seed).permutation(n)
    train = dataset.take(order[:n_train])
    val = dataset.take(order[n_train:])
    model = fit(train)
    train_stats = model_fit_stats(model, train)
    per_metric = {}
    for j, metric in enumerate(dataset.schema.metrics):
        y_val = val.metrics[:, j]
        y_hat = model.predict_matrix(val.features, metric)
        val_r2 = fit_stats(y_val, y_hat, 0).r2
        per_metric[metric] = MetricValidation(
            train_r2=train_stats[metric].r2,
            train_adj_r2=train_stats[metric].adj_r2,
            validation_r2=val_r2,
            train_size=n_train,
            validation_size=n_val,
        )
    return CrossValReport(seed, train_fraction, n_train, n_val, per_metric)
