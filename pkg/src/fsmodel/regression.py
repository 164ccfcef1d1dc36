"""Per-metric multiple linear regression.

Coefficients solve the least-squares problem ``min ||X b - y||`` for the
intercept-augmented design matrix. The solution equals ``(X'X)^-1 X'y`` but
is computed from a Householder QR factorisation of the column-equilibrated
design matrix; ``X'X`` is never formed. One factorisation serves every
metric.
"""

from dataclasses import dataclass, field
import warnings

import numpy as np
from scipy.linalg import solve_triangular

from .errors import InputError, RankDeficient, TooFewSamples, UnknownMetric
from .schema import build_design_matrix

RANK_RTOL = 1e-10


class NegativePredictionWarning(UserWarning):
    """A linear prediction fell below zero MB/s (extrapolation)."""


@dataclass(frozen=True, eq=False)
class FittedModel:
    schema: object
    beta: dict
    residuals: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        beta = {}
        for metric, b in self.beta.items():
            b = np.array(b, dtype=float)
            if b.shape != (self.schema.p + 1,):
                raise InputError(
                    f"{metric}: expected {self.schema.p + 1} coefficients, got {b.shape}"
                )
            if not np.isfinite(b).all():
                raise InputError(f"{metric}: coefficients must be finite")
            b.setflags(write=False)
            beta[metric] = b
        object.__setattr__(self, "beta", beta)
        res = {}
        for metric, r in self.residuals.items():
            r = np.array(r, dtype=float)
            r.setflags(write=False)
            res[metric] = r
        object.__setattr__(self, "residuals", res)

    @property
    def metrics(self):
        return tuple(self.beta)

    def coefficients(self, metric):
        try:
            return self.beta[metric]
        except KeyError:
            raise UnknownMetric(metric) from None

    def predict_matrix(self, features, metric):
        """Vectorised predictions for an (n, p) array of encoded features."""
        b = self.coefficients(metric)
        return b[0] + np.asarray(features, dtype=float) @ b[1:]


def _first_dependent_column(diag, names):
    mags = np.abs(diag)
    tol = RANK_RTOL * mags.max() if mags.size else 0.0
    for j, m in enumerate(mags):
        if not m > tol:
            return names[j]
    return None


def solve_least_squares(A, Y, names=None):
    """Least-squares solution of ``A B = Y`` for full-column-rank ``A``.

    Columns are scaled to unit Euclidean norm before the Householder QR so
    the rank test compares like with like; a column whose R diagonal falls
    below ``1e-10`` times the largest one is linearly dependent on the
    columns before it, and its name is reported.
    """
    A = np.asarray(A, dtype=float)
    Y = np.asarray(Y, dtype=float)
    squeeze = Y.ndim == 1
    if squeeze:
        Y = Y[:, None]
    names = names or [f"column {j}" for j in range(A.shape[1])]
    norms = np.linalg.norm(A, axis=0)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise RankDeficient(names[zero[0]])
    Q, R = np.linalg.qr(A / norms, mode="reduced")
    dependent = _first_dependent_column(np.diag(R), names)
    if dependent is not None:
        raise RankDeficient(dependent)
    B = solve_triangular(R, Q.T @ Y, lower=False) / norms[:, None]
    return B[:, 0] if squeeze else B


def fit(dataset):
    """Fit one linear model per metric of ``dataset``."""
    schema = dataset.schema
    n, p = dataset.n, schema.p
    if n < p + 2:
        raise TooFewSamples(f"need at least {p + 2} records for {p} features, got {n}")
    A = build_design_matrix(dataset)
    B = solve_least_squares(A, dataset.metrics, names=["intercept", *schema.feature_names])
    fitted = A @ B
    beta = {m: B[:, k] for k, m in enumerate(schema.metrics)}
    residuals = {m: dataset.metrics[:, k] - fitted[:, k] for k, m in enumerate(schema.metrics)}
    return FittedModel(schema, beta, residuals)


def predict(model, feature_values, metric):
    """Point prediction ``b0 + sum(b_j x_j)``.

    Negative results are returned unchanged and raise a
    :class:`NegativePredictionWarning`.
    """
    b = model.coefficients(metric)
    x = np.asarray(feature_values, dtype=float)
    if x.shape != (model.schema.p,):
        raise InputError(f"expected {model.schema.p} feature values, got shape {x.shape}")
    y = float(b[0] + x @ b[1:])
    if y < 0:
        warnings.warn(
            f"{metric}: negative prediction {y:.3f} MB/s (linear extrapolation)",
            NegativePredictionWarning,
            stacklevel=2,
        )
    return y
