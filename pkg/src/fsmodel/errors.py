"""Exception hierarchy.

Every error carries the process exit code the command line maps it to:
2 for bad input, 3 for numerical trouble, 4 for I/O failures.
"""


class FsModelError(Exception):
    exit_code = 1


class InputError(FsModelError):
    exit_code = 2


class NumericalError(FsModelError):
    exit_code = 3


class IoError(FsModelError):
    exit_code = 4


class UsageError(InputError):
    pass


class UnknownLabel(InputError):
    def __init__(self, feature, label, labels=()):
        self.feature = feature
        self.label = label
        super().__init__(
            f"unknown label {label!r} for feature {feature!r}"
            + (f" (expected one of {', '.join(labels)})" if labels else "")
        )


class NonFiniteValue(InputError):
    pass


class EmptyDataset(InputError):
    pass


class MissingColumn(InputError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"missing column {column!r}")


class ExtraColumn(InputError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"unexpected column {column!r}")


class ParseError(InputError):
    def __init__(self, row, column, message=""):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column!r}: {message}".rstrip(": "))


class SchemaInvalid(InputError):
    pass


class VersionMismatch(InputError):
    pass


class UnknownMetric(InputError):
    def __init__(self, metric):
        self.metric = metric
        super().__init__(f"unknown metric {metric!r}")


class UnknownFeature(InputError):
    def __init__(self, feature):
        self.feature = feature
        super().__init__(f"unknown feature {feature!r}")


class SchemaMismatch(InputError):
    pass


class TooFewSamples(InputError):
    pass


class NoFeasibleCandidate(InputError):
    pass


class RankDeficient(NumericalError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"design matrix is rank deficient: column {column!r} "
                         "is linearly dependent on earlier columns")


class ZeroVariance(NumericalError):
    pass


class DegenerateDof(NumericalError):
    pass
