"""Parallel-filesystem performance modelling from benchmark data.

Linear models per throughput metric, fit statistics and hold-out
validation, variance-based feature importance, design ranking, and a
seeded synthetic benchmark generator that serves as ground truth.
"""

from .advisor import DesignCandidate, DesignVerdict, evaluate_design, rank_designs
from .evaluation import CrossValReport, FitStats, cross_validate, fit_stats
from .importance import ImportanceReport, importance_report, sensitivity
from .io import ModelDocument, load_csv, load_model, save_csv, save_model
from .regression import FittedModel, fit, predict
from .schema import (
    GLUSTER,
    HARDWARE,
    Dataset,
    FeatureDescriptor,
    FeatureSchema,
    Record,
    build_design_matrix,
    encode_value,
    get_schema,
)
from .synthbench import GeneratorConfig, PlantedTruth, SplitMix64, generate, prng_next

__version__ = "0.1.0"

__all__ = [
    "DesignCandidate",
    "DesignVerdict",
    "evaluate_design",
    "rank_designs",
    "CrossValReport",
    "FitStats",
    "cross_validate",
    "fit_stats",
    "ImportanceReport",
    "importance_report",
    "sensitivity",
    "ModelDocument",
    "load_csv",
    "load_model",
    "save_csv",
    "save_model",
    "FittedModel",
    "fit",
    "predict",
    "GLUSTER",
    "HARDWARE",
    "Dataset",
    "FeatureDescriptor",
    "FeatureSchema",
    "Record",
    "build_design_matrix",
    "encode_value",
    "get_schema",
    "GeneratorConfig",
    "PlantedTruth",
    "SplitMix64",
    "generate",
    "prng_next",
]
