"""Hybrid-variable process monitoring (continuous + binary variables)."""

from ._hvm import (
    Dataset,
    HvmError,
    Model,
    __version__,
    closed_form_binarized_mi,
    detectability_condition,
    generate,
    inject,
    kde_control_limit,
    log_score,
    mi_to_rho,
    mutual_information,
    parse_csv,
    read_csv,
    score,
    simulate,
    train,
)

__all__ = [
    "Dataset",
    "HvmError",
    "Model",
    "__version__",
    "closed_form_binarized_mi",
    "detectability_condition",
    "generate",
    "inject",
    "kde_control_limit",
    "log_score",
    "mi_to_rho",
    "mutual_information",
    "parse_csv",
    "read_csv",
    "score",
    "simulate",
    "train",
]
