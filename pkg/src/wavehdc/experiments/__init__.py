"""Registered experiments, their configs and reports."""

from .registry import REGISTRY, get_experiment, run_experiment
from .report import ExperimentReport, emit_report, from_json, to_csv, to_json

__all__ = ["REGISTRY", "ExperimentReport", "emit_report", "from_json", "get_experiment", "run_experiment", "to_csv", "to_json"]
