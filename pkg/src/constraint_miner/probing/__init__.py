"""Probe-based validation of documentation candidates."""

from .budget import estimate_budget
from .client import HttpProbeClient, ProbeClient, ScenarioProbeClient
from .prober import ProbeReport, probe_candidates, probe_endpoint, run_probe
from .requests import build_request
from .tables import (
    ObservationRow,
    ObservationTable,
    ProbeOutcome,
    ResultKind,
    StateSet,
    build_state_set,
    enumerate_rows,
)
from .templates import NO_TEMPLATE, UNOBSERVED, FitResult, ProbeDiagnostic, fit_templates

__all__ = [
    "estimate_budget",
    "HttpProbeClient",
    "ProbeClient",
    "ScenarioProbeClient",
    "ProbeReport",
    "probe_candidates",
    "probe_endpoint",
    "run_probe",
    "build_request",
    "ObservationRow",
    "ObservationTable",
    "ProbeOutcome",
    "ResultKind",
    "StateSet",
    "build_state_set",
    "enumerate_rows",
    "NO_TEMPLATE",
    "UNOBSERVED",
    "FitResult",
    "ProbeDiagnostic",
    "fit_templates",
]
