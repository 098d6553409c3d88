"""Probe candidates against an endpoint and infer constraints."""

import asyncio
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

from ..constraints.constraint import Constraint
from ..constraints.domain import combine
from ..doc_analysis.candidates import Candidate
from ..exceptions import ProbeAbortedError
from ..oas.models import EndpointSpec
from ..utils.logger import get_logger
from ..utils.rate_limiter import AsyncRateLimiter
from .client import ProbeClient
from .requests import build_request
from .tables import ObservationTable, ProbeOutcome, ResultKind, enumerate_rows
from .templates import FitResult, ProbeDiagnostic, fit_templates

logger = get_logger(__name__)


async def run_probe(
    table: ObservationTable,
    client: ProbeClient,
    base: Mapping[str, Any],
    rate_limiter: Optional[AsyncRateLimiter] = None,
) -> ObservationTable:
    """Send one request per row, sequentially and rate limited, and record the outcomes."""
    limiter = rate_limiter or AsyncRateLimiter()
    results: List[ProbeOutcome] = []
    for row in table.rows:
        await limiter.wait()
        body = build_request(base, row.assignment)
        try:
            outcome = await client.send(body)
        except Exception as e:
            logger.error(f"Probe request to {client.target} raised {type(e).__name__}: {e}")
            outcome = ProbeOutcome.error(type(e).__name__)
        logger.debug(f"{table.candidate.label()} {dict(row.assignment)} -> {outcome.render()}")
        results.append(outcome)
    return table.with_results(results)


@dataclass
class ProbeReport:
    """Everything probing produced for one endpoint."""

    tables: List[ObservationTable] = field(default_factory=list)
    constraints: List[Constraint] = field(default_factory=list)
    diagnostics: List[ProbeDiagnostic] = field(default_factory=list)

    @property
    def request_count(self) -> int:
        return sum(len(table.rows) for table in self.tables)

    def write_tables(self, directory: Path) -> List[Path]:
        directory = Path(directory)
        return [
            table.write_csv(directory / f"{_safe_name(table.candidate.label())}.csv")
            for table in self.tables
        ]


def _safe_name(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.+-]", "_", label)


async def probe_candidates(
    spec: EndpointSpec,
    candidates: Sequence[Candidate],
    client: ProbeClient,
    base: Mapping[str, Any],
    overrides: Optional[Mapping[str, Any]] = None,
    rate_limit: Optional[float] = None,
) -> ProbeReport:
    """Enumerate, probe and fit every candidate; one rate limiter spans all of them."""
    limiter = AsyncRateLimiter(rate_limit)
    report = ProbeReport()

    baseline = await client.send(dict(base))
    if baseline.kind is not ResultKind.SUCCESS:
        logger.warning(f"Base request to {client.target} did not succeed ({baseline.render()})")
        report.diagnostics.append(
            ProbeDiagnostic("<base>", "base request rejected", baseline.render())
        )

    inferred: List[Constraint] = []
    for candidate in candidates:
        table = enumerate_rows(candidate, spec, overrides)
        table = await run_probe(table, client, base, limiter)
        report.tables.append(table)
        try:
            fit: FitResult = fit_templates(table)
        except ProbeAbortedError as e:
            logger.error(str(e))
            report.diagnostics.append(ProbeDiagnostic(candidate.label(), "aborted", str(e)))
            continue
        inferred.extend(fit.constraints)
        report.diagnostics.extend(fit.diagnostics)

    report.constraints = combine(inferred, [])
    logger.info(
        f"Probed {len(report.tables)} candidates with {report.request_count} requests; "
        f"inferred {len(report.constraints)} constraints"
    )
    return report


def probe_endpoint(
    spec: EndpointSpec,
    candidates: Sequence[Candidate],
    client: ProbeClient,
    base: Mapping[str, Any],
    overrides: Optional[Mapping[str, Any]] = None,
    rate_limit: Optional[float] = None,
) -> ProbeReport:
    """Blocking wrapper around ``probe_candidates`` that closes the client."""

    async def _run() -> ProbeReport:
        async with client:
            return await probe_candidates(spec, candidates, client, base, overrides, rate_limit)

    return asyncio.run(_run())


def summarize(report: ProbeReport) -> Dict[str, Any]:
    return {
        "candidates": len(report.tables),
        "requests": report.request_count,
        "constraints": [c.render() for c in report.constraints],
        "diagnostics": [d.to_dict() for d in report.diagnostics],
    }
