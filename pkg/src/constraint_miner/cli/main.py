"""Main CLI interface for the constraint miner."""

import functools
import json
import sys
from pathlib import Path
from typing import Any, Callable, Optional

import click
from pydantic import ValidationError

from .. import __version__
from ..config.files import AnalysisConfig, ProbeConfig, load_json_config
from ..constraints.constraint import Origin
from ..constraints.domain import build_domain, combine as combine_constraints
from ..constraints.dsl import dump_dsl, load_dsl_file
from ..doc_analysis.candidates import candidates_from_list, find_candidates, read_candidates, write_candidates
from ..evaluation.ground_truth import load_ground_truth
from ..evaluation.metrics import metrics
from ..evaluation.report import evaluate_endpoint, render_table, write_report
from ..exceptions import ConfigError, ConstraintMinerError
from ..mock_api.scenario import load_scenario
from ..mock_api.server import serve
from ..oas.defaults import build_base_request
from ..oas.loader import load_spec_file
from ..probing.budget import estimate_budget
from ..probing.client import HttpProbeClient, ScenarioProbeClient
from ..probing.prober import probe_endpoint, summarize
from ..static_analysis.extractor import analyze_endpoint
from ..utils.logger import configure_logging, get_logger
from .run_config import RunConfig, is_url

logger = get_logger(__name__)

EXIT_FAILURE = 1
EXIT_CONFIG = 2


def run_config(command: str, **options: Any) -> RunConfig:
    """Build and check the options of ``command``."""
    try:
        config = RunConfig(**{k: v for k, v in options.items() if v is not None})
    except ValidationError as e:
        raise ConfigError(f"{command}: {e}") from e
    return config.validate_for(command)


def handle_errors(func: Callable) -> Callable:
    """Turn toolkit errors into a one-line message and an exit status."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as e:
            click.echo(f"❌ Configuration error: {e}", err=True)
            sys.exit(EXIT_CONFIG)
        except ConstraintMinerError as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"❌ {e}", err=True)
            sys.exit(EXIT_FAILURE)

    return wrapper


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


spec_option = click.option("--spec", type=click.Path(path_type=Path), help="OAS file of the endpoint")
out_option = click.option("--out", type=click.Path(path_type=Path), help="Output directory")


@click.group()
@click.version_option(version=__version__)
@click.option("--log-level", help="Log level (DEBUG, INFO, WARNING, ...)")
def cli(log_level: Optional[str]):
    """Mine inter-parameter constraints from API documentation and server source."""
    if log_level:
        configure_logging(log_level)


@cli.command("mine-docs")
@spec_option
@out_option
@click.option("--freq-factor", type=float, help="Frequency filter factor for co-occurrence")
@handle_errors
def mine_docs(spec: Optional[Path], out: Optional[Path], freq_factor: Optional[float]):
    """Find constraint candidates in the parameter descriptions."""
    cfg = run_config("mine-docs", spec=spec, out=out, freq_factor=freq_factor)
    endpoint = load_spec_file(cfg.spec)
    candidates = find_candidates(endpoint, cfg.freq_factor)
    path = write_candidates(candidates, cfg.out / "candidates.json")
    click.echo(f"📄 {len(candidates)} candidates for {endpoint.endpoint_path} written to {path}")


@cli.command()
@spec_option
@out_option
@click.option("--target", help="Endpoint URL or mock scenario JSON file")
@click.option("--config", type=click.Path(path_type=Path), help="Probe config JSON (base request overrides)")
@click.option("--candidates", type=click.Path(path_type=Path), help="Candidates JSON from mine-docs")
@click.option("--rate", type=float, help="Requests per second")
@click.option("--freq-factor", type=float, help="Frequency filter factor when no candidates are given")
@handle_errors
def probe(
    spec: Optional[Path],
    out: Optional[Path],
    target: Optional[str],
    config: Optional[Path],
    candidates: Optional[Path],
    rate: Optional[float],
    freq_factor: Optional[float],
):
    """Probe candidates against the endpoint and infer constraints."""
    cfg = run_config(
        "probe", spec=spec, out=out, target=target, config=config,
        candidates=candidates, rate=rate, freq_factor=freq_factor,
    )
    endpoint = load_spec_file(cfg.spec)
    probe_config = load_json_config(cfg.config, ProbeConfig) if cfg.config else ProbeConfig()

    if cfg.candidates is not None:
        found = read_candidates(cfg.candidates, endpoint)
    elif probe_config.candidates is not None:
        found = candidates_from_list(probe_config.candidates, endpoint)
    else:
        found = find_candidates(endpoint, cfg.freq_factor)

    base = build_base_request(endpoint, probe_config.overrides, probe_config.extra_paths)
    if is_url(cfg.target):
        client = HttpProbeClient(
            cfg.target, headers=probe_config.headers, method=probe_config.method or endpoint.method
        )
    else:
        client = ScenarioProbeClient(load_scenario(Path(cfg.target)))

    click.echo(f"🔎 Probing {len(found)} candidates against {client.target}...")
    report = probe_endpoint(endpoint, found, client, base, probe_config.overrides, cfg.rate)

    report.write_tables(cfg.out / "tables")
    constraints_path = _write_text(
        cfg.out / "doc.gt",
        dump_dsl(report.constraints, header=f"constraints inferred by probing {endpoint.endpoint_path}"),
    )
    _write_text(cfg.out / "probe.json", json.dumps(summarize(report), indent=2, ensure_ascii=False) + "\n")
    click.echo(f"✅ {report.request_count} requests, {len(report.constraints)} constraints written to {constraints_path}")
    for diagnostic in report.diagnostics:
        click.echo(f"⚠️ {diagnostic.candidate}: {diagnostic.message}")


@cli.command("analyze-code")
@out_option
@click.option("--src", type=click.Path(path_type=Path), help="Directory with the endpoint's source files")
@click.option("--config", type=click.Path(path_type=Path), help="Analysis config JSON")
@click.option("--max-depth", type=int, help="Call graph depth limit")
@handle_errors
def analyze_code(out: Optional[Path], src: Optional[Path], config: Optional[Path], max_depth: Optional[int]):
    """Extract constraints from the endpoint's source code."""
    cfg = run_config("analyze-code", out=out, src=src, config=config, max_depth=max_depth)
    analysis_config = load_json_config(cfg.config, AnalysisConfig)
    analysis = analyze_endpoint(analysis_config, cfg.src, cfg.max_depth)
    constraints_path, diagnostics_path = analysis.write(cfg.out)
    click.echo(f"✅ {len(analysis.constraints)} constraints written to {constraints_path}")
    if analysis.partial:
        click.echo(f"📝 {len(analysis.partial)} contain unparsed fragments and need manual review")
    click.echo(f"📋 {len(analysis.diagnostics)} diagnostics written to {diagnostics_path}")


@cli.command()
@spec_option
@out_option
@click.option("--code", type=click.Path(path_type=Path), help="Constraints from analyze-code")
@click.option("--doc", type=click.Path(path_type=Path), help="Constraints from probe")
@handle_errors
def combine(spec: Optional[Path], out: Optional[Path], code: Optional[Path], doc: Optional[Path]):
    """Union code and documentation constraints, dropping equivalent ones."""
    cfg = run_config("combine", spec=spec, out=out, code=code, doc=doc)
    from_code = load_dsl_file(cfg.code, origin=Origin.CODE)
    from_doc = load_dsl_file(cfg.doc, origin=Origin.DOC)
    domain = None
    if cfg.spec is not None:
        domain = build_domain(from_code + from_doc, spec=load_spec_file(cfg.spec))
    union = combine_constraints(from_code, from_doc, domain)
    path = _write_text(cfg.out / "combined.gt", dump_dsl(union, header="code and documentation constraints"))
    shared = len(from_code) + len(from_doc) - len(union)
    click.echo(f"✅ {len(union)} constraints ({shared} shared) written to {path}")


@cli.command()
@spec_option
@out_option
@click.option("--truth", type=click.Path(path_type=Path), help="Ground truth constraint file")
@click.option("--code", type=click.Path(path_type=Path), help="Constraints from analyze-code")
@click.option("--doc", type=click.Path(path_type=Path), help="Constraints from probe")
@handle_errors
def evaluate(
    spec: Optional[Path],
    out: Optional[Path],
    truth: Optional[Path],
    code: Optional[Path],
    doc: Optional[Path],
):
    """Score identified constraints against ground truth."""
    cfg = run_config("evaluate", spec=spec, out=out, truth=truth, code=code, doc=doc)
    endpoint = load_spec_file(cfg.spec) if cfg.spec is not None else None
    expected = load_ground_truth(cfg.truth, endpoint)
    evaluation = evaluate_endpoint(
        expected,
        code=load_dsl_file(cfg.code, origin=Origin.CODE) if cfg.code else None,
        doc=load_dsl_file(cfg.doc, origin=Origin.DOC) if cfg.doc else None,
        spec=endpoint,
        endpoint=endpoint.endpoint_path if endpoint is not None else cfg.truth.parent.name,
    )
    path = write_report([evaluation], cfg.out / "evaluation.json")

    click.echo(render_table([evaluation]))
    click.echo("")
    for name, report in evaluation.reports.items():
        scores = metrics(report)
        summary = ", ".join(
            f"{cls} recall {score.recall:.1%} precision {score.precision:.1%}" for cls, score in scores.items()
        )
        click.echo(f"📊 {name}: {summary}")
        if report.manual_review:
            click.echo(f"📝 {name}: {len(report.manual_review)} constraints need manual review")
    click.echo(f"📁 Report written to {path}")


@cli.command("serve-mock")
@click.option("--target", help="Mock scenario JSON file")
@click.option("--host", default="127.0.0.1", help="Interface to bind")
@click.option("--port", type=int, default=8080, help="Port to listen on")
@handle_errors
def serve_mock(target: Optional[str], host: str, port: int):
    """Serve a mock endpoint that enforces a scenario's constraints."""
    cfg = run_config("serve-mock", target=target, port=port)
    scenario = load_scenario(Path(cfg.target))
    click.echo(f"🌐 Serving {scenario.endpoint_path} on http://{host}:{cfg.port}")
    try:
        serve(scenario, host=host, port=cfg.port)
    except KeyboardInterrupt:
        click.echo("\n⏹️ Server stopped by user")


@cli.command("estimate-budget")
@spec_option
@click.option("--params", type=int, help="Number of parameters of the endpoint")
@handle_errors
def estimate_budget_command(spec: Optional[Path], params: Optional[int]):
    """Print the number of probe requests pairwise probing would need."""
    cfg = run_config("estimate-budget", spec=spec, params=params)
    count = cfg.params if cfg.params is not None else len(load_spec_file(cfg.spec))
    click.echo(str(estimate_budget(count)))


if __name__ == "__main__":
    cli()
