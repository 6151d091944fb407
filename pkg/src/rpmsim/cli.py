"""Command-line entry points: generate, verify, stats, report, serve.

Exit codes: 0 success, 3 validation failure (integrity, oracle, config
values), 4 format problem (unreadable bundle, bad version), 5 I/O failure.
Flag precedence is flags > config file > built-in defaults.
"""

from __future__ import annotations

import filecmp
import sys
import tempfile
from pathlib import Path
from typing import Optional

import click

from .alerts import AlertRuleParams, alert_keys, scan
from .bundle import (
    BundleFormatError,
    BundleValidationError,
    BundleVersionError,
    ENTITY_FILES,
    LEDGER_FILE,
    MANIFEST_FILE,
    export,
    import_bundle,
)
from .config import ConfigError, Mode, SimulationConfig, load_config_file
from .domain import Cohort, validate_cohort
from .sim import Simulation, inject_messiness, simulate
from .stats import cohort_stats

EXIT_VALIDATION = 3
EXIT_FORMAT = 4
EXIT_IO = 5


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _build_config(config_path: Optional[str], patients: Optional[int],
                  hcps: Optional[int], days: Optional[int],
                  seed: Optional[int], mode: Optional[str]) -> SimulationConfig:
    config = SimulationConfig()
    if config_path is not None:
        try:
            config = load_config_file(config_path, base=config)
        except OSError as exc:
            _fail(EXIT_IO, f"cannot read config file: {exc}")
        except ConfigError as exc:
            # unparseable input file; semantic errors surface via validate()
            _fail(EXIT_FORMAT, f"config file: {exc}")
    if patients is not None:
        config.n_patients = patients
    if hcps is not None:
        config.n_hcps = hcps
    if days is not None:
        config.duration_days = days
    if seed is not None:
        config.seed = seed
    if mode is not None:
        config.mode = Mode(mode)
    errors = config.validate()
    if errors:
        _fail(EXIT_VALIDATION, "; ".join(errors))
    return config


def _import_or_fail(bundle_dir: str) -> Cohort:
    try:
        return import_bundle(bundle_dir)
    except BundleValidationError as exc:
        _fail(EXIT_VALIDATION, f"bundle failed integrity checks:\n{exc.report}")
    except BundleVersionError as exc:
        _fail(EXIT_FORMAT, str(exc))
    except BundleFormatError as exc:
        _fail(EXIT_FORMAT, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    raise AssertionError("unreachable")


@click.group()
def main() -> None:
    """Synthetic remote-monitoring cohort simulator."""


@main.command()
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False), help="bundle directory to write")
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              default=None, help="key=value config file")
@click.option("--patients", type=int, default=None, help="number of patients")
@click.option("--hcps", type=int, default=None, help="number of HCPs")
@click.option("--days", type=int, default=None, help="simulated days")
@click.option("--seed", type=int, default=None, help="run seed")
def generate(out_dir: str, config_path: Optional[str], patients: Optional[int],
             hcps: Optional[int], days: Optional[int],
             seed: Optional[int]) -> None:
    """Simulate a cohort and write it as a dataset bundle."""
    # Bundles are finished artifacts; generation always scripts the HCPs.
    config = _build_config(config_path, patients, hcps, days, seed, "batch")
    cohort = simulate(config)
    inject_messiness(cohort)
    try:
        bundle = export(cohort, out_dir)
    except BundleValidationError as exc:
        _fail(EXIT_VALIDATION, f"generated cohort failed validation:\n{exc.report}")
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write bundle to {out_dir}: {exc}")
    stats = cohort_stats(cohort)
    click.echo(f"bundle written to {bundle.path}")
    click.echo(f"  patients {len(cohort.patients)}, hcps {len(cohort.hcps)}, "
               f"days {config.duration_days}, seed {config.seed}")
    click.echo(f"  measurements {stats.measurement_count} "
               f"(+{stats.injected_duplicate_count} duplicate rows), "
               f"alerts {stats.alert_count}, alert rate {stats.alert_rate:.3f}")


@main.command()
@click.argument("bundle_dir", type=click.Path(file_okay=False))
def verify(bundle_dir: str) -> None:
    """Re-check a bundle: integrity, alert oracle, canonical bytes."""
    cohort = _import_or_fail(bundle_dir)

    report = validate_cohort(cohort)
    if not report.ok:
        _fail(EXIT_VALIDATION, f"integrity violations:\n{report}")
    click.echo("integrity: ok")

    params = AlertRuleParams.from_config(cohort.config)
    rescanned = scan(cohort.measurements, cohort.patients, params,
                     exclude=cohort.injected_duplicate_ids())
    expected = alert_keys(cohort.alerts)
    actual = alert_keys(rescanned)
    if expected != actual:
        missing = len(expected - actual)
        extra = len(actual - expected)
        _fail(EXIT_VALIDATION,
              f"oracle mismatch: rescan differs from stored alerts "
              f"({missing} missing, {extra} unexpected)")
    click.echo(f"alert oracle: ok ({len(expected)} alerts match rescan)")

    try:
        with tempfile.TemporaryDirectory() as tmp:
            export(cohort, tmp)
            names = list(ENTITY_FILES) + [LEDGER_FILE, MANIFEST_FILE]
            for name in names:
                if not filecmp.cmp(Path(bundle_dir) / name, Path(tmp) / name,
                                   shallow=False):
                    _fail(EXIT_VALIDATION,
                          f"re-export mismatch: {name} is not in canonical form")
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    click.echo("round-trip: ok (re-export is byte-identical)")
    click.echo("bundle ok")


@main.command()
@click.argument("bundle_dir", type=click.Path(file_okay=False))
def stats(bundle_dir: str) -> None:
    """Print headline numbers and per-HCP / per-patient tables."""
    cohort = _import_or_fail(bundle_dir)
    s = cohort_stats(cohort)
    click.echo(f"measurements      {s.measurement_count}")
    click.echo(f"alerts            {s.alert_count}")
    click.echo(f"alert rate        {s.alert_rate:.4f}")
    click.echo(f"open alerts       {s.open_alert_count}")
    click.echo(f"responses         {s.response_count}")
    click.echo(f"med changes       {s.medication_change_count}")
    click.echo(f"admissions        {s.admission_count} "
               f"({s.admitted_patient_days} patient-days)")
    click.echo(f"consultations     {s.consultation_count}")
    click.echo(f"injected rows     {s.injected_duplicate_count} duplicates, "
               f"{s.injected_comment_count} comments")
    click.echo("per-hcp responses:")
    for hcp_id, count in sorted(s.per_hcp_responses.items()):
        click.echo(f"  {hcp_id}  {count}")
    click.echo("per-patient alerts:")
    for patient_id, count in sorted(s.per_patient_alerts.items()):
        click.echo(f"  {patient_id}  {count}")


@main.command()
@click.argument("bundle_dir", type=click.Path(file_okay=False))
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False),
              help="directory for figures and tables")
def report(bundle_dir: str, out_dir: str) -> None:
    """Render per-patient vitals figures plus summary tables."""
    cohort = _import_or_fail(bundle_dir)
    from .report import render_report  # matplotlib import is slow; defer it
    try:
        written = render_report(cohort, out_dir)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write report to {out_dir}: {exc}")
    for path in written:
        click.echo(f"wrote {path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--bundle", "bundle_dir", type=click.Path(file_okay=False),
              default=None, help="serve an existing bundle")
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              default=None, help="key=value config file")
@click.option("--patients", type=int, default=None)
@click.option("--hcps", type=int, default=None)
@click.option("--days", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--mode", type=click.Choice(["batch", "interactive"]),
              default=None, help="simulation mode for a fresh cohort")
def serve(host: str, port: int, bundle_dir: Optional[str],
          config_path: Optional[str], patients: Optional[int],
          hcps: Optional[int], days: Optional[int], seed: Optional[int],
          mode: Optional[str]) -> None:
    """Start the HTTP service preloaded with one cohort."""
    import socket

    import uvicorn

    from .api import CohortStore, create_app

    # uvicorn exits with its own codes on startup failure, so claim the
    # port up front to keep bind problems on the documented I/O exit code
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((host, port))
    except OSError as exc:
        _fail(EXIT_IO, f"cannot bind {host}:{port}: {exc}")
    finally:
        probe.close()

    store = CohortStore()
    if bundle_dir is not None:
        cohort = _import_or_fail(bundle_dir)
        sim = Simulation.from_cohort(cohort)
    else:
        config = _build_config(config_path, patients, hcps, days, seed, mode)
        sim = Simulation(config)
        sim.run()
    cohort_id = store.add(sim)
    app = create_app(store)
    click.echo(f"serving cohort {cohort_id} "
               f"({sim.config.mode.value}, clock {sim.cohort.clock}) "
               f"on http://{host}:{port}")
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as exc:
        _fail(EXIT_IO, f"cannot bind {host}:{port}: {exc}")


if __name__ == "__main__":
    main()
