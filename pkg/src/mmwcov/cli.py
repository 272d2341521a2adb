"""Command-line client for the coverage/rate service.

The CLI is a thin HTTP client: every computation goes through the FastAPI
service (mounted in-process by default, or a remote instance via
``--server``), so command-line runs and API calls exercise exactly the
same code path and produce identical CSV bytes.

Exit codes: 0 success, 1 validation/computation failure, 2 usage error.
"""

from __future__ import annotations

import sys

import click
import httpx

from . import __version__
from .scenario_io import ScenarioFileError, parse_mapping_text


class _InProcessTransport(httpx.BaseTransport):
    """Sync bridge onto the ASGI app, so the CLI needs no running server."""

    def __init__(self, app) -> None:
        self._asgi = httpx.ASGITransport(app=app)

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        import asyncio

        async def call() -> httpx.Response:
            response = await self._asgi.handle_async_request(request)
            body = b"".join([chunk async for chunk in response.stream])
            return httpx.Response(
                status_code=response.status_code, headers=response.headers, content=body
            )

        return asyncio.run(call())


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=None)
    from .service.app import app  # deferred: keeps --help fast

    transport = _InProcessTransport(app)
    return httpx.Client(transport=transport, base_url="http://mmwcov.internal", timeout=None)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    try:
        response = client.post(path, json=payload)
    except httpx.HTTPError as exc:
        click.echo(f"error: cannot reach service: {exc}", err=True)
        sys.exit(1)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        click.echo(f"error: {detail}", err=True)
        sys.exit(1)
    return response.json()


def _scenario_options(fn):
    fn = click.option("--preset", "-p", type=str, default=None, help="Preset scenario name.")(fn)
    fn = click.option(
        "--scenario-file", type=click.Path(exists=True, dir_okay=False), default=None,
        help="Scenario parameter file (key = value lines).",
    )(fn)
    fn = click.option(
        "--outage-variant", type=click.Choice(["corrected", "as-printed"]),
        default="corrected", show_default=True,
        help="Interpretation of the mmWave outage parameter pair.",
    )(fn)
    fn = click.option(
        "--cell-radius", type=float, default=None,
        help="Average cell radius in meters (presets only; default 100).",
    )(fn)
    fn = click.option(
        "--disable-outage", is_flag=True, help="Force the outage-free model variant."
    )(fn)
    return fn


def _scenario_spec(preset, scenario_file, outage_variant, cell_radius, disable_outage) -> dict:
    if (preset is None) == (scenario_file is None):
        raise click.UsageError("give exactly one of --preset / --scenario-file")
    spec: dict = {"outage_variant": outage_variant, "disable_outage": disable_outage}
    if preset is not None:
        spec["preset"] = preset
        if cell_radius is not None:
            spec["cell_radius_m"] = cell_radius
    else:
        if cell_radius is not None:
            raise click.UsageError(
                "--cell-radius applies to presets; set avg_cell_radius_m in the file"
            )
        try:
            with open(scenario_file, encoding="utf-8") as fh:
                spec["params"] = parse_mapping_text(fh.read())
        except ScenarioFileError as exc:
            click.echo(f"error: {scenario_file}: {exc}", err=True)
            sys.exit(1)
    return spec


def _grid_options(fn):
    fn = click.option("--min", "grid_min", type=float, required=True, help="Grid start.")(fn)
    fn = click.option("--max", "grid_max", type=float, required=True, help="Grid stop.")(fn)
    fn = click.option("--points", type=click.IntRange(min=2), default=7, show_default=True)(fn)
    fn = click.option("--log", "log_spacing", is_flag=True, help="Log-spaced grid.")(fn)
    return fn


def _mc_options(fn):
    fn = click.option(
        "--modes", type=str, default="analytic", show_default=True,
        help="Comma list of analytic,mc_snr_only,mc_full_sinr.",
    )(fn)
    fn = click.option("--n", "n_realizations", type=click.IntRange(min=1), default=100_000,
                      show_default=True, help="Monte Carlo realizations per estimate.")(fn)
    fn = click.option("--seed", type=int, default=1, show_default=True,
                      help="Base seed for the per-realization RNG streams.")(fn)
    return fn


def _write_output(text: str, out: str) -> None:
    if out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _parse_modes(modes: str) -> list[str]:
    parsed = [m.strip() for m in modes.split(",") if m.strip()]
    if not parsed:
        raise click.UsageError("enable at least one mode")
    for mode in parsed:
        if mode not in ("analytic", "mc_snr_only", "mc_full_sinr"):
            raise click.UsageError(f"unknown mode {mode!r}")
    return parsed


@click.group()
@click.version_option(version=__version__, prog_name="mmwcov")
@click.option("--server", type=str, default=None,
              help="Base URL of a running service; default runs in-process.")
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Coverage and rate of mmWave cellular networks (analytic + Monte Carlo)."""
    ctx.obj = server


@main.command()
@click.pass_obj
def presets(server: str | None) -> None:
    """List the built-in scenario presets."""
    with _client(server) as client:
        try:
            data = client.get("/presets").json()
        except httpx.HTTPError as exc:
            click.echo(f"error: cannot reach service: {exc}", err=True)
            sys.exit(1)
    for info in data["presets"]:
        click.echo(
            f"{info['name']:12s} bandwidth={info['bandwidth_hz']:.3g} Hz "
            f"outage={'yes' if info['outage_enabled'] else 'no'} "
            f"default R_c={info['default_cell_radius_m']:g} m"
        )
    click.echo(f"outage variants: {', '.join(data['outage_variants'])}")


@main.command("coverage-sweep")
@_scenario_options
@_grid_options
@_mc_options
@click.option("--sweep", type=click.Choice(["threshold", "radius"]), default="threshold",
              show_default=True, help="Sweep variable (threshold in dB or cell radius in m).")
@click.option("--threshold-db", type=float, default=None,
              help="Fixed threshold for radius sweeps.")
@click.option("--out", type=str, default="-", show_default=True, help="CSV path or - for stdout.")
@click.pass_obj
def coverage_sweep(server, preset, scenario_file, outage_variant, cell_radius, disable_outage,
                   grid_min, grid_max, points, log_spacing, modes, n_realizations, seed,
                   sweep, threshold_db, out) -> None:
    """Coverage probability over a threshold (or cell-radius) grid."""
    if sweep == "radius" and threshold_db is None:
        raise click.UsageError("radius sweeps need --threshold-db")
    payload = {
        "scenario": _scenario_spec(preset, scenario_file, outage_variant, cell_radius,
                                   disable_outage),
        "sweep": sweep,
        "grid": {"start": grid_min, "stop": grid_max, "points": points,
                 "spacing": "log" if log_spacing else "linear"},
        "modes": _parse_modes(modes),
        "n_realizations": n_realizations,
        "base_seed": seed,
        "threshold_db": threshold_db,
    }
    with _client(server) as client:
        data = _post(client, "/sweep/coverage", payload)
    for message in data["errors"]:
        click.echo(f"warning: {message}", err=True)
    _write_output(data["csv"], out)


@main.command("rate-sweep")
@_scenario_options
@_grid_options
@_mc_options
@click.option("--normalize", is_flag=True, help="Add rate/bandwidth columns.")
@click.option("--ratio-preset", type=str, default=None,
              help="Add rate-ratio columns against this preset.")
@click.option("--out", type=str, default="-", show_default=True, help="CSV path or - for stdout.")
@click.pass_obj
def rate_sweep(server, preset, scenario_file, outage_variant, cell_radius, disable_outage,
               grid_min, grid_max, points, log_spacing, modes, n_realizations, seed,
               normalize, ratio_preset, out) -> None:
    """Average rate over a cell-radius grid."""
    payload = {
        "scenario": _scenario_spec(preset, scenario_file, outage_variant, cell_radius,
                                   disable_outage),
        "grid": {"start": grid_min, "stop": grid_max, "points": points,
                 "spacing": "log" if log_spacing else "linear"},
        "modes": _parse_modes(modes),
        "n_realizations": n_realizations,
        "base_seed": seed,
        "normalize": normalize,
        "ratio_scenario": {"preset": ratio_preset} if ratio_preset else None,
    }
    with _client(server) as client:
        data = _post(client, "/sweep/rate", payload)
    for message in data["errors"]:
        click.echo(f"warning: {message}", err=True)
    _write_output(data["csv"], out)


@main.command()
@_scenario_options
@click.pass_obj
def validate(server, preset, scenario_file, outage_variant, cell_radius, disable_outage) -> None:
    """Run the invariant self-check suite on a scenario."""
    payload = {
        "scenario": _scenario_spec(preset, scenario_file, outage_variant, cell_radius,
                                   disable_outage)
    }
    with _client(server) as client:
        data = _post(client, "/validate", payload)
    for line in data["lines"]:
        click.echo(line)
    if not data["passed"]:
        sys.exit(1)


@main.command()
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
