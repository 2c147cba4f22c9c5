"""CLI entry point for the compressive phase retrieval simulator."""

import time
from collections.abc import Callable
from pathlib import Path
from typing import Annotated, Any, Optional

import numpy as np
import typer
from rich.console import Console
from rich.table import Table

from cprsim.model.config import NOISELESS, EpsilonMode, OutputFormat, SensingMode
from cprsim.model.validation import ValidationError

app = typer.Typer(
    name="cprsim",
    help="Compressive phase retrieval with four masks - Monte Carlo experiments and single recoveries",
    no_args_is_help=True,
    rich_markup_mode="rich",
)

console = Console()

EXIT_TARGET_UNREACHABLE = 2
SOLVER_FLAGS = ("max_iterations", "feasibility_tol", "epsilon_mode")


@app.callback()
def main_callback(
    quiet: Annotated[
        bool,
        typer.Option("--quiet", "-q", help="Hide progress bars and all log output but errors"),
    ] = False,
    verbose: Annotated[
        int,
        typer.Option("--verbose", "-v", count=True, help="More log output (-v info, -vv debug)"),
    ] = 0,
) -> None:
    """Compressive phase retrieval simulator."""
    from cprsim.utils.console import log_level, set_show_progress, setup_logging

    set_show_progress(not quiet)
    setup_logging(log_level(quiet, verbose))


def _handle_error(error: ValidationError) -> None:
    """Handle validation errors with rich formatting."""
    console.print(f"[red]Error ({error.code}):[/red] {error.message}")
    raise typer.Exit(1)


def _parse_grid(text: str | None, cast: Callable[[str], Any], flag: str) -> list | None:
    """Parse a comma-separated grid flag such as "5,10,20"."""
    if text is None:
        return None
    try:
        return [cast(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise ValidationError("INVALID_CONFIG", f"{flag}: cannot parse '{text}' ({e})") from e


# Options shared by the experiment commands
ConfigOption = Annotated[Optional[Path], typer.Option("--config", "-c", help="YAML/JSON config file")]
NOption = Annotated[Optional[int], typer.Option("--n", help="Signal dimension N")]
KOption = Annotated[Optional[str], typer.Option("--k", help="Sparsity grid, comma-separated")]
MOption = Annotated[Optional[str], typer.Option("--measurements", "-m", help="M-grid, comma-separated")]
LOption = Annotated[Optional[str], typer.Option("--l", help="L-grid (linear samples), comma-separated")]
TrialsOption = Annotated[Optional[int], typer.Option("--trials", help="Trials per grid point")]
SnrOption = Annotated[Optional[str], typer.Option("--snr-db", help="SNR grid in dB, comma-separated, or 'noiseless'")]
ModeOption = Annotated[Optional[SensingMode], typer.Option("--mode", help="Sensing mode")]
FixFirstOption = Annotated[
    Optional[bool], typer.Option("--fix-first/--random-first", help="Fix |x[1]| = 1 in test signals")
]
ThresholdOption = Annotated[Optional[float], typer.Option("--threshold", help="Success threshold on aligned MSE")]
SeedOption = Annotated[Optional[int], typer.Option("--seed", help="Master seed")]
OutOption = Annotated[Optional[str], typer.Option("--out", "-o", help="Output table path")]
FormatOption = Annotated[Optional[OutputFormat], typer.Option("--format", help="Output table format")]
FullScaleOption = Annotated[
    Optional[bool], typer.Option("--full-scale/--desk-scale", help="Use full trial counts (2000 / 1000)")
]
WorkersOption = Annotated[Optional[int], typer.Option("--workers", "-j", help="Worker processes (0 = one per core)")]
MaxIterOption = Annotated[Optional[int], typer.Option("--max-iterations", help="Solver iteration limit")]
FeasibilityOption = Annotated[Optional[float], typer.Option("--feasibility-tol", help="Relative feasibility tolerance")]
EpsilonModeOption = Annotated[Optional[EpsilonMode], typer.Option("--epsilon-mode", help="Residual budget selection")]


def _overrides(**flags: Any) -> dict[str, Any]:
    """Map flag values to config keys, nesting solver options."""
    solver = {key: flags.pop(key, None) for key in SOLVER_FLAGS}
    solver = {key: value for key, value in solver.items() if value is not None}
    overrides = {key: value for key, value in flags.items() if value is not None}
    if solver:
        overrides["solver"] = solver
    return overrides


def _is_noiseless(text: str | None) -> bool:
    return text is not None and text.strip().lower() == NOISELESS


def _grid_overrides(
    k: str | None,
    measurements: str | None,
    l_values: str | None,
    snr_db: str | None,
) -> dict[str, Any]:
    if measurements is not None and l_values is not None:
        raise ValidationError("INVALID_CONFIG", "use either --measurements or --l, not both")
    return {
        "k_values": _parse_grid(k, int, "--k"),
        "measurements": _parse_grid(measurements, int, "--measurements"),
        "l_values": _parse_grid(l_values, int, "--l"),
        "snr_db": NOISELESS if _is_noiseless(snr_db) else _parse_grid(snr_db, float, "--snr-db"),
    }


def _run_experiment(experiment: str, config_path: Path | None, overrides: dict[str, Any], title: str):
    from cprsim.catalog.presets import get_preset
    from cprsim.experiments.sweeps import run_noise_sweep, run_phase_transition, run_success_rate
    from cprsim.experiments.tables import render_table, write_result
    from cprsim.model.validation import load_config

    runners = {
        "success-rate": run_success_rate,
        "phase-transition": run_phase_transition,
        "noise-sweep": run_noise_sweep,
    }
    config = load_config(config_path, overrides, get_preset(experiment))

    start = time.perf_counter()
    result = runners[experiment](config)
    elapsed = time.perf_counter() - start

    console.print(render_table(result, title))
    if config.out:
        for path in write_result(result, config, Path(config.out), config.format, elapsed):
            console.print(f"[dim]Wrote {path}[/dim]")
    console.print(f"[dim]{len(result.records)} trials in {elapsed:.1f}s[/dim]")
    return result


@app.command(name="success-rate")
def success_rate(
    config: ConfigOption = None,
    n: NOption = None,
    k: KOption = None,
    measurements: MOption = None,
    l_values: LOption = None,
    trials: TrialsOption = None,
    snr_db: SnrOption = None,
    mode: ModeOption = None,
    fix_first: FixFirstOption = None,
    threshold: ThresholdOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    output_format: FormatOption = None,
    full_scale: FullScaleOption = None,
    workers: WorkersOption = None,
    max_iterations: MaxIterOption = None,
    feasibility_tol: FeasibilityOption = None,
    epsilon_mode: EpsilonModeOption = None,
) -> None:
    """Empirical success rate over a (k, M) grid.

    [bold]Example:[/bold]
        cprsim success-rate --n 512 --k 5,10,20 --measurements 64,128,256 --out results/success.csv
    """
    try:
        overrides = _overrides(
            n=n, trials=trials, mode=mode, fix_first=fix_first, threshold=threshold, seed=seed, out=out,
            format=output_format, full_scale=full_scale, workers=workers, max_iterations=max_iterations,
            feasibility_tol=feasibility_tol, epsilon_mode=epsilon_mode,
            **_grid_overrides(k, measurements, l_values, snr_db),
        )
        _run_experiment("success-rate", config, overrides, "Empirical success rate")
    except ValidationError as e:
        _handle_error(e)


@app.command(name="phase-transition")
def phase_transition(
    config: ConfigOption = None,
    n: NOption = None,
    k: KOption = None,
    measurements: MOption = None,
    l_values: LOption = None,
    trials: TrialsOption = None,
    snr_db: SnrOption = None,
    mode: ModeOption = None,
    fix_first: FixFirstOption = None,
    threshold: ThresholdOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    output_format: FormatOption = None,
    full_scale: FullScaleOption = None,
    workers: WorkersOption = None,
    max_iterations: MaxIterOption = None,
    feasibility_tol: FeasibilityOption = None,
    epsilon_mode: EpsilonModeOption = None,
    targets: Annotated[
        Optional[str],
        typer.Option("--targets", help="Target success rates, comma-separated"),
    ] = None,
) -> None:
    """Smallest M reaching each target success rate, per k.

    Exits with code 2 when a target is not reached within the M-grid.

    [bold]Example:[/bold]
        cprsim phase-transition --k 5,10,20 --targets 0.95 --out results/transition.csv
    """
    try:
        overrides = _overrides(
            n=n, trials=trials, mode=mode, fix_first=fix_first, threshold=threshold, seed=seed, out=out,
            format=output_format, full_scale=full_scale, workers=workers, max_iterations=max_iterations,
            feasibility_tol=feasibility_tol, epsilon_mode=epsilon_mode,
            targets=_parse_grid(targets, float, "--targets"),
            **_grid_overrides(k, measurements, l_values, snr_db),
        )
        result = _run_experiment("phase-transition", config, overrides, "Phase transition")
    except ValidationError as e:
        _handle_error(e)

    if result.unreachable:
        console.print("[yellow]Some target rates were not reached within the M-grid.[/yellow]")
        raise typer.Exit(EXIT_TARGET_UNREACHABLE)


@app.command(name="noise-sweep")
def noise_sweep(
    config: ConfigOption = None,
    n: NOption = None,
    k: KOption = None,
    measurements: MOption = None,
    l_values: LOption = None,
    trials: TrialsOption = None,
    snr_db: SnrOption = None,
    mode: ModeOption = None,
    fix_first: FixFirstOption = None,
    threshold: ThresholdOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    output_format: FormatOption = None,
    full_scale: FullScaleOption = None,
    workers: WorkersOption = None,
    max_iterations: MaxIterOption = None,
    feasibility_tol: FeasibilityOption = None,
    epsilon_mode: EpsilonModeOption = None,
    compare_first_entry: Annotated[
        Optional[bool],
        typer.Option("--both-variants/--single-variant", help="Run both random and fixed |x[1]| variants"),
    ] = None,
) -> None:
    """Mean aligned MSE (dB) versus SNR (dB).

    [bold]Example:[/bold]
        cprsim noise-sweep --snr-db 20,30,40,50,60 --trials 200 --out results/noise.csv
    """
    from cprsim.experiments.sweeps import FIXED_FIRST, RANDOM_FIRST, noise_slope

    try:
        overrides = _overrides(
            n=n, trials=trials, mode=mode, fix_first=fix_first, threshold=threshold, seed=seed, out=out,
            format=output_format, full_scale=full_scale, workers=workers, max_iterations=max_iterations,
            feasibility_tol=feasibility_tol, epsilon_mode=epsilon_mode, compare_first_entry=compare_first_entry,
            **_grid_overrides(k, measurements, l_values, snr_db),
        )
        result = _run_experiment("noise-sweep", config, overrides, "Noise sweep")
    except ValidationError as e:
        _handle_error(e)

    for variant in (RANDOM_FIRST, FIXED_FIRST):
        try:
            slope = noise_slope(result.rows, variant)
        except ValidationError:
            continue
        console.print(f"Slope of MSE(dB) vs SNR(dB), {variant} |x[1]|, 20-60 dB: {slope:.3f}")


@app.command()
def simulate(
    out: Annotated[Path, typer.Option("--out", "-o", help="Measurement record to write (.yaml text or .bin)")],
    n: Annotated[int, typer.Option("--n", help="Signal dimension N")] = 512,
    k: Annotated[int, typer.Option("--k", help="Sparsity")] = 12,
    measurements: Annotated[int, typer.Option("--measurements", "-m", help="Number of intensities M")] = 256,
    snr_db: Annotated[Optional[float], typer.Option("--snr-db", help="SNR in dB (default noiseless)")] = None,
    mode: Annotated[SensingMode, typer.Option("--mode", help="Sensing mode")] = SensingMode.FOURIER,
    fix_first: Annotated[bool, typer.Option("--fix-first", help="Fix |x[1]| = 1")] = False,
    seed: Annotated[int, typer.Option("--seed", help="Instance seed")] = 0,
    truth_out: Annotated[
        Optional[Path],
        typer.Option("--truth-out", help="Write the true signal as .npy"),
    ] = None,
) -> None:
    """Draw a sparse signal and write its intensity measurements.

    [bold]Example:[/bold]
        cprsim simulate --n 512 --k 12 -m 256 -o instance.yaml --truth-out truth.npy
    """
    from cprsim.experiments.seeds import trial_generators
    from cprsim.measurement.records import write_record
    from cprsim.measurement.sensing import build_operator
    from cprsim.model.config import rows_for_measurements
    from cprsim.model.signals import random_sparse_signal
    from cprsim.model.validation import build_config
    from cprsim.pipeline import simulate as measure

    try:
        build_config({"n": n, "k_values": [k], "measurements": [measurements], "mode": mode.value})
        rows = rows_for_measurements(mode, measurements)
        signal_rng, operator_rng, noise_rng = trial_generators(seed)
        signal = random_sparse_signal(n, k, signal_rng, fix_first=fix_first, include_first=True)
        operator = build_operator(mode, n, rows, operator_rng)
        record = measure(signal.values, operator, rng=noise_rng, snr=snr_db, seed=seed)
        write_record(record, out)
        console.print(f"[green]Wrote {record.count} intensities ({mode.value}, N={n}, k={k}) to {out}[/green]")
        if truth_out is not None:
            truth_out.parent.mkdir(parents=True, exist_ok=True)
            np.save(truth_out, signal.values)
            console.print(f"[dim]True signal: {truth_out}[/dim]")
    except ValidationError as e:
        _handle_error(e)


@app.command()
def recover(
    record: Annotated[Path, typer.Argument(help="Measurement record (.yaml text or .bin)", metavar="RECORD")],
    truth: Annotated[Optional[Path], typer.Option("--truth", help="True signal (.npy) for the aligned MSE")] = None,
    estimate_out: Annotated[Optional[Path], typer.Option("--estimate-out", help="Write the estimate as .npy")] = None,
    threshold: Annotated[float, typer.Option("--threshold", help="Success threshold on aligned MSE")] = 1e-5,
    max_iterations: MaxIterOption = None,
    feasibility_tol: FeasibilityOption = None,
    epsilon_mode: EpsilonModeOption = None,
    use_first_entry: Annotated[
        bool, typer.Option("--use-first-entry", help="Add the recovered x[1] as a constraint (Fourier mode)")
    ] = False,
    renormalize: Annotated[bool, typer.Option("--renormalize", help="Renormalize stage-1 magnitudes")] = False,
) -> None:
    """Recover a signal from a measurement record.

    Dense operators are regenerated from the seed stored in the record.

    [bold]Example:[/bold]
        cprsim recover instance.yaml --truth truth.npy
    """
    from cprsim.experiments.seeds import trial_generators
    from cprsim.measurement.records import read_record
    from cprsim.measurement.sensing import PartialFourierOperator, build_operator
    from cprsim.model.config import RetrievalOptions, SolverOptions
    from cprsim.model.signals import DFTOperator
    from cprsim.pipeline import align_phase, reconstruct

    try:
        measurements = read_record(record)
        if measurements.dimension is None:
            raise ValidationError("INVALID_RECORD", "record has no signal dimension")
        if measurements.mode == SensingMode.FOURIER:
            if measurements.sampling_set is None:
                raise ValidationError("INVALID_RECORD", "Fourier record has no sampling set")
            operator = PartialFourierOperator(DFTOperator(measurements.dimension, measurements.sampling_set))
        else:
            if measurements.seed is None:
                raise ValidationError("INVALID_RECORD", "dense-mode record has no operator seed")
            _, operator_rng, _ = trial_generators(int(measurements.seed))
            operator = build_operator(
                measurements.mode, measurements.dimension, measurements.blocks + 1, operator_rng
            )

        solver_flags = {"max_iterations": max_iterations, "feasibility_tol": feasibility_tol}
        solver_flags = {key: value for key, value in solver_flags.items() if value is not None}
        solver = SolverOptions(
            **solver_flags,
            epsilon_mode=epsilon_mode or EpsilonMode.FIXED,
            use_first_entry=use_first_entry,
        )
        reconstruction = reconstruct(measurements, operator, solver, RetrievalOptions(renormalize=renormalize))

        table = Table(title=f"Recovery: {record.name}")
        table.add_column("Quantity", style="cyan")
        table.add_column("Value", style="green")
        table.add_row("Mode", measurements.mode.value)
        table.add_row("N", str(measurements.dimension))
        table.add_row("M", str(measurements.count))
        table.add_row("Stage-1 residual", f"{reconstruction.stage1.residual:.3e}")
        table.add_row("Solver iterations", str(reconstruction.report.iterations))
        table.add_row("Converged", "yes" if reconstruction.report.converged else "no")
        table.add_row("l1 norm", f"{reconstruction.report.objective:.6g}")
        table.add_row("Residual", f"{reconstruction.report.residual_norm:.3e}")
        table.add_row("Nonzeros (|x| > 1e-6 max)", str(_count_nonzeros(reconstruction.estimate)))
        if truth is not None:
            if not truth.exists():
                raise ValidationError("INVALID_ARGUMENT", f"Truth file not found: {truth}")
            _, mse = align_phase(np.load(truth), reconstruction.estimate)
            table.add_row("Aligned MSE", f"{mse:.3e}")
            table.add_row("Success", "yes" if mse < threshold else "no")
        console.print(table)

        if estimate_out is not None:
            estimate_out.parent.mkdir(parents=True, exist_ok=True)
            np.save(estimate_out, reconstruction.estimate)
            console.print(f"[dim]Estimate: {estimate_out}[/dim]")
    except ValidationError as e:
        _handle_error(e)


def _count_nonzeros(x: np.ndarray) -> int:
    peak = float(np.max(np.abs(x))) if x.size else 0.0
    return int(np.count_nonzero(np.abs(x) > 1e-6 * peak)) if peak > 0 else 0


@app.command()
def version() -> None:
    """Show version information."""
    from cprsim import __version__

    console.print(f"cprsim version {__version__}")


if __name__ == "__main__":
    app()
