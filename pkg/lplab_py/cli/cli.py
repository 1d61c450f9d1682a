"""
@ai-metadata {
    "domain": "command-line-interface",
    "description": "Command-line interface for the lplab experiments",
    "dependencies": ["../core/experiments.py", "../core/selftest.py", "../core/schema.py", "../core/parser.py"]
}
"""

import sys
import click
import logging
from typing import Any, Callable, Dict, Optional
from rich.console import Console
from rich.table import Table
from rich.panel import Panel

from lplab_py import __version__
from lplab_py.core.errors import LabError
from lplab_py.core.experiments import ExperimentConfig, ExperimentReport, run
from lplab_py.core.parser import parse_int_list, parse_number_list
from lplab_py.core.schema import load_document
from lplab_py.core.selftest import run_selftest


console = Console()
err_console = Console(stderr=True)

# Configure logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger("lplab")

EXIT_NON_CONVERGED = 4
EXIT_SELFTEST_FAILED = 5


@click.group()
@click.version_option(version=__version__)
def cli():
    """lp harmonic analysis lab on finitely generated groups."""
    pass


def common_options(fn: Callable) -> Callable:
    """Options shared by every experiment subcommand."""
    options = [
        click.option('--group', type=str, help='Group spec: Z, Z^2, F2, C6, Z x C3'),
        click.option('--seed', type=int, help='Random seed (default 0)'),
        click.option('--config', 'config_path', type=click.Path(exists=True),
                     help='YAML or JSON config file; explicit flags override it'),
        click.option('--output', '-o', type=click.Path(), help='Write the report to this file'),
        click.option('--format', 'fmt', type=click.Choice(['json', 'csv']),
                     help='Report format; prints the raw report when no --output is given'),
        click.option('--selftest', is_flag=True, help="Run this module's invariant suite instead"),
        click.option('--verbose', '-v', is_flag=True, help='Debug logging'),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _list(text: Optional[str], parse: Callable[[str], Any]) -> Any:
    if text is None:
        return None
    try:
        return parse(text)
    except LabError as e:
        raise click.BadParameter(str(e))


def _render(report: ExperimentReport) -> None:
    table = Table(title=report.experiment)
    columns = sorted({key for row in report.rows for key in row})
    for column in columns:
        table.add_column(column, style="cyan" if column in ("check", "passed") else None)
    for row in report.rows:
        cells = []
        for column in columns:
            value = row.get(column)
            if value is None:
                cells.append("")
            elif isinstance(value, bool):
                cells.append("[green]✓[/green]" if value else "[red]✗[/red]")
            elif isinstance(value, float):
                cells.append(f"{value:.6g}")
            else:
                cells.append(str(value))
        table.add_row(*cells)
    console.print(table)
    params = ", ".join(f"{k}={v}" for k, v in report.params.items())
    console.print(Panel(f"{params}\nwall time {report.wall_time:.3f}s, version {report.version}", title="run"))


def execute(experiment: str, flags: Dict[str, Any], group: Optional[str], seed: Optional[int],
            config_path: Optional[str], output: Optional[str], fmt: Optional[str],
            selftest: bool, verbose: bool) -> None:
    """
    Resolve the config, run the experiment and exit with the report's status.

    Args:
        experiment: Subcommand name
        flags: Subcommand-specific values; None means the flag was not given
        group: --group value
        seed: --seed value
        config_path: --config file
        output: --output path
        fmt: --format value
        selftest: Run the invariant suite instead of the experiment
        verbose: Lower lplab_py loggers to DEBUG
    """
    if verbose:
        logging.getLogger("lplab_py").setLevel(logging.DEBUG)
    try:
        if selftest:
            report = run_selftest(experiment)
            if output:
                report.write(output, fmt or "json")
        else:
            explicit = {k: v for k, v in flags.items() if v is not None}
            for key, value in (("group", group), ("seed", seed), ("output", output), ("format", fmt)):
                if value is not None:
                    explicit[key] = value
            file_values = load_document(config_path, f"config:{experiment}") if config_path else None
            config = ExperimentConfig.resolve(experiment, explicit, file_values)
            report = run(config)

        if output:
            console.print(f"[bold green]✓[/bold green] Report saved to: [bold]{output}[/bold]")
        elif fmt == "csv":
            click.echo(report.to_csv(), nl=False)
        elif fmt == "json":
            click.echo(report.to_json(), nl=False)
        else:
            _render(report)

    except LabError as e:
        err_console.print(f"[bold red]Error:[/bold red] {str(e)}")
        sys.exit(e.exit_code)
    except Exception as e:
        logger.debug("unexpected failure", exc_info=True)
        err_console.print(f"[bold red]Internal error:[/bold red] {type(e).__name__}: {e}")
        sys.exit(1)

    if report.failed_checks:
        err_console.print("[bold red]Selftest failed[/bold red]")
        sys.exit(EXIT_SELFTEST_FAILED)
    if report.non_converged:
        err_console.print("[yellow]Some rows did not converge[/yellow]")
        sys.exit(EXIT_NON_CONVERGED)


@cli.command()
@click.option('--radius', type=int, help='Single ball radius')
@click.option('--radii', type=str, help='Radii list, e.g. 0,1,2 or 0..6')
@click.option('--gen', 'gens', multiple=True, help='Generator element (repeat; must be symmetric)')
@common_options
def ball(radius, radii, gens, **common):
    """Ball and sphere sizes of the Cayley graph against closed forms."""
    flags = {"radius": radius, "radii": _list(radii, parse_int_list), "generators": list(gens) or None}
    execute("ball", flags, **common)


@cli.command()
@click.option('--g', 'g', type=str, help='Infinite-order element (default: first standard generator)')
@click.option('--omega', type=str, help='Unit-modulus scalar, e.g. 1, -1, i')
@click.option('--p', type=float, help='Exponent p > 1')
@click.option('--n', type=int, help='Single averaging length')
@click.option('--ns', type=str, help='Averaging lengths, e.g. 1,10,100')
@common_options
def averaging(g, omega, p, n, ns, **common):
    """p-norm of the averaging elements x_n against n^((1-p)/p)."""
    flags = {"g": g, "omega": omega, "p": p, "n": n, "ns": _list(ns, parse_int_list)}
    execute("averaging", flags, **common)


@cli.command()
@click.option('--p', type=float, help='Exponent p > 1')
@click.option('--trials', type=int, help='Random pairs per form')
@click.option('--max-support', type=int, help='Largest support of a random vector')
@click.option('--max-length', type=int, help='Largest word length in a support')
@click.option('--tuple-size', type=int, help='Components of the random tuples')
@click.option('--mode', type=click.Choice(['exact', 'float']), help='Scalar mode of the random vectors')
@common_options
def young(p, trials, max_support, max_length, tuple_size, mode, **common):
    """Randomized check of Young's inequality in its scalar and tuple forms."""
    flags = {"p": p, "trials": trials, "max_support": max_support, "max_length": max_length,
             "tuple_size": tuple_size, "mode": mode}
    execute("young", flags, **common)


@cli.command()
@click.option('--g', 'g', type=str, help='Infinite-order element')
@click.option('--omega', type=str, help='Unit-modulus scalar')
@click.option('--n', type=int, help='Single averaging length')
@click.option('--ns', type=str, help='Averaging lengths')
@common_options
def witness(g, omega, n, ns, **common):
    """Verify 1 - x_n = (g - omega) d exactly."""
    flags = {"g": g, "omega": omega, "n": n, "ns": _list(ns, parse_int_list)}
    execute("witness", flags, **common)


@cli.command()
@click.option('--g', 'g', type=str, help='Infinite-order element')
@click.option('--omega', type=str, help='Scalar with |omega| != 1')
@click.option('--truncation', type=int, help='Single series truncation K')
@click.option('--truncations', type=str, help='Truncations list')
@common_options
def neumann(g, omega, truncation, truncations, **common):
    """l1 residual of the truncated Neumann inverse of (g - omega)."""
    flags = {"g": g, "omega": omega, "truncation": truncation,
             "truncations": _list(truncations, parse_int_list)}
    execute("neumann", flags, **common)


@cli.command()
@click.option('--g', 'g', type=str, help='Infinite-order element')
@click.option('--omega', type=str, help='Unit-modulus scalar')
@click.option('--omegas', type=str, help='Comma-separated scalars for a composed product of factors')
@click.option('--p', type=float, help='Exponent p > 1')
@click.option('--epsilon', type=float, help='Target accuracy')
@click.option('--n', type=int, help='Override the recipe averaging length')
@click.option('--target', type=click.Path(exists=True), help='Vector file for b (default delta_e)')
@common_options
def density(g, omega, omegas, p, epsilon, n, target, **common):
    """Approximate b by elements of the image of (g - omega) in lp."""
    omega_list = [w.strip() for w in omegas.split(",") if w.strip()] if omegas else None
    flags = {"g": g, "omega": omega, "omegas": omega_list, "p": p, "epsilon": epsilon, "n": n,
             "target": target}
    execute("density", flags, **common)


@cli.command()
@click.option('--radius', type=int, help='Ball radius')
@click.option('--p', type=float, help='Exponent p > 1')
@click.option('--boundary', type=str, help='Frontier values in canonical order, e.g. 0,1')
@click.option('--problem', type=click.Path(exists=True), help='Dirichlet problem file')
@click.option('--residual-tol', type=float, help='Interior p-Laplacian tolerance')
@click.option('--max-iters', type=int, help='Iteration cap')
@click.option('--method', type=click.Choice(['newton', 'gradient']), help='Descent method')
@click.option('--solution', type=click.Path(), help='Write the solution JSON here')
@click.option('--residuals', type=click.Path(), help='Write per-vertex residual CSV here')
@click.option('--gen', 'gens', multiple=True, help='Generator element (repeat; must be symmetric)')
@common_options
def dirichlet(radius, p, boundary, problem, residual_tol, max_iters, method, solution, residuals, gens, **common):
    """Solve the discrete p-Dirichlet problem on a Cayley ball."""
    flags = {"radius": radius, "p": p, "boundary": _list(boundary, parse_number_list), "problem": problem,
             "residual_tol": residual_tol, "max_iters": max_iters, "method": method, "solution": solution,
             "residuals": residuals, "generators": list(gens) or None}
    execute("dirichlet", flags, **common)


@cli.command()
@click.option('--complex', 'complex_name', type=str, help='Built-in complex (Z, Z2, Z^2, F<k>) or complex file')
@click.option('--check', type=click.Choice(['compose', 'sigma', 'distance', 'invariant', 'homology']),
              help='What to compute')
@click.option('--window', type=int, help='Single window radius')
@click.option('--windows', type=str, help='Window radii, e.g. 2,4,8')
@click.option('--degree', type=int, help='Differential index')
@click.option('--policy', type=click.Choice(['clip', 'extend']), help='Truncation policy')
@click.option('--p', type=float, help='Exponent p > 1 for distance')
@click.option('--target', type=click.Path(exists=True), help='Vector file for the distance target')
@click.option('--max-iters', type=int, help='Iteration cap for distance')
@common_options
def cohomology(complex_name, check, window, windows, degree, policy, p, target, max_iters, **common):
    """Chain-complex checks and truncated-cochain experiments."""
    flags = {"complex": complex_name, "check": check, "window": window,
             "windows": _list(windows, parse_int_list), "degree": degree, "policy": policy, "p": p,
             "target": target, "max_iters": max_iters}
    execute("cohomology", flags, **common)


@cli.command()
@click.option('--p', type=float, help='Exponent p > 1')
@click.option('--radii', type=str, help='Radii list, e.g. 8,16,32')
@click.option('--starts', type=int, help='Descent starts per radius')
@click.option('--max-iters', type=int, help='Iteration cap per start')
@click.option('--achievers', type=click.Path(), help='Write the minimizing functions here')
@click.option('--gen', 'gens', multiple=True, help='Generator element (repeat; must be symmetric)')
@common_options
def amenability(p, radii, starts, max_iters, achievers, gens, **common):
    """Sobolev ratio lambda(R) = min I_p(f) / ||f||_p^p over balls."""
    flags = {"p": p, "radii": _list(radii, parse_int_list), "starts": starts, "max_iters": max_iters,
             "achievers": achievers, "generators": list(gens) or None}
    execute("amenability", flags, **common)


@cli.command(name="tilf-diff")
@click.option('--g', 'g', type=str, help='Infinite-order element for the approximation')
@click.option('--target', type=click.Path(exists=True), help='Vector file (default delta_e)')
@click.option('--epsilon', type=float, help='Target accuracy')
@click.option('--p', type=float, help='Exponent p > 1')
@common_options
def tilf_diff(g, target, epsilon, p, **common):
    """Decompose into translation differences, or approximate them in lp."""
    flags = {"g": g, "target": target, "epsilon": epsilon, "p": p}
    execute("tilf-diff", flags, **common)


@cli.command()
@click.option('--p', type=float, help='Exponent p > 1')
@click.option('--n', type=int, help='Single tent radius')
@click.option('--ns', type=str, help='Tent radii')
@common_options
def tent(p, n, ns, **common):
    """Energy of the tent functions on Z^d against 4 n^(1-p)."""
    flags = {"p": p, "n": n, "ns": _list(ns, parse_int_list)}
    execute("tent", flags, **common)


if __name__ == '__main__':
    cli()
