""" file:    cli.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Friday, 16 October 2026

    description: CLI implementation
"""
import logging
import os

import click

from .config import dump_scenario, load_scenario, scenario_from_dict
from .driver import compare as run_comparison, time_loop
from .errors import SchwarzLBWError
from .presets import PRESETS
from .report import comparison_frame, write_comparison
from .verify import CHECKS, run_checks

LOGGER = logging.getLogger('schwarz_lbw')


def configure_logging(verbose, logfile=None):
    "Set up logging in the usual format; -v gives INFO, -vv DEBUG"
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(level=level,
                        format='%(asctime)s %(name)-12s %(levelname)-8s %(message)s',
                        datefmt='%m-%d %H:%M',
                        filename=logfile,
                        filemode='a')


def get_scenario(config, preset, out, dump_fields, threads, progress):
    """
    Load the scenario of a command and apply the command line overrides

    A config file is read on top of the preset (if given); without a config
    file the preset alone is used, 'cube' by default.
    """
    if config is not None:
        scenario = load_scenario(config, base=PRESETS[preset] if preset else None)
    else:
        scenario = scenario_from_dict(PRESETS[preset or 'cube'])
    output = {'show_progress': progress}
    if out is not None:
        output['directory'] = out
    if dump_fields:
        output['dump_fields'] = True
    overrides = {'output': output}
    if threads is not None:
        overrides['threads'] = threads
    return scenario.replace(**overrides)


def scenario_options(func):
    "Options shared by the commands that run a scenario"
    options = [
        click.option('--config', type=click.Path(exists=True, dir_okay=False),
                     help='A YAML scenario file'),
        click.option('--preset', type=click.Choice(sorted(PRESETS)), default=None,
                     help='A built-in scenario, used as the base of --config'),
        click.option('--out', type=click.Path(file_okay=False), default=None,
                     help='Output directory for reports and field dumps'),
        click.option('--dump-fields', is_flag=True, help='If set, write VTK fields every step'),
        click.option('--threads', type=click.IntRange(min=1), default=None,
                     help='Worker threads for assembly and subdomain solves'),
        click.option('--seed', type=int, default=None,
                     help='Reserved, the pipeline is deterministic'),
        click.option('--progress/--no-progress', default=True, help='Show progress bars'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group()
@click.option('-v', '--verbose', count=True, help='Increase log verbosity (-v, -vv)')
@click.option('--logfile', type=click.Path(dir_okay=False), default=None,
              help='Append log messages to this file instead of stderr')
def main(verbose, logfile):
    """
    Overlapping Schwarz preconditioners for a laser beam welding model
    """
    configure_logging(verbose, logfile)


@main.command()
@scenario_options
def run(config, preset, out, dump_fields, threads, seed, progress):
    """
    Run the time loop of a scenario and write its report
    """
    try:
        scenario = get_scenario(config, preset, out, dump_fields, threads, progress)
        if seed is not None:
            LOGGER.info(f'Ignoring seed {seed}, runs are deterministic')
        report = time_loop(scenario)
        csv_name, json_name = report.write(scenario.output.directory)
        yaml_name = dump_scenario(
            scenario, os.path.join(scenario.output.directory, f'{scenario.name}.yml'))
    except SchwarzLBWError as err:
        raise click.ClickException(str(err))

    summary = report.summary()
    click.echo(f"{report.label}: {report.n_steps} steps, mean GMRES {summary['it_gmres']:.1f}, "
               f"mean Newton {summary['it_newton']:.1f}, {summary['T_Tot']:.2f}s")
    click.echo(f'Report written to {csv_name} and {json_name}')
    click.echo(f'Resolved scenario written to {yaml_name}')
    if report.aborted:
        click.echo(f'Run aborted: {report.aborted}', err=True)
        raise click.exceptions.Exit(1)


@main.command()
@scenario_options
@click.option('--label', 'labels', multiple=True,
              help="A coarse space such as 'GDSW*(T+R)-RGDSW'; repeat for several")
def compare(config, preset, out, dump_fields, threads, seed, progress, labels):
    """
    Run a scenario for several coarse spaces and write a comparison table
    """
    try:
        scenario = get_scenario(config, preset, out, dump_fields, threads, progress)
        reports = run_comparison(scenario, labels=list(labels) or None, show_progress=progress)
        filename = write_comparison(reports, scenario.output.directory)
    except SchwarzLBWError as err:
        raise click.ClickException(str(err))

    click.echo(comparison_frame(reports).to_string(index=False))
    click.echo(f'Comparison written to {filename}')
    aborted = [rep.label for rep in reports if rep.aborted]
    if aborted:
        click.echo(f'Aborted runs: {", ".join(aborted)}', err=True)
        raise click.exceptions.Exit(1)


@main.command()
@click.option('--check', 'checks', type=click.Choice(list(CHECKS)), multiple=True,
              help='Run only this check; repeat for several')
def verify(checks):
    """
    Run the self checks on small built-in problems
    """
    try:
        results = run_checks(list(checks) or None)
    except SchwarzLBWError as err:
        raise click.ClickException(str(err))

    for result in results:
        click.echo(f"{'ok' if result.passed else 'FAILED':7s} {result.name}: {result.detail}")
    if not all(result.passed for result in results):
        raise click.exceptions.Exit(1)


if __name__ == '__main__':
    main()
