# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""lagbif command line tool."""
import contextlib
import logging
import os
import sys

import click

from lagbif import version as lagbif_version
from lagbif.bifurcation import BifurcationDiagram, assemble_diagram, validate_diagram
from lagbif.caustic import compute_caustic, pyramid_slices
from lagbif.exceptions import InvalidArgumentException
from lagbif.flow import portrait as compute_portrait, trajectories_csv
from lagbif.utility.config import ConfigRegistry
from lagbif.utility.document import manifest, read_json, write_json, write_text
from lagbif.utility.svg import caustic_svg, diagram_svg, portrait_svg, slices_svg

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_ON_CAUSTIC = 3
EXIT_VALIDATION = 4


@contextlib.contextmanager
def _rejected_input():
    try:
        yield
    except InvalidArgumentException as e:
        click.echo("Error: {0}".format(e))
        sys.exit(EXIT_CONFIG)


def _run_options(func):
    func = click.option('--seed', help='Seed of the region re-sampling', type=click.INT, default=0)(func)
    func = click.option('--workers', help='Worker processes (default: one per CPU)', type=click.INT,
                        default=None)(func)
    func = click.option('--out', help='Output directory (overrides [output] directory)', type=click.Path(),
                        default=None)(func)
    func = click.option('--config', 'config_path', help='Run configuration file', type=click.Path(),
                        default=None)(func)
    return func


class _Run(object):
    """ Resolved configuration and output directory of one command. """

    def __init__(self, command, config_path, out, workers=None, seed=0):
        self.command = command
        self.config = ConfigRegistry.standard(config_path).resolve()
        self.directory = out or self.config.output_directory
        self.workers = workers
        self.seed = seed
        self.outputs = []

    def path(self, name):
        self.outputs.append(name)
        return os.path.join(self.directory, name)

    def write_manifest(self):
        write_json(os.path.join(self.directory, "manifest.json"),
                   manifest(self.command, self.config, self.outputs, seed=self.seed, workers=self.workers))


@click.group()
@click.option('--verbose',
              help='Show verbose information',
              is_flag=True)
def cli(verbose):
    if verbose:
        logging.basicConfig(format='%(message)s', level=logging.INFO)
    else:
        logging.basicConfig(format='%(message)s')


@cli.command()
def version():
    """Displays lagbif version."""
    click.echo("lagbif version {}".format(lagbif_version.LAGBIF_VERSION))


@cli.command(short_help='Compute the caustic of the configured function')
@_run_options
def caustic(config_path, out, workers, seed):
    """
    Traces the critical locus in the fiber window, maps it to the base plane and
    labels folds and cusps. Writes caustic.json and caustic.svg.
    """
    with _rejected_input():
        run = _Run("caustic", config_path, out, workers, seed)
        f = run.config.generating_function()
        window = run.config.base_window()
        result = compute_caustic(f, run.config.fiber_window(), run.config.tol_locus)

    write_json(run.path("caustic.json"), {"function": f.label, "caustic": result.to_document()})
    write_text(run.path("caustic.svg"), caustic_svg(result, window, f.label))
    run.write_manifest()

    click.echo("Caustic of {0}: {1} component(s), {2} cusp(s), {3} non-Morse point(s)"
               .format(f.label, len(result.components), result.cusp_count, len(result.nonmorse_points)))


@cli.command(short_help='Compute the phase portrait of grad f_x at [portrait] x1, x2')
@_run_options
def portrait(config_path, out, workers, seed):
    """
    Solves the critical points of grad f_x, integrates all saddle separatrices and
    lists the saddle connections. Writes portrait.json, portrait.svg and
    trajectories.csv. Exits with 3 when x is on the caustic.
    """
    with _rejected_input():
        run = _Run("portrait", config_path, out, workers, seed)
        f = run.config.generating_function()
        fiber = run.config.fiber_window()
        result = compute_portrait(f, run.config.portrait_point, fiber, run.config.flow_settings())

    document = result.to_document()
    document["function"] = f.label
    write_json(run.path("portrait.json"), document)
    write_text(run.path("portrait.svg"), portrait_svg(result, fiber))
    write_text(run.path("trajectories.csv"), trajectories_csv(result))
    run.write_manifest()

    if result.on_caustic:
        click.echo("on-caustic: x = ({0:g}, {1:g}) has degenerate critical points".format(*result.x))
        sys.exit(EXIT_ON_CAUSTIC)

    click.echo("Portrait at x = ({0:g}, {1:g}): {2} critical point(s), {3} connection(s)"
               .format(result.x[0], result.x[1], len(result.critical_points), len(result.connections)))


@cli.command(short_help='Assemble and validate the bifurcation diagram over [window]')
@_run_options
def diagram(config_path, out, workers, seed):
    """
    Scans the base window, traces the saddle-connection strata, finds their crossings
    and validates the result. Writes diagram.json, diagram.svg and report.txt.
    Exits with 4 when a validation check fails.
    """
    with _rejected_input():
        run = _Run("diagram", config_path, out, workers, seed)
        f = run.config.generating_function()
        window = run.config.base_window()
        result = assemble_diagram(f, window, fiber=run.config.fiber_window(),
                                  settings=run.config.diagram_settings(),
                                  flow_settings=run.config.flow_settings(),
                                  workers=workers, seed=seed)

    document = result.to_document()
    document["function"] = f.label
    write_json(run.path("diagram.json"), document)
    write_text(run.path("diagram.svg"), diagram_svg(result, window))
    write_text(run.path("report.txt"), result.report.to_text())
    run.write_manifest()

    click.echo(result.report.to_text().rstrip("\n").split("\n")[-1])
    if not result.report.passed:
        sys.exit(EXIT_VALIDATION)


@cli.command(short_help='Compute the pyramid slices for [slices] t_values')
@_run_options
def slices(config_path, out, workers, seed):
    """
    Caustics of elliptic-umbilic + t*y1^2 for every configured t. Writes
    slices.json and slices.svg.
    """
    with _rejected_input():
        run = _Run("slices", config_path, out, workers, seed)
        t_values = run.config.t_values
        window = run.config.base_window()
        caustics = pyramid_slices(t_values, resolution=run.config.get("fiber", "resolution"),
                                  tol_locus=run.config.tol_locus)

    write_json(run.path("slices.json"),
               {"slices": [{"t": t, "caustic": c.to_document()} for t, c in zip(t_values, caustics)]})
    write_text(run.path("slices.svg"), slices_svg(caustics, t_values, window))
    run.write_manifest()

    for t, c in zip(t_values, caustics):
        click.echo("t = {0:g}: {1} cusp(s), {2} non-Morse point(s)".format(t, c.cusp_count, len(c.nonmorse_points)))


@cli.command(short_help='Re-run the checks on a stored diagram')
@click.option('--diagram', 'diagram_path', help='diagram.json written by the diagram command',
              type=click.Path(), required=True)
@_run_options
def validate(diagram_path, config_path, out, workers, seed):
    """
    Reads a diagram document, re-runs the validation checks and writes report.txt.
    Exits with 4 when a check fails.
    """
    with _rejected_input():
        run = _Run("validate", config_path, out or os.path.dirname(os.path.abspath(diagram_path)), workers, seed)
        document = read_json(diagram_path)
        try:
            stored = BifurcationDiagram.from_document(document)
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidArgumentException("Malformed diagram document {0}: {1}".format(diagram_path, e))
        report = validate_diagram(stored)

    write_text(run.path("report.txt"), report.to_text())
    run.write_manifest()

    click.echo(report.to_text().rstrip("\n").split("\n")[-1])
    if not report.passed:
        sys.exit(EXIT_VALIDATION)


if __name__ == '__main__':
    cli()
