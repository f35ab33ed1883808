# -*- coding: utf-8 -*-
"""Command line interface.

Every command takes ``--config``, ``--out``, ``--seed`` and ``--threads``
and runs one stage (``run`` runs all of them).  Errors leave with exit
status 2 (configuration), 3 (data) or 4 (numerical).

"""
import json
import logging

import click

from . import __version__
from .decorators import exit_codes, pass_context


logger = logging.getLogger(__name__)


def common_options(fn):
    """The options shared by every command."""
    options = [
        click.option('--config', '-c', type=click.Path(dir_okay=False),
                     default=None, help='JSON configuration file.'),
        click.option('--out', '-o', type=click.Path(file_okay=False),
                     default=None, help='Output directory.'),
        click.option('--seed', type=click.IntRange(min=0), default=None,
                     help='Random seed of the simulation.'),
        click.option('--threads', '-j', type=click.IntRange(min=1),
                     default=None, help='Worker threads of a stage.'),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


@click.group()
@click.version_option(__version__)
def main():
    """Drone detection, tracking and identification from EO frames and
    passive RF captures.

    """


@main.command()
@common_options
@exit_codes
@pass_context
def simulate(ctx):
    """Synthesize frames, IQ captures and truth of a scenario."""
    scn = ctx.pipeline.simulate()
    click.echo('simulated {} into {}'.format(scn.name,
                                             ctx.pipeline.output_dir))


@main.command('detect-eo')
@common_options
@exit_codes
@pass_context
def detect_eo(ctx):
    """Detect moving objects in the EO frames."""
    dets = ctx.pipeline.detect_eo()
    click.echo('{} EO detections'.format(len(dets)))


@main.command('localize-rf')
@common_options
@exit_codes
@pass_context
def localize_rf(ctx):
    """Locate RF emitters from time differences of arrival."""
    fixes = ctx.pipeline.localize_rf()
    click.echo('{} RF fixes'.format(len(fixes)))


@main.command()
@common_options
@exit_codes
@pass_context
def fingerprint(ctx):
    """Classify captured bursts against device templates."""
    files = ctx.pipeline.fingerprint()
    for sensor_id, path in sorted(files.items()):
        click.echo('{}: {}'.format(sensor_id, path))


@main.command()
@common_options
@exit_codes
@pass_context
def fuse(ctx):
    """Track the fused detection streams and label tracks."""
    tracker = ctx.pipeline.fuse()
    confirmed = sum(tr.confirmed_t is not None for tr in tracker.tracks)
    click.echo('{} tracks, {} confirmed'.format(len(tracker.tracks),
                                               confirmed))


@main.command()
@common_options
@exit_codes
@pass_context
def evaluate(ctx):
    """Score the tracks against the simulated truth."""
    report = ctx.pipeline.evaluate()
    click.echo(json.dumps({k: report[k] for k in
                           ('confirmed_tracks', 'mean_purity',
                            'label_overwrites')}, sort_keys=True))


@main.command()
@common_options
@exit_codes
@pass_context
def run(ctx):
    """Run every stage in order."""
    report = ctx.pipeline.run_all()
    click.echo('{} confirmed tracks, mean purity {}'.format(
        report['confirmed_tracks'], report['mean_purity']))


if __name__ == '__main__':  # pragma: no cover
    main()
