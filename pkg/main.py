import json
import logging
import sys

import click

import app as handlers
from models import STATUS_EXIT, RunConfig

logger = logging.getLogger(__name__)


def _emit(cfg, result):
    if cfg.json:
        click.echo(json.dumps(result['data'], indent=2, sort_keys=True, default=str))
    else:
        click.echo(result['text'])
    code = STATUS_EXIT.get(result['status'], 1)
    logger.debug(f"{cfg.command} finished with status {result['status']} (exit {code})")
    sys.exit(code)


@click.group(context_settings={'help_option_names': ['-h', '--help']})
@click.option('-n', '--strands', type=int, default=None, help='Strand count (default: max |letter| + 1).')
@click.option('--json', 'as_json', is_flag=True, help='Print JSON instead of text.')
@click.option('--spair-budget', type=int, default=None, help='Maximum S-pairs per Groebner run.')
@click.option('--timeout-s', type=float, default=None, help='Wall-clock limit per Groebner run.')
@click.option('--lambda-sign', type=click.Choice(['1', '-1']), default=None, help='Sign of the nu exponent in Lambda\'.')
@click.option('--psi-sign', type=click.Choice(['1', '-1']), default=None, help='Sign of the Psi rescaling exponent.')
@click.option('--torus-sign', type=click.Choice(['1', '-1']), default=None, help='Quantum torus commutation sign c.')
@click.option('--log-level', default=None, help='Logging level (default from KCH_LOG_LEVEL).')
@click.option('-v', '--verbose', is_flag=True, help='Shorthand for --log-level DEBUG.')
@click.pass_context
def cli(ctx, strands, as_json, spair_budget, timeout_s, lambda_sign, psi_sign, torus_sign, log_level, verbose):
    """Augmentation ideals, quantum torus checks and HOMFLYPT for braid closures."""
    cfg = RunConfig.from_env(
        strands=strands,
        output='json' if as_json else None,
        spair_budget=spair_budget,
        timeout_s=timeout_s,
        lambda_sign=int(lambda_sign) if lambda_sign else None,
        psi_sign=int(psi_sign) if psi_sign else None,
        torus_sign=int(torus_sign) if torus_sign else None,
        log_level='DEBUG' if verbose else (log_level.upper() if log_level else None),
    )
    logging.basicConfig(level=getattr(logging, cfg.log_level, logging.WARNING),
                        format='%(asctime)s %(name)s %(levelname)s %(message)s')
    ctx.obj = cfg


@cli.command()
@click.argument('braid', default='')
@click.pass_obj
def present(cfg, braid):
    """Print the relation generators of the closure of BRAID."""
    cfg.command, cfg.braid = 'present', braid
    _emit(cfg, handlers.cmd_present(cfg))


@cli.command()
@click.argument('braid', default='')
@click.option('--oracle-trials', type=int, default=0, help='Cross-check with this many numeric trials.')
@click.option('--seed', type=int, default=0)
@click.pass_obj
def augpoly(cfg, braid, oracle_trials, seed):
    """Eliminate the a_ij and print the augmentation ideal of BRAID."""
    cfg.command, cfg.braid = 'augpoly', braid
    cfg.oracle_trials, cfg.seed = oracle_trials, seed
    _emit(cfg, handlers.cmd_augpoly(cfg))


@cli.command('verify-unknot')
@click.pass_obj
def verify_unknot(cfg):
    """Run the unknot operator chain."""
    cfg.command = 'verify-unknot'
    _emit(cfg, handlers.cmd_verify_unknot(cfg))


@cli.command()
@click.argument('braid', default='')
@click.option('--framed', is_flag=True, help='Blackboard-framed value instead of the invariant.')
@click.pass_obj
def homfly(cfg, braid, framed):
    """Print the HOMFLYPT polynomial of the closure of BRAID."""
    cfg.command, cfg.braid = 'homfly', braid
    _emit(cfg, handlers.cmd_homfly(cfg, framed))


@cli.command('markov-test')
@click.argument('braid')
@click.option('--against', default=None, help='Control braid expected to give a different ideal.')
@click.pass_obj
def markov_test(cfg, braid, against):
    """Check Markov invariance of the augmentation ideal of BRAID."""
    cfg.command, cfg.braid = 'markov-test', braid
    _emit(cfg, handlers.cmd_markov(cfg, against))


def main():
    try:
        cli.main(standalone_mode=False)
    except click.UsageError as e:
        e.show()
        sys.exit(3)
    except click.Abort:
        sys.exit(3)


if __name__ == "__main__":
    main()
