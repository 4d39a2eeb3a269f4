"""Module with the command line interface"""

import argparse
import dataclasses
import logging
import os
import sys
from pathlib import Path

from .api import FareInspection
from .bench import run_bench, write_outputs
from .errors import InvalidConfigError
from .generator import GeneratorConfig, write_suite
from .local_search import LocalSearchConfig
from .serialization import (dump_follower_result, dump_solution,
                            load_strategy_file)
from .types import algorithms, starts, variants

logger = logging.getLogger(__name__)

ENV_PREFIX = 'FP_'


def _env(flag, default=None):
    """
    Default of a flag from the environment, e.g. FP_SEED for --seed

    :param str: Name of the flag without dashes
    :param object: Default if the variable is not set
    :return object: The value
    """
    return os.environ.get(ENV_PREFIX + flag.upper().replace('-', '_'),
                          default)


def _env_flag(flag):
    return _env(flag, '').lower() in ('1', 'true', 'yes', 'on')


def _required(args, *names):
    for name in names:
        if getattr(args, name.replace('-', '_')) is None:
            raise InvalidConfigError('--%s is required (or set %s%s)' %
                                     (name, ENV_PREFIX,
                                      name.upper().replace('-', '_')))


def _csv_list(value):
    return [x.strip() for x in value.split(',') if x.strip()]


def _ls_config(args):
    config = LocalSearchConfig.from_file(args.ls_config) \
        if args.ls_config else LocalSearchConfig()
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    return config


def cmd_solve(args):
    """Relaxation, start strategy and local search for one instance"""
    _required(args, 'instance')
    solver = FareInspection.from_file(args.instance, args.relaxation)
    solution = solver.solve(args.variant, args.start, _ls_config(args),
                            args.epsilon)
    out = Path(args.out) if args.out else \
        Path(args.instance).with_suffix('.solution.json')
    out.write_text(dump_solution(solution), encoding='utf-8')
    logger.info('solution written to %s', out)
    print('%.6f / %.6f / %.6f' % (solution.profit, solution.upper_bound,
                                  solution.gap))
    return 0


def cmd_follower(args):
    """Best response of one commodity to a strategy"""
    _required(args, 'instance', 'strategy', 'commodity')
    solver = FareInspection.from_file(args.instance)
    strategy = load_strategy_file(args.strategy,
                                  solver.instance.network.n_edges)
    result = solver.follower(strategy, args.commodity, args.variant,
                             args.algo, args.epsilon)
    text = dump_follower_result(result)
    if args.out:
        Path(args.out).write_text(text, encoding='utf-8')
    else:
        print(text)
    return 0


def cmd_generate(args):
    """Batch of random instances with a manifest"""
    _required(args, 'out-dir')
    fields = dict(n_commodities=args.commodities, base_price=args.base_price,
                  price_slope=args.price_slope, fine=args.fine,
                  seed=args.seed, budget=args.budget)
    if args.size_class:
        config = GeneratorConfig.for_size_class(args.size_class, **fields)
    else:
        config = GeneratorConfig(n_nodes=args.nodes, tag=args.tag, **fields)
    paths = write_suite(config, args.count, args.out_dir)
    logger.info('%d instances written to %s', len(paths), args.out_dir)
    return 0


def cmd_bench(args):
    """Budget sweeps of all algorithms over a suite"""
    _required(args, 'suite')
    budgets = None if args.budgets == 'default' else \
        [float(x) for x in _csv_list(args.budgets)]
    records = run_bench(args.suite, _csv_list(args.variants), budgets,
                        _csv_list(args.algorithms), args.parallel,
                        _ls_config(args), timing=not args.no_timing,
                        seed=args.seed or 0)
    written = write_outputs(records, args.out_dir)
    logger.info('%d runs, wrote %s', len(records),
                ', '.join(p.name for p in written))
    return 0


def build_parser():
    """
    :return argparse.ArgumentParser: Parser of all subcommands
    """
    parser = argparse.ArgumentParser(
        prog='fareinspect',
        description='Fare inspection strategies for transit networks. '
                    'Every flag also reads FP_<FLAG> from the environment.')
    parser.add_argument('--log-level', default=_env('log-level', 'WARNING'),
                        help='logging level (FP_LOG_LEVEL)')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('solve', help='solve the leader problem')
    p.add_argument('--instance', default=_env('instance'))
    p.add_argument('--variant', choices=variants.ALL,
                   default=_env('variant', variants.FLEX_N))
    p.add_argument('--start', choices=starts.ALL,
                   default=_env('start', starts.LP))
    p.add_argument('--relaxation',
                   choices=(algorithms.HIGHS, algorithms.SUPERGRADIENT),
                   default=_env('relaxation', algorithms.HIGHS))
    p.add_argument('--epsilon', type=float, default=_env('epsilon'))
    p.add_argument('--seed', type=int, default=_env('seed'))
    p.add_argument('--ls-config', default=_env('ls-config'))
    p.add_argument('--out', default=_env('out'))
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser('follower', help='best response of one commodity')
    p.add_argument('--instance', default=_env('instance'))
    p.add_argument('--strategy', default=_env('strategy'))
    p.add_argument('--commodity', type=int, default=_env('commodity'))
    p.add_argument('--variant', choices=variants.FOLLOWERS,
                   default=_env('variant', variants.NON_ADAPTIVE))
    p.add_argument('--algo', choices=algorithms.FOLLOWER_ALL,
                   default=_env('algo', algorithms.EXACT))
    p.add_argument('--epsilon', type=float, default=_env('epsilon'))
    p.add_argument('--out', default=_env('out'))
    p.set_defaults(func=cmd_follower)

    p = sub.add_parser('generate', help='generate random instances')
    p.add_argument('--nodes', type=int, default=_env('nodes', '25'))
    p.add_argument('--size-class', default=_env('size-class'),
                   help='small, medium, large or huge, overrides --nodes '
                        'and --tag')
    p.add_argument('--commodities', type=int,
                   default=_env('commodities', '25'))
    p.add_argument('--count', type=int, default=_env('count', '10'))
    p.add_argument('--seed', type=int, default=_env('seed', '0'))
    p.add_argument('--out-dir', default=_env('out-dir'))
    p.add_argument('--budget', type=float, default=_env('budget', '1.0'))
    p.add_argument('--tag', default=_env('tag', 'rand'))
    p.add_argument('--base-price', type=float,
                   default=_env('base-price', '1.0'))
    p.add_argument('--price-slope', type=float,
                   default=_env('price-slope', '2.0'))
    p.add_argument('--fine', type=float, default=_env('fine', '6.0'))
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser('bench', help='run the benchmark on a suite')
    p.add_argument('--suite', default=_env('suite'))
    p.add_argument('--variants', default=_env('variants',
                                              ','.join(variants.ALL)))
    p.add_argument('--budgets', default=_env('budgets', 'default'))
    p.add_argument('--algorithms', default=_env(
        'algorithms', ','.join(algorithms.LEADER_DEFAULT)))
    p.add_argument('--parallel', type=int, default=_env('parallel', '1'))
    p.add_argument('--out-dir', default=_env('out-dir', 'bench_out'))
    p.add_argument('--seed', type=int, default=_env('seed'))
    p.add_argument('--ls-config', default=_env('ls-config'))
    p.add_argument('--no-timing', action='store_true',
                   default=_env_flag('no-timing'))
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    """
    Entry point of the 'fareinspect' command

    :param list/None: Arguments, sys.argv[1:] if None
    :return int: 0 on success, 1 on input errors, 2 on solver failures
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=args.log_level.upper(),
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        logger.error('%s', e)
        return 1
    except RuntimeError as e:
        logger.error('%s', e)
        return 2
