"""Module with the benchmark harness that sweeps budgets over instance suites"""

import csv
import logging
import math
import re
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from warnings import warn

from .data import RunRecord, RunRecords
from .errors import InvalidConfigError
from .generator import DEFAULT_BUDGETS, MANIFEST
from .leader import evaluate_profit
from .local_search import LocalSearchConfig, grid_search, local_search
from .multicut import find_multicut, multicut_start
from .relaxation import round_relaxation, solve_relaxation
from .serialization import load_instance_file
from .types import algorithms, starts, variants
from .types.tolerances import SUPPORT_TOL

logger = logging.getLogger(__name__)

# Largest candidate edge set of the grid oracle
GRID_EDGES = 3
GRID_STEP = 0.05


def graph_class(name):
    """
    :param str: Instance name like 'small_n25_k25_seed3_b1'
    :return str: The part before '_n', e.g. 'small'
    """
    return name.split('_n')[0]


def instance_seed(name, default=0):
    """
    :param str: Instance name like 'small_n25_k25_seed3_b1'
    :param int: Seed used if the name has none
    :return int: The seed in the name
    """
    match = re.search(r'_seed(\d+)', name)
    return int(match.group(1)) if match else default


class _Timer:
    """Wall clock of one run in milliseconds, 0 when timing is off"""
    def __init__(self, enabled):
        self.enabled = enabled
        self.start = 0.0
        self.elapsed = 0.0

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *args):
        self.elapsed = (time.perf_counter() - self.start) * 1000 \
            if self.enabled else 0.0


def _warm_start(instance, variant, fresh, previous):
    """
    Better of the fresh start and the previous budget's final strategy,
    searched on the union of both supports
    """
    support = set(fresh.support(SUPPORT_TOL))
    start = fresh
    if previous is not None:
        support |= set(previous.support(SUPPORT_TOL))
        if evaluate_profit(instance, previous, variant).total_profit > \
                evaluate_profit(instance, fresh, variant).total_profit:
            start = previous
    return start, tuple(sorted(support))


def bench_instance(path, variant_list, budgets, algorithm_list, config,
                   timing=True, seed=0):
    """
    All runs of one instance file, budgets are swept in increasing order

    :param str/Path: Path of the instance file
    :param iterable: Model variants
    :param iterable: Budgets
    :param iterable: Algorithms ('lp', 'lp+ls', 'mc', 'mc+ls', 'oracle-grid')
    :param LocalSearchConfig: Parameters of the local search
    :param bool: Record wall times
    :param int: Seed of instances whose name has none
    :return list: RunRecord instances
    """
    path = Path(path)
    name = path.stem
    seed = instance_seed(name, seed)
    base = load_instance_file(path)
    cut = find_multicut(base) if {algorithms.MC, algorithms.MC_LS,
                                  algorithms.ORACLE_GRID} & \
        set(algorithm_list) else None
    records = []
    previous = {}

    for budget in sorted(budgets):
        instance = base.with_budget(budget)

        def record(variant, algorithm, profit, bound, elapsed, status='ok'):
            records.append(RunRecord(name, variant, algorithm, budget, profit,
                                     bound, elapsed, seed, status))

        mc_start = multicut_start(instance, cut) if cut is not None else None
        # One relaxation per fare setting, failures are kept as exceptions
        relaxations = {}

        for variant in variant_list:
            fares = variants.parse_fares(variant)
            if fares not in relaxations:
                try:
                    relaxations[fares] = solve_relaxation(instance,
                                                          fares=fares)
                except (ValueError, RuntimeError) as e:
                    logger.warning('%s, budget %g, %s fares: relaxation '
                                   'failed: %s', name, budget, fares, e)
                    relaxations[fares] = e
            relaxation = relaxations[fares]
            if isinstance(relaxation, Exception):
                for algorithm in algorithm_list:
                    record(variant, algorithm, math.nan, math.nan, 0.0,
                           'failed: %s' % relaxation)
                continue
            bound = relaxation.bound

            for algorithm in algorithm_list:
                try:
                    with _Timer(timing) as timer:
                        if algorithm == algorithms.LP:
                            solution = round_relaxation(instance, relaxation,
                                                        variant)
                        elif algorithm == algorithms.MC:
                            breakdown = evaluate_profit(instance, mc_start,
                                                        variant)
                            solution = None
                        elif algorithm in (algorithms.LP_LS,
                                           algorithms.MC_LS):
                            fresh, provenance = \
                                (relaxation.strategy, starts.LP) \
                                if algorithm == algorithms.LP_LS else \
                                (mc_start, starts.MULTICUT)
                            start, support = _warm_start(
                                instance, variant, fresh,
                                previous.get((variant, algorithm)))
                            solution = local_search(
                                instance, variant, start, support, config,
                                upper_bound=bound, provenance=provenance)
                            previous[(variant, algorithm)] = \
                                solution.strategy
                        elif algorithm == algorithms.ORACLE_GRID:
                            edges = set(relaxation.strategy.support()) | \
                                set(mc_start.support())
                            if len(edges) > GRID_EDGES:
                                record(variant, algorithm, math.nan, bound,
                                       0.0, 'skipped')
                                continue
                            solution = grid_search(instance, variant, edges,
                                                   GRID_STEP, bound)
                        else:
                            raise InvalidConfigError(
                                'unknown algorithm "%s"' % algorithm)
                    profit = breakdown.total_profit if solution is None \
                        else solution.profit
                    record(variant, algorithm, profit, bound, timer.elapsed)
                except (ValueError, RuntimeError) as e:
                    logger.warning('%s, %s, %s, budget %g failed: %s', name,
                                   variant, algorithm, budget, e)
                    record(variant, algorithm, math.nan, bound, 0.0,
                           'failed: %s' % e)

    logger.info('%s: %d runs', name, len(records))
    return records


def suite_files(suite):
    """
    :param str/Path: Directory with instance files
    :return list: Sorted instance paths, the manifest excluded
    """
    return sorted(p for p in Path(suite).glob('*.json') if p.name != MANIFEST)


def run_bench(suite, variant_list=variants.ALL, budgets=None,
              algorithm_list=algorithms.LEADER_DEFAULT, parallel=1,
              config=None, timing=True, seed=0):
    """
    Run every algorithm on every instance, variant and budget

    :param str/Path: Directory with instance files
    :param iterable: Model variants
    :param iterable/None: Budgets, 20 values from 0.2 to 25 if None
    :param iterable: Algorithms
    :param int: Number of worker processes, one instance file per task
    :param LocalSearchConfig/None: Parameters of the local search
    :param bool: Record wall times
    :param int: Seed of instances whose name has none
    :return RunRecords: All runs in deterministic order
    """
    for variant in variant_list:
        variants.parse(variant)
    unknown = sorted(set(algorithm_list) - set(algorithms.LEADER_ALL))
    if unknown:
        raise InvalidConfigError('unknown algorithm "%s", should be one of %s'
                                 % (unknown[0],
                                    ', '.join(algorithms.LEADER_ALL)))
    budgets = DEFAULT_BUDGETS if budgets is None else tuple(budgets)
    files = suite_files(suite)
    logger.info('benchmark of %d instances, %d budgets, %d workers',
                len(files), len(budgets), parallel)

    job = partial(bench_instance, variant_list=tuple(variant_list),
                  budgets=budgets, algorithm_list=tuple(algorithm_list),
                  config=config or LocalSearchConfig(), timing=timing,
                  seed=seed)
    if parallel > 1:
        with ProcessPoolExecutor(parallel) as pool:
            results = list(pool.map(job, files))
    else:
        results = [job(path) for path in files]
    return RunRecords(r for rs in results for r in rs)


def write_runs(records, path):
    """
    Write the runs table

    :param RunRecords: The runs
    :param str/Path: Output CSV file
    """
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.DictWriter(f, fieldnames=RunRecord.COLUMNS,
                                lineterminator='\n')
        writer.writeheader()
        for r in records:
            writer.writerow(r.to_dict())


def aggregate_tables(records):
    """
    Summary tables of the runs

    NOTE: This needs 'pandas' module, see BaseData.to_pandas.

    :param RunRecords: The runs
    :return dict/None: File name -> pandas.DataFrame, None without pandas
    """
    df = records.to_pandas()
    if df is None:
        return None
    if df.empty:
        return {}
    df['graph_class'] = df['instance'].map(graph_class)
    ok = df[df['status'] == 'ok']
    if ok.empty:
        return {}
    tables = {}

    # Mean gap per class, variant and algorithm, best of all algorithms too
    mean = ok.pivot_table(index=['graph_class', 'variant'],
                          columns='algorithm', values='gap', aggfunc='mean')
    best = ok.groupby(['graph_class', 'instance', 'variant', 'budget']) \
        .agg(profit=('profit', 'max'), upper_bound=('upper_bound', 'first'))
    best['gap'] = [p / u if u > 0 else 1.0
                   for p, u in zip(best['profit'], best['upper_bound'])]
    mean['best'] = best.groupby(['graph_class', 'variant'])['gap'].mean()
    tables['aggregate.csv'] = mean.reset_index()

    tables['budget_curves.csv'] = ok[
        ['instance', 'variant', 'algorithm', 'budget', 'profit', 'gap']] \
        .sort_values(['instance', 'variant', 'algorithm', 'budget'])

    tables['gaps_by_instance.csv'] = ok.pivot_table(
        index=['graph_class', 'instance', 'variant', 'budget'],
        columns='algorithm', values='gap').reset_index()

    # Profit ratio of non-adaptive and adaptive followers
    ls = ok[ok['algorithm'] == algorithms.LP_LS].copy()
    parts = ls['variant'].str.split('-', expand=True) if len(ls) else None
    if parts is not None and parts.shape[1] == 2:
        ls['fares'], ls['followers'] = parts[0], parts[1]
        ratio = ls.pivot_table(index=['instance', 'fares', 'budget'],
                               columns='followers', values='profit')
        if {variants.NON_ADAPTIVE, variants.ADAPTIVE} <= set(ratio.columns):
            ratio = ratio.rename(columns={variants.NON_ADAPTIVE: 'profit_n',
                                          variants.ADAPTIVE: 'profit_a'})
            ratio['ratio'] = [n / a if a > 0 else math.nan
                              for n, a in zip(ratio['profit_n'],
                                              ratio['profit_a'])]
            tables['adaptivity.csv'] = ratio.reset_index()[
                ['instance', 'fares', 'budget', 'profit_n', 'profit_a',
                 'ratio']]
    return tables


def write_outputs(records, out_dir):
    """
    Write runs.csv and, with pandas installed, the summary tables

    :param RunRecords: The runs
    :param str/Path: Output directory, created if missing
    :return list: Paths of the written files
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [out_dir / 'runs.csv']
    write_runs(records, written[0])
    tables = aggregate_tables(records)
    if tables is None:
        warn('Summary tables need pandas, only runs.csv was written.')
    for name, table in sorted((tables or {}).items()):
        table.to_csv(out_dir / name, index=False)
        written.append(out_dir / name)
    return written
