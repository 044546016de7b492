"""
Experiment harness: welfare and fairness sweeps over random instances,
single-instance reports, and the one-task reward study.
"""

import math
import logging
import dataclasses
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Tuple

import numpy as np
import pandas as pd

from tsgame import exceptions
from tsgame.cache import ScheduleCache
from tsgame.helpers import EPS, is_close
from tsgame.instance_gen import USER_TYPES, GenConfig, generate
from tsgame.model import Instance, Location, Task, User
from tsgame.payoff import (
    jain_index, payoffs, potential, social_welfare, total_executions,
)
from tsgame.solvers.best_response import DEFAULT_ENUMERATION_CAP
from tsgame.solvers.dynamics import best_response_dynamics, require_ne
from tsgame.solvers.optimizer import (
    DEFAULT_JOINT_CAP, greedy_welfare_heuristic, maximize_potential, maximize_welfare,
)

logger = logging.getLogger(__name__)

MODES = ('exact', 'heuristic')

COLUMNS = [
    'n_users', 'user_type', 'mode', 'rep', 'sw_se', 'sw_ne_dyn', 'sw_ne_phi',
    'ratio', 'jain', 'sum_mk_ne', 'sum_mk_se', 'rounds',
]
METRICS = COLUMNS[4:]

REWARD_COLUMNS = [
    'reward', 'n_users', 'rep', 'sw_se', 'sw_ne', 'sw_se_norm', 'sw_ne_norm', 'ratio',
]

# Same tolerance as everywhere else; named for the payoff-sum check.
IDENTITY_TOL = 1e-9


def welfare_ratio(sw_ne, sw_se, degenerate=math.nan):
    """W(NE)/W(SE); missing when W(SE) <= 0. With both welfares zero the
    result is `degenerate`.
    """
    if sw_se > EPS:
        return sw_ne / sw_se
    if is_close(sw_se, 0.0) and is_close(sw_ne, 0.0):
        return degenerate
    return math.nan


def check_payoff_sum(profile, inst):
    """Assert that the users' payoffs add up to the social welfare."""
    total = math.fsum(payoffs(profile, inst))
    welfare = social_welfare(profile, inst)
    if not is_close(total, welfare, IDENTITY_TOL):
        raise AssertionError(
            'Payoffs sum to {0!r} but welfare is {1!r}'.format(total, welfare))
    return welfare


@dataclass
class Evaluation:
    """Solutions of one instance. `ne_phi` is None in heuristic mode."""
    mode: str
    se: Tuple
    ne_dyn: Tuple
    trace: object
    ne_phi: Tuple = None

    def outcome(self, inst, profile):
        return {
            'profile': [list(sched) for sched in profile],
            'welfare': social_welfare(profile, inst),
            'potential': potential(profile, inst),
            'payoffs': [float(u) for u in payoffs(profile, inst)],
            'jain': jain_index(profile, inst),
            'sum_mk': total_executions(profile),
        }


def evaluate(inst, mode='exact', enumeration_cap=DEFAULT_ENUMERATION_CAP,
             joint_cap=DEFAULT_JOINT_CAP, max_rounds=100):
    """Compute the efficient profile and the equilibria of an instance.

    Exact mode solves both joint problems exactly; heuristic mode uses the
    greedy insertion profile as the efficient baseline (a lower bound) and
    only the dynamics equilibrium. Every equilibrium is verified.

    :raise: CapExceededError in exact mode beyond the caps
    :raise: NotEquilibriumError if an equilibrium fails verification

    """
    if mode not in MODES:
        raise exceptions.ConfigError('Parameter `mode` must be one of {0}'.format(MODES))
    ne_phi = None
    if mode == 'exact':
        cache = ScheduleCache()
        se, _ = maximize_welfare(inst, enumeration_cap, joint_cap, cache)
        ne_phi, _ = maximize_potential(inst, enumeration_cap, joint_cap, cache)
        require_ne(inst, ne_phi, label='Potential maximizer')
        check_payoff_sum(ne_phi, inst)
    else:
        se = greedy_welfare_heuristic(inst)
    ne_dyn, trace = best_response_dynamics(inst, max_rounds=max_rounds)
    require_ne(inst, ne_dyn, label='Dynamics outcome')
    check_payoff_sum(se, inst)
    check_payoff_sum(ne_dyn, inst)
    return Evaluation(mode=mode, se=se, ne_dyn=ne_dyn, trace=trace, ne_phi=ne_phi)


def run_single(inst, mode='exact', **kwargs):
    """Full report of one instance, as a JSON-ready dict.

    :param Instance inst: Validated instance
    :param str mode: 'exact' or 'heuristic'
    :param kwargs: Caps passed to `evaluate`

    """
    ev = evaluate(inst, mode, **kwargs)
    se = ev.outcome(inst, ev.se)
    se['label'] = 'exact' if mode == 'exact' else 'heuristic (lower bound)'
    ne_dyn = ev.outcome(inst, ev.ne_dyn)
    ne_dyn.update(
        rounds=ev.trace.rounds,
        status=ev.trace.status,
        ratio=_json_float(welfare_ratio(ne_dyn['welfare'], se['welfare'], 1.0)),
    )
    report = {
        'mode': mode,
        'n_users': len(inst.users),
        'n_tasks': len(inst.tasks),
        'user_ids': [user.id for user in inst.users],
        'se': se,
        'ne_dynamics': ne_dyn,
        'ne_potential': None,
        'trace': [move._asdict() for move in ev.trace.moves],
    }
    if ev.ne_phi is not None:
        ne_phi = ev.outcome(inst, ev.ne_phi)
        ne_phi['ratio'] = _json_float(welfare_ratio(ne_phi['welfare'], se['welfare'], 1.0))
        report['ne_potential'] = ne_phi
    return report


def _json_float(value):
    return None if math.isnan(value) else value


@dataclass(frozen=True)
class SweepSpec:
    """Sweep settings.

    :param tuple user_counts: Numbers of users to sweep
    :param tuple user_types: User type names; each sweep point is pure
    :param int reps: Replications per point
    :param int seed_base: Base of every replication seed
    :param str mode: 'exact' or 'heuristic'
    :param int n_tasks: Tasks per instance
    :param int jobs: Worker processes; 1 runs inline
    :param GenConfig gen: Template for the remaining generator settings

    """
    user_counts: Tuple[int, ...] = (2, 4, 6)
    user_types: Tuple[str, ...] = ('walking', 'bike', 'driving')
    reps: int = 200
    seed_base: int = 0
    mode: str = 'exact'
    n_tasks: int = 5
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    joint_cap: int = DEFAULT_JOINT_CAP
    max_rounds: int = 100
    jobs: int = 1
    gen: GenConfig = field(default_factory=GenConfig)

    def validate(self):
        if self.mode not in MODES:
            raise exceptions.ConfigError('Parameter `mode` must be one of {0}'.format(MODES))
        if not self.user_counts or any(n < 1 for n in self.user_counts):
            raise exceptions.ConfigError('Parameter `user_counts` must list counts >= 1')
        unknown = set(self.user_types) - set(USER_TYPES)
        if not self.user_types or unknown:
            raise exceptions.ConfigError('Unknown user types {0}'.format(sorted(unknown)))
        if self.reps < 1:
            raise exceptions.ConfigError('Parameter `reps` must be >= 1')
        if self.jobs < 1:
            raise exceptions.ConfigError('Parameter `jobs` must be >= 1')
        if self.mode == 'exact' and self.n_tasks > self.enumeration_cap:
            raise exceptions.CapExceededError(
                'Exact sweep with {0} tasks'.format(self.n_tasks),
                self.n_tasks, self.enumeration_cap)
        return self

    def points(self):
        for n_users in self.user_counts:
            for user_type in self.user_types:
                for rep in range(self.reps):
                    yield n_users, user_type, rep


def replication_seed(seed_base, n_users, user_type, rep):
    """Seed of one replication; independent of the sweep's other points."""
    type_index = sorted(USER_TYPES).index(user_type)
    seq = np.random.SeedSequence([seed_base, n_users, type_index, rep])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def run_replication(spec, n_users, user_type, rep):
    """One row of the sweep table."""
    config = dataclasses.replace(
        spec.gen,
        n_users=n_users,
        n_tasks=spec.n_tasks,
        user_mix={user_type: 1.0},
        seed=replication_seed(spec.seed_base, n_users, user_type, rep),
    )
    inst = generate(config)
    ev = evaluate(inst, spec.mode, spec.enumeration_cap, spec.joint_cap, spec.max_rounds)
    sw_se = social_welfare(ev.se, inst)
    sw_ne = social_welfare(ev.ne_dyn, inst)
    return {
        'n_users': n_users,
        'user_type': user_type,
        'mode': spec.mode,
        'rep': rep,
        'sw_se': sw_se,
        'sw_ne_dyn': sw_ne,
        'sw_ne_phi': social_welfare(ev.ne_phi, inst) if ev.ne_phi is not None else math.nan,
        'ratio': welfare_ratio(sw_ne, sw_se),
        'jain': jain_index(ev.ne_dyn, inst),
        'sum_mk_ne': total_executions(ev.ne_dyn),
        'sum_mk_se': total_executions(ev.se),
        'rounds': ev.trace.rounds,
    }


def _run_job(args):
    return run_replication(*args)


def run_sweep(spec):
    """Run every (user count, user type, replication) point of `spec`.

    :param SweepSpec spec: Sweep settings
    :return: DataFrame with one row per replication, columns `COLUMNS`

    """
    spec.validate()
    jobs = [(spec,) + point for point in spec.points()]
    logger.info('Sweep: %d replications in %s mode with %d worker(s)',
                len(jobs), spec.mode, spec.jobs)
    if spec.jobs > 1:
        with Pool(spec.jobs) as pool:
            rows = pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (4 * spec.jobs)))
    else:
        rows = [_run_job(job) for job in jobs]
    frame = pd.DataFrame(rows, columns=COLUMNS)
    type_rank = {name: idx for idx, name in enumerate(spec.user_types)}
    frame = frame.sort_values(
        ['n_users', 'user_type', 'rep'],
        key=lambda col: col.map(type_rank) if col.name == 'user_type' else col,
    ).reset_index(drop=True)
    return frame


def summarize(results, by=('n_users', 'user_type', 'mode'), metrics=None):
    """Mean and standard error of each metric per group; missing values
    (e.g. undefined ratios) are left out.

    :param DataFrame results: Output of `run_sweep` or `run_reward_sweep`
    :return: Long-format DataFrame with columns
        ``*by, metric, mean, stderr, count``

    """
    by = list(by)
    metrics = list(metrics or [c for c in METRICS if c in results.columns])
    long = results.melt(id_vars=by, value_vars=metrics, var_name='metric')
    long['value'] = long['value'].astype(float)
    grouped = long.groupby(by + ['metric'], sort=False)['value']
    out = grouped.agg(['mean', 'sem', 'count']).reset_index()
    return out.rename(columns={'sem': 'stderr'})


def write_csv(frame, path):
    """Write a results table; identical tables give identical bytes."""
    frame.to_csv(path, index=False, float_format='%.12g', lineterminator='\n')


# One-task reward study

def single_task_instance(reward, costs):
    """One task and co-located users with zero travel and execution time,
    differing only in execution cost.
    """
    task = Task(id=1, location=Location(0.0, 0.0), reward=reward,
                window_open=0.0, window_close=3600.0)
    users = [
        User(id=i, start=Location(0.0, 0.0), speed=1.0, travel_cost_rate=0.0,
             budget=math.inf, available_tasks=frozenset([1]),
             exec_time={1: 0.0}, exec_cost={1: float(cost)})
        for i, cost in enumerate(costs, 1)
    ]
    return Instance(tasks=[task], users=users, horizon=3600.0)


def run_reward_sweep(rewards=(0.2, 0.4, 0.6, 0.8, 1.0), user_counts=range(2, 15, 2),
                     reps=200, seed_base=0):
    """Welfare of the efficient profile and of the potential-maximizing
    equilibrium in the one-task game, with costs uniform on [0, 1).

    :return: DataFrame with columns `REWARD_COLUMNS`

    """
    rows = []
    for reward in rewards:
        for n_users in user_counts:
            for rep in range(reps):
                seq = np.random.SeedSequence(
                    [seed_base, int(round(reward * 1000)), n_users, rep])
                costs = np.random.default_rng(seq).uniform(0.0, 1.0, n_users)
                inst = single_task_instance(reward, costs)
                _, sw_se = maximize_welfare(inst)
                ne, _ = maximize_potential(inst)
                sw_ne = check_payoff_sum(ne, inst)
                rows.append({
                    'reward': reward,
                    'n_users': n_users,
                    'rep': rep,
                    'sw_se': sw_se,
                    'sw_ne': sw_ne,
                    'sw_se_norm': sw_se / reward,
                    'sw_ne_norm': sw_ne / reward,
                    'ratio': welfare_ratio(sw_ne, sw_se),
                })
    logger.info('Reward sweep: %d instances', len(rows))
    return pd.DataFrame(rows, columns=REWARD_COLUMNS)
