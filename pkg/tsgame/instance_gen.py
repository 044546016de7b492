"""
Seeded random instances: a square region, a two-hour horizon, and walking,
bike or driving users.
"""

import math
import logging
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Dict

import numpy as np
from scipy import stats

from tsgame import exceptions
from tsgame.model import Instance, Location, Task, User, require_valid

logger = logging.getLogger(__name__)

GENERATOR_VERSION = '1'

# Rejection sampling gives up below this acceptance probability.
MIN_ACCEPTANCE = 1e-6


@dataclass(frozen=True)
class UserTypeParams:
    speed: float
    travel_cost_rate: float

    @classmethod
    def from_kmh(cls, kmh, usd_per_km):
        return cls(speed=kmh * 1000.0 / 3600.0, travel_cost_rate=usd_per_km / 1000.0)


USER_TYPES = {
    'walking': UserTypeParams.from_kmh(5.0, 0.2),
    'bike': UserTypeParams.from_kmh(15.0, 0.5),
    'driving': UserTypeParams.from_kmh(45.0, 1.0),
}


@dataclass(frozen=True)
class DistributionParams:
    """Truncated normal given by its mean; the standard deviation and the
    truncation bounds are fractions of the mean.
    """
    mean: float
    std_fraction: float = 1.0 / 3.0
    lo_fraction: float = 0.1
    hi_fraction: float = 3.0

    @property
    def std(self):
        return self.mean * self.std_fraction

    @property
    def lo(self):
        return self.mean * self.lo_fraction

    @property
    def hi(self):
        return self.mean * self.hi_fraction

    def validate(self, name):
        if not self.mean > 0:
            raise exceptions.ConfigError('Mean of `{0}` must be > 0'.format(name))
        if not self.std_fraction > 0:
            raise exceptions.ConfigError('Std-dev fraction of `{0}` must be > 0'.format(name))
        if not 0 <= self.lo_fraction < self.hi_fraction:
            raise exceptions.ConfigError(
                'Truncation bounds of `{0}` must satisfy 0 <= lo < hi'.format(name))

    def sample(self, rng):
        return sample_truncated_normal(self.mean, self.std, self.lo, self.hi, rng)


@lru_cache(maxsize=256)
def acceptance_probability(mean, std, lo, hi):
    """Probability that a normal(mean, std) draw lands in [lo, hi]."""
    return float(stats.norm.cdf(hi, mean, std) - stats.norm.cdf(lo, mean, std))


def sample_truncated_normal(mean, std, lo, hi, rng):
    """Draw from normal(mean, std) conditioned on [lo, hi], by rejection.

    :param numpy.random.Generator rng: Random stream
    :raise: ConfigError on invalid parameters or hopeless truncation

    """
    if not lo < hi:
        raise exceptions.ConfigError('Truncation needs lo < hi, got [{0}, {1}]'.format(lo, hi))
    if not std > 0:
        raise exceptions.ConfigError('Standard deviation must be > 0, got {0}'.format(std))
    if acceptance_probability(mean, std, lo, hi) < MIN_ACCEPTANCE:
        raise exceptions.ConfigError(
            'Truncation [{0}, {1}] of normal({2}, {3}) accepts almost no draws'.format(
                lo, hi, mean, std))
    while True:
        value = rng.normal(mean, std)
        if lo <= value <= hi:
            return float(value)


@dataclass(frozen=True)
class GenConfig:
    """Instance generator settings.

    :param int n_users: Number of users
    :param int n_tasks: Number of tasks
    :param float region_side: Side of the square region, m
    :param float horizon: Simulated period, s
    :param dict user_mix: User type name -> proportion
    :param float budget: Execution budget of every user, $
    :param float availability: Probability that a task is available to a
        user; 1 makes every task available to everyone
    :param int seed: Random seed

    """
    n_users: int = 4
    n_tasks: int = 8
    region_side: float = 5000.0
    horizon: float = 7200.0
    user_mix: Dict[str, float] = field(default_factory=lambda: {'walking': 1.0})
    reward: DistributionParams = DistributionParams(10.0)
    window_length: DistributionParams = DistributionParams(1800.0)
    exec_time: DistributionParams = DistributionParams(600.0)
    exec_cost: DistributionParams = DistributionParams(1.0)
    budget: float = math.inf
    availability: float = 1.0
    seed: int = 0

    def validate(self):
        if self.n_users < 0 or self.n_tasks < 0:
            raise exceptions.ConfigError('Numbers of users and tasks must be >= 0')
        if not self.region_side > 0:
            raise exceptions.ConfigError('Parameter `region_side` must be > 0')
        if not self.horizon > 0:
            raise exceptions.ConfigError('Parameter `horizon` must be > 0')
        if not self.user_mix:
            raise exceptions.ConfigError('Parameter `user_mix` is empty')
        unknown = set(self.user_mix) - set(USER_TYPES)
        if unknown:
            raise exceptions.ConfigError('Unknown user types {0}'.format(sorted(unknown)))
        if any(p < 0 for p in self.user_mix.values()) or \
                not math.isclose(sum(self.user_mix.values()), 1.0, abs_tol=1e-9):
            raise exceptions.ConfigError('User type proportions must be >= 0 and sum to 1')
        for name in ('reward', 'window_length', 'exec_time', 'exec_cost'):
            getattr(self, name).validate(name)
        if math.isnan(self.budget) or self.budget < 0:
            raise exceptions.ConfigError('Parameter `budget` must be >= 0')
        if not 0 < self.availability <= 1:
            raise exceptions.ConfigError('Parameter `availability` must be in (0, 1]')
        if not 0 <= self.seed < 2 ** 64:
            raise exceptions.ConfigError('Parameter `seed` must be a 64-bit unsigned integer')
        return self

    def to_dict(self):
        out = asdict(self)
        out['budget'] = None if math.isinf(self.budget) else self.budget
        return out


def generate(config):
    """Generate an instance. One random stream is consumed in this order:

    1. per task, in id order: x, y, window opening, window length, reward;
    2. per user, in id order: x, y, user type; then per task in id order:
       availability (only when ``availability < 1``), and for available
       tasks execution time, then execution cost.

    :param GenConfig config: Generator settings
    :return: Validated Instance with a ``gen_meta`` block in ``meta``

    """
    config.validate()
    rng = np.random.default_rng(config.seed)
    side = config.region_side

    tasks = []
    for k in range(1, config.n_tasks + 1):
        x, y = rng.uniform(0, side), rng.uniform(0, side)
        opens = float(rng.uniform(0, config.horizon))
        length = config.window_length.sample(rng)
        tasks.append(Task(
            id=k,
            location=Location(float(x), float(y)),
            reward=config.reward.sample(rng),
            window_open=opens,
            window_close=min(opens + length, config.horizon),
        ))

    type_names = sorted(config.user_mix)
    type_probs = [config.user_mix[name] for name in type_names]
    users = []
    user_types = []
    for i in range(1, config.n_users + 1):
        x, y = rng.uniform(0, side), rng.uniform(0, side)
        type_name = type_names[int(rng.choice(len(type_names), p=type_probs))]
        params = USER_TYPES[type_name]
        exec_time, exec_cost = {}, {}
        for task in tasks:
            if config.availability < 1 and rng.random() >= config.availability:
                continue
            exec_time[task.id] = config.exec_time.sample(rng)
            exec_cost[task.id] = config.exec_cost.sample(rng)
        users.append(User(
            id=i,
            start=Location(float(x), float(y)),
            speed=params.speed,
            travel_cost_rate=params.travel_cost_rate,
            budget=config.budget,
            available_tasks=frozenset(exec_time),
            exec_time=exec_time,
            exec_cost=exec_cost,
        ))
        user_types.append(type_name)

    meta = {
        'generator_version': GENERATOR_VERSION,
        'seed': config.seed,
        'config': config.to_dict(),
        'user_types': user_types,
    }
    inst = Instance(tasks=tasks, users=users, horizon=config.horizon, meta=meta)
    logger.debug('Generated %r from seed %d', inst, config.seed)
    return require_valid(inst)
