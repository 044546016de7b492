import os
import math
import itertools

import numpy as np

from tsgame.helpers import EPS
from tsgame.feasibility import is_feasible
from tsgame.instance_gen import GenConfig, generate
from tsgame.model import Instance, Location, Task, User
from tsgame.solvers.best_response import (
    _prefers, deviation_payoff, enumerate_feasible_schedules, opponent_counts,
)

SLOW = bool(os.environ.get('TSGAME_SLOW'))


def make_task(id, x=0.0, y=0.0, reward=10.0, window=(0.0, 3600.0)):
    return Task(id=id, location=Location(float(x), float(y)), reward=reward,
                window_open=window[0], window_close=window[1])


def make_user(id, x=0.0, y=0.0, speed=1.0, rate=0.0, budget=math.inf,
              exec_time=None, exec_cost=None):
    """Build a user; tasks missing from one map default to 0 in the other."""
    exec_time = dict(exec_time or {})
    exec_cost = dict(exec_cost or {})
    for k in exec_time:
        exec_cost.setdefault(k, 0.0)
    for k in exec_cost:
        exec_time.setdefault(k, 0.0)
    return User(id=id, start=Location(float(x), float(y)), speed=speed,
                travel_cost_rate=rate, budget=budget,
                available_tasks=frozenset(exec_time),
                exec_time=exec_time, exec_cost=exec_cost)


def make_instance(tasks, users, horizon=3600.0):
    return Instance(tasks=tasks, users=users, horizon=horizon)


def small_instance(seed, n_users=3, n_tasks=4, user_type='bike', region_side=2000.0, **kwargs):
    """Random instance dense enough for users to compete over tasks."""
    config = GenConfig(n_users=n_users, n_tasks=n_tasks, region_side=region_side,
                       user_mix={user_type: 1.0}, seed=seed, **kwargs)
    return generate(config)


def random_schedule(inst, i, rng):
    schedules = list(enumerate_feasible_schedules(inst, i))
    return schedules[rng.integers(len(schedules))]


def random_profile(inst, rng):
    """A uniformly drawn feasible schedule per user."""
    return tuple(random_schedule(inst, i, rng) for i in range(len(inst.users)))


def oracle_best_response(inst, profile, i):
    """Best response by scanning every permutation of every subset of the
    user's tasks and keeping the feasible ones.
    """
    user = inst.users[i]
    counts = opponent_counts(profile, i)
    best, best_payoff = (), 0.0
    for sched in all_sequences(sorted(user.available_tasks)):
        if not is_feasible(user, sched, inst):
            continue
        payoff = deviation_payoff(inst, i, sched, counts)
        if _prefers(payoff, sched, best_payoff, best):
            best, best_payoff = sched, payoff
    return best, best_payoff


def all_sequences(items):
    """Every ordered subset of `items`, including the empty one."""
    for r in range(len(items) + 1):
        for seq in itertools.permutations(items, r):
            yield seq


def grid_start_times(user, sched, inst):
    """Sweep the 1 s grid for integer start-time vectors that meet every
    window and ordering constraint. Returns the earliest start each position
    admits in some such vector, or None if there is no vector.
    """
    mins = []
    reachable = None
    prev = None
    for k in sched:
        task = inst.task(k)
        slots = range(int(math.ceil(task.window_open)), int(math.floor(task.window_close)) + 1)
        if prev is None:
            ready = inst.start_distance(user, k) / user.speed
            reachable = [t for t in slots if t >= ready - EPS]
        else:
            leg = user.exec_time[prev] + inst.task_distance(prev, k) / user.speed
            reachable = [t for t in slots if any(t >= s + leg - EPS for s in reachable)]
        if not reachable:
            return None
        mins.append(reachable[0])
        prev = k
    return mins


def micro_instance(rng):
    """At most three tasks on a line with integer geometry and times, so
    that every travel and execution time is a whole number of seconds.
    """
    n_tasks = int(rng.integers(1, 4))
    tasks = []
    for k in range(1, n_tasks + 1):
        opens = int(rng.integers(0, 151))
        tasks.append(make_task(k, x=int(rng.integers(0, 61)), reward=10.0,
                               window=(float(opens), float(opens + rng.integers(0, 51)))))
    exec_time = {k: float(rng.integers(0, 21)) for k in range(1, n_tasks + 1)}
    exec_cost = {k: float(rng.integers(0, 4)) for k in range(1, n_tasks + 1)}
    budget = float(rng.integers(0, 10))
    user = make_user(1, x=int(rng.integers(0, 61)), speed=1.0,
                     budget=budget, exec_time=exec_time, exec_cost=exec_cost)
    return make_instance(tasks, [user], horizon=200.0)


def seeds(n, base=0):
    return [int(s) for s in np.random.SeedSequence(base).generate_state(n)]
