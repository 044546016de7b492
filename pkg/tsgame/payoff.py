"""
Payoffs, potential, social welfare and fairness of strategy profiles.
"""

import math
from collections import Counter

import numpy as np

from tsgame.helpers import harmonic


def execution_counts(profile, inst=None):
    """Number of users executing each task. Tasks nobody executes count 0;
    with `inst` given every task id is present as a key.

    :param profile: One schedule per user
    :param Instance inst: Optional instance, to list idle tasks explicitly
    :return: Counter of task id -> M_k

    """
    counts = Counter()
    if inst is not None:
        for k in inst.task_ids:
            counts[k] = 0
    for sched in profile:
        counts.update(sched)
    return counts


def user_reward(profile, i, inst, counts=None):
    """Reward of user `i`: each selected task's reward split equally among
    its executors.
    """
    if counts is None:
        counts = execution_counts(profile)
    return math.fsum(inst.task_by_id[k].reward / counts[k] for k in profile[i])


def execution_cost(user, sched):
    return math.fsum(user.exec_cost[k] for k in sched)


def travel_distance(user, sched, inst):
    """Length of the chain from the user's start through `sched` in order."""
    if not sched:
        return 0.0
    legs = [inst.start_distance(user, sched[0])]
    legs.extend(inst.task_distance(a, b) for a, b in zip(sched, sched[1:]))
    return math.fsum(legs)


def travel_cost(user, sched, inst):
    return travel_distance(user, sched, inst) * user.travel_cost_rate


def schedule_cost(user, sched, inst):
    """Execution plus travel cost; depends on the user's own schedule only."""
    return execution_cost(user, sched) + travel_cost(user, sched, inst)


def user_payoff(profile, i, inst, counts=None):
    user = inst.users[i]
    sched = profile[i]
    return user_reward(profile, i, inst, counts) - schedule_cost(user, sched, inst)


def payoffs(profile, inst):
    """Payoffs of all users, as a numpy array aligned with ``inst.users``."""
    counts = execution_counts(profile)
    return np.array([
        user_payoff(profile, i, inst, counts)
        for i in range(len(inst.users))
    ], dtype=float)


def total_cost(profile, inst):
    return math.fsum(
        schedule_cost(user, sched, inst)
        for user, sched in zip(inst.users, profile)
    )


def potential(profile, inst):
    """Harmonic-weighted collected reward minus total cost."""
    counts = execution_counts(profile)
    rewards = math.fsum(
        inst.task_by_id[k].reward * harmonic(m)
        for k, m in counts.items()
        if m > 0
    )
    return rewards - total_cost(profile, inst)


def social_welfare(profile, inst):
    """Reward of every executed task, counted once, minus total cost."""
    counts = execution_counts(profile)
    rewards = math.fsum(
        inst.task_by_id[k].reward
        for k, m in counts.items()
        if m > 0
    )
    return rewards - total_cost(profile, inst)


def total_executions(profile):
    """Sum over tasks of M_k."""
    return sum(len(sched) for sched in profile)


def jain_of(values):
    """Jain's index of a payoff vector; 1 when every value is zero."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 1.0
    denom = values.size * np.sum(np.square(values))
    if denom == 0:
        return 1.0
    return float(np.square(np.sum(values)) / denom)


def jain_index(profile, inst):
    """Jain's fairness index of the users' payoffs under `profile`."""
    return jain_of(payoffs(profile, inst))
