"""
Joint-profile optimization: exact maximizers of the potential (an
equilibrium) and of social welfare (the efficient baseline), and a greedy
insertion heuristic for instances too large for exact search.
"""

import math
import logging
from dataclasses import dataclass
from typing import FrozenSet, Tuple

from tsgame import exceptions
from tsgame.helpers import EPS, harmonic
from tsgame.feasibility import is_feasible
from tsgame.payoff import potential, schedule_cost, social_welfare, travel_cost
from tsgame.solvers.best_response import DEFAULT_ENUMERATION_CAP, enumerate_feasible_schedules

logger = logging.getLogger(__name__)

#: Max number of joint search nodes before exact search gives up.
DEFAULT_JOINT_CAP = 10 ** 7

OBJECTIVES = ('potential', 'welfare')


@dataclass(frozen=True)
class Candidate:
    """Cheapest feasible ordering of one task set for one user.

    `value` is the set's total reward minus the schedule's cost: what the
    user would add to either objective with no other executor around.
    """
    schedule: Tuple[int, ...]
    tasks: FrozenSet[int]
    cost: float
    value: float


def candidate_schedules(inst, i, enumeration_cap=DEFAULT_ENUMERATION_CAP, cache=None):
    """Feasible task sets of user `i`, each with its cheapest ordering.

    Both objectives depend on a user's schedule only through its task set
    and its cost, so the other orderings of a set are dominated.

    :param ScheduleCache cache: Optional cache shared between searches
    :return: List of Candidate, best solo value first

    """
    if cache is not None:
        cached = cache.retrieve(inst, i)
        if cached is not None:
            return cached
    user = inst.users[i]
    best = {}
    for sched in enumerate_feasible_schedules(inst, i, cap=enumeration_cap):
        tasks = frozenset(sched)
        cost = schedule_cost(user, sched, inst)
        current = best.get(tasks)
        if (current is None or cost < current[1] - EPS
                or (cost <= current[1] + EPS and sched < current[0])):
            best[tasks] = (sched, cost)
    out = [
        Candidate(sched, tasks, cost,
                  math.fsum(inst.task_by_id[k].reward for k in tasks) - cost)
        for tasks, (sched, cost) in best.items()
    ]
    out.sort(key=lambda c: (-c.value, len(c.schedule), c.schedule))
    if cache is not None:
        cache.store(inst, i, out)
    return out


class JointSearch(object):
    """Depth-first branch-and-bound over the users' candidate sets.

    Users are fixed one at a time in id order, each trying its candidates
    best solo value first; among optima within EPS the first one found is
    kept. The bound on what the unfixed users can still add is the smaller
    of two: the sum over them of their best gain at the current execution
    counts, and the sum over tasks of what the unfixed users able to execute
    a task could add to its reward term at no cost. Counts only grow deeper
    in the tree, so both are admissible.

    :param Instance inst: Instance
    :param str objective: 'potential' or 'welfare'
    :param int enumeration_cap: Per-user cap on available tasks
    :param int joint_cap: Max number of search nodes
    :param ScheduleCache cache: Optional candidate cache
    :param float lower_bound: Objective value some profile is known to reach

    """
    def __init__(self, inst, objective, enumeration_cap=DEFAULT_ENUMERATION_CAP,
                 joint_cap=DEFAULT_JOINT_CAP, cache=None, lower_bound=None):
        if objective not in OBJECTIVES:
            raise exceptions.ConfigError(
                'Parameter `objective` must be one of {0}, got {1!r}'.format(
                    OBJECTIVES, objective))
        self.inst = inst
        self.objective = objective
        self.joint_cap = joint_cap
        self.order = list(inst.round_robin_order)
        self.candidates = [
            candidate_schedules(inst, i, enumeration_cap, cache)
            for i in self.order
        ]
        self.rewards = {k: inst.task_by_id[k].reward for k in inst.task_ids}
        # able[d][k]: users at depth >= d with some candidate containing k
        self.able = [dict.fromkeys(inst.task_ids, 0) for _ in range(len(self.order) + 1)]
        for d in range(len(self.order) - 1, -1, -1):
            tasks = set().union(*(c.tasks for c in self.candidates[d]))
            for k in inst.task_ids:
                self.able[d][k] = self.able[d + 1][k] + (k in tasks)
        self.counts = dict.fromkeys(inst.task_ids, 0)
        # Start just below the known value so a profile reaching it is found.
        self.best_value = -math.inf if lower_bound is None else lower_bound - 1e-6
        self.best_choice = None
        self.nodes = 0

    def _gain(self, cand):
        counts = self.counts
        rewards = self.rewards
        if self.objective == 'potential':
            collected = sum(rewards[k] / (counts[k] + 1) for k in cand.tasks)
        else:
            collected = sum(rewards[k] for k in cand.tasks if counts[k] == 0)
        return collected - cand.cost

    def _bound(self, depth):
        per_user = sum(
            max(self._gain(c) for c in cands)
            for cands in self.candidates[depth:]
        )
        able = self.able[depth]
        if self.objective == 'potential':
            per_task = sum(
                self.rewards[k] * (harmonic(m + able[k]) - harmonic(m))
                for k, m in self.counts.items()
                if able[k]
            )
        else:
            per_task = sum(
                self.rewards[k]
                for k, m in self.counts.items()
                if able[k] and m == 0
            )
        return min(per_user, per_task)

    def _visit(self, depth, value, choice):
        self.nodes += 1
        if self.nodes > self.joint_cap:
            raise exceptions.CapExceededError(
                'Joint {0} search'.format(self.objective), self.nodes, self.joint_cap)
        if depth == len(self.order):
            if value > self.best_value + EPS:
                self.best_value, self.best_choice = value, list(choice)
            return
        if value + self._bound(depth) <= self.best_value + EPS:
            return
        for cand in self.candidates[depth]:
            child = value + self._gain(cand)
            for k in cand.tasks:
                self.counts[k] += 1
            choice.append(cand)
            self._visit(depth + 1, child, choice)
            choice.pop()
            for k in cand.tasks:
                self.counts[k] -= 1

    def run(self):
        """:return: Profile aligned with ``inst.users``"""
        self._visit(0, 0.0, [])
        if self.best_choice is None:
            raise RuntimeError('Lower bound {0} is not attainable'.format(self.best_value))
        profile = [()] * len(self.inst.users)
        for i, cand in zip(self.order, self.best_choice):
            profile[i] = cand.schedule
        logger.debug('Joint %s search: %d nodes', self.objective, self.nodes)
        return tuple(profile)


def maximize_potential(inst, enumeration_cap=DEFAULT_ENUMERATION_CAP,
                       joint_cap=DEFAULT_JOINT_CAP, cache=None):
    """Exact potential maximizer, which is a Nash equilibrium. Search starts
    from the potential of a best-response dynamics outcome.

    :return: Tuple of (profile, potential value)
    :raise: CapExceededError when the instance is too large for exact search

    """
    from tsgame.solvers.dynamics import best_response_dynamics
    seed, _ = best_response_dynamics(inst)
    search = JointSearch(inst, 'potential', enumeration_cap, joint_cap, cache,
                         lower_bound=potential(seed, inst))
    profile = search.run()
    value = potential(profile, inst)
    logger.info('Potential maximizer: %.6f after %d nodes', value, search.nodes)
    return profile, value


def maximize_welfare(inst, enumeration_cap=DEFAULT_ENUMERATION_CAP,
                     joint_cap=DEFAULT_JOINT_CAP, cache=None):
    """Exact social welfare maximizer (the socially efficient profile).
    Search starts from the welfare of the greedy heuristic.

    :return: Tuple of (profile, welfare value)
    :raise: CapExceededError when the instance is too large for exact search

    """
    seed = greedy_welfare_heuristic(inst)
    search = JointSearch(inst, 'welfare', enumeration_cap, joint_cap, cache,
                         lower_bound=social_welfare(seed, inst))
    profile = search.run()
    value = social_welfare(profile, inst)
    logger.info('Welfare maximizer: %.6f after %d nodes', value, search.nodes)
    return profile, value


def greedy_welfare_heuristic(inst):
    """Sequential insertion: repeatedly commit the (user, task, position)
    with the largest positive welfare gain. The result is feasible and its
    welfare is a lower bound on the efficient welfare.

    :return: Profile

    """
    profile = [[] for _ in inst.users]
    covered = set()
    while True:
        best = None
        for i in inst.round_robin_order:
            user = inst.users[i]
            sched = profile[i]
            base = travel_cost(user, sched, inst)
            for k in sorted(user.available_tasks - covered):
                reward = inst.task_by_id[k].reward - user.exec_cost[k]
                for pos in range(len(sched) + 1):
                    trial = sched[:pos] + [k] + sched[pos:]
                    gain = reward - (travel_cost(user, trial, inst) - base)
                    if gain <= EPS or (best is not None and gain <= best[0] + EPS):
                        continue
                    if is_feasible(user, trial, inst):
                        best = (gain, i, k, pos)
        if best is None:
            break
        gain, i, k, pos = best
        profile[i].insert(pos, k)
        covered.add(k)
        logger.debug('Greedy: user %s takes task %d at position %d (+%.6f)',
                     inst.users[i].id, k, pos, gain)
    return tuple(tuple(sched) for sched in profile)
