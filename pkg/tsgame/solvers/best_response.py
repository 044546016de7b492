"""
Exact best responses: a user's optimal ordered schedule against fixed
opponents, by depth-first branch-and-bound over ordered task subsets.
"""

import math
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Tuple

from tsgame import exceptions
from tsgame.feasibility import next_start
from tsgame.helpers import EPS
from tsgame.payoff import schedule_cost

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 8


def opponent_counts(profile, i):
    """Execution counts of every task over all users except `i`."""
    counts = Counter()
    for j, sched in enumerate(profile):
        if j != i:
            counts.update(sched)
    return counts


def marginal_share(task, counts, i_included=False):
    """Share of `task`'s reward the user receives by executing it.

    :param Task task: Task
    :param counts: Execution counts
    :param bool i_included: Whether `counts` already includes the user
        itself; if False, the counts are of opponents only and the user
        joins as one more executor

    """
    m = counts[task.id]
    if not i_included:
        m += 1
    return task.reward / m


def deviation_payoff(inst, i, sched, counts):
    """Payoff of user `i` playing `sched` against opponent `counts`."""
    user = inst.users[i]
    rewards = math.fsum(marginal_share(inst.task_by_id[k], counts) for k in sched)
    return rewards - schedule_cost(user, sched, inst)


def _prefers(payoff, sched, best_payoff, best_sched):
    """Total order on candidates: higher payoff, then fewer tasks, then the
    lexicographically smaller id sequence. Payoffs within EPS tie.
    """
    if payoff > best_payoff + EPS:
        return True
    if payoff < best_payoff - EPS:
        return False
    return (len(sched), sched) < (len(best_sched), best_sched)


@dataclass(frozen=True)
class BrNode:
    """Search state; `schedule` always passes ``earliest_schedule``."""
    schedule: Tuple[int, ...]
    time: float
    spent: float
    payoff: float
    remaining: Tuple[int, ...]

    @property
    def last(self):
        return self.schedule[-1] if self.schedule else None


class BestResponseSearch(object):
    """Branch-and-bound for one user against frozen opponent counts.

    The bound at a node is its payoff plus, for every task still appendable
    from it, the positive part of (reward share - execution cost). Travel is
    priced at zero in the bound, so it never underestimates.

    :param Instance inst: Instance
    :param int i: User position in ``inst.users``
    :param Counter counts: Opponent execution counts

    """
    def __init__(self, inst, i, counts):
        self.inst = inst
        self.i = i
        self.user = inst.users[i]
        self.gain = {
            k: marginal_share(inst.task_by_id[k], counts) - self.user.exec_cost[k]
            for k in self.user.available_tasks
        }
        self.best_sched = ()
        self.best_payoff = 0.0
        self.expanded = 0
        self.pruned = 0

    def _children(self, node):
        user = self.user
        out = []
        for k in node.remaining:
            spent = node.spent + user.exec_cost[k]
            if spent > user.budget + EPS:
                continue
            start = next_start(user, self.inst, node.last, node.time, k)
            if start is None:
                continue
            if node.last is None:
                leg = self.inst.start_distance(user, k)
            else:
                leg = self.inst.task_distance(node.last, k)
            payoff = node.payoff + self.gain[k] - leg * user.travel_cost_rate
            out.append((k, start, spent, payoff))
        return out

    def _visit(self, node):
        if _prefers(node.payoff, node.schedule, self.best_payoff, self.best_sched):
            self.best_payoff, self.best_sched = node.payoff, node.schedule
        children = self._children(node)
        if not children:
            return
        bound = node.payoff + math.fsum(max(0.0, self.gain[k]) for k, _, _, _ in children)
        # Any descendant is longer than the node, so it loses an exact tie
        # against an incumbent that is no longer than the node.
        if bound < self.best_payoff - EPS or (
                bound <= self.best_payoff + EPS
                and len(node.schedule) + 1 > len(self.best_sched)):
            self.pruned += 1
            return
        self.expanded += 1
        reachable = tuple(k for k, _, _, _ in children)
        for k, start, spent, payoff in children:
            self._visit(BrNode(
                schedule=node.schedule + (k,),
                time=start,
                spent=spent,
                payoff=payoff,
                remaining=tuple(j for j in reachable if j != k),
            ))

    def run(self):
        root = BrNode((), 0.0, 0.0, 0.0, tuple(sorted(self.user.available_tasks)))
        self._visit(root)
        logger.debug('Best response of user %s: %r (expanded %d, pruned %d)',
                     self.user.id, self.best_sched, self.expanded, self.pruned)
        return self.best_sched


def best_response(inst, profile, i):
    """Exact payoff-maximizing feasible schedule of user `i` against the
    other users' schedules in `profile`.

    :param Instance inst: Instance
    :param profile: Current profile; entry `i` is ignored
    :param int i: User position
    :return: Tuple of (schedule, payoff); payoff >= 0

    """
    counts = opponent_counts(profile, i)
    sched = BestResponseSearch(inst, i, counts).run()
    return sched, deviation_payoff(inst, i, sched, counts)


def enumerate_feasible_schedules(inst, i, cap=DEFAULT_ENUMERATION_CAP):
    """Yield every feasible ordered schedule of user `i` exactly once,
    prefixes before their extensions.

    :param int cap: Largest number of available tasks to enumerate
    :raise: CapExceededError if user `i` has more than `cap` available tasks

    """
    user = inst.users[i]
    if len(user.available_tasks) > cap:
        raise exceptions.CapExceededError(
            'Schedule enumeration of user {0}'.format(user.id),
            len(user.available_tasks), cap)
    candidates = tuple(sorted(user.available_tasks))

    def walk(sched, time, spent):
        yield sched
        last = sched[-1] if sched else None
        for k in candidates:
            if k in sched:
                continue
            cost = spent + user.exec_cost[k]
            if cost > user.budget + EPS:
                continue
            start = next_start(user, inst, last, time, k)
            if start is None:
                continue
            for each in walk(sched + (k,), start, cost):
                yield each

    return walk((), 0.0, 0.0)
