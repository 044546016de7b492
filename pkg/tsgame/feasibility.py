"""
Schedule feasibility: time windows, travel ordering and the execution budget.
"""

from dataclasses import dataclass
from typing import Tuple

from tsgame.helpers import EPS, ensure_schedule


@dataclass(frozen=True)
class TimedSchedule:
    """A schedule with the start time of each of its tasks."""
    schedule: Tuple[int, ...]
    start_times: Tuple[float, ...]

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Infeasible:
    """Time-infeasible schedule. `position` is the 1-based index of the first
    task that cannot be started before its window closes.
    """
    position: int
    task: int

    def __bool__(self):
        return False


def next_start(user, inst, prev_task, prev_start, k):
    """Earliest start time of task `k` when appended after `prev_task`, which
    started at `prev_start`; `prev_task` None means leaving from the user's
    initial location at time 0. Returns None when the window of `k` is missed.
    """
    task = inst.task_by_id[k]
    if prev_task is None:
        arrival = inst.start_distance(user, k) / user.speed
    else:
        arrival = (prev_start + user.exec_time[prev_task]
                   + inst.task_distance(prev_task, k) / user.speed)
    start = max(task.window_open, arrival)
    if start > task.window_close + EPS:
        return None
    return start


def earliest_schedule(user, sched, inst):
    """Greedy earliest start times for an ordered schedule. Waiting for a
    window to open is allowed; starting after it closes is not.

    :param User user: Executing user
    :param sched: Ordered task ids
    :param Instance inst: Instance
    :return: TimedSchedule, or Infeasible naming the first violating position

    """
    sched = ensure_schedule(sched)
    times = []
    prev, prev_start = None, 0.0
    for position, k in enumerate(sched, 1):
        start = next_start(user, inst, prev, prev_start, k)
        if start is None:
            return Infeasible(position, k)
        times.append(start)
        prev, prev_start = k, start
    return TimedSchedule(sched, tuple(times))


def within_budget(user, sched):
    return sum(user.exec_cost[k] for k in sched) <= user.budget + EPS


def is_valid_schedule(user, sched):
    """Distinct ids, all available to `user`."""
    return len(set(sched)) == len(sched) and all(k in user.available_tasks for k in sched)


def is_feasible(user, sched, inst):
    """Whether `sched` meets the time-window, ordering and budget constraints."""
    sched = ensure_schedule(sched)
    return bool(earliest_schedule(user, sched, inst)) and within_budget(user, sched)


def is_feasible_profile(profile, inst):
    """Whether every schedule of `profile` is valid and feasible for its user."""
    if len(profile) != len(inst.users):
        return False
    return all(
        is_valid_schedule(user, ensure_schedule(sched)) and is_feasible(user, sched, inst)
        for user, sched in zip(inst.users, profile)
    )
