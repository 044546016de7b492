"""
Problem instances: tasks, users, locations, and the instance file format.
"""

import io
import json
import math
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Tuple

from tsgame import exceptions
from tsgame.helpers import distance

logger = logging.getLogger(__name__)

#: An ordered sequence of distinct task ids.
Schedule = Tuple[int, ...]
#: One schedule per user, aligned with ``Instance.users``.
Profile = Tuple[Schedule, ...]


@dataclass(frozen=True)
class Location:
    x: float
    y: float


@dataclass(frozen=True)
class Task:
    """A reward-bearing sensing job. The task must be *started* inside
    ``[window_open, window_close]``; it may finish later.
    """
    id: int
    location: Location
    reward: float
    window_open: float
    window_close: float


@dataclass(frozen=True, eq=False)
class User:
    """A mobile user.

    :param int id: User id, unique in the instance
    :param Location start: Initial location
    :param float speed: Travel speed, m/s
    :param float travel_cost_rate: Travel cost, $/m
    :param float budget: Execution-cost budget, $; may be ``math.inf``
    :param frozenset available_tasks: Ids of tasks this user may execute
    :param dict exec_time: Task id -> execution time, s
    :param dict exec_cost: Task id -> execution cost, $

    """
    id: int
    start: Location
    speed: float
    travel_cost_rate: float
    budget: float
    available_tasks: FrozenSet[int]
    exec_time: Mapping[int, float]
    exec_cost: Mapping[int, float]


@dataclass(frozen=True, eq=False)
class Instance:
    tasks: Tuple[Task, ...]
    users: Tuple[User, ...]
    horizon: float
    meta: Dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'tasks', tuple(self.tasks))
        object.__setattr__(self, 'users', tuple(self.users))

    def __repr__(self):
        return '<Instance tasks={0} users={1} horizon={2}>'.format(
            len(self.tasks), len(self.users), self.horizon)

    @property
    def n_users(self):
        return len(self.users)

    @cached_property
    def task_by_id(self) -> Dict[int, Task]:
        return {task.id: task for task in self.tasks}

    @cached_property
    def task_ids(self) -> Tuple[int, ...]:
        return tuple(sorted(self.task_by_id))

    def task(self, k) -> Task:
        return self.task_by_id[k]

    def user_index(self, user_id) -> int:
        for i, user in enumerate(self.users):
            if user.id == user_id:
                return i
        raise KeyError(user_id)

    @cached_property
    def round_robin_order(self) -> Tuple[int, ...]:
        """User positions sorted by user id."""
        return tuple(sorted(range(len(self.users)), key=lambda i: self.users[i].id))

    @cached_property
    def _task_distances(self) -> Dict[Tuple[int, int], float]:
        return {
            (a.id, b.id): distance(a.location, b.location)
            for a in self.tasks
            for b in self.tasks
        }

    def task_distance(self, a, b):
        """Distance between the target locations of tasks `a` and `b`."""
        return self._task_distances[(a, b)]

    def start_distance(self, user, k):
        """Distance from `user`'s initial location to task `k`."""
        return distance(user.start, self.task_by_id[k].location)


@dataclass(frozen=True)
class Violation:
    entity: str
    id: object
    message: str

    def __str__(self):
        return '{0} {1}: {2}'.format(self.entity, self.id, self.message)


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, entity, id_, message):
        self.violations.append(Violation(entity, id_, message))

    def __str__(self):
        if self.ok:
            return 'ok'
        return '; '.join(str(v) for v in self.violations)


def _finite(value):
    return isinstance(value, (int, float)) and math.isfinite(value)


def _check_location(report, entity, id_, loc):
    if not (_finite(loc.x) and _finite(loc.y)):
        report.add(entity, id_, 'location ({0}, {1}) is not finite'.format(loc.x, loc.y))


def validate_instance(inst):
    """Check every type invariant of an instance.

    :param Instance inst: Instance to check
    :return: ValidationReport listing every violation with the offending id

    """
    report = ValidationReport()
    if not _finite(inst.horizon) or inst.horizon < 0:
        report.add('instance', None, 'horizon {0} is not a finite nonnegative number'.format(
            inst.horizon))

    seen = set()
    for task in inst.tasks:
        if task.id in seen:
            report.add('task', task.id, 'duplicate task id')
        seen.add(task.id)
        _check_location(report, 'task', task.id, task.location)
        if not _finite(task.reward) or task.reward < 0:
            report.add('task', task.id, 'reward {0} must be finite and >= 0'.format(task.reward))
        if not (_finite(task.window_open) and _finite(task.window_close)):
            report.add('task', task.id, 'window bounds must be finite')
        elif task.window_open > task.window_close:
            report.add('task', task.id, 'window opens at {0} after it closes at {1}'.format(
                task.window_open, task.window_close))
        if _finite(task.window_close) and task.window_close > inst.horizon:
            report.add('task', task.id, 'window closes at {0} after horizon {1}'.format(
                task.window_close, inst.horizon))

    seen_users = set()
    for user in inst.users:
        if user.id in seen_users:
            report.add('user', user.id, 'duplicate user id')
        seen_users.add(user.id)
        _check_location(report, 'user', user.id, user.start)
        if not _finite(user.speed) or user.speed <= 0:
            report.add('user', user.id, 'speed {0} must be > 0'.format(user.speed))
        if not _finite(user.travel_cost_rate) or user.travel_cost_rate < 0:
            report.add('user', user.id, 'travel cost rate {0} must be >= 0'.format(
                user.travel_cost_rate))
        if math.isnan(user.budget) or user.budget < 0:
            report.add('user', user.id, 'budget {0} must be >= 0'.format(user.budget))
        unknown = set(user.available_tasks) - seen
        if unknown:
            report.add('user', user.id, 'unknown available tasks {0}'.format(sorted(unknown)))
        for name, mapping in (('exec_time', user.exec_time), ('exec_cost', user.exec_cost)):
            keys = set(mapping)
            missing = set(user.available_tasks) - keys
            extra = keys - set(user.available_tasks)
            if missing:
                report.add('user', user.id, '{0} missing for tasks {1}'.format(
                    name, sorted(missing)))
            if extra:
                report.add('user', user.id, '{0} given for unavailable tasks {1}'.format(
                    name, sorted(extra)))
            for k, value in mapping.items():
                if not _finite(value) or value < 0:
                    report.add('user', user.id, '{0}[{1}] = {2} must be finite and >= 0'.format(
                        name, k, value))
    return report


def require_valid(inst):
    """Raise ValidationError unless `inst` is valid; return it otherwise."""
    report = validate_instance(inst)
    if not report.ok:
        raise exceptions.ValidationError(report)
    return inst


# Instance file format

def _get(obj, key, path):
    try:
        return obj[key]
    except (KeyError, TypeError):
        raise exceptions.InstanceFormatError(
            'missing required field "{0}"'.format(key), path=path)


def _number(obj, key, path, allow_null=False):
    value = _get(obj, key, path)
    if value is None and allow_null:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise exceptions.InstanceFormatError(
            'field "{0}" must be a number, got {1!r}'.format(key, value), path=path)
    return value


def _integer(obj, key, path):
    value = _get(obj, key, path)
    if isinstance(value, bool) or not isinstance(value, int):
        raise exceptions.InstanceFormatError(
            'field "{0}" must be an integer, got {1!r}'.format(key, value), path=path)
    return value


def _list(obj, key, path):
    value = _get(obj, key, path)
    if not isinstance(value, list):
        raise exceptions.InstanceFormatError(
            'field "{0}" must be a list'.format(key), path=path)
    return value


def _object(obj, key, path):
    value = obj.get(key)
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise exceptions.InstanceFormatError(
            'field "{0}" must be an object'.format(key), path=path)
    return value


def instance_from_dict(data):
    """Build an Instance from the parsed JSON document.

    :param dict data: Parsed document
    :return: Instance (not validated)
    :raise: InstanceFormatError on structural problems

    """
    if not isinstance(data, dict):
        raise exceptions.InstanceFormatError('document must be a JSON object')
    tasks = []
    for idx, item in enumerate(_list(data, 'tasks', '')):
        path = 'tasks[{0}]'.format(idx)
        tasks.append(Task(
            id=_integer(item, 'id', path),
            location=Location(_number(item, 'x_m', path), _number(item, 'y_m', path)),
            reward=_number(item, 'reward_usd', path),
            window_open=_number(item, 'window_open_s', path),
            window_close=_number(item, 'window_close_s', path),
        ))
    users = []
    for idx, item in enumerate(_list(data, 'users', '')):
        path = 'users[{0}]'.format(idx)
        exec_time = {}
        exec_cost = {}
        for jdx, entry in enumerate(_list(item, 'tasks', path)):
            entry_path = '{0}.tasks[{1}]'.format(path, jdx)
            k = _integer(entry, 'id', entry_path)
            exec_time[k] = _number(entry, 'exec_time_s', entry_path)
            exec_cost[k] = _number(entry, 'exec_cost_usd', entry_path)
        budget = _number(item, 'budget_usd', path, allow_null=True)
        users.append(User(
            id=_integer(item, 'id', path),
            start=Location(_number(item, 'x_m', path), _number(item, 'y_m', path)),
            speed=_number(item, 'speed_mps', path),
            travel_cost_rate=_number(item, 'travel_cost_per_m', path),
            budget=math.inf if budget is None else budget,
            available_tasks=frozenset(exec_time),
            exec_time=exec_time,
            exec_cost=exec_cost,
        ))
    return Instance(
        tasks=tasks,
        users=users,
        horizon=_number(data, 'horizon_s', ''),
        meta=dict(_object(data, 'gen_meta', '')),
    )


def instance_to_dict(inst):
    """Export an instance to the JSON document layout."""
    out = {
        'horizon_s': inst.horizon,
        'tasks': [
            {
                'id': task.id,
                'x_m': task.location.x,
                'y_m': task.location.y,
                'reward_usd': task.reward,
                'window_open_s': task.window_open,
                'window_close_s': task.window_close,
            }
            for task in inst.tasks
        ],
        'users': [
            {
                'id': user.id,
                'x_m': user.start.x,
                'y_m': user.start.y,
                'speed_mps': user.speed,
                'travel_cost_per_m': user.travel_cost_rate,
                # JSON has no infinity
                'budget_usd': None if math.isinf(user.budget) else user.budget,
                'tasks': [
                    {
                        'id': k,
                        'exec_time_s': user.exec_time[k],
                        'exec_cost_usd': user.exec_cost[k],
                    }
                    for k in sorted(user.available_tasks)
                ],
            }
            for user in inst.users
        ],
    }
    if inst.meta:
        out['gen_meta'] = inst.meta
    return out


def loads_instance(text):
    """Parse an instance from a JSON string.

    :raise: InstanceFormatError with the line number of syntax errors

    """
    try:
        data = json.loads(text)
    except ValueError as error:
        raise exceptions.InstanceFormatError(
            getattr(error, 'msg', str(error)), line=getattr(error, 'lineno', None))
    return instance_from_dict(data)


def load_instance(path):
    with io.open(path, 'r', encoding='utf-8') as fp:
        try:
            text = fp.read()
        except UnicodeDecodeError as error:
            raise exceptions.InstanceFormatError(
                'not UTF-8 text (byte {0})'.format(error.start))
    inst = loads_instance(text)
    logger.info('Loaded %r from %s', inst, path)
    return inst


def dumps_instance(inst):
    return json.dumps(instance_to_dict(inst), indent=2, sort_keys=True, allow_nan=False) + '\n'


def dump_instance(inst, path):
    with io.open(path, 'w', encoding='utf-8') as fp:
        fp.write(dumps_instance(inst))
