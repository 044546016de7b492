import os

import tsgame
from tsgame.model import load_instance

from tests.utils import make_instance, make_task, make_user

DATA_DIR = os.path.join(os.path.dirname(tsgame.__file__), 'data')
TWO_USERS_ONE_TASK = os.path.join(DATA_DIR, 'two_users_one_task.json')


def two_users_one_task():
    """One task worth $10, two co-located users with costs $4.8 and $4.9."""
    return load_instance(TWO_USERS_ONE_TASK)


def one_user_one_task(cost=4.8):
    task = make_task(1, reward=10.0)
    user = make_user(1, exec_cost={1: cost})
    return make_instance([task], [user])


def line_instance():
    """User at the origin moving at 1 m/s; task 1 at 10 m, task 2 at 20 m,
    task 3 at 100 m with window [50, 90].
    """
    tasks = [
        make_task(1, x=10, window=(0.0, 3600.0)),
        make_task(2, x=20, window=(0.0, 3600.0)),
        make_task(3, x=100, window=(50.0, 90.0)),
    ]
    user = make_user(1, speed=1.0, rate=0.5,
                     exec_time={1: 60.0, 2: 0.0, 3: 0.0},
                     exec_cost={1: 1.0, 2: 2.5, 3: 0.0})
    return make_instance(tasks, [user])


def empty_instance():
    return make_instance([], [], horizon=7200.0)
