"""
Miscellaneous helper functions
"""

import math

# Absolute tolerance for every numeric comparison in the package.
EPS = 1e-9


def distance(a, b):
    """Euclidean distance between two locations, in meters.

    :param Location a: First location
    :param Location b: Second location

    """
    return math.hypot(a.x - b.x, a.y - b.y)


def harmonic(m):
    """Harmonic number H_m = 1 + 1/2 + ... + 1/m; H_0 = 0."""
    return math.fsum(1.0 / j for j in range(1, m + 1))


def ensure_schedule(value):
    """Coerce a schedule-like value to a tuple of task ids.

    :param value: None, int, or iterable of ints
    :return: Tuple of ints

    """
    if value is None:
        return ()
    if isinstance(value, int):
        return (value,)
    return tuple(int(k) for k in value)


def ensure_profile(value, n_users=None):
    """Coerce a profile-like value (list of schedule-likes) to a tuple of
    tuples.

    :param value: Iterable of schedule-likes; None means all-empty
    :param int n_users: Required when `value` is None
    :return: Tuple of schedules

    """
    if value is None:
        if n_users is None:
            raise ValueError('Parameter `n_users` is required for an empty profile')
        return ((),) * n_users
    profile = tuple(ensure_schedule(sched) for sched in value)
    if n_users is not None and len(profile) != n_users:
        raise ValueError(
            'Profile has {0} schedules for {1} users'.format(len(profile), n_users)
        )
    return profile


def replace_schedule(profile, i, schedule):
    """Return a copy of `profile` with user `i`'s schedule replaced."""
    return profile[:i] + (ensure_schedule(schedule),) + profile[i + 1:]


def is_close(a, b, eps=EPS):
    return abs(a - b) <= eps
