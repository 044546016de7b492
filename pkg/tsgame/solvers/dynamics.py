"""
Best-response dynamics and Nash equilibrium verification.
"""

import logging
from collections import namedtuple
from dataclasses import dataclass, field
from typing import List

import numpy as np
import pandas as pd

from tsgame import exceptions
from tsgame.helpers import EPS, ensure_profile, replace_schedule
from tsgame.payoff import potential, user_payoff
from tsgame.solvers.best_response import best_response

logger = logging.getLogger(__name__)

CONVERGED = 'converged'
ROUND_CAP = 'round-cap'

ORDERS = ('round-robin', 'random')
INITIALS = ('empty', 'greedy')

TRACE_COLUMNS = ['round', 'user', 'old_payoff', 'new_payoff', 'potential']

Move = namedtuple('Move', TRACE_COLUMNS)


@dataclass
class DynamicsTrace:
    """Accepted moves, in order, and how the run ended. `rounds` counts every
    round played, including the final round without improvement.
    """
    moves: List[Move] = field(default_factory=list)
    status: str = ROUND_CAP
    rounds: int = 0

    @property
    def converged(self):
        return self.status == CONVERGED

    def to_frame(self):
        return pd.DataFrame(self.moves, columns=TRACE_COLUMNS)

    def to_csv(self, path_or_buf=None):
        """Export the moves as CSV; returns the text if no target is given."""
        return self.to_frame().to_csv(path_or_buf, index=False)


class NashCheck(namedtuple('NashCheck', ['is_ne', 'user', 'schedule', 'gain'])):
    """Result of ``verify_ne``. Truthy iff the profile is an equilibrium;
    otherwise `user`, `schedule` and `gain` describe a profitable deviation.
    """
    __slots__ = ()

    def __bool__(self):
        return self.is_ne


def verify_ne(inst, profile, threshold=EPS):
    """Check that no user gains more than `threshold` by deviating alone.

    :param Instance inst: Instance
    :param profile: Feasible profile
    :param float threshold: Improvement threshold
    :return: NashCheck; the witness is the first deviating user in id order

    """
    profile = ensure_profile(profile, inst.n_users)
    for i in inst.round_robin_order:
        current = user_payoff(profile, i, inst)
        sched, value = best_response(inst, profile, i)
        if value > current + threshold:
            return NashCheck(False, inst.users[i].id, sched, value - current)
    return NashCheck(True, None, None, 0.0)


def require_ne(inst, profile, threshold=EPS, label='profile'):
    check = verify_ne(inst, profile, threshold)
    if not check:
        raise exceptions.NotEquilibriumError(
            '{0} is not an equilibrium: user {1} gains {2} by playing {3}'.format(
                label, check.user, check.gain, list(check.schedule)))
    return check


class BestResponseDynamics(object):
    """Sequential best-response dynamics.

    :param Instance inst: Instance
    :param initial: Starting profile, or one of 'empty' and 'greedy'
    :param str order: 'round-robin' (by user id) or 'random'
    :param int seed: Seed for the random activation order
    :param int max_rounds: Round cap
    :param float threshold: A move is accepted only if it improves the
        mover's payoff by more than this

    """
    def __init__(self, inst, initial='empty', order='round-robin', seed=None,
                 max_rounds=100, threshold=EPS):
        if order not in ORDERS:
            raise exceptions.ConfigError(
                'Parameter `order` must be one of {0}, got {1!r}'.format(ORDERS, order))
        if order == 'round-robin' and seed is not None:
            raise exceptions.ConfigError(
                'Parameter `seed` is provided, but the order is round-robin')
        if max_rounds < 1:
            raise exceptions.ConfigError('Parameter `max_rounds` must be >= 1')
        if threshold < 0:
            raise exceptions.ConfigError('Parameter `threshold` must be >= 0')
        self.inst = inst
        self.order = order
        self.rng = np.random.default_rng(seed) if order == 'random' else None
        self.max_rounds = max_rounds
        self.threshold = threshold
        self.profile = self._initial_profile(initial)
        self.trace = DynamicsTrace()

    def __repr__(self):
        return '<BestResponseDynamics order={0} rounds={1} status={2}>'.format(
            self.order, self.trace.rounds, self.trace.status)

    def _initial_profile(self, initial):
        if isinstance(initial, str):
            if initial == 'empty':
                return ensure_profile(None, self.inst.n_users)
            if initial == 'greedy':
                from tsgame.solvers.optimizer import greedy_welfare_heuristic
                return greedy_welfare_heuristic(self.inst)
            raise exceptions.ConfigError(
                'Parameter `initial` must be a profile or one of {0}'.format(INITIALS))
        return ensure_profile(initial, self.inst.n_users)

    def _round_order(self):
        order = list(self.inst.round_robin_order)
        if self.rng is not None:
            self.rng.shuffle(order)
        return order

    def step(self, i, round_no):
        """Give user `i` the chance to move. Returns True if it moved."""
        old = user_payoff(self.profile, i, self.inst)
        sched, new = best_response(self.inst, self.profile, i)
        if new <= old + self.threshold:
            return False
        self.profile = replace_schedule(self.profile, i, sched)
        move = Move(round_no, self.inst.users[i].id, old, new,
                    potential(self.profile, self.inst))
        self.trace.moves.append(move)
        logger.debug('Round %d: user %s moves to %r (%.6f -> %.6f), potential %.6f',
                     round_no, move.user, sched, old, new, move.potential)
        return True

    def run(self):
        for round_no in range(1, self.max_rounds + 1):
            self.trace.rounds = round_no
            moved = [self.step(i, round_no) for i in self._round_order()]
            if not any(moved):
                self.trace.status = CONVERGED
                logger.info('Dynamics converged after %d rounds, %d moves',
                            round_no, len(self.trace.moves))
                break
        else:
            logger.warning('Dynamics stopped at the round cap (%d) without converging',
                           self.max_rounds)
        return self.profile, self.trace


def best_response_dynamics(inst, initial='empty', order='round-robin', seed=None,
                           max_rounds=100, threshold=EPS):
    """Run best-response dynamics to an equilibrium; see `BestResponseDynamics`.

    :return: Tuple of (profile, DynamicsTrace)

    """
    return BestResponseDynamics(
        inst, initial=initial, order=order, seed=seed,
        max_rounds=max_rounds, threshold=threshold,
    ).run()
