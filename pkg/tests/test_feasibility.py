import unittest
from dataclasses import replace

import numpy as np

from tsgame.feasibility import (
    Infeasible, TimedSchedule, earliest_schedule, is_feasible, is_feasible_profile,
    is_valid_schedule, within_budget,
)
from tsgame.solvers.best_response import enumerate_feasible_schedules

from tests.fixtures import line_instance, two_users_one_task
from tests.utils import all_sequences, grid_start_times, micro_instance


class TestEarliestSchedule(unittest.TestCase):

    def setUp(self):
        self.inst = line_instance()
        self.user = self.inst.users[0]

    def test_empty(self):
        timed = earliest_schedule(self.user, (), self.inst)
        self.assertEqual(timed, TimedSchedule((), ()))
        self.assertTrue(timed)

    def test_arrival_after_deadline(self):
        result = earliest_schedule(self.user, [3], self.inst)
        self.assertEqual(result, Infeasible(1, 3))
        self.assertFalse(result)

    def test_chained_start_times(self):
        timed = earliest_schedule(self.user, [1, 2], self.inst)
        self.assertEqual(timed.start_times, (10.0, 80.0))

    def test_first_violating_position(self):
        self.assertEqual(earliest_schedule(self.user, [2, 3], self.inst), Infeasible(2, 3))
        self.assertEqual(earliest_schedule(self.user, [1, 3], self.inst), Infeasible(2, 3))

    def test_waits_for_window(self):
        near = replace(self.inst.task(3), location=self.inst.task(1).location)
        inst = replace(self.inst, tasks=(self.inst.task(1), self.inst.task(2), near))
        timed = earliest_schedule(self.user, [3], inst)
        self.assertEqual(timed.start_times, (50.0,))


class TestBudget(unittest.TestCase):

    def setUp(self):
        self.inst = line_instance()

    def user(self, budget):
        return replace(self.inst.users[0], budget=budget)

    def test_empty_always_feasible(self):
        self.assertTrue(is_feasible(self.user(0.0), (), self.inst))

    def test_budget_met_exactly(self):
        self.assertTrue(within_budget(self.user(3.5), (1, 2)))
        self.assertTrue(is_feasible(self.user(3.5), (1, 2), self.inst))

    def test_budget_exceeded(self):
        self.assertFalse(is_feasible(self.user(3.4), (1, 2), self.inst))
        self.assertTrue(is_feasible(self.user(3.4), (1,), self.inst))


class TestProfile(unittest.TestCase):

    def setUp(self):
        self.inst = two_users_one_task()

    def test_feasible(self):
        self.assertTrue(is_feasible_profile(((1,), (1,)), self.inst))
        self.assertTrue(is_feasible_profile(((), ()), self.inst))

    def test_wrong_length(self):
        self.assertFalse(is_feasible_profile(((1,),), self.inst))

    def test_repeated_task(self):
        self.assertFalse(is_valid_schedule(self.inst.users[0], (1, 1)))
        self.assertFalse(is_feasible_profile(((1, 1), ()), self.inst))

    def test_unavailable_task(self):
        self.assertFalse(is_feasible_profile(((2,), ()), self.inst))


class TestAgainstTimeGrid(unittest.TestCase):
    """Greedy earliest starts agree with a 1 s brute-force time search on
    integer-time instances.
    """

    def test_micro_instances(self):
        rng = np.random.default_rng(20240601)
        checked = 0
        for _ in range(200):
            inst = micro_instance(rng)
            user = inst.users[0]
            for sched in all_sequences(inst.task_ids):
                grid = grid_start_times(user, sched, inst)
                timed = earliest_schedule(user, sched, inst)
                self.assertEqual(bool(timed), grid is not None, (inst.tasks, sched))
                if timed:
                    self.assertEqual(list(timed.start_times), grid)
                in_budget = sum(user.exec_cost[k] for k in sched) <= user.budget
                self.assertEqual(is_feasible(user, sched, inst), grid is not None and in_budget)
                checked += 1
        self.assertGreater(checked, 200)

    def test_prefix_closed_and_monotone(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            inst = micro_instance(rng)
            user = inst.users[0]
            for sched in all_sequences(inst.task_ids):
                if is_feasible(user, sched, inst):
                    for r in range(len(sched)):
                        self.assertTrue(is_feasible(user, sched[:r], inst))
                else:
                    for k in set(inst.task_ids) - set(sched):
                        self.assertFalse(is_feasible(user, sched + (k,), inst))

    def test_enumeration_is_the_feasible_filter(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            inst = micro_instance(rng)
            user = inst.users[0]
            expected = {s for s in all_sequences(inst.task_ids) if is_feasible(user, s, inst)}
            found = list(enumerate_feasible_schedules(inst, 0))
            self.assertEqual(len(found), len(set(found)))
            self.assertEqual(set(found), expected)
