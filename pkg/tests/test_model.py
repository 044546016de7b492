import io
import os
import json
import math
import shutil
import tempfile
import unittest
from dataclasses import replace

from tsgame import exceptions
from tsgame.instance_gen import GenConfig, generate
from tsgame.model import (
    Location, dumps_instance, instance_from_dict, instance_to_dict, load_instance,
    loads_instance, require_valid, validate_instance,
)

from tests.fixtures import TWO_USERS_ONE_TASK, two_users_one_task
from tests.utils import make_instance, make_task, make_user


class TestValidation(unittest.TestCase):

    def setUp(self):
        self.tasks = [make_task(1), make_task(2, x=100)]
        self.users = [make_user(1, exec_cost={1: 1.0, 2: 1.0})]

    def messages(self, inst):
        return [(v.entity, v.id) for v in validate_instance(inst).violations]

    def test_valid(self):
        report = validate_instance(make_instance(self.tasks, self.users))
        self.assertTrue(report.ok)
        self.assertTrue(report)
        self.assertEqual(str(report), 'ok')

    def test_inverted_window(self):
        self.tasks[1] = make_task(2, window=(100.0, 50.0))
        self.assertEqual(self.messages(make_instance(self.tasks, self.users)), [('task', 2)])

    def test_window_after_horizon(self):
        self.tasks[0] = make_task(1, window=(0.0, 4000.0))
        self.assertIn(('task', 1), self.messages(make_instance(self.tasks, self.users)))

    def test_negative_reward(self):
        self.tasks[0] = make_task(1, reward=-1.0)
        self.assertEqual(self.messages(make_instance(self.tasks, self.users)), [('task', 1)])

    def test_duplicate_task(self):
        self.tasks.append(make_task(1))
        self.assertIn(('task', 1), self.messages(make_instance(self.tasks, self.users)))

    def test_missing_exec_cost(self):
        user = replace(self.users[0], exec_cost={1: 1.0})
        report = validate_instance(make_instance(self.tasks, [user]))
        self.assertFalse(report.ok)
        self.assertEqual(report.violations[0].entity, 'user')
        self.assertIn('exec_cost missing', report.violations[0].message)

    def test_unknown_available_task(self):
        user = make_user(1, exec_cost={1: 1.0, 9: 1.0})
        report = validate_instance(make_instance(self.tasks, [user]))
        self.assertIn('unknown available tasks [9]', str(report))

    def test_nonpositive_speed(self):
        user = replace(self.users[0], speed=0.0)
        self.assertEqual(self.messages(make_instance(self.tasks, [user])), [('user', 1)])

    def test_nonfinite_location(self):
        user = replace(self.users[0], start=Location(math.nan, 0.0))
        self.assertEqual(self.messages(make_instance(self.tasks, [user])), [('user', 1)])

    def test_infinite_budget_is_valid(self):
        self.assertTrue(validate_instance(make_instance(self.tasks, self.users)).ok)

    def test_reports_every_violation(self):
        self.tasks[0] = make_task(1, reward=-1.0, window=(10.0, 0.0))
        user = replace(self.users[0], speed=-1.0)
        self.assertEqual(len(self.messages(make_instance(self.tasks, [user]))), 3)

    def test_require_valid(self):
        self.tasks[0] = make_task(1, reward=-1.0)
        inst = make_instance(self.tasks, self.users)
        with self.assertRaises(exceptions.ValidationError) as ctx:
            require_valid(inst)
        self.assertFalse(ctx.exception.report.ok)

    def test_generated_instance_is_valid(self):
        inst = generate(GenConfig(n_users=5, seed=3))
        self.assertTrue(validate_instance(inst).ok)


class TestInstance(unittest.TestCase):

    def setUp(self):
        self.inst = make_instance(
            [make_task(2, x=3, y=4), make_task(1)],
            [make_user(5, exec_cost={1: 1.0}), make_user(3, exec_cost={2: 1.0})],
        )

    def test_task_lookup(self):
        self.assertEqual(self.inst.task(2).location, Location(3.0, 4.0))
        self.assertEqual(self.inst.task_ids, (1, 2))

    def test_distances(self):
        self.assertEqual(self.inst.task_distance(1, 2), 5.0)
        self.assertEqual(self.inst.start_distance(self.inst.users[0], 2), 5.0)

    def test_round_robin_order(self):
        self.assertEqual(self.inst.round_robin_order, (1, 0))

    def test_user_index(self):
        self.assertEqual(self.inst.user_index(3), 1)
        self.assertRaises(KeyError, self.inst.user_index, 4)

    def test_repr(self):
        self.assertEqual(repr(self.inst), '<Instance tasks=2 users=2 horizon=3600.0>')


class TestFormat(unittest.TestCase):

    def setUp(self):
        self.tempdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tempdir)

    def test_load_worked_example(self):
        inst = two_users_one_task()
        self.assertEqual(len(inst.users), 2)
        self.assertEqual(inst.task(1).reward, 10.0)
        self.assertEqual(inst.users[1].exec_cost, {1: 4.9})
        self.assertTrue(math.isinf(inst.users[0].budget))

    def test_field_names(self):
        data = instance_to_dict(two_users_one_task())
        self.assertEqual(set(data), {'tasks', 'users', 'horizon_s'})
        self.assertEqual(set(data['tasks'][0]), {
            'id', 'x_m', 'y_m', 'reward_usd', 'window_open_s', 'window_close_s'})
        self.assertEqual(set(data['users'][0]), {
            'id', 'x_m', 'y_m', 'speed_mps', 'travel_cost_per_m', 'budget_usd', 'tasks'})
        self.assertEqual(set(data['users'][0]['tasks'][0]), {
            'id', 'exec_time_s', 'exec_cost_usd'})

    def test_infinite_budget_written_as_null(self):
        data = json.loads(dumps_instance(two_users_one_task()))
        self.assertIsNone(data['users'][0]['budget_usd'])

    def test_gen_meta_survives(self):
        inst = generate(GenConfig(n_users=2, n_tasks=3, seed=11))
        path = os.path.join(self.tempdir, 'inst.json')
        with io.open(path, 'w', encoding='utf-8') as fp:
            fp.write(dumps_instance(inst))
        loaded = load_instance(path)
        self.assertEqual(loaded.meta['seed'], 11)
        self.assertEqual(dumps_instance(loaded), dumps_instance(inst))

    def test_syntax_error_has_line(self):
        with self.assertRaises(exceptions.InstanceFormatError) as ctx:
            loads_instance('{\n  "tasks": [],\n  "users": [,]\n}')
        self.assertEqual(ctx.exception.line, 3)
        self.assertIn('line 3', str(ctx.exception))

    def test_missing_field_has_path(self):
        with io.open(TWO_USERS_ONE_TASK, encoding='utf-8') as fp:
            data = json.load(fp)
        del data['users'][1]['speed_mps']
        with self.assertRaises(exceptions.InstanceFormatError) as ctx:
            instance_from_dict(data)
        self.assertEqual(ctx.exception.path, 'users[1]')
        self.assertIn('speed_mps', str(ctx.exception))

    def test_wrong_type(self):
        with self.assertRaises(exceptions.InstanceFormatError):
            loads_instance('{"tasks": [{"id": "a"}], "users": [], "horizon_s": 1}')

    def test_not_an_object(self):
        self.assertRaises(exceptions.InstanceFormatError, loads_instance, '[]')
