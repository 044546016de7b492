import pickle
import unittest

from tsgame import exceptions
from tsgame.model import ValidationReport, Violation


def round_trip(error):
    return pickle.loads(pickle.dumps(error))


class TestPickle(unittest.TestCase):

    def test_cap_exceeded(self):
        error = round_trip(exceptions.CapExceededError('joint search', 5, 3))
        self.assertIsInstance(error, exceptions.CapExceededError)
        self.assertEqual((error.what, error.size, error.cap), ('joint search', 5, 3))
        self.assertIn('exceeds cap 3', str(error))

    def test_validation(self):
        report = ValidationReport([Violation('task', 1, 'negative reward')])
        error = round_trip(exceptions.ValidationError(report))
        self.assertIsInstance(error.report, ValidationReport)
        self.assertEqual(error.report.violations[0].id, 1)
        self.assertEqual(str(error), str(report))

    def test_instance_format(self):
        error = round_trip(exceptions.InstanceFormatError('bad', line=3, path='users[0]'))
        self.assertEqual((error.line, error.path), (3, 'users[0]'))
        self.assertEqual(str(error), 'line 3, users[0]: bad')
