"""
Caching of per-user candidate schedules, so that several joint searches over
one instance enumerate each user's schedules once.
"""

import logging
from collections import OrderedDict

logger = logging.getLogger(__name__)


class ScheduleCache(object):
    """Bounded cache keyed by (instance, user position).

    Entries hold a reference to their instance and are only returned for
    that same object.

    :param int max_count: Max number of entries; unbounded if None

    """
    def __init__(self, max_count=None):
        self.data = OrderedDict()
        self.max_count = max_count
        self.hits = 0

    def __len__(self):
        return len(self.data)

    def _reduce_count(self):
        """Drop least recently used entries beyond `max_count`."""
        if self.max_count:
            while len(self.data) > self.max_count:
                self.data.popitem(last=False)

    def store(self, inst, i, value):
        """Store the candidates of user `i` of `inst`.

        :param Instance inst: Instance
        :param int i: User position
        :param value: Cached candidates

        """
        self.data[(id(inst), i)] = {
            'instance': inst,
            'value': value,
        }
        logger.info('Stored candidates of user %d in cache', i)
        self._reduce_count()

    def retrieve(self, inst, i):
        """Look up the candidates of user `i` of `inst`; None if absent."""
        key = (id(inst), i)
        entry = self.data.get(key)
        if entry is None or entry['instance'] is not inst:
            return None
        self.data.move_to_end(key)
        self.hits += 1
        logger.info('Retrieved candidates of user %d from cache', i)
        return entry['value']

    def clear(self):
        "Clear cache."
        self.data = OrderedDict()
        self.hits = 0
