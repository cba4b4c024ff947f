"""
Tests for the JSON, logging and threading helpers.
"""

import json
import logging
import math
import os
import tempfile
import unittest
import warnings
from unittest import mock

import numpy as np

from ..exceptions import ValidationError
from ..utils import configure_logging, dumps_report, dumps_tsv, load_json, ordered_map, to_jsonable, worker_count


class TestJsonUtils(unittest.TestCase):
    """Test cases for the report helpers."""

    def test_load_json_errors(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "bad.json")
            with open(path, "w") as f:
                f.write("{not json")
            with self.assertRaises(ValidationError):
                load_json(path)
            with open(path, "w") as f:
                json.dump([1, 2], f)
            with self.assertRaises(ValidationError):
                load_json(path)
            with open(path, "w") as f:
                json.dump({"labels": []}, f)
            with self.assertRaises(ValidationError):
                load_json(path, required="matrix")
            self.assertEqual(load_json(path), {"labels": []})

    def test_to_jsonable(self):
        value = to_jsonable({"a": np.arange(3), "b": np.float64(math.inf), 1: np.bool_(True)})
        self.assertEqual(value, {"a": [0, 1, 2], "b": "inf", "1": True})
        self.assertEqual(to_jsonable(np.array([np.nan])), ["nan"])

    def test_dumps_report_sorted(self):
        text = dumps_report({"b": 1, "a": np.int64(2)})
        self.assertTrue(text.endswith("\n"))
        self.assertLess(text.index('"a"'), text.index('"b"'))

    def test_dumps_tsv(self):
        text = dumps_tsv({"name": "x", "m": np.eye(2)})
        lines = text.splitlines()
        self.assertIn('# name: "x"', lines)
        self.assertIn("# matrix: m", lines)
        self.assertIn("1\t1\t1.0", lines)


class TestParallel(unittest.TestCase):
    """Test cases for worker_count and ordered_map."""

    def test_explicit_request(self):
        self.assertEqual(worker_count(4), 4)
        self.assertEqual(worker_count(0), 1)

    def test_environment(self):
        with mock.patch.dict(os.environ, {"EIGENDIST_THREADS": "3"}):
            self.assertEqual(worker_count(), 3)
        with mock.patch.dict(os.environ, {"EIGENDIST_THREADS": "many"}):
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                self.assertEqual(worker_count(), 1)
            self.assertTrue(any(issubclass(w.category, RuntimeWarning) for w in caught))

    def test_order_preserved(self):
        self.assertEqual(ordered_map(lambda x: x * x, range(20), workers=4), [x * x for x in range(20)])


class TestLogging(unittest.TestCase):
    """Test cases for configure_logging."""

    def test_levels_and_single_handler(self):
        logger = configure_logging(1)
        self.assertEqual(logger.level, logging.DEBUG)
        logger = configure_logging(-1)
        self.assertEqual(logger.level, logging.WARNING)
        tagged = [h for h in logger.handlers if getattr(h, '_eigendist_handler', False)]
        self.assertEqual(len(tagged), 1)


if __name__ == "__main__":
    unittest.main()
