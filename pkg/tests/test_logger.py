import os
import sys
import json
import shutil
import tempfile
import unittest
from unittest.mock import patch

import psutil

# Add project root to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from src.utils.logger import WalkLogger, get_logger, rss_megabytes


class TestWalkLogger(unittest.TestCase):
    """Tests for the WalkLogger class."""

    def setUp(self):
        self.log_dir = tempfile.mkdtemp()
        self.logger = WalkLogger(f"test_{self.id().rsplit('.', 1)[-1]}", self.log_dir)

    def tearDown(self):
        for handler in list(self.logger.logger.handlers):
            handler.close()
            self.logger.logger.removeHandler(handler)
        shutil.rmtree(self.log_dir, ignore_errors=True)

    def test_metrics_initialization(self):
        self.assertEqual(self.logger.metrics["operations"], {})
        self.assertEqual(self.logger.metrics["checks"], {"passed": 0, "failed": 0})
        self.assertIsNone(self.logger.metrics["peak_rss_mb"])
        self.assertTrue(self.logger.logger.name.startswith("qwalk."))

    def test_log_file_written(self):
        self.logger.info("step done")
        for handler in self.logger.logger.handlers:
            handler.flush()
        with open(os.path.join(self.log_dir, f"{self.logger.name}.log")) as f:
            self.assertIn("step done", f.read())

    def test_sample_memory_tracks_peak(self):
        with patch("src.utils.logger.rss_megabytes", side_effect=[120.0, 80.0]):
            self.logger.sample_memory()
            self.logger.sample_memory()
        self.assertEqual(self.logger.metrics["peak_rss_mb"], 120.0)

    def test_unreadable_memory(self):
        with patch("psutil.Process", side_effect=psutil.AccessDenied()):
            self.assertIsNone(rss_megabytes())
            self.assertIsNone(self.logger.sample_memory())
        self.assertIsNone(self.logger.metrics["peak_rss_mb"])

    def test_timed_success(self):
        @self.logger.timed("simulate")
        def work(x):
            return x * 2

        self.assertEqual(work(21), 42)
        self.assertEqual(len(self.logger.metrics["operations"]["simulate"]), 1)

    def test_timed_failure(self):
        @self.logger.timed("verify")
        def broken():
            raise ValueError("bad input")

        with self.assertRaises(ValueError):
            broken()
        self.assertEqual(len(self.logger.metrics["operations"]["verify"]), 1)
        error = self.logger.metrics["errors"][0]
        self.assertEqual(error["type"], "ValueError")
        self.assertEqual(error["context"], {"operation": "verify"})

    def test_error_with_context(self):
        self.logger.error("overflow", RuntimeError("edge"), {"t": 12})
        error = self.logger.metrics["errors"][0]
        self.assertEqual(error["message"], "edge")
        self.assertEqual(error["context"], {"t": 12})

    def test_error_without_exception_not_recorded(self):
        self.logger.error("plain message")
        self.assertEqual(self.logger.metrics["errors"], [])

    def test_record_step(self):
        self.logger.record_step("tunneling", 42, 0.5)
        self.logger.record_step("tunneling", 82, 1.5)
        steps = self.logger.summary()["steps"]["tunneling"]
        self.assertEqual(steps["count"], 2)
        self.assertEqual(steps["max_dim"], 82)
        self.assertAlmostEqual(steps["mean"], 1.0)

    def test_record_check(self):
        self.logger.record_check(True)
        self.logger.record_check(True)
        self.logger.record_check(False)
        self.assertEqual(self.logger.summary()["checks"], {"passed": 2, "failed": 1})

    def test_summary(self):
        @self.logger.timed("negativity")
        def work():
            return None

        work()
        work()
        summary = self.logger.summary()
        self.assertEqual(summary["operations"]["negativity"]["count"], 2)
        self.assertEqual(summary["error_count"], 0)
        self.assertGreaterEqual(summary["elapsed"], 0.0)

    def test_save_metrics(self):
        self.logger.record_step("coherent", 10, 0.1)
        path = self.logger.save_metrics(os.path.join(self.log_dir, "metrics.json"))
        with open(path) as f:
            saved = json.load(f)
        self.assertIn("coherent", saved["metrics"]["steps"])
        self.assertEqual(saved["summary"]["steps"]["coherent"]["count"], 1)

    def test_save_metrics_default_path(self):
        path = self.logger.save_metrics()
        self.assertEqual(path, os.path.join(self.log_dir, f"{self.logger.name}_metrics.json"))
        self.assertTrue(os.path.exists(path))

    def test_handlers_attached_once(self):
        again = WalkLogger(self.logger.name, self.log_dir)
        self.assertEqual(len(again.logger.handlers), 2)


class TestGetLogger(unittest.TestCase):
    """Tests for the shared logger accessor."""

    def test_cached_per_name(self):
        self.assertIs(get_logger("walker"), get_logger("walker"))
        self.assertIsNot(get_logger("walker"), get_logger("storage"))


if __name__ == "__main__":
    unittest.main()
