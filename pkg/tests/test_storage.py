import os
import sys
import json
import shutil
import tempfile
import unittest

import numpy as np
import pandas as pd

# Add project root to path for imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import src
import src.utils.config as config
from src.storage.result_storage import ResultStorage


class TestResultStorage(unittest.TestCase):
    """Tests for the ResultStorage class."""

    def setUp(self):
        """Set up a scratch output directory."""
        self.out_dir = tempfile.mkdtemp()
        self.table = {
            "t": [0, 1, 2],
            "mean": [0.0, 0.1, 1.0 / 3.0],
            "variance": [0.0, 1.0 - 1e-17, np.pi],
        }

    def tearDown(self):
        shutil.rmtree(self.out_dir, ignore_errors=True)

    def test_init_creates_directory(self):
        target = os.path.join(self.out_dir, "nested", "run")
        ResultStorage(target)
        self.assertTrue(os.path.isdir(target))

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            ResultStorage(self.out_dir, format="parquet")

    def test_generate_path(self):
        storage = ResultStorage(self.out_dir, format="json")
        self.assertEqual(storage._generate_path("moments"), os.path.join(self.out_dir, "moments.json"))
        self.assertEqual(storage._generate_path("moments", "csv"), os.path.join(self.out_dir, "moments.csv"))

    def test_csv_keeps_full_precision(self):
        storage = ResultStorage(self.out_dir)
        path = storage.store_table("moments", self.table)

        self.assertEqual(path, os.path.join(self.out_dir, "moments.csv"))
        with open(path) as f:
            self.assertEqual(f.readline().strip(), "t,mean,variance")
        loaded = storage.load_data("moments")
        self.assertEqual(loaded["mean"].tolist(), self.table["mean"])
        self.assertEqual(loaded["variance"].tolist(), self.table["variance"])

    def test_json_columns(self):
        storage = ResultStorage(self.out_dir, format="json")
        path = storage.store_table("moments", pd.DataFrame(self.table))

        with open(path) as f:
            stored = json.load(f)
        self.assertEqual(list(stored), ["t", "mean", "variance"])
        self.assertEqual(stored["mean"], self.table["mean"])
        self.assertEqual(storage.load_data("moments")["t"].tolist(), [0, 1, 2])

    def test_format_override(self):
        storage = ResultStorage(self.out_dir)
        storage.store_table("moments", self.table, format="json")
        self.assertTrue(storage.check_file_exists("moments", "json"))
        self.assertFalse(storage.check_file_exists("moments"))

    def test_metadata(self):
        storage = ResultStorage(self.out_dir)
        path = storage.store_metadata("simulate", {"steps": 10, "noise": "tunneling"}, {"final_variance": 1.5})

        self.assertEqual(os.path.basename(path), config.METADATA_FILENAME)
        with open(path) as f:
            metadata = json.load(f)
        self.assertEqual(metadata["tool"], "qwalk")
        self.assertEqual(metadata["version"], src.__version__)
        self.assertEqual(metadata["command"], "simulate")
        self.assertEqual(metadata["config"], {"noise": "tunneling", "steps": 10})
        self.assertEqual(metadata["results"], {"final_variance": 1.5})

    def test_metadata_is_reproducible(self):
        storage = ResultStorage(self.out_dir)
        path = storage.store_metadata("verify", {"only": ["walker"]})
        with open(path, "rb") as f:
            first = f.read()
        storage.store_metadata("verify", {"only": ["walker"]})
        with open(path, "rb") as f:
            self.assertEqual(f.read(), first)

    def test_rewrite_is_byte_identical(self):
        storage = ResultStorage(self.out_dir)
        path = storage.store_table("distribution", self.table)
        with open(path, "rb") as f:
            first = f.read()
        storage.store_table("distribution", self.table)
        with open(path, "rb") as f:
            self.assertEqual(f.read(), first)

    def test_list_files(self):
        storage = ResultStorage(self.out_dir)
        storage.store_table("b", self.table)
        storage.store_table("a", self.table)
        os.makedirs(os.path.join(self.out_dir, "subdir"))
        self.assertEqual(storage.list_files(), ["a.csv", "b.csv"])


if __name__ == "__main__":
    unittest.main()
