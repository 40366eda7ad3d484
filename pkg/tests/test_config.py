"""Tests for src.core.config."""
import json
import os
import tempfile
import unittest

from src.core import config as config_module


class TestConfig(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "hilbloc.json")

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def _write(self, data) -> None:
        with open(self.path, "w", encoding="utf-8") as f:
            json.dump(data, f)

    def test_missing_file_gives_defaults(self) -> None:
        cfg = config_module.load([self.path])
        self.assertEqual(cfg, config_module.DEFAULTS)

    def test_load_has_expected_keys(self) -> None:
        cfg = config_module.load([self.path])
        for key in ("cache_dir", "use_cache", "max_pairs", "max_degree", "default_order", "seed", "output_format"):
            self.assertIn(key, cfg)

    def test_valid_overrides_apply(self) -> None:
        self._write({"max_degree": 12, "default_order": "lex", "use_cache": False, "output_format": "kv"})
        cfg = config_module.load([self.path])
        self.assertEqual(cfg["max_degree"], 12)
        self.assertEqual(cfg["default_order"], "lex")
        self.assertFalse(cfg["use_cache"])
        self.assertEqual(cfg["output_format"], "kv")

    def test_invalid_values_are_ignored(self) -> None:
        self._write({"max_degree": 0, "seed": -4, "default_order": "deglex", "max_pairs": True, "unknown": 1})
        cfg = config_module.load([self.path])
        self.assertEqual(cfg["max_degree"], config_module.DEFAULTS["max_degree"])
        self.assertEqual(cfg["seed"], config_module.DEFAULTS["seed"])
        self.assertEqual(cfg["default_order"], config_module.DEFAULTS["default_order"])
        self.assertEqual(cfg["max_pairs"], config_module.DEFAULTS["max_pairs"])
        self.assertNotIn("unknown", cfg)

    def test_broken_json_falls_back(self) -> None:
        with open(self.path, "w", encoding="utf-8") as f:
            f.write("{not json")
        self.assertEqual(config_module.load([self.path]), config_module.DEFAULTS)

    def test_save_then_load(self) -> None:
        cfg = dict(config_module.DEFAULTS, seed=7, max_pairs=500)
        config_module.save(cfg, self.path)
        loaded = config_module.load([self.path])
        self.assertEqual(loaded["seed"], 7)
        self.assertEqual(loaded["max_pairs"], 500)


if __name__ == "__main__":
    unittest.main()
