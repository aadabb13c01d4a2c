import unittest
from unittest.mock import patch

from dtc_toolkit.config.defaults import (
    get_default_config,
    reset_to_defaults,
    merge_with_defaults,
)


class TestDefaults(unittest.TestCase):
    def test_get_default_config(self):
        config = get_default_config()
        self.assertIn("device", config)
        self.assertIn("log_level", config)
        self.assertEqual(config["idle_flux"], 0.309)

    def test_default_config_is_a_copy(self):
        config = get_default_config()
        config["device"]["node_caps"][0] = 0.0
        self.assertNotEqual(get_default_config()["device"]["node_caps"][0], 0.0)

    def test_readout_rows_are_normalized(self):
        readout = get_default_config()["readout"]
        for table in (readout["q1"], readout["q2"]):
            for row in table:
                self.assertAlmostEqual(sum(row), 1.0, places=9)

    @patch.dict("os.environ", {"DTC_SEED": "7", "DTC_LOG_LEVEL": "DEBUG"})
    def test_environment_overrides(self):
        config = get_default_config()
        self.assertEqual(config["seed"], 7)
        self.assertEqual(config["log_level"], "DEBUG")

    def test_reset_to_defaults(self):
        config = {"key": "value"}
        reset_config = reset_to_defaults(config)
        self.assertIn("device", reset_config)
        self.assertNotIn("key", reset_config)

    def test_merge_with_defaults(self):
        config = {"key": "value", "basis": {"kept_total": 40}}
        merged_config = merge_with_defaults(config)
        self.assertIn("device", merged_config)
        self.assertIn("key", merged_config)
        self.assertEqual(merged_config["basis"]["kept_total"], 40)
        self.assertEqual(merged_config["basis"]["charge_cutoff_qubit"], 15)


if __name__ == "__main__":
    unittest.main()
