import unittest
from pathlib import Path

from pydantic import ValidationError

from dtc_toolkit.models.config import LogLevel, RunConfig


class TestRunConfig(unittest.TestCase):
    def test_defaults(self):
        run = RunConfig()
        self.assertIsNone(run.device)
        self.assertEqual(run.output_dir, Path("dtc_output"))
        self.assertEqual(run.seed, 0)
        self.assertEqual(run.threads, 1)
        self.assertEqual(run.log_level, LogLevel.INFO)

    def test_command_params_are_copies(self):
        run = RunConfig(commands={"rb-sim": {"shots": 100}})
        params = run.command_params("rb-sim")
        params["shots"] = 1
        self.assertEqual(run.command_params("rb-sim"), {"shots": 100})

    def test_rejects_invalid_values(self):
        with self.assertRaises(ValidationError):
            RunConfig(threads=0)
        with self.assertRaises(ValidationError):
            RunConfig(seed=-1)
        with self.assertRaises(ValidationError):
            RunConfig(log_level="LOUD")

    def test_rejects_missing_referenced_files(self):
        with self.assertRaises(ValidationError):
            RunConfig(commands={"lrb-fit": {"srb_file": "/nonexistent/srb.csv"}})

    def test_rejects_missing_device_file(self):
        with self.assertRaises(ValidationError):
            RunConfig(device=Path("/nonexistent/device.json"))

    def test_to_dict(self):
        run = RunConfig(seed=4, commands={"zz-scan": {"points": 3}})
        data = run.to_dict()
        self.assertEqual(data["seed"], 4)
        self.assertEqual(data["commands"], {"zz-scan": {"points": 3}})


if __name__ == "__main__":
    unittest.main()
