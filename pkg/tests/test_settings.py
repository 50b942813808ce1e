import logging
import unittest
from unittest import mock

import _paths  # noqa: F401

from errors import LVMError, SchemaError
from settings import Settings


class TestSettings(unittest.TestCase):
    def test_defaults(self):
        settings = Settings.from_env({})
        self.assertEqual(settings.threads, 1)
        self.assertEqual(settings.log_level, "WARNING")

    def test_values(self):
        settings = Settings.from_env({"LVM_THREADS": " 4 ", "LVM_LOG_LEVEL": "debug"})
        self.assertEqual(settings, Settings(threads=4, log_level="DEBUG"))

    def test_bad_threads(self):
        with self.assertRaises(SchemaError):
            Settings.from_env({"LVM_THREADS": "many"})
        with self.assertRaises(SchemaError):
            Settings.from_env({"LVM_THREADS": "0"})

    def test_bad_level(self):
        # the error is both a toolkit error and a ValueError
        with self.assertRaises(ValueError):
            Settings.from_env({"LVM_LOG_LEVEL": "chatty"})
        with self.assertRaises(LVMError):
            Settings.from_env({"LVM_LOG_LEVEL": "chatty"})

    def test_verbose_wins(self):
        with mock.patch("logging.basicConfig") as basic:
            Settings(log_level="ERROR").configure_logging(verbose=True)
            self.assertEqual(basic.call_args.kwargs["level"], logging.DEBUG)
            Settings(log_level="ERROR").configure_logging()
            self.assertEqual(basic.call_args.kwargs["level"], logging.ERROR)


if __name__ == "__main__":
    unittest.main()
