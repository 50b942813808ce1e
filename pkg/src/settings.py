"""Tool settings read from the environment (LVM_THREADS, LVM_LOG_LEVEL)."""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from typing import Mapping, Optional

from errors import SchemaError

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"
_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    threads: int = 1
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Settings":
        """
        Builds the settings from environment variables.

        Parameters:
        environ (mapping, optional): defaults to os.environ.

        Returns:
        A Settings instance. Raises SchemaError on malformed values.
        """
        environ = os.environ if environ is None else environ
        # thread count
        raw_threads = environ.get("LVM_THREADS", "1").strip()
        try:
            threads = int(raw_threads)
        except ValueError as exc:
            raise SchemaError(f"LVM_THREADS must be an integer, got {raw_threads!r}") from exc
        if threads < 1:
            raise SchemaError(f"LVM_THREADS must be >= 1, got {threads}")
        # log level by name
        level = environ.get("LVM_LOG_LEVEL", "WARNING").strip().upper()
        if level not in _LEVELS:
            raise SchemaError(f"LVM_LOG_LEVEL must be one of {', '.join(_LEVELS)}")
        return cls(threads=threads, log_level=level)

    def configure_logging(self, verbose: bool = False) -> None:
        ''' Installs the root handler; only the command-line entry point calls this '''
        level = logging.DEBUG if verbose else getattr(logging, self.log_level)
        logging.basicConfig(level=level, format=LOG_FORMAT)


if __name__ == "__main__":
    print(Settings.from_env())
