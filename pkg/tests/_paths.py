"""Puts src/ on sys.path so the flat modules import the same way under unittest and pytest."""
import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SRC = os.path.join(ROOT, "src")
DATA = os.path.join(ROOT, "data")

if SRC not in sys.path:
    sys.path.insert(0, SRC)


def data_file(name):
    return os.path.join(DATA, name)
