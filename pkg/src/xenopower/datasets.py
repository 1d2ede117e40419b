"""Small bundled pilot datasets for demos and smoke checks.

Both are 18-animal, 3-line pilot experiments with two balanced arms; the
censored one carries a status column with three administratively censored
records.
"""

from __future__ import annotations

from importlib import resources

from .io import read_pilot_csv
from .types import PilotDataset

__all__ = ["pilot_uncensored", "pilot_censored", "pilot_path"]


def pilot_path(name: str):
    """Filesystem path of a bundled pilot CSV ('uncensored' or 'censored')."""
    if name not in ("uncensored", "censored"):
        raise ValueError(f"unknown pilot dataset {name!r}")
    return resources.files(__package__) / "data" / f"pilot_{name}.csv"


def pilot_uncensored() -> PilotDataset:
    return read_pilot_csv(pilot_path("uncensored"))


def pilot_censored() -> PilotDataset:
    return read_pilot_csv(pilot_path("censored"))
