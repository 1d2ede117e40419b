from __future__ import annotations

import numpy as np
import pytest

from xenopower.datasets import pilot_censored, pilot_uncensored
from xenopower.types import PilotDataset, PilotRecord


@pytest.fixture(scope="session")
def pilot_lognormal() -> PilotDataset:
    """Bundled 18-animal uncensored pilot (3 lines, balanced arms)."""
    return pilot_uncensored()


@pytest.fixture(scope="session")
def pilot_survival() -> PilotDataset:
    """Bundled 18-animal censored pilot (3 lines, 3 censored records)."""
    return pilot_censored()


def dataset_to_pilot(ds) -> PilotDataset:
    """Repackage a SimulatedDataset as a PilotDataset with string ids."""
    rows = tuple(
        PilotRecord(id=str(int(line)), y=float(y), tx=int(tx), status=int(s))
        for line, y, tx, s in zip(ds.line_index, ds.y, ds.tx, ds.status)
    )
    return PilotDataset(rows=rows)


def arm_means_log(ds) -> float:
    """Difference in arm means of log y (treated minus control)."""
    logy = np.log(ds.y)
    return float(logy[ds.tx == 1].mean() - logy[ds.tx == 0].mean())
