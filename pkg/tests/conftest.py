from __future__ import annotations

import json
from pathlib import Path

import pytest

from awplan import (
    CalibrationPoint,
    NetworkTopology,
    PathMetrics,
    SpectrumGrid,
    calibrate,
    parse_topology,
)

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "src" / "awplan" / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def calib_points() -> list[CalibrationPoint]:
    data = json.loads((FIXTURE_DIR / "reference.calib.json").read_text())
    return [CalibrationPoint.from_dict(item) for item in data]


@pytest.fixture(scope="session")
def model(calib_points):
    return calibrate(calib_points)


@pytest.fixture(scope="session")
def garr() -> NetworkTopology:
    return parse_topology((FIXTURE_DIR / "garr.topo.json").read_text())


@pytest.fixture(scope="session")
def busy_grid() -> SpectrumGrid:
    data = json.loads((FIXTURE_DIR / "busy.grid.json").read_text())
    return SpectrumGrid.from_dict(data)


@pytest.fixture()
def clean_metrics():
    """Factory for path metrics where only distance matters."""

    def make(distance_km: float, roadm_count: int = 0) -> PathMetrics:
        return PathMetrics(
            distance_km=distance_km,
            attenuation_db=0.0,
            ola_count=0,
            roadm_count=roadm_count,
            raman_span_count=0,
        )

    return make
