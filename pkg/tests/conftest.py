from pathlib import Path

import pytest

from oilleak.scenario import scenario_from_mapping

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def drain_bench_mapping():
    return {
        "label": "drain-bench",
        "oil": {"density_oil": 900.0},
        "tank": {"free_surface_area": 100.0, "tank_height": 5.0,
                 "initial_liquid_level": 4.0},
        "breach": {"area": 0.01, "height_above_keel": 0.0,
                   "discharge_coefficient": 0.61},
        "environment": {"draft": 0.0},
    }


def two_stage_mapping(sealed: bool = True):
    tank = {"free_surface_area": 100.0, "tank_height": 10.0,
            "initial_liquid_level": 8.0}
    if sealed:
        tank.update(ullage="sealed", initial_gas_pressure=101325.0,
                    initial_gas_volume=20.0)
    return {
        "label": "two-stage-ref",
        "oil": {"density_oil": 900.0},
        "tank": tank,
        "breach": {"area": 0.01, "height_above_keel": 1.0,
                   "position": "below_waterline",
                   "discharge_coefficient": 0.61},
        "environment": {"density_water": 1025.0, "draft": 5.0,
                        "wind_speed": 10.0},
    }


@pytest.fixture
def drain_bench():
    return scenario_from_mapping(drain_bench_mapping())


@pytest.fixture
def two_stage_sealed():
    return scenario_from_mapping(two_stage_mapping(sealed=True))


@pytest.fixture
def two_stage_vented():
    return scenario_from_mapping(two_stage_mapping(sealed=False))


@pytest.fixture
def torricelli_demo():
    from oilleak.scenario import load_scenario
    return load_scenario(SCENARIO_DIR / "torricelli_demo.yaml")
