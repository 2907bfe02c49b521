from __future__ import annotations

import pytest

from twozero import build_code, build_field, classify_parameters
from twozero.codes import ENGINES, run_engine


@pytest.fixture(scope="session")
def field341():
    return build_field(3, 4)


@pytest.fixture(scope="session")
def params341():
    return classify_parameters(3, 4, 1)


@pytest.fixture(scope="session")
def code341():
    return build_code(3, 4, 1)


@pytest.fixture(scope="session")
def code364():
    return build_code(3, 6, 4)


@pytest.fixture(scope="session")
def code361():
    return build_code(3, 6, 1)


@pytest.fixture(scope="session")
def dists341(code341):
    return {engine: run_engine(code341, engine) for engine in ENGINES}


@pytest.fixture(scope="session")
def dists364(code364):
    return {engine: run_engine(code364, engine) for engine in ENGINES}


@pytest.fixture(scope="session")
def dists361(code361):
    return {engine: run_engine(code361, engine) for engine in ENGINES}
