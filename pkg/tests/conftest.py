import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption("--runslow", action="store_true", default=False, help="Roda também os testes longos")


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "slow: reprodução longa das tabelas de resultados")


def pytest_collection_modifyitems(config: pytest.Config, items: list) -> None:
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="use --runslow para rodar")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
