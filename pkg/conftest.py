"""pytest 公共夹具：两个示例实例与矩阵文件读取"""
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT))

from src.algebra.parsing import parse_polynomial  # noqa: E402
from src.cli import load_instance, load_matrix  # noqa: E402

FIXTURES = ROOT / "fixtures"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 随机实例上的大规模检查（用 -m 'not slow' 跳过）")


@pytest.fixture(scope="session")
def ex51():
    return load_instance(FIXTURES / "ex51").to_instance()


@pytest.fixture(scope="session")
def ex52():
    return load_instance(FIXTURES / "ex52").to_instance()


@pytest.fixture(scope="session")
def fixture_matrix():
    """按名字读取 fixtures/ 下的矩阵文件"""
    def load(name, variables=("s", "t")):
        return load_matrix(FIXTURES / name, variables)
    return load


@pytest.fixture(scope="session")
def poly():
    """poly("s^2 - t") 或 poly("x - 1", ("x",))"""
    def make(text, variables=("s", "t")):
        return parse_polynomial(text, variables)
    return make
