"""
pytest 公共夹具
"""
import pytest

from src.infrastructure.logging_setup import configure_logging
from tests.support import PROJECT_ROOT


@pytest.fixture(scope="session", autouse=True)
def quiet_logging():
    configure_logging("WARNING")
    yield


@pytest.fixture
def project_cwd(monkeypatch):
    """配置中的相对路径以项目根目录为基准"""
    monkeypatch.chdir(PROJECT_ROOT)
    return PROJECT_ROOT
