import os

import pytest
from hypothesis import HealthCheck, settings

from utils.config import Config
from utils.data_manager import DataManager

FIXTURES = Config.fixtures_path()

settings.register_profile('thorough', deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv('HYPOTHESIS_PROFILE', 'default'))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def corpus_dir():
    return os.path.join(FIXTURES, 'corpus')


@pytest.fixture
def models_dir():
    return os.path.join(FIXTURES, 'models')


@pytest.fixture
def bad_dir():
    return os.path.join(FIXTURES, 'bad')


@pytest.fixture
def manager(tmp_path):
    return DataManager(str(tmp_path / 'results'))
