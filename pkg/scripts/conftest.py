"""
测试公共夹具
所有夹具都基于 data/run_config.json 指向的示例数据
"""

import os
import sys

import pytest

# 添加项目根目录到Python路径
ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.append(ROOT_DIR)

from src.radreport.config import load_run_config  # noqa: E402
from src.radreport.main import build_extractor, build_generator, load_organ_kgs, spell_frequencies  # noqa: E402
from src.radreport.lexicon import load_lexicon  # noqa: E402
from src.radreport.preprocess import build_spell_index, load_section_patterns  # noqa: E402

DATA_DIR = os.path.join(ROOT_DIR, "data")
CONFIG_PATH = os.path.join(DATA_DIR, "run_config.json")


def data_path(*parts):
    return os.path.join(DATA_DIR, *parts)


@pytest.fixture(scope="session")
def config():
    return load_run_config(CONFIG_PATH)


@pytest.fixture(scope="session")
def lexicon(config):
    return load_lexicon(config.lexicon_files)


@pytest.fixture(scope="session")
def extractor(config):
    return build_extractor(config)


@pytest.fixture(scope="session")
def senses(extractor):
    return extractor.senses


@pytest.fixture(scope="session")
def spell_index(config, lexicon):
    return build_spell_index(spell_frequencies(config, lexicon), config.max_edit_distance)


@pytest.fixture(scope="session")
def section_patterns(config):
    return load_section_patterns(config.section_patterns)


@pytest.fixture
def kgs(config, lexicon):
    """每个测试拿到新加载的图谱，扩充测试之间互不影响"""
    return load_organ_kgs(config, lexicon)


@pytest.fixture(scope="session")
def generator(config):
    return build_generator(config)
