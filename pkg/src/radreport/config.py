import json
import logging
import os
from pathlib import Path
from typing import Dict, List, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

# 基础目录配置
BASE_DIR = Path(__file__).resolve().parent.parent.parent
DATA_DIR = os.path.join(BASE_DIR, "data")
LOG_DIR = os.path.join(BASE_DIR, "logs")
OUTPUT_DIR = os.path.join(BASE_DIR, "output")
DEFAULT_CONFIG_PATH = os.getenv("RADREPORT_CONFIG", os.path.join(DATA_DIR, "run_config.json"))

# 确保输出目录存在
os.makedirs(LOG_DIR, exist_ok=True)
os.makedirs(OUTPUT_DIR, exist_ok=True)

# 应用配置
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
KG_NAMESPACE = os.getenv("RADREPORT_KG_NAMESPACE", "http://radreport.local/kg/")

# 抽取配置
DEFAULT_NEGATION_TRIGGERS = ["no evidence of", "no", "not seen", "not visualized", "absent"]
DEFAULT_SUBJECT_LABELS = ["nsubj", "nsubjpass"]
DEFAULT_OBJECT_LABELS = ["pobj", "dobj", "attr"]

# 生成配置
DEFAULT_PROPERTY_ORDER = [
    "size", "shape", "contour", "outline", "margin", "wall",
    "echotexture", "echogenicity", "echopattern", "attenuation", "enhancement",
]

# 文件路径类配置项，校验时要求路径存在
PATH_FIELDS = (
    "supersense_map", "prep_senses", "chunk_patterns", "category_patterns",
    "section_patterns", "word_frequencies", "description_templates",
    "parallel_corpus", "normal_template",
)


class RunConfig(BaseModel):
    """一次可复现运行的全部配置"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    # 路径
    lexicon_files: List[str] = Field(..., description="词典文件，后加载者覆盖先加载者")
    supersense_map: str = Field(..., description="超义项到逻辑关系的映射")
    prep_senses: str = Field(..., description="介词默认超义项")
    chunk_patterns: str = Field(..., description="名词短语内部模式")
    category_patterns: str = Field(..., description="实体类别对模式")
    section_patterns: str = Field(..., description="报告分节标题模式")
    word_frequencies: str = Field(..., description="拼写纠错词频表")
    preliminary_kgs: Dict[str, str] = Field(..., description="器官 -> 初始知识图谱文件")
    description_templates: str = Field(..., description="病理描述模板")
    parallel_corpus: str = Field(..., description="口述-正常句平行语料")
    normal_template: str = Field(..., description="正常报告模板")

    # 阈值
    match_threshold: float = Field(0.3, ge=0.0, le=1.0, description="BLEU匹配阈值")
    max_edit_distance: int = Field(2, description="拼写纠错最大编辑距离")

    # 模式
    annotation_mode: Literal["fallback", "file"] = "fallback"
    bleu_smoothing: bool = True
    mask_measurements: bool = True

    # 列表配置
    negation_triggers: List[str] = Field(default_factory=lambda: list(DEFAULT_NEGATION_TRIGGERS))
    abbreviations: List[str] = Field(default_factory=lambda: ["e.g.", "i.e.", "dr.", "approx.", "vs.", "vol."])
    strip_chars: str = "-*•:;,"
    subject_labels: List[str] = Field(default_factory=lambda: list(DEFAULT_SUBJECT_LABELS))
    object_labels: List[str] = Field(default_factory=lambda: list(DEFAULT_OBJECT_LABELS))
    property_order: List[str] = Field(default_factory=lambda: list(DEFAULT_PROPERTY_ORDER))
    namespace: str = KG_NAMESPACE

    @field_validator("max_edit_distance")
    @classmethod
    def _check_distance(cls, value: int) -> int:
        if value not in (1, 2):
            raise ValueError(f"max_edit_distance 只能是1或2，收到: {value}")
        return value

    @field_validator(*PATH_FIELDS)
    @classmethod
    def _check_path(cls, value: str) -> str:
        if not os.path.exists(value):
            raise ValueError(f"路径不存在: {value}")
        return value

    @field_validator("lexicon_files")
    @classmethod
    def _check_lexicons(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("至少需要一个词典文件")
        missing = [path for path in value if not os.path.exists(path)]
        if missing:
            raise ValueError(f"路径不存在: {', '.join(missing)}")
        return value

    @field_validator("preliminary_kgs")
    @classmethod
    def _check_kgs(cls, value: Dict[str, str]) -> Dict[str, str]:
        missing = [f"{organ}={path}" for organ, path in value.items() if not os.path.exists(path)]
        if missing:
            raise ValueError(f"路径不存在: {', '.join(missing)}")
        return value


def _resolve(base: str, value):
    if isinstance(value, str):
        return value if os.path.isabs(value) else os.path.normpath(os.path.join(base, value))
    if isinstance(value, list):
        return [_resolve(base, item) for item in value]
    if isinstance(value, dict):
        return {key: _resolve(base, item) for key, item in value.items()}
    return value


def load_run_config(path: str = DEFAULT_CONFIG_PATH) -> RunConfig:
    """加载并校验运行配置

    Args:
        path: JSON配置文件路径，相对路径按配置文件所在目录解析

    Returns:
        RunConfig: 校验通过的配置

    Raises:
        ConfigError: 文件缺失、JSON格式错误、未知配置项或引用路径不存在
    """
    if not os.path.exists(path):
        raise ConfigError("config", f"配置文件不存在: {path}")

    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError("config", f"配置文件不是合法JSON: {e}")

    if not isinstance(raw, dict):
        raise ConfigError("config", "配置文件顶层必须是对象")

    base = os.path.dirname(os.path.abspath(path))
    resolved = dict(raw)
    for key in ("lexicon_files", "preliminary_kgs") + PATH_FIELDS:
        if key in resolved:
            resolved[key] = _resolve(base, resolved[key])

    try:
        config = RunConfig.model_validate(resolved)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first["loc"]) or "config"
        raise ConfigError(key, first["msg"])

    logger.info(f"配置加载完成: {path}")
    return config
