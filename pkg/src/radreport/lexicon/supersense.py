import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

from ..ontology import LogicalRelation
from ..utils import read_tsv

logger = logging.getLogger(__name__)

# 随项目发布的默认映射，可由配置文件扩展
DEFAULT_RELATION_MAP = {
    "locus": LogicalRelation.FOUND_IN,
    "gestalt": LogicalRelation.PART_OF,
    "partportion": LogicalRelation.PART_OF,
    "whole": LogicalRelation.PART_OF,
    "manner": LogicalRelation.PROPERTY_OF,
    "purpose": LogicalRelation.PROPERTY_OF,
}

# 只作信息展示、不参与关系推断的名词性超义项
NOMINAL_SUPERSENSES = ("BODY", "LOCATION", "COGNITION")


def _key(label: Optional[str]) -> str:
    return (label or "").strip().replace("_", "").replace("-", "").lower()


@dataclass
class SupersenseLexicon:
    """介词默认超义项和超义项->逻辑关系映射（标签大小写不敏感）"""
    prep_default: Dict[str, str] = field(default_factory=dict)
    relation_map: Dict[str, LogicalRelation] = field(default_factory=lambda: dict(DEFAULT_RELATION_MAP))

    def sense_of(self, preposition: str) -> Optional[str]:
        return self.prep_default.get(preposition.strip().lower())

    def map_supersense(self, supersense: Optional[str]) -> Optional[LogicalRelation]:
        return self.relation_map.get(_key(supersense))

    def is_part_whole(self, supersense: Optional[str]) -> bool:
        return self.map_supersense(supersense) == LogicalRelation.PART_OF


def map_supersense(supersense: Optional[str], senses: Optional[SupersenseLexicon] = None) -> Optional[LogicalRelation]:
    """超义项 -> 逻辑关系，未映射的标签返回 None"""
    if senses is not None:
        return senses.map_supersense(supersense)
    return DEFAULT_RELATION_MAP.get(_key(supersense))


def load_supersense_lexicon(relation_map_path: str, prep_senses_path: str) -> SupersenseLexicon:
    """加载超义项映射和介词默认超义项

    Args:
        relation_map_path: `supersense<TAB>relation`
        prep_senses_path: `preposition<TAB>supersense`

    Returns:
        SupersenseLexicon
    """
    relation_map = dict(DEFAULT_RELATION_MAP)
    for row in read_tsv(relation_map_path, ["supersense", "relation"], required=2).itertuples(index=False):
        relation_map[_key(row.supersense)] = LogicalRelation.parse(row.relation)

    prep_default = {}
    for row in read_tsv(prep_senses_path, ["preposition", "supersense"], required=2).itertuples(index=False):
        prep_default[row.preposition.lower()] = row.supersense

    logger.info(f"超义项映射 {len(relation_map)} 条，介词默认超义项 {len(prep_default)} 条")
    return SupersenseLexicon(prep_default=prep_default, relation_map=relation_map)
