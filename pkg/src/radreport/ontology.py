"""
放射学本体
五个高层类、它们的子类以及逻辑关系的封闭集合
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Optional, Tuple


class CoarseCategory(Enum):
    """本体高层类别"""
    ANATOMY = "Anatomy"
    FINDING = "Finding"
    OBSERVATION = "Observation"
    PROPERTY = "Property"
    MODIFIER = "Modifier"

    @classmethod
    def parse(cls, value: str) -> "CoarseCategory":
        for member in cls:
            if member.value.lower() == str(value).strip().lower():
                return member
        raise ValueError(f"不支持的本体类别: {value}")


class LogicalRelation(Enum):
    """逻辑关系，序列化名称即枚举值"""
    PART_OF = "PartOf"
    TYPE_OF = "TypeOf"
    MODIFIER_OF = "ModifierOf"
    OBSERVATION_OF = "ObservationOf"
    DEFAULT_OBSERVATION_OF = "DefaultObservationOf"
    PROPERTY_OF = "PropertyOf"
    DEFAULT_PROPERTY_OF = "DefaultPropertyOf"
    FOUND_IN = "FoundIn"
    OBSERVED_IN = "ObservedIn"

    @classmethod
    def parse(cls, value: str) -> "LogicalRelation":
        for member in cls:
            if member.value == str(value).strip():
                return member
        raise ValueError(f"不支持的逻辑关系: {value}")


LOCATION_RELATIONS = frozenset({LogicalRelation.FOUND_IN, LogicalRelation.OBSERVED_IN})
DEFAULT_RELATIONS = frozenset({LogicalRelation.DEFAULT_OBSERVATION_OF, LogicalRelation.DEFAULT_PROPERTY_OF})

_ALL = frozenset(CoarseCategory)
_LOCATABLE = frozenset({CoarseCategory.FINDING, CoarseCategory.OBSERVATION})

# 关系签名: (允许的主语类别, 允许的宾语类别)
RELATION_SIGNATURES: Dict[LogicalRelation, Tuple[FrozenSet[CoarseCategory], FrozenSet[CoarseCategory]]] = {
    LogicalRelation.PART_OF: (frozenset({CoarseCategory.ANATOMY}), frozenset({CoarseCategory.ANATOMY})),
    LogicalRelation.FOUND_IN: (_LOCATABLE, frozenset({CoarseCategory.ANATOMY})),
    LogicalRelation.OBSERVED_IN: (_LOCATABLE, frozenset({CoarseCategory.ANATOMY})),
    LogicalRelation.PROPERTY_OF: (frozenset({CoarseCategory.PROPERTY}), _ALL),
    LogicalRelation.MODIFIER_OF: (frozenset({CoarseCategory.MODIFIER}), _ALL),
}


def signature_allows(relation: LogicalRelation, subject: CoarseCategory, obj: CoarseCategory) -> bool:
    """关系两端的类别是否满足签名，未登记签名的关系不受限制"""
    allowed = RELATION_SIGNATURES.get(relation)
    if allowed is None:
        return True
    return subject in allowed[0] and obj in allowed[1]


@dataclass(frozen=True)
class OntologyClass:
    """本体类，父类为空的只有顶层类"""
    name: str
    parent: Optional["OntologyClass"] = None

    def lineage(self):
        node, chain = self, []
        while node is not None:
            chain.append(node.name)
            node = node.parent
        return chain

    def is_a(self, name: str) -> bool:
        return name in self.lineage()


THING = OntologyClass("Thing")
ONTOLOGY_CLASSES: Dict[str, OntologyClass] = {"Thing": THING}
for _category in CoarseCategory:
    ONTOLOGY_CLASSES[_category.value] = OntologyClass(_category.value, THING)

# 细粒度子类，对应词典中的 fine_tag
_SUBCLASSES = {
    "Finding": ["inflammation", "disease", "injury", "cyst", "calculus", "lesion", "pathologic-finding"],
    "Modifier": ["size-modifier", "anatomy-modifier", "severity-modifier", "shape-modifier"],
    "Observation": ["fluid", "mass"],
}
for _parent, _children in _SUBCLASSES.items():
    for _child in _children:
        ONTOLOGY_CLASSES[_child] = OntologyClass(_child, ONTOLOGY_CLASSES[_parent])


def ontology_class(name: str) -> OntologyClass:
    """按名称取本体类（大小写不敏感的高层类名或已登记的细粒度标签）"""
    if name in ONTOLOGY_CLASSES:
        return ONTOLOGY_CLASSES[name]
    return ONTOLOGY_CLASSES[CoarseCategory.parse(name).value]
