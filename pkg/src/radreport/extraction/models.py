from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..ontology import CoarseCategory, LogicalRelation

Span = Tuple[int, int]


@dataclass(frozen=True)
class Entity:
    """实体，text 为首选名，surface 为原文"""
    text: str
    category: CoarseCategory
    span: Span
    chunk_root: bool = False
    pos: str = "NOUN"
    in_lexicon: bool = True
    fine_tag: Optional[str] = None
    surface: str = ""


@dataclass(frozen=True)
class Triple:
    """(主语, 逻辑关系, 宾语)，provenance 为来源句编号"""
    subject: Entity
    relation: LogicalRelation
    object: Entity
    provenance: str = ""
    assertive: bool = True

    def __post_init__(self):
        if self.subject.text == self.object.text:
            raise ValueError(f"三元组不允许自环: {self.subject.text}")

    @property
    def key(self) -> Tuple[str, str, str]:
        return self.subject.text, self.relation.value, self.object.text

    def __str__(self):
        return f"({self.subject.text}, {self.relation.value}, {self.object.text})"


@dataclass
class TraversalState:
    """一句话的遍历状态：登记表跨路径保留，栈在每条叶到根路径开始时清空"""
    subject_registry: Dict[int, List[Tuple[Entity, int]]] = field(default_factory=dict)
    object_registry: Dict[int, List[Tuple[Entity, int, Optional[int]]]] = field(default_factory=dict)
    object_stack: List[Entity] = field(default_factory=list)
    prep_stack: List[object] = field(default_factory=list)
    walks: int = 0

    def start_walk(self):
        self.object_stack.clear()
        self.prep_stack.clear()
        self.walks += 1

    def register_subject(self, verb_id: int, entity: Entity, node_id: int):
        items = self.subject_registry.setdefault(verb_id, [])
        if all(existing != node_id for _, existing in items):
            items.append((entity, node_id))

    def register_object(self, verb_id: int, entity: Entity, node_id: int, link_id: Optional[int]):
        items = self.object_registry.setdefault(verb_id, [])
        if all(existing != node_id for _, existing, _ in items):
            items.append((entity, node_id, link_id))
