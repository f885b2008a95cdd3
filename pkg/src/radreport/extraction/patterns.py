"""
抽取模式表
名词短语内部模式（如 "ADJ* NOUN/root"）和实体类别对模式（如 Finding Anatomy -> FoundIn）
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..exceptions import ParseError
from ..ontology import CoarseCategory, LogicalRelation
from ..utils import read_tsv
from .models import Entity, Triple

logger = logging.getLogger(__name__)

CATEGORY_LABELS = {category.value for category in CoarseCategory}


@dataclass(frozen=True)
class SlotSpec:
    label: str
    is_root: bool = False
    repeated: bool = False

    @property
    def is_category(self) -> bool:
        return self.label in CATEGORY_LABELS

    def matches(self, entity: Entity) -> bool:
        if self.is_category:
            return entity.in_lexicon and entity.category.value == self.label
        return entity.pos == self.label

    @classmethod
    def parse(cls, text: str) -> "SlotSpec":
        is_root = text.endswith("/root")
        label = text[:-len("/root")] if is_root else text
        repeated = label.endswith("*")
        return cls(label.rstrip("*"), is_root, repeated)


@dataclass(frozen=True)
class ChunkPattern:
    """短语内模式，subject_slot/object_slot 为从1开始的槽位序号"""
    slots: Tuple[SlotSpec, ...]
    subject_slot: int
    relation: LogicalRelation
    object_slot: int

    def __post_init__(self):
        roots = [slot for slot in self.slots if slot.is_root]
        if len(roots) != 1:
            raise ValueError("短语内模式必须恰有一个 /root 槽位")
        for index in (self.subject_slot, self.object_slot):
            if not 1 <= index <= len(self.slots):
                raise ValueError(f"槽位序号 {index} 越界")

    @property
    def root_position(self) -> int:
        return next(i for i, slot in enumerate(self.slots, start=1) if slot.is_root)

    @property
    def is_category_pattern(self) -> bool:
        return all(slot.is_category for slot in self.slots)

    def apply(self, dependent: Entity, root: Entity, provenance: str = "") -> Optional[Triple]:
        """依附实体和中心实体都匹配时生成三元组"""
        root_position = self.root_position
        if not self.slots[root_position - 1].matches(root):
            return None
        if not any(slot.matches(dependent) for slot in self.slots if not slot.is_root):
            return None

        def pick(position):
            return root if position == root_position else dependent

        subject, obj = pick(self.subject_slot), pick(self.object_slot)
        if subject.text == obj.text:
            return None
        return Triple(subject, self.relation, obj, provenance)

    def describe(self) -> str:
        return " ".join(slot.label + ("*" if slot.repeated else "") + ("/root" if slot.is_root else "")
                        for slot in self.slots)


def order_patterns(patterns: Sequence[ChunkPattern]) -> List[ChunkPattern]:
    """类别模式优先于词性模式，同一层内保持文件顺序"""
    return [p for p in patterns if p.is_category_pattern] + [p for p in patterns if not p.is_category_pattern]


def load_chunk_patterns(path: str) -> List[ChunkPattern]:
    """加载 `slot1 slot2[/root] ...<TAB>subject_slot<TAB>relation<TAB>object_slot`"""
    patterns = []
    df = read_tsv(path, ["slots", "subject_slot", "relation", "object_slot"], required=4)
    for line, row in enumerate(df.itertuples(index=False), start=1):
        try:
            patterns.append(ChunkPattern(
                slots=tuple(SlotSpec.parse(part) for part in row.slots.split()),
                subject_slot=int(row.subject_slot),
                relation=LogicalRelation.parse(row.relation),
                object_slot=int(row.object_slot),
            ))
        except ValueError as e:
            raise ParseError(line, f"{path}: {e}")
    logger.info(f"加载 {len(patterns)} 条短语内模式")
    return order_patterns(patterns)


@dataclass(frozen=True)
class CategoryPattern:
    pair: Tuple[CoarseCategory, CoarseCategory]
    relation: LogicalRelation


class CategoryPatternTable:
    """类别对 -> 关系，先按 (主语, 宾语) 方向查，再查反方向"""

    def __init__(self, patterns: Sequence[CategoryPattern] = ()):
        self._table: Dict[Tuple[CoarseCategory, CoarseCategory], LogicalRelation] = {}
        for pattern in patterns:
            if pattern.pair in self._table:
                raise ValueError(f"类别对重复: {pattern.pair[0].value} {pattern.pair[1].value}")
            self._table[pattern.pair] = pattern.relation

    def __len__(self):
        return len(self._table)

    def relation_for(self, subject: CoarseCategory, obj: CoarseCategory) -> Optional[LogicalRelation]:
        return self._table.get((subject, obj))

    def apply(self, first: Entity, second: Entity, provenance: str = "") -> Optional[Triple]:
        if first.text == second.text:
            return None
        relation = self.relation_for(first.category, second.category)
        if relation is not None:
            return Triple(first, relation, second, provenance)
        relation = self.relation_for(second.category, first.category)
        if relation is not None:
            return Triple(second, relation, first, provenance)
        return None


def load_category_patterns(path: str) -> CategoryPatternTable:
    """加载 `subject_category<TAB>object_category<TAB>relation`"""
    patterns = []
    df = read_tsv(path, ["subject_category", "object_category", "relation"], required=3)
    for line, row in enumerate(df.itertuples(index=False), start=1):
        try:
            patterns.append(CategoryPattern(
                pair=(CoarseCategory.parse(row.subject_category), CoarseCategory.parse(row.object_category)),
                relation=LogicalRelation.parse(row.relation),
            ))
        except ValueError as e:
            raise ParseError(line, f"{path}: {e}")
    try:
        table = CategoryPatternTable(patterns)
    except ValueError as e:
        raise ParseError(0, f"{path}: {e}")
    logger.info(f"加载 {len(table)} 条类别对模式")
    return table
