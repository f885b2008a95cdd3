"""
三元组文件读写
格式: sentence_id<TAB>subject<TAB>relation<TAB>object<TAB>assertive_flag
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

import pandas as pd

from ..exceptions import ParseError
from ..lexicon import Lexicon
from ..ontology import CoarseCategory, LogicalRelation
from ..utils import read_tsv
from .models import Entity, Triple

logger = logging.getLogger(__name__)

TRIPLE_COLUMNS = ["sentence_id", "subject", "relation", "object", "assertive_flag"]


@dataclass(frozen=True)
class TripleRecord:
    """文件中的一行三元组，实体只保留文本"""
    sentence_id: str
    subject: str
    relation: LogicalRelation
    object: str
    assertive: bool = True

    @property
    def key(self) -> Tuple[str, str, str]:
        return self.subject, self.relation.value, self.object

    @classmethod
    def from_triple(cls, triple: Triple) -> "TripleRecord":
        return cls(triple.provenance, triple.subject.text, triple.relation, triple.object.text, triple.assertive)


def write_triples(path: str, triples: Iterable[Triple]) -> int:
    """按给定顺序写出三元组，返回行数"""
    rows = [
        [t.provenance, t.subject.text, t.relation.value, t.object.text, int(t.assertive)]
        for t in triples
    ]
    df = pd.DataFrame(rows, columns=TRIPLE_COLUMNS)
    df.to_csv(path, sep="\t", header=False, index=False, lineterminator="\n")
    logger.info(f"写出 {len(df)} 条三元组到 {path}")
    return len(df)


def read_triples(path: str) -> List[TripleRecord]:
    """读取三元组文件，assertive_flag 缺省为1"""
    df = read_tsv(path, TRIPLE_COLUMNS, required=4)
    records = []
    for line, row in enumerate(df.itertuples(index=False), start=1):
        try:
            relation = LogicalRelation.parse(row.relation)
        except ValueError as e:
            raise ParseError(line, f"{path}: {e}")
        flag = row.assertive_flag.strip() or "1"
        if flag not in ("0", "1"):
            raise ParseError(line, f"{path}: assertive_flag 只能是0或1，收到 {flag}")
        records.append(TripleRecord(row.sentence_id, row.subject.lower(), relation, row.object.lower(), flag == "1"))
    return records


# 词典中没有的实体按关系位置推断类别
_SUBJECT_CATEGORY = {
    LogicalRelation.PART_OF: CoarseCategory.ANATOMY,
    LogicalRelation.MODIFIER_OF: CoarseCategory.MODIFIER,
    LogicalRelation.PROPERTY_OF: CoarseCategory.PROPERTY,
    LogicalRelation.DEFAULT_PROPERTY_OF: CoarseCategory.PROPERTY,
}
_OBJECT_CATEGORY = {
    LogicalRelation.PART_OF: CoarseCategory.ANATOMY,
    LogicalRelation.FOUND_IN: CoarseCategory.ANATOMY,
    LogicalRelation.OBSERVED_IN: CoarseCategory.ANATOMY,
}


def _entity(text: str, lexicon: Lexicon, fallback: CoarseCategory, position: int) -> Entity:
    entry = lexicon.lookup(text)
    if entry is None:
        return Entity(text, fallback, (position, position + 1), in_lexicon=False, surface=text)
    return Entity(entry.preferred_name, entry.category, (position, position + 1),
                  fine_tag=entry.fine_tag, surface=text)


def records_to_triples(records: Iterable[TripleRecord], lexicon: Lexicon) -> Dict[str, List[Triple]]:
    """按句子还原带类别的三元组，保持文件顺序"""
    grouped: Dict[str, List[Triple]] = {}
    for record in records:
        subject = _entity(record.subject, lexicon,
                          _SUBJECT_CATEGORY.get(record.relation, CoarseCategory.OBSERVATION), 0)
        obj = _entity(record.object, lexicon,
                      _OBJECT_CATEGORY.get(record.relation, CoarseCategory.FINDING), 1)
        if subject.text == obj.text:
            logger.warning(f"句子 {record.sentence_id} 的三元组两端相同，跳过: {record.subject}")
            continue
        grouped.setdefault(record.sentence_id, []).append(
            Triple(subject, record.relation, obj, record.sentence_id, record.assertive))
    return grouped
