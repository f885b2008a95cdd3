"""
放射科医生口述
测量值原样保留；多个发现的口述按句、分号和连接词拆开，每段生成一条描述
"""
import logging
import re
from dataclasses import dataclass
from typing import Iterable, List, Tuple

from ..annotation import merge_chunks, tokenize
from ..extraction import Entity, TripleExtractor, Triple, chunk_entities, node_entity
from ..lexicon import Lexicon, longest_match
from ..ontology import CoarseCategory, LogicalRelation
from ..preprocess import split_sentences
from ..preprocess.cleaner import DEFAULT_ABBREVIATIONS

logger = logging.getLogger(__name__)

MEASUREMENT_RE = re.compile(
    r"(?:\bvol(?:ume)?\.?\s*)?\d+(?:\.\d+)?(?:\s*x\s*\d+(?:\.\d+)?)*\s*(?:mm|cm|cc|ml)\b",
    re.IGNORECASE,
)
CONJUNCTION_RE = re.compile(r"\s+and\s+", re.IGNORECASE)


def extract_measurements(text: str) -> List[str]:
    """按出现顺序返回测量值原文，如 '1.4 x 3 x 2.2 cm'、'vol 4.83 cc'"""
    return [match.group(0) for match in MEASUREMENT_RE.finditer(text)]


def mask_measurements(text: str) -> str:
    """去掉测量值，平行语料中的口述不带患者数值"""
    return re.sub(r"\s+", " ", MEASUREMENT_RE.sub(" ", text)).strip()


@dataclass(frozen=True)
class Dictation:
    text: str
    triples: Tuple[Triple, ...] = ()
    measurements: Tuple[str, ...] = ()
    entities: Tuple[Entity, ...] = ()

    def __post_init__(self):
        missing = [m for m in self.measurements if m not in self.text]
        if missing:
            raise ValueError(f"测量值必须来自口述原文: {missing}")

    @classmethod
    def from_text(cls, text: str, extractor: TripleExtractor, sentence_id: str = "d1") -> "Dictation":
        """标注、抽取三元组、收集实体和测量值"""
        annotated = extractor.annotate(text, sentence_id)
        triples = extractor.extract(annotated)
        entities = {}
        for node in merge_chunks(annotated).nodes:
            found = chunk_entities(node, extractor.lexicon) if node.is_chunk else [node_entity(node, extractor.lexicon)]
            for entity in found:
                if entity is not None:
                    entities.setdefault(entity.span, entity)
        return cls(
            text=text,
            triples=tuple(triples),
            measurements=tuple(extract_measurements(text)),
            entities=tuple(entities[span] for span in sorted(entities)),
        )

    def modifiers_of(self, name: str) -> List[Entity]:
        found = {t.subject.span: t.subject for t in self.triples
                 if t.relation == LogicalRelation.MODIFIER_OF and t.object.text == name
                 and t.subject.category == CoarseCategory.MODIFIER}
        return [found[span] for span in sorted(found)]


def has_finding(text: str, lexicon: Lexicon) -> bool:
    words = [word.lower() for word in tokenize(text)]
    return any(entry.category == CoarseCategory.FINDING for _, entry in longest_match(words, lexicon))


def _split_conjunction(piece: str, lexicon: Lexicon) -> List[str]:
    parts = CONJUNCTION_RE.split(piece)
    result = [parts[0]]
    for part in parts[1:]:
        if has_finding(result[-1], lexicon) and has_finding(part, lexicon):
            result.append(part)
        else:
            result[-1] = f"{result[-1]} and {part}"
    return result


def split_dictation(text: str, lexicon: Lexicon,
                    abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS) -> List[str]:
    """句 -> 分号 -> 'and'（两侧都含发现类词条时）"""
    pieces = []
    for sentence in split_sentences(text, abbreviations):
        for part in sentence.split(";"):
            part = part.strip()
            if part:
                pieces.extend(p.strip() for p in _split_conjunction(part, lexicon) if p.strip())
    if len(pieces) > 1:
        logger.debug(f"口述拆分为 {len(pieces)} 段: {pieces}")
    return pieces
