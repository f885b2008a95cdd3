import logging
from typing import Dict, List, Optional

from ..annotation import ChunkedSentence, Node
from ..lexicon import Lexicon, longest_match
from ..ontology import CoarseCategory
from .models import Entity

logger = logging.getLogger(__name__)

NOMINAL_POS = ("NOUN", "PROPN")


def _inferred_category(pos: str) -> CoarseCategory:
    return CoarseCategory.MODIFIER if pos == "ADJ" else CoarseCategory.OBSERVATION


def chunk_entities(node: Node, lexicon: Lexicon) -> List[Entity]:
    """名词短语内的实体，按跨度排序

    词典最长匹配得到的实体用首选名和词典类别；没有匹配到的 ADJ 推断为修饰词，
    NOUN 推断为观察。中心词总会得到一个实体。
    """
    words = [token.lower for token in node.tokens]
    covered = set()
    entities = []
    for (start, end), entry in longest_match(words, lexicon):
        span = (node.start + start, node.start + end)
        entities.append(Entity(
            text=entry.preferred_name,
            category=entry.category,
            span=span,
            chunk_root=span[0] <= node.root < span[1],
            pos=node.tokens[end - 1].pos,
            in_lexicon=True,
            fine_tag=entry.fine_tag,
            surface=" ".join(words[start:end]),
        ))
        covered.update(range(start, end))

    for offset, token in enumerate(node.tokens):
        if offset in covered:
            continue
        index = node.start + offset
        if index != node.root and token.pos not in ("ADJ",) + NOMINAL_POS:
            continue
        entities.append(Entity(
            text=token.lower,
            category=_inferred_category(token.pos),
            span=(index, index + 1),
            chunk_root=index == node.root,
            pos=token.pos,
            in_lexicon=False,
            surface=token.lower,
        ))
    return sorted(entities, key=lambda entity: entity.span)


def root_entity(entities: List[Entity]) -> Optional[Entity]:
    return next((entity for entity in entities if entity.chunk_root), None)


def node_entity(node: Node, lexicon: Lexicon) -> Optional[Entity]:
    """节点代表的实体：名词短语取中心实体，孤立的名词或词典内形容词取自身"""
    if node.is_chunk:
        return root_entity(chunk_entities(node, lexicon))

    token = node.root_token
    entry = lexicon.lookup(token.lower)
    if entry is not None and token.pos in ("ADJ",) + NOMINAL_POS:
        return Entity(
            text=entry.preferred_name,
            category=entry.category,
            span=(node.start, node.end),
            chunk_root=True,
            pos=token.pos,
            in_lexicon=True,
            fine_tag=entry.fine_tag,
            surface=token.lower,
        )
    if token.pos in NOMINAL_POS:
        return Entity(
            text=token.lower,
            category=CoarseCategory.OBSERVATION,
            span=(node.start, node.end),
            chunk_root=True,
            pos=token.pos,
            in_lexicon=False,
            surface=token.lower,
        )
    return None


def sentence_entities(sentence: ChunkedSentence, lexicon: Lexicon) -> Dict[int, Entity]:
    """node_id -> 实体，不代表实体的节点不出现"""
    entities = {}
    for node in sentence.nodes:
        entity = node_entity(node, lexicon)
        if entity is not None:
            entities[node.node_id] = entity
    return entities
