"""
三元组抽取引擎
名词短语内部模式 + 介词超义项 + 从叶到根的依存树遍历（主语/宾语/介词栈）
"""
import logging
import re
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence

from ..annotation import AnnotatedSentence, ChunkedSentence, Node, Token, fallback_annotate, merge_chunks
from ..config import DEFAULT_NEGATION_TRIGGERS, DEFAULT_OBJECT_LABELS, DEFAULT_SUBJECT_LABELS
from ..lexicon import Lexicon, SupersenseLexicon
from ..ontology import LogicalRelation, signature_allows
from .entities import chunk_entities, root_entity, sentence_entities
from .models import Entity, TraversalState, Triple
from .patterns import CategoryPatternTable, ChunkPattern

logger = logging.getLogger(__name__)


def _is_preposition(node: Node) -> bool:
    return not node.is_chunk and node.pos == "ADP"


def _is_verb(node: Node) -> bool:
    return not node.is_chunk and node.pos in ("VERB", "AUX")


def extract_intra_chunk(chunk: Node, lexicon: Lexicon, patterns: Sequence[ChunkPattern],
                        provenance: str = "") -> List[Triple]:
    """名词短语内部抽取：每个非中心实体取第一个匹配的模式（类别模式在前）"""
    entities = chunk_entities(chunk, lexicon)
    root = root_entity(entities)
    if root is None:
        return []

    triples = []
    for entity in entities:
        if entity is root:
            continue
        for pattern in patterns:
            triple = pattern.apply(entity, root, provenance)
            if triple is not None:
                logger.debug(f"短语内模式 [{pattern.describe()}] -> {triple}")
                triples.append(triple)
                break
    return triples


def relation_from_preposition(left: Entity, prep: Token, right: Entity, senses: SupersenseLexicon,
                              provenance: str = "") -> Optional[Triple]:
    """由介词超义项得到两实体之间的关系

    超义项优先取标注，其次取介词默认超义项。PropertyOf 的主语是介词右侧实体，
    其余关系为 (left, rel, right)。未映射的超义项返回 None。
    """
    sense = prep.supersense if prep.supersense else senses.sense_of(prep.text)
    relation = senses.map_supersense(sense)
    if relation is None or left.text == right.text:
        return None
    if relation == LogicalRelation.PROPERTY_OF:
        return Triple(right, relation, left, provenance)
    return Triple(left, relation, right, provenance)


def link_entities(left: Entity, prep: Token, right: Entity, senses: SupersenseLexicon,
                  category_patterns: CategoryPatternTable, provenance: str = "") -> Optional[Triple]:
    """介词连接的两个实体：先看超义项，关系签名不满足时退回类别对模式"""
    triple = relation_from_preposition(left, prep, right, senses, provenance)
    if triple is not None and signature_allows(triple.relation, triple.subject.category, triple.object.category):
        return triple
    return category_patterns.apply(left, right, provenance)


def governing_verb(sentence: ChunkedSentence, node: Node) -> Optional[Node]:
    """沿父节点穿过介词和形容词找到的第一个动词；先遇到实体则没有"""
    parent = sentence.parent(node)
    while parent is not None:
        if _is_verb(parent):
            return parent
        if parent.is_chunk or parent.pos not in ("ADP", "ADJ"):
            return None
        parent = sentence.parent(parent)
    return None


def _clause_subjects(sentence: ChunkedSentence, state: TraversalState, verb_id: int):
    """没有主语的动词继承其上层动词的主语"""
    node = sentence.nodes[verb_id]
    while True:
        subjects = state.subject_registry.get(node.node_id)
        if subjects:
            return subjects
        parent = sentence.parent(node)
        if parent is None or not _is_verb(parent):
            return []
        node = parent


def _pair_registered(sentence: ChunkedSentence, state: TraversalState, senses: SupersenseLexicon,
                     category_patterns: CategoryPatternTable) -> List[Triple]:
    triples = []
    for verb_id, objects in state.object_registry.items():
        for subject, subject_id in _clause_subjects(sentence, state, verb_id):
            for obj, _, link_id in objects:
                if subject.text == obj.text:
                    continue
                link = sentence.nodes[link_id] if link_id is not None else None
                if link is not None and link.head == subject_id:
                    triple = link_entities(subject, link.root_token, obj, senses, category_patterns,
                                           sentence.sentence_id)
                else:
                    triple = category_patterns.apply(subject, obj, sentence.sentence_id)
                if triple is not None:
                    triples.append(triple)
    return triples


def traverse_dependency(sentence: ChunkedSentence, lexicon: Lexicon, senses: SupersenseLexicon,
                        category_patterns: CategoryPatternTable,
                        subject_labels: Iterable[str] = DEFAULT_SUBJECT_LABELS,
                        object_labels: Iterable[str] = DEFAULT_OBJECT_LABELS,
                        state: Optional[TraversalState] = None) -> List[Triple]:
    """从每个叶节点走到根，用栈收集介词连接的实体对，在根处配对主语和宾语

    Args:
        sentence: 合并名词短语后的依存树
        lexicon: 词典
        senses: 介词超义项
        category_patterns: 类别对模式
        subject_labels: 主语依存标签
        object_labels: 宾语依存标签
        state: 可选的遍历状态，传入时调用方可以检查遍历次数和登记表

    Returns:
        list: 去重后的三元组，保持发现顺序
    """
    subject_labels = {label.lower() for label in subject_labels}
    object_labels = {label.lower() for label in object_labels}
    entities = sentence_entities(sentence, lexicon)
    state = state if state is not None else TraversalState()
    found: List[Triple] = []

    for leaf in sentence.leaves():
        state.start_walk()
        for node in sentence.path_to_root(leaf):
            if _is_preposition(node):
                state.prep_stack.append(node)
            else:
                entity = entities.get(node.node_id)
                if entity is not None:
                    if state.prep_stack and state.object_stack:
                        prep = state.prep_stack.pop()
                        popped = state.object_stack.pop()
                        triple = link_entities(entity, prep.root_token, popped, senses, category_patterns,
                                               sentence.sentence_id)
                        if triple is not None:
                            found.append(triple)

                    label = node.dep_label.lower()
                    if label in subject_labels:
                        verb = governing_verb(sentence, node)
                        if verb is not None:
                            state.register_subject(verb.node_id, entity, node.node_id)
                    elif label in object_labels:
                        state.object_stack.append(entity)
                        verb = governing_verb(sentence, node)
                        if verb is not None:
                            parent = sentence.parent(node)
                            link_id = parent.node_id if parent is not None and _is_preposition(parent) else None
                            state.register_object(verb.node_id, entity, node.node_id, link_id)

            if node.is_root:
                found.extend(_pair_registered(sentence, state, senses, category_patterns))

    return _dedup(found)


def _conj_chains(sentence: ChunkedSentence) -> Dict[int, List[int]]:
    """并列链：链首 node_id -> 其余并列成员"""
    chains: Dict[int, List[int]] = {}
    for node in sentence.nodes:
        if node.dep_label.lower() != "conj" or node.is_root:
            continue
        head = sentence.parent(node)
        while head.dep_label.lower() == "conj" and not head.is_root:
            head = sentence.parent(head)
        chains.setdefault(head.node_id, []).append(node.node_id)
    return chains


def distribute_coordination(triples: Sequence[Triple], sentence: ChunkedSentence,
                            lexicon: Lexicon) -> List[Triple]:
    """主语或宾语是并列链首的三元组，复制到每个并列成员上"""
    chains = _conj_chains(sentence)
    if not chains:
        return list(triples)

    entities = sentence_entities(sentence, lexicon)
    members: Dict[tuple, List[Entity]] = {}
    for head_id, conjuncts in chains.items():
        head = entities.get(head_id)
        if head is None:
            continue
        members[head.span] = [entities[c] for c in conjuncts if c in entities]

    result = []
    for triple in triples:
        expanded = [triple]
        if triple.object.span in members:
            expanded += [replace(triple, object=conjunct) for conjunct in members[triple.object.span]
                         if conjunct.text != triple.subject.text]
        if triple.subject.span in members:
            expanded += [replace(t, subject=conjunct) for t in list(expanded)
                         for conjunct in members[triple.subject.span] if conjunct.text != t.object.text]
        result.extend(expanded)
    return _dedup(result)


def _dedup(triples: Iterable[Triple]) -> List[Triple]:
    seen = {}
    for triple in triples:
        seen.setdefault(triple.key, triple)
    return list(seen.values())


def sort_triples(triples: Iterable[Triple]) -> List[Triple]:
    return sorted(triples, key=lambda t: (t.subject.span, t.relation.value, t.object.span, t.object.text))


def is_negated(text: str, triggers: Iterable[str]) -> bool:
    lowered = text.lower()
    return any(re.search(rf"\b{re.escape(trigger.strip().lower())}\b", lowered) for trigger in triggers
               if trigger.strip())


def extract_sentence(sentence: AnnotatedSentence, lexicon: Lexicon, senses: SupersenseLexicon,
                     chunk_patterns: Sequence[ChunkPattern], category_patterns: CategoryPatternTable,
                     subject_labels: Iterable[str] = DEFAULT_SUBJECT_LABELS,
                     object_labels: Iterable[str] = DEFAULT_OBJECT_LABELS,
                     negation_triggers: Iterable[str] = DEFAULT_NEGATION_TRIGGERS) -> List[Triple]:
    """一句话的完整抽取流程

    merge_chunks -> 短语内抽取 -> 依存遍历 -> 并列分配 -> 去重 -> 否定标记 -> 排序

    Raises:
        MergeConflict: 合并名词短语失败
    """
    chunked = merge_chunks(sentence)
    triples = []
    for node in chunked.nodes:
        if node.is_chunk:
            triples.extend(extract_intra_chunk(node, lexicon, chunk_patterns, sentence.sentence_id))
    triples.extend(traverse_dependency(chunked, lexicon, senses, category_patterns, subject_labels, object_labels))
    triples = _dedup(distribute_coordination(_dedup(triples), chunked, lexicon))

    if is_negated(sentence.text, negation_triggers):
        logger.debug(f"句子 {sentence.sentence_id} 含否定触发词，三元组标记为非断言")
        triples = [replace(triple, assertive=False) for triple in triples]
    return sort_triples(triples)


@dataclass
class TripleExtractor:
    """绑定词典和模式表的抽取器，逐句调用"""
    lexicon: Lexicon
    senses: SupersenseLexicon
    chunk_patterns: List[ChunkPattern]
    category_patterns: CategoryPatternTable
    subject_labels: List[str] = field(default_factory=lambda: list(DEFAULT_SUBJECT_LABELS))
    object_labels: List[str] = field(default_factory=lambda: list(DEFAULT_OBJECT_LABELS))
    negation_triggers: List[str] = field(default_factory=lambda: list(DEFAULT_NEGATION_TRIGGERS))

    def annotate(self, text: str, sentence_id: str = "s1") -> AnnotatedSentence:
        return fallback_annotate(text, self.lexicon, self.senses, sentence_id)

    def extract(self, sentence: AnnotatedSentence) -> List[Triple]:
        return extract_sentence(
            sentence, self.lexicon, self.senses, self.chunk_patterns, self.category_patterns,
            self.subject_labels, self.object_labels, self.negation_triggers,
        )

    def extract_text(self, text: str, sentence_id: str = "s1") -> List[Triple]:
        return self.extract(self.annotate(text, sentence_id))
