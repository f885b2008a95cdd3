"""
病理描述生成
口述提供患者特有信息（修饰词、测量值、位置），知识图谱补全默认属性、默认观察和解剖链
"""
import logging
import re
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..config import DEFAULT_PROPERTY_ORDER
from ..exceptions import MissingRequiredSlot, NotFound
from ..extraction import Entity
from ..kg import KnowledgeGraph, query_defaults, query_location
from ..ontology import LOCATION_RELATIONS, CoarseCategory, LogicalRelation
from .dictation import Dictation
from .templates import DescriptionTemplate, template_for

logger = logging.getLogger(__name__)

SIZE_MODIFIER = "size-modifier"


def _words(entity: Entity) -> str:
    return entity.surface or entity.text


def identify_finding(dictation: Dictation) -> Entity:
    """口述中的发现：优先词典内的 Finding，其次 Observation

    Raises:
        MissingRequiredSlot: 口述中没有发现或观察
    """
    entities = list(dictation.entities)
    for triple in dictation.triples:
        entities.extend((triple.subject, triple.object))
    entities.sort(key=lambda e: e.span)

    for wanted in (CoarseCategory.FINDING, CoarseCategory.OBSERVATION):
        for in_lexicon in (True, False):
            for entity in entities:
                if entity.category == wanted and entity.in_lexicon == in_lexicon:
                    return entity
    raise MissingRequiredSlot("finding")


def finding_phrase(dictation: Dictation, finding: Entity) -> str:
    """修饰词 + 发现，按原文顺序，尺寸修饰词除外"""
    modifiers = [m for m in dictation.modifiers_of(finding.text) if m.fine_tag != SIZE_MODIFIER]
    parts = sorted(modifiers + [finding], key=lambda e: e.span)
    return " ".join(_words(e) for e in parts).lower()


def kg_finding_name(kg: Optional[KnowledgeGraph], names: Sequence[str]) -> Optional[str]:
    """知识图谱中能找到的第一个名称"""
    if kg is None:
        return None
    return next((name for name in names if kg.find_by_name(name)), None)


def resolve_kg(kgs: Mapping[str, KnowledgeGraph], dictation: Dictation,
               finding: Optional[Entity] = None) -> Tuple[Optional[str], Optional[KnowledgeGraph]]:
    """选择器官图谱：先找含该发现的图谱，再找口述中提到的器官"""
    if finding is None:
        try:
            finding = identify_finding(dictation)
        except MissingRequiredSlot:
            finding = None
    if finding is not None:
        names = [finding_phrase(dictation, finding), finding.text]
        for organ, kg in kgs.items():
            if kg_finding_name(kg, names):
                return organ, kg

    lowered = dictation.text.lower()
    for organ, kg in kgs.items():
        root_names = kg.node(kg.organ).names if kg.organ else {organ}
        if any(re.search(rf"\b{re.escape(name)}\b", lowered) for name in root_names | {organ.lower()}):
            return organ, kg
    logger.warning(f"口述 '{dictation.text}' 无法对应到任何器官图谱")
    return None, None


def _dictation_chain(dictation: Dictation, location: Entity) -> List[str]:
    chain, current = [location.text], location.text
    while True:
        parents = [t.object.text for t in dictation.triples
                   if t.relation == LogicalRelation.PART_OF and t.subject.text == current
                   and t.object.text not in chain]
        if not parents:
            return chain
        current = parents[0]
        chain.append(current)


def anatomy_chain(dictation: Dictation, finding: Entity, kg: Optional[KnowledgeGraph],
                  kg_name: Optional[str]) -> List[str]:
    """解剖链（由深到浅）：口述中的位置优先，图谱补全上层；口述无位置时取图谱中发现的位置"""
    locations = sorted((t.object for t in dictation.triples
                        if t.subject.text == finding.text and t.relation in LOCATION_RELATIONS),
                       key=lambda e: e.span)
    if locations:
        location = locations[0]
        if kg is not None and kg.find_by_name(location.text):
            context = [kg_name] if kg_name else []
            return [e.text for e in query_location(kg, location.text, context)]
        return _dictation_chain(dictation, location)

    if kg is not None and kg_name is not None:
        try:
            return [e.text for e in query_location(kg, kg_name)]
        except NotFound:
            logger.debug(f"图谱中 {kg_name} 没有位置")
    return []


def _ordered(items: Dict[str, List[str]], order: Sequence[str]) -> List[str]:
    rank = {name: i for i, name in enumerate(order)}
    names = sorted(items, key=lambda name: (rank.get(name, len(rank)), name))
    return [" ".join(items[name] + [name]) for name in names]


def default_slots(dictation: Dictation, finding: Entity, kg: Optional[KnowledgeGraph],
                  kg_name: Optional[str]) -> Tuple[Dict[str, List[str]], Dict[str, List[str]]]:
    """属性和观察 -> 修饰词；口述中的修饰词覆盖图谱默认值"""
    properties: Dict[str, List[str]] = {}
    observations: Dict[str, List[str]] = {}
    if kg is not None and kg_name is not None:
        for subject, relation, obj in query_defaults(kg, kg_name):
            if relation == LogicalRelation.DEFAULT_PROPERTY_OF:
                properties.setdefault(subject.text, [])
            elif relation == LogicalRelation.DEFAULT_OBSERVATION_OF:
                observations.setdefault(subject.text, [])
            elif relation == LogicalRelation.MODIFIER_OF:
                target = properties if obj.text in properties else observations
                target.setdefault(obj.text, []).append(subject.text)

    for triple in dictation.triples:
        if triple.object.text != finding.text:
            continue
        if triple.relation == LogicalRelation.PROPERTY_OF and triple.subject.category == CoarseCategory.PROPERTY:
            properties.setdefault(triple.subject.text, [])
        elif triple.relation == LogicalRelation.OBSERVATION_OF:
            observations.setdefault(triple.subject.text, [])

    for target in (properties, observations):
        for name in list(target):
            stated = [_words(m) for m in dictation.modifiers_of(name)]
            if stated:
                target[name] = stated
    return properties, observations


def fill_slots(dictation: Dictation, kg: Optional[KnowledgeGraph],
               property_order: Sequence[str] = DEFAULT_PROPERTY_ORDER) -> Tuple[Entity, Dict[str, str]]:
    """计算全部槽位的取值，空串表示无法填充"""
    finding = identify_finding(dictation)
    phrase = finding_phrase(dictation, finding)
    kg_name = kg_finding_name(kg, [phrase, finding.text])
    if kg is None or kg_name is None:
        logger.warning(f"知识图谱中没有 '{phrase}'，描述只使用口述信息，可能不完整")

    chain = anatomy_chain(dictation, finding, kg, kg_name)
    if kg is not None and kg.organ:
        organ = kg.node(kg.organ).preferred_name
    else:
        organ = chain[-1] if chain else ""

    properties, observations = default_slots(dictation, finding, kg, kg_name)
    sizes = [_words(m) for m in dictation.modifiers_of(finding.text) if m.fine_tag == SIZE_MODIFIER]

    values = {
        "finding": phrase,
        "organ": organ,
        "anatomy_chain": " of ".join(chain),
        "size_phrase": " ".join(sizes),
        "measurements": " ".join(dictation.measurements),
        "properties": " and ".join(_ordered(properties, property_order)),
        "observations": " and ".join(_ordered(observations, ())),
    }
    return finding, values


def generate_description(dictation: Dictation, kg: Optional[KnowledgeGraph],
                         templates: Mapping[str, DescriptionTemplate],
                         property_order: Sequence[str] = DEFAULT_PROPERTY_ORDER) -> str:
    """口述 -> 病理描述

    模板按发现的细粒度标签选择，没有时退回高层类别。

    Raises:
        NoTemplate: 没有适用的模板
        MissingRequiredSlot: 必填槽位口述和图谱都无法提供
    """
    finding, values = fill_slots(dictation, kg, property_order)
    fine_tag = finding.fine_tag
    if fine_tag is None and kg is not None:
        node_ids = kg.find_by_name(finding.text)
        fine_tag = kg.node(node_ids[0]).fine_tag if node_ids else None

    template = template_for(templates, fine_tag, finding.category)
    text = template.render(values)

    missing = [m for m in dictation.measurements if m not in text]
    if missing:
        logger.warning(f"模板 {template.finding_type} 没有测量值槽位，测量值追加到句末")
        text = f"{text.rstrip('.')} measuring {' '.join(missing)}."
    logger.debug(f"生成描述 [{template.finding_type}]: {text}")
    return text
