"""
知识图谱操作
校验、动态图构建、路径匹配、增量扩充、位置与默认值查询
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from ..exceptions import CyclicPartOf, NotFound, OrphanNode
from ..extraction import Entity, Triple
from ..ontology import (
    DEFAULT_RELATIONS,
    LOCATION_RELATIONS,
    ONTOLOGY_CLASSES,
    CoarseCategory,
    LogicalRelation,
)
from .models import KGEdge, KGNode, KnowledgeGraph, slugify

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------- 根与校验

def choose_root(graph: KnowledgeGraph, component: Optional[Iterable[str]] = None) -> Optional[str]:
    """器官根: 没有出向 PartOf 的解剖学节点，多个时取其下挂 PartOf 子树最大者；

    没有解剖学节点时取汇点（出度为0、可达祖先最多者）。
    """
    members = sorted(component) if component is not None else [node.node_id for node in graph.nodes()]
    if not members:
        return None
    part_of = graph.part_of_graph()
    anatomy = graph.anatomy_roots(members)
    if anatomy:
        return min(anatomy, key=lambda n: (-len(nx.ancestors(part_of, n)), n))

    view = graph.simple_graph().subgraph(members)
    sinks = [n for n in members if view.out_degree(n) == 0] or members
    return min(sinks, key=lambda n: (-len(nx.ancestors(view, n)), n))


def validate_graph(graph: KnowledgeGraph):
    """检查 PartOf 无环、所有节点与根弱连通

    Raises:
        CyclicPartOf: PartOf 成环
        OrphanNode: 节点与根不连通
    """
    part_of = graph.part_of_graph()
    try:
        cycle = nx.find_cycle(part_of)
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        raise CyclicPartOf([source for source, _ in cycle] + [cycle[0][0]])

    if graph.organ is None:
        return
    if graph.node(graph.organ).category != CoarseCategory.ANATOMY:
        raise OrphanNode(graph.organ)
    reachable = set(nx.node_connected_component(graph.simple_graph().to_undirected(), graph.organ))
    for node in graph.nodes():
        if node.node_id not in reachable:
            raise OrphanNode(node.node_id)


# ---------------------------------------------------------------------- 动态图

def _class_for(entity: Entity) -> str:
    if entity.fine_tag and entity.fine_tag in ONTOLOGY_CLASSES:
        return entity.fine_tag
    return entity.category.value


def build_dynamic_kg(triples: Sequence[Triple]) -> KnowledgeGraph:
    """由一句话的三元组构造动态图，每个不同的实体文本一个节点

    非断言三元组不进入动态图；不连通的三元组形成森林，每个分量一个根。
    """
    graph = KnowledgeGraph(kind="dynamic")
    for triple in triples:
        if not triple.assertive:
            logger.debug(f"跳过非断言三元组 {triple}")
            continue
        ids = []
        for entity in (triple.subject, triple.object):
            node_id = slugify(entity.text)
            if node_id not in graph:
                graph.add_node(KGNode(node_id, entity.text, _class_for(entity)))
            ids.append(node_id)
        if ids[0] != ids[1]:
            graph.add_edge(ids[0], triple.relation, ids[1])

    graph.roots = tuple(root for root in (choose_root(graph, component) for component in graph.weak_components())
                        if root is not None)
    return graph


# ---------------------------------------------------------------------- 路径匹配

@dataclass
class PathMatch:
    pairs: List[Tuple[str, str]] = field(default_factory=list)
    unmatched: List[str] = field(default_factory=list)

    @property
    def mapping(self) -> Dict[str, str]:
        return dict(self.pairs)


def _bfs_order(dynamic: KnowledgeGraph) -> List[str]:
    order, seen = [], set()
    starts = list(dynamic.roots) + [node.node_id for node in dynamic.nodes()]
    for start in starts:
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        while queue:
            current = queue.popleft()
            order.append(current)
            for neighbor in sorted(dynamic.neighbors(current)):
                if neighbor not in seen:
                    seen.add(neighbor)
                    queue.append(neighbor)
    return order


def _candidates(dynamic_node: KGNode, static: KnowledgeGraph) -> List[str]:
    found = set()
    for name in dynamic_node.names:
        found.update(static.find_by_name(name))
    return sorted(found)


def _shares_organ_region(static: KnowledgeGraph, candidate: str, anchor: str) -> bool:
    """候选节点所处的解剖位置与锚点同在一条 PartOf 链上"""
    located = [n for n in static.related(candidate) if static.node(n).category == CoarseCategory.ANATOMY]
    if static.node(anchor).category != CoarseCategory.ANATOMY:
        return False
    return any(static.part_of_path_exists(anchor, n) or static.part_of_path_exists(n, anchor) for n in located)


def match_path(dynamic: KnowledgeGraph, static: KnowledgeGraph) -> PathMatch:
    """把动态图节点匹配到静态图节点

    按 BFS 顺序（从动态图根出发）逐个决定。候选为名称（首选名/同义词/词形）相同的
    静态节点；打分为 (已匹配邻居的静态对应点与候选直接相邻的个数,
    已匹配静态节点落在候选祖先∪后代中的个数)，最高者胜。最高分并列，
    或者有已匹配邻居但得分为 (0, 0) 时不匹配。没有已匹配邻居且只有一个候选时直接匹配。
    """
    order = _bfs_order(dynamic)
    mapping: Dict[str, str] = {}
    rejected: Set[str] = set()

    progress = True
    while progress:
        progress = False
        for node_id in order:
            if node_id in mapping or node_id in rejected:
                continue
            candidates = _candidates(dynamic.node(node_id), static)
            if not candidates:
                rejected.add(node_id)
                continue

            anchors = [mapping[n] for n in sorted(dynamic.neighbors(node_id)) if n in mapping]
            if not anchors:
                if len(candidates) == 1:
                    mapping[node_id] = candidates[0]
                    progress = True
                continue

            matched_static = set(mapping.values())
            scored = []
            for candidate in candidates:
                adjacent = sum(1 for anchor in anchors if anchor in static.neighbors(candidate))
                overlap = len(matched_static & static.related(candidate))
                scored.append(((adjacent, overlap), candidate))
            scored.sort(key=lambda item: (-item[0][0], -item[0][1], item[1]))
            best_score, best = scored[0]
            tied = len(scored) > 1 and scored[1][0] == best_score
            if tied:
                logger.debug(f"节点 {node_id} 的同名候选得分并列 {best_score}，不匹配")
                rejected.add(node_id)
            elif best_score == (0, 0) and not (len(candidates) == 1 and any(
                    _shares_organ_region(static, best, anchor) for anchor in anchors)):
                logger.debug(f"节点 {node_id} 的候选 {best} 与已匹配路径无关，不匹配")
                rejected.add(node_id)
            else:
                mapping[node_id] = best
            progress = True

    pairs = [(node_id, mapping[node_id]) for node_id in order if node_id in mapping]
    unmatched = [node_id for node_id in order if node_id not in mapping]
    return PathMatch(pairs=pairs, unmatched=unmatched)


# ---------------------------------------------------------------------- 扩充

@dataclass(frozen=True)
class QuarantinedEdge:
    subject: KGNode
    relation: LogicalRelation
    object: KGNode
    reason: str


@dataclass
class AugmentationReport:
    graph: KnowledgeGraph
    added_nodes: List[KGNode] = field(default_factory=list)
    added_edges: List[KGEdge] = field(default_factory=list)
    quarantined: List[QuarantinedEdge] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def changed(self) -> bool:
        return bool(self.added_nodes or self.added_edges)

    def to_dict(self) -> dict:
        return {
            "added_nodes": [node.node_id for node in self.added_nodes],
            "added_edges": [list(edge.as_tuple()) for edge in self.added_edges],
            "quarantined": [
                [q.subject.preferred_name, q.relation.value, q.object.preferred_name, q.reason]
                for q in self.quarantined
            ],
            "notes": list(self.notes),
        }


def location_entailed(graph: KnowledgeGraph, subject: str, anatomy: str) -> Optional[str]:
    """subject 已有位置边指向 anatomy 或其 PartOf 后代时，返回该位置"""
    for edge in graph.out_edges(subject, LOCATION_RELATIONS):
        if graph.part_of_path_exists(edge.object, anatomy):
            return edge.object
    return None


def augment(static: KnowledgeGraph, dynamic: KnowledgeGraph) -> AugmentationReport:
    """把动态图中静态图缺失的边补进静态图的副本

    两端都已匹配的缺失边直接加入；只有一端匹配的边，以匹配端为锚新建另一端节点
    (node_id = 锚点id + '/' + 名称)；两端都无法锚定的边，以及会造成 PartOf 环的边
    进入隔离列表。原图不被修改。
    """
    graph = static.copy(kind="augmented")
    report = AugmentationReport(graph=graph)
    mapping = match_path(dynamic, graph).mapping
    pending = dynamic.edges()

    progress = True
    while pending and progress:
        progress = False
        deferred = []
        for edge in pending:
            subject, obj = mapping.get(edge.subject), mapping.get(edge.object)
            if subject is None and obj is None:
                deferred.append(edge)
                continue
            progress = True

            if subject is None or obj is None:
                anchor = subject if subject is not None else obj
                loose = edge.subject if subject is None else edge.object
                source = dynamic.node(loose)
                new_id = f"{anchor}/{slugify(source.preferred_name)}"
                if new_id not in graph:
                    node = KGNode(new_id, source.preferred_name, source.class_name, source.synonyms, source.word_forms)
                    graph.add_node(node)
                    report.added_nodes.append(node)
                mapping[loose] = new_id
                subject, obj = mapping[edge.subject], mapping[edge.object]

            if subject == obj or graph.has_edge(subject, edge.relation, obj):
                continue
            if edge.relation in LOCATION_RELATIONS:
                deeper = location_entailed(graph, subject, obj)
                if deeper is not None:
                    report.notes.append(f"{subject} {edge.relation.value} {obj} 已由更深的位置 {deeper} 蕴含")
                    continue
            if edge.relation == LogicalRelation.PART_OF and graph.part_of_path_exists(obj, subject):
                _quarantine(report, dynamic, edge, "PartOf 成环")
                continue
            graph.add_edge(subject, edge.relation, obj)
            report.added_edges.append(KGEdge(subject, edge.relation, obj))
        pending = deferred

    for edge in pending:
        _quarantine(report, dynamic, edge, "两端均未锚定")

    logger.info(f"图谱扩充: 新增节点 {len(report.added_nodes)}，新增边 {len(report.added_edges)}，"
                f"隔离 {len(report.quarantined)}")
    return report


def _quarantine(report: AugmentationReport, dynamic: KnowledgeGraph, edge: KGEdge, reason: str):
    logger.warning(f"隔离边 ({edge.subject}, {edge.relation.value}, {edge.object}): {reason}")
    report.quarantined.append(QuarantinedEdge(dynamic.node(edge.subject), edge.relation,
                                              dynamic.node(edge.object), reason))


# ---------------------------------------------------------------------- 查询

def resolve_instance(graph: KnowledgeGraph, name: str, context: Iterable[str] = (),
                     relations: Iterable[LogicalRelation] = ()) -> str:
    """按名称取节点；同名实例多于一个时，取与 context 中名称关联最多、
    并拥有 relations 出入边的实例

    Raises:
        NotFound: 没有这个名称的节点
    """
    candidates = graph.find_by_name(name)
    if not candidates:
        raise NotFound(name)
    if len(candidates) == 1:
        return candidates[0]

    context_ids = {node_id for other in context for node_id in graph.find_by_name(other)}
    wanted = set(relations)

    def score(node_id):
        overlap = len(context_ids & (graph.related(node_id) | {node_id}))
        has_relation = bool(wanted) and bool(graph.out_edges(node_id, wanted) or graph.in_edges(node_id, wanted))
        return -overlap, not has_relation, node_id

    best = min(candidates, key=score)
    logger.debug(f"名称 '{name}' 有 {len(candidates)} 个实例，选择 {best}")
    return best


def query_location(graph: KnowledgeGraph, finding_name: str, context: Iterable[str] = ()) -> List[Entity]:
    """发现的解剖位置链，从最深处到器官根

    Raises:
        NotFound: 找不到该发现
    """
    node_id = resolve_instance(graph, finding_name, context, LOCATION_RELATIONS)
    current, seen = node_id, {node_id}
    while graph.node(current).category != CoarseCategory.ANATOMY:
        locations = graph.out_edges(current, LOCATION_RELATIONS)
        if locations:
            targets = [edge.object for edge in locations]
            current = max(targets, key=lambda n: (len(graph.part_of_chain(n)), n))
            break
        parents = [edge.object for edge in graph.out_edges(current) if edge.object not in seen]
        if not parents:
            raise NotFound(finding_name)
        current = parents[0]
        seen.add(current)
    return [graph.node(n).to_entity() for n in graph.part_of_chain(current)]


def query_defaults(graph: KnowledgeGraph, finding_name: str,
                   context: Iterable[str] = ()) -> List[Tuple[Entity, LogicalRelation, Entity]]:
    """发现的默认观察/属性，以及每个默认项的修饰词

    Raises:
        NotFound: 找不到该发现
    """
    node_id = resolve_instance(graph, finding_name, context, DEFAULT_RELATIONS)
    finding = graph.node(node_id).to_entity()
    result = []
    for edge in graph.in_edges(node_id, DEFAULT_RELATIONS):
        default = graph.node(edge.subject).to_entity()
        result.append((default, edge.relation, finding))
        for modifier in graph.in_edges(edge.subject, [LogicalRelation.MODIFIER_OF]):
            result.append((graph.node(modifier.subject).to_entity(), LogicalRelation.MODIFIER_OF, default))
    return result
