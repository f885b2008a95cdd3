"""
知识图谱数据模型
节点按 node_id 唯一，同名实例允许并存；边以关系名为键存放在 networkx.MultiDiGraph 中
"""
import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set, Tuple

import networkx as nx

from ..extraction import Entity
from ..ontology import CoarseCategory, LogicalRelation, OntologyClass, ontology_class

logger = logging.getLogger(__name__)

KINDS = ("preliminary", "augmented", "dynamic")


def slugify(name: str) -> str:
    """名称 -> node_id 片段: 小写，非字母数字和 '@' 的连续字符替换为 '-'"""
    slug = re.sub(r"[^a-z0-9@]+", "-", name.strip().lower()).strip("-")
    return re.sub(r"-?@-?", "@", slug)


@dataclass(frozen=True)
class KGNode:
    node_id: str
    preferred_name: str
    class_name: str
    synonyms: Tuple[str, ...] = ()
    word_forms: Tuple[str, ...] = ()

    def __post_init__(self):
        name = self.preferred_name.strip().lower()
        object.__setattr__(self, "preferred_name", name)
        object.__setattr__(self, "synonyms", tuple(sorted({s.strip().lower() for s in self.synonyms} - {name, ""})))
        object.__setattr__(self, "word_forms", tuple(sorted({w.strip().lower() for w in self.word_forms} - {name, ""})))
        ontology_class(self.class_name)

    @property
    def ontology_class(self) -> OntologyClass:
        return ontology_class(self.class_name)

    @property
    def category(self) -> CoarseCategory:
        lineage = self.ontology_class.lineage()
        return CoarseCategory.parse(lineage[-2])

    @property
    def fine_tag(self) -> Optional[str]:
        lineage = self.ontology_class.lineage()
        return lineage[0] if len(lineage) > 2 else None

    @property
    def names(self) -> Set[str]:
        return {self.preferred_name, *self.synonyms, *self.word_forms}

    def to_entity(self) -> Entity:
        return Entity(
            text=self.preferred_name,
            category=self.category,
            span=(0, 0),
            fine_tag=self.fine_tag,
            surface=self.preferred_name,
        )


@dataclass(frozen=True)
class KGEdge:
    subject: str
    relation: LogicalRelation
    object: str

    def __post_init__(self):
        if self.subject == self.object:
            raise ValueError(f"知识图谱不允许自环: {self.subject}")

    def as_tuple(self) -> Tuple[str, str, str]:
        return self.subject, self.relation.value, self.object


class KnowledgeGraph:
    """单个器官（或一句话）的知识图谱"""

    def __init__(self, kind: str = "preliminary", roots: Iterable[str] = ()):
        if kind not in KINDS:
            raise ValueError(f"不支持的图谱类型: {kind}")
        self.kind = kind
        self.roots: Tuple[str, ...] = tuple(roots)
        self._graph = nx.MultiDiGraph()
        self._name_index: Dict[str, Set[str]] = {}

    # ------------------------------------------------------------------ 基本操作

    @property
    def organ(self) -> Optional[str]:
        return self.roots[0] if self.roots else None

    def __len__(self):
        return self._graph.number_of_nodes()

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._graph

    def __eq__(self, other) -> bool:
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return (self.kind == other.kind and sorted(self.roots) == sorted(other.roots)
                and self.nodes() == other.nodes() and self.edges() == other.edges())

    def __repr__(self):
        return f"KnowledgeGraph(kind={self.kind}, roots={self.roots}, nodes={len(self)}, edges={self.edge_count()})"

    def add_node(self, node: KGNode) -> KGNode:
        if node.node_id in self._graph:
            existing = self.node(node.node_id)
            if existing != node:
                raise ValueError(f"node_id 重复且内容不同: {node.node_id}")
            return existing
        self._graph.add_node(node.node_id, data=node)
        for name in node.names:
            self._name_index.setdefault(name, set()).add(node.node_id)
        return node

    def node(self, node_id: str) -> KGNode:
        return self._graph.nodes[node_id]["data"]

    def nodes(self) -> List[KGNode]:
        return [self.node(node_id) for node_id in sorted(self._graph.nodes)]

    def has_edge(self, subject: str, relation: LogicalRelation, obj: str) -> bool:
        return self._graph.has_edge(subject, obj, key=relation.value)

    def add_edge(self, subject: str, relation: LogicalRelation, obj: str) -> bool:
        """加边，已存在时返回 False"""
        for node_id in (subject, obj):
            if node_id not in self._graph:
                raise KeyError(f"节点不存在: {node_id}")
        edge = KGEdge(subject, relation, obj)
        if self.has_edge(subject, relation, obj):
            return False
        self._graph.add_edge(edge.subject, edge.object, key=relation.value, relation=relation)
        return True

    def edges(self) -> List[KGEdge]:
        edges = [KGEdge(s, data["relation"], o) for s, o, data in self._graph.edges(data=True)]
        return sorted(edges, key=KGEdge.as_tuple)

    def edge_count(self) -> int:
        return self._graph.number_of_edges()

    def out_edges(self, node_id: str, relations: Optional[Iterable[LogicalRelation]] = None) -> List[KGEdge]:
        wanted = set(relations) if relations is not None else None
        edges = [KGEdge(node_id, data["relation"], o) for _, o, data in self._graph.out_edges(node_id, data=True)
                 if wanted is None or data["relation"] in wanted]
        return sorted(edges, key=KGEdge.as_tuple)

    def in_edges(self, node_id: str, relations: Optional[Iterable[LogicalRelation]] = None) -> List[KGEdge]:
        wanted = set(relations) if relations is not None else None
        edges = [KGEdge(s, data["relation"], node_id) for s, _, data in self._graph.in_edges(node_id, data=True)
                 if wanted is None or data["relation"] in wanted]
        return sorted(edges, key=KGEdge.as_tuple)

    def neighbors(self, node_id: str) -> Set[str]:
        return set(self._graph.successors(node_id)) | set(self._graph.predecessors(node_id))

    def find_by_name(self, name: str) -> List[str]:
        """按首选名/同义词/词形查找节点（大小写不敏感）"""
        return sorted(self._name_index.get(name.strip().lower(), ()))

    def copy(self, kind: Optional[str] = None) -> "KnowledgeGraph":
        other = KnowledgeGraph(kind or self.kind, self.roots)
        other._graph = self._graph.copy()
        other._name_index = {name: set(ids) for name, ids in self._name_index.items()}
        return other

    # ------------------------------------------------------------------ 结构查询

    def part_of_graph(self) -> nx.DiGraph:
        view = nx.DiGraph()
        view.add_nodes_from(self._graph.nodes)
        view.add_edges_from((s, o) for s, o, key in self._graph.edges(keys=True)
                            if key == LogicalRelation.PART_OF.value)
        return view

    def simple_graph(self) -> nx.DiGraph:
        return nx.DiGraph(self._graph)

    def related(self, node_id: str) -> Set[str]:
        """沿边方向的祖先和后代（不含自身）"""
        view = self.simple_graph()
        return nx.ancestors(view, node_id) | nx.descendants(view, node_id)

    def part_of_path_exists(self, source: str, target: str) -> bool:
        """source 是否经 PartOf 链到达 target"""
        return source == target or nx.has_path(self.part_of_graph(), source, target)

    def part_of_chain(self, node_id: str) -> List[str]:
        """从节点沿 PartOf 向上直到器官根，多个父节点时取 node_id 最小者"""
        chain = [node_id]
        while True:
            parents = [edge.object for edge in self.out_edges(chain[-1], [LogicalRelation.PART_OF])]
            parents = [p for p in parents if p not in chain]
            if not parents:
                return chain
            chain.append(parents[0])

    def weak_components(self) -> List[Set[str]]:
        components = nx.weakly_connected_components(self._graph)
        return sorted((set(c) for c in components), key=lambda c: min(c))

    def anatomy_roots(self, nodes: Optional[Iterable[str]] = None) -> List[str]:
        """没有出向 PartOf 边的解剖学节点"""
        candidates = sorted(nodes) if nodes is not None else sorted(self._graph.nodes)
        return [node_id for node_id in candidates
                if self.node(node_id).category == CoarseCategory.ANATOMY
                and not self.out_edges(node_id, [LogicalRelation.PART_OF])]
