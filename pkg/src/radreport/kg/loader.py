import logging
import os
from typing import Dict, Optional

import pandas as pd

from ..exceptions import ParseError
from ..lexicon import Lexicon
from ..ontology import LogicalRelation, ontology_class
from ..utils import read_tsv, split_list
from .models import KGNode, KnowledgeGraph, slugify
from .ntriples import from_ntriples, to_ntriples
from .store import choose_root, validate_graph

logger = logging.getLogger(__name__)

KG_COLUMNS = ["subject_name", "relation", "object_name", "subject_class", "object_class",
              "subject_synonyms", "object_synonyms"]
LONE_NODE = "_"


def _make_node(name: str, class_name: str, synonyms: str, lexicon: Optional[Lexicon]) -> KGNode:
    """`name@context` 声明同名实例：首选名取 '@' 之前部分，node_id 取整体的 slug"""
    preferred = name.split("@", 1)[0].strip()
    node_synonyms, word_forms = list(split_list(synonyms)), []
    entry = lexicon.lookup(preferred) if lexicon is not None else None
    if entry is not None:
        node_synonyms += list(entry.synonyms)
        word_forms += list(entry.word_forms)
    return KGNode(slugify(name), preferred, class_name, tuple(node_synonyms), tuple(word_forms))


def parse_kg_tsv(path: str, lexicon: Optional[Lexicon] = None, kind: str = "preliminary") -> KnowledgeGraph:
    """读取知识图谱编辑用的边列表 TSV

    列: subject_name, relation, object_name, subject_class, object_class[, subject_synonyms, object_synonyms]
    relation 为 '_' 的行只声明一个孤立节点。
    """
    df = read_tsv(path, KG_COLUMNS, required=2)
    graph = KnowledgeGraph(kind=kind)
    declared: Dict[str, KGNode] = {}

    def declare(line, name, class_name, synonyms):
        if not class_name:
            raise ParseError(line, f"{path}: 节点 '{name}' 缺少本体类别")
        try:
            ontology_class(class_name)
            node = _make_node(name, class_name, synonyms, lexicon)
        except ValueError as e:
            raise ParseError(line, f"{path}: {e}")
        existing = declared.get(node.node_id)
        if existing is not None:
            if existing.class_name != node.class_name:
                raise ParseError(line, f"{path}: 节点 '{name}' 类别前后不一致")
            if set(node.synonyms) - set(existing.synonyms):
                node = KGNode(node.node_id, node.preferred_name, node.class_name,
                              existing.synonyms + node.synonyms, existing.word_forms)
            else:
                return existing.node_id
        declared[node.node_id] = node
        return node.node_id

    edges = []
    for line, row in enumerate(df.itertuples(index=False), start=1):
        subject = declare(line, row.subject_name, row.subject_class, row.subject_synonyms)
        if row.relation.strip() == LONE_NODE:
            continue
        try:
            relation = LogicalRelation.parse(row.relation)
        except ValueError as e:
            raise ParseError(line, f"{path}: {e}")
        obj = declare(line, row.object_name, row.object_class, row.object_synonyms)
        if subject == obj:
            raise ParseError(line, f"{path}: 自环 {row.subject_name}")
        edges.append((subject, relation, obj))

    for node in declared.values():
        graph.add_node(node)
    for subject, relation, obj in edges:
        graph.add_edge(subject, relation, obj)
    return graph


def read_kg(path: str, lexicon: Optional[Lexicon] = None) -> KnowledgeGraph:
    """按扩展名读取 .nt 或 TSV 图谱，不做校验"""
    if path.endswith(".nt"):
        with open(path, "rb") as f:
            return from_ntriples(f.read())
    graph = parse_kg_tsv(path, lexicon)
    graph.roots = (choose_root(graph),) if len(graph) else ()
    return graph


def load_preliminary_kg(path: str, lexicon: Optional[Lexicon] = None) -> KnowledgeGraph:
    """加载并校验初始知识图谱

    Args:
        path: .nt 文件或边列表 TSV
        lexicon: 可选词典，用来给节点补充同义词和词形

    Returns:
        KnowledgeGraph: kind=preliminary

    Raises:
        OrphanNode: 节点与器官根不连通
        CyclicPartOf: PartOf 成环
    """
    graph = read_kg(path, lexicon)
    if graph.kind != "preliminary":
        graph = graph.copy(kind="preliminary")
    if len(graph) and not graph.roots:
        graph.roots = (choose_root(graph),)
    validate_graph(graph)
    logger.info(f"加载初始图谱 {os.path.basename(path)}: 根={graph.organ}，节点 {len(graph)}，边 {graph.edge_count()}")
    return graph


def save_kg(graph: KnowledgeGraph, path: str, namespace: Optional[str] = None):
    data = to_ntriples(graph) if namespace is None else to_ntriples(graph, namespace)
    with open(path, "wb") as f:
        f.write(data)
    logger.info(f"图谱已保存到 {path}")


def write_quarantine(path: str, rows):
    """隔离边复核文件: 图谱 TSV 的列加 sentence_id

    Args:
        rows: [(sentence_id, QuarantinedEdge), ...]
    """
    records = []
    for sentence_id, edge in rows:
        records.append([
            edge.subject.preferred_name, edge.relation.value, edge.object.preferred_name,
            edge.subject.class_name, edge.object.class_name,
            ",".join(edge.subject.synonyms), ",".join(edge.object.synonyms), sentence_id,
        ])
    df = pd.DataFrame(records, columns=KG_COLUMNS + ["sentence_id"])
    df.to_csv(path, sep="\t", header=False, index=False, lineterminator="\n")
    logger.info(f"写出 {len(df)} 条隔离边到 {path}")
    return len(df)

