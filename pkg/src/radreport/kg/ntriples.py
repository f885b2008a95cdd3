"""
知识图谱 <-> RDF N-Triples
节点、关系、属性都映射到固定命名空间下的IRI，输出按行排序保证字节级确定
"""
import logging
from typing import Dict, List
from urllib.parse import quote, unquote

from rdflib import Graph, Literal, Namespace, URIRef
from rdflib.namespace import RDF

from ..config import KG_NAMESPACE
from ..exceptions import NTriplesSyntaxError
from ..ontology import LogicalRelation
from .models import KGNode, KnowledgeGraph

logger = logging.getLogger(__name__)

ATTRIBUTES = {"preferedName": "preferred_name", "synonyms": "synonyms", "wordForms": "word_forms"}


class _Vocabulary:
    def __init__(self, namespace: str):
        self.base = Namespace(namespace)
        self.graph = URIRef(namespace + "graph")
        self.kind = URIRef(namespace + "attr/kind")
        self.root = URIRef(namespace + "attr/root")

    def node(self, node_id: str) -> URIRef:
        return URIRef(self.base + "node/" + quote(node_id, safe="/@-"))

    def node_id(self, iri: URIRef) -> str:
        return unquote(str(iri)[len(self.base + "node/"):])

    def relation(self, relation: LogicalRelation) -> URIRef:
        return URIRef(self.base + "rel/" + relation.value)

    def attribute(self, name: str) -> URIRef:
        return URIRef(self.base + "attr/" + name)

    def ontology_class(self, name: str) -> URIRef:
        return URIRef(self.base + "class/" + quote(name, safe="-"))

    def local(self, iri, kind: str):
        prefix = self.base + kind + "/"
        text = str(iri)
        return unquote(text[len(prefix):]) if text.startswith(prefix) else None


def to_rdf_graph(graph: KnowledgeGraph, namespace: str = KG_NAMESPACE) -> Graph:
    vocab = _Vocabulary(namespace)
    rdf = Graph()
    rdf.add((vocab.graph, vocab.kind, Literal(graph.kind)))
    for root in graph.roots:
        rdf.add((vocab.graph, vocab.root, vocab.node(root)))
    for node in graph.nodes():
        iri = vocab.node(node.node_id)
        rdf.add((iri, RDF.type, vocab.ontology_class(node.class_name)))
        rdf.add((iri, vocab.attribute("preferedName"), Literal(node.preferred_name)))
        for synonym in node.synonyms:
            rdf.add((iri, vocab.attribute("synonyms"), Literal(synonym)))
        for form in node.word_forms:
            rdf.add((iri, vocab.attribute("wordForms"), Literal(form)))
    for edge in graph.edges():
        rdf.add((vocab.node(edge.subject), vocab.relation(edge.relation), vocab.node(edge.object)))
    return rdf


def to_ntriples(graph: KnowledgeGraph, namespace: str = KG_NAMESPACE) -> bytes:
    """规范化 N-Triples: 每行一个三元组，按字典序排序"""
    text = to_rdf_graph(graph, namespace).serialize(format="nt")
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = sorted(line for line in text.splitlines() if line.strip())
    return ("\n".join(lines) + "\n").encode("utf-8")


def _parse(data: str) -> Graph:
    rdf = Graph()
    try:
        rdf.parse(data=data, format="nt")
        return rdf
    except Exception as e:
        for number, line in enumerate(data.splitlines(), start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            try:
                Graph().parse(data=line + "\n", format="nt")
            except Exception as line_error:
                raise NTriplesSyntaxError(number, str(line_error).strip().splitlines()[0])
        raise NTriplesSyntaxError(0, str(e))


def from_ntriples(data: bytes, namespace: str = KG_NAMESPACE) -> KnowledgeGraph:
    """解析 to_ntriples 的输出

    Raises:
        NTriplesSyntaxError: 行格式错误或缺少必要的节点信息
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    rdf = _parse(text)
    vocab = _Vocabulary(namespace)

    kind = str(rdf.value(vocab.graph, vocab.kind) or "preliminary")
    roots = sorted(vocab.node_id(root) for root in rdf.objects(vocab.graph, vocab.root))

    attrs: Dict[str, Dict[str, List[str]]] = {}
    classes: Dict[str, str] = {}
    edges = []
    for subject, predicate, obj in rdf:
        node_id = vocab.local(subject, "node")
        if node_id is None:
            continue
        if predicate == RDF.type:
            classes[node_id] = vocab.local(obj, "class")
            continue
        attribute = vocab.local(predicate, "attr")
        if attribute in ATTRIBUTES:
            attrs.setdefault(node_id, {}).setdefault(ATTRIBUTES[attribute], []).append(str(obj))
            continue
        relation = vocab.local(predicate, "rel")
        if relation is not None:
            try:
                edges.append((node_id, LogicalRelation.parse(relation), vocab.node_id(obj)))
            except ValueError as e:
                raise NTriplesSyntaxError(0, str(e))
            continue
        logger.debug(f"忽略命名空间外的谓词 {predicate}")

    graph = KnowledgeGraph(kind=kind, roots=roots)
    for node_id in sorted(classes):
        values = attrs.get(node_id, {})
        names = values.get("preferred_name", [])
        if len(names) != 1:
            raise NTriplesSyntaxError(0, f"节点 {node_id} 需要恰好一个 preferedName")
        try:
            graph.add_node(KGNode(node_id, names[0], classes[node_id],
                                  tuple(values.get("synonyms", ())), tuple(values.get("word_forms", ()))))
        except ValueError as e:
            raise NTriplesSyntaxError(0, str(e))
    for subject, relation, obj in sorted(edges, key=lambda e: (e[0], e[1].value, e[2])):
        if subject not in graph or obj not in graph:
            raise NTriplesSyntaxError(0, f"边引用了未声明的节点: {subject} -> {obj}")
        graph.add_edge(subject, relation, obj)
    return graph
