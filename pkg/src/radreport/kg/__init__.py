# 知识图谱

from .loader import load_preliminary_kg, parse_kg_tsv, read_kg, save_kg, write_quarantine
from .models import KGEdge, KGNode, KnowledgeGraph, slugify
from .ntriples import from_ntriples, to_ntriples
from .store import (
    AugmentationReport,
    PathMatch,
    QuarantinedEdge,
    augment,
    build_dynamic_kg,
    choose_root,
    location_entailed,
    match_path,
    query_defaults,
    query_location,
    resolve_instance,
    validate_graph,
)

__all__ = [
    'KGNode',
    'KGEdge',
    'KnowledgeGraph',
    'slugify',
    'load_preliminary_kg',
    'parse_kg_tsv',
    'read_kg',
    'save_kg',
    'write_quarantine',
    'to_ntriples',
    'from_ntriples',
    'AugmentationReport',
    'PathMatch',
    'QuarantinedEdge',
    'augment',
    'build_dynamic_kg',
    'choose_root',
    'location_entailed',
    'match_path',
    'query_defaults',
    'query_location',
    'resolve_instance',
    'validate_graph',
]
