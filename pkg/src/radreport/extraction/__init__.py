# 抽取引擎

from .engine import (
    TripleExtractor,
    distribute_coordination,
    extract_intra_chunk,
    extract_sentence,
    governing_verb,
    is_negated,
    link_entities,
    relation_from_preposition,
    sort_triples,
    traverse_dependency,
)
from .entities import chunk_entities, node_entity, sentence_entities
from .models import Entity, TraversalState, Triple
from .patterns import (
    CategoryPattern,
    CategoryPatternTable,
    ChunkPattern,
    SlotSpec,
    load_category_patterns,
    load_chunk_patterns,
)
from .triple_file import TripleRecord, read_triples, records_to_triples, write_triples

__all__ = [
    'Entity',
    'Triple',
    'TraversalState',
    'TripleRecord',
    'SlotSpec',
    'ChunkPattern',
    'CategoryPattern',
    'CategoryPatternTable',
    'load_chunk_patterns',
    'load_category_patterns',
    'chunk_entities',
    'node_entity',
    'sentence_entities',
    'extract_intra_chunk',
    'relation_from_preposition',
    'link_entities',
    'governing_verb',
    'traverse_dependency',
    'distribute_coordination',
    'extract_sentence',
    'is_negated',
    'sort_triples',
    'TripleExtractor',
    'read_triples',
    'write_triples',
    'records_to_triples',
]
