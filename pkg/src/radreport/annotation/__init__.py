# 标注层

from .fallback import fallback_annotate, tokenize
from .loader import load_annotations, parse_annotations, serialize_annotations
from .merge import merge_chunks
from .models import AnnotatedSentence, ChunkedSentence, Node, NounChunk, Token

__all__ = [
    'Token',
    'NounChunk',
    'AnnotatedSentence',
    'ChunkedSentence',
    'Node',
    'load_annotations',
    'parse_annotations',
    'serialize_annotations',
    'fallback_annotate',
    'tokenize',
    'merge_chunks',
]
