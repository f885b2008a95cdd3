# 词典模块

from .dictionary import (
    Lexicon,
    LexiconEntry,
    decompose_long_phrases,
    decompose_phrase,
    load_lexicon,
    longest_match,
)
from .supersense import SupersenseLexicon, load_supersense_lexicon, map_supersense

__all__ = [
    'Lexicon',
    'LexiconEntry',
    'load_lexicon',
    'decompose_phrase',
    'decompose_long_phrases',
    'longest_match',
    'SupersenseLexicon',
    'load_supersense_lexicon',
    'map_supersense',
]
