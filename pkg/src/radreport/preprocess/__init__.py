# 语料预处理

from .cleaner import clean_sentence, preprocess_report, split_sentences
from .models import CleanSentence, RawReport, ReportSections, ScanType
from .sections import SectionPattern, load_reports, load_section_patterns, segment_report
from .spelling import (
    SpellIndex,
    build_spell_index,
    correct_token,
    deletion_variants,
    is_exempt,
    load_word_frequencies,
    osa_distance,
    segment_compound,
)

__all__ = [
    'RawReport',
    'ReportSections',
    'CleanSentence',
    'ScanType',
    'SectionPattern',
    'load_section_patterns',
    'load_reports',
    'segment_report',
    'SpellIndex',
    'build_spell_index',
    'load_word_frequencies',
    'deletion_variants',
    'osa_distance',
    'is_exempt',
    'correct_token',
    'segment_compound',
    'split_sentences',
    'clean_sentence',
    'preprocess_report',
]
