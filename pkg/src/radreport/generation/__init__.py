# 报告生成

from .describe import (
    anatomy_chain,
    default_slots,
    fill_slots,
    finding_phrase,
    generate_description,
    identify_finding,
    resolve_kg,
)
from .dictation import Dictation, extract_measurements, has_finding, mask_measurements, split_dictation
from .pipeline import GeneratedDescription, ReportGenerator
from .report import (
    DEFAULT_MATCH_THRESHOLD,
    NormalReportTemplate,
    ParallelCorpusEntry,
    TemplateSentence,
    assemble_report,
    load_normal_template,
    load_parallel_corpus,
    locate_normal_sentence,
    match_dictation,
)
from .templates import SLOT_NAMES, DescriptionTemplate, load_description_templates, template_for

__all__ = [
    'DescriptionTemplate',
    'SLOT_NAMES',
    'load_description_templates',
    'template_for',
    'Dictation',
    'extract_measurements',
    'mask_measurements',
    'has_finding',
    'split_dictation',
    'identify_finding',
    'finding_phrase',
    'resolve_kg',
    'anatomy_chain',
    'default_slots',
    'fill_slots',
    'generate_description',
    'ParallelCorpusEntry',
    'TemplateSentence',
    'NormalReportTemplate',
    'DEFAULT_MATCH_THRESHOLD',
    'load_parallel_corpus',
    'load_normal_template',
    'match_dictation',
    'locate_normal_sentence',
    'assemble_report',
    'GeneratedDescription',
    'ReportGenerator',
]
