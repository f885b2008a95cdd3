import logging
from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Sequence, Tuple

from ..config import DEFAULT_PROPERTY_ORDER
from ..extraction import TripleExtractor
from ..kg import KnowledgeGraph
from ..preprocess.cleaner import DEFAULT_ABBREVIATIONS
from .describe import generate_description, identify_finding, resolve_kg
from .dictation import Dictation, split_dictation
from .report import (
    DEFAULT_MATCH_THRESHOLD,
    NormalReportTemplate,
    ParallelCorpusEntry,
    assemble_report,
    locate_normal_sentence,
    match_dictation,
)
from .templates import DescriptionTemplate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratedDescription:
    """一段口述的生成结果及其在模板中的位置"""
    dictation: str
    description: str
    organ: Optional[str]
    matched_dictation: str
    match_score: float
    sentence_index: int
    locate_score: float

    def to_dict(self) -> dict:
        return {
            "dictation": self.dictation,
            "description": self.description,
            "organ": self.organ,
            "matched_dictation": self.matched_dictation,
            "match_score": round(self.match_score, 6),
            "sentence_index": self.sentence_index,
            "locate_score": round(self.locate_score, 6),
        }


@dataclass
class ReportGenerator:
    """口述 -> 病理描述 -> 患者报告"""
    extractor: TripleExtractor
    kgs: Mapping[str, KnowledgeGraph]
    templates: Mapping[str, DescriptionTemplate]
    corpus: Sequence[ParallelCorpusEntry]
    normal_template: NormalReportTemplate
    match_threshold: float = DEFAULT_MATCH_THRESHOLD
    smoothing: bool = True
    mask_measurements: bool = True
    property_order: Sequence[str] = field(default_factory=lambda: list(DEFAULT_PROPERTY_ORDER))
    abbreviations: Sequence[str] = DEFAULT_ABBREVIATIONS

    def describe(self, text: str, sentence_id: str = "d1") -> GeneratedDescription:
        """单个发现的口述

        先与平行语料匹配，匹配不上的口述不做槽位填充。

        Raises:
            BelowThreshold: 平行语料或模板中没有足够相近的句子
            NoTemplate / MissingRequiredSlot: 描述无法生成
        """
        entry, match_score = match_dictation(text, self.corpus, self.match_threshold,
                                             self.smoothing, self.mask_measurements)

        dictation = Dictation.from_text(text, self.extractor, sentence_id)
        organ, kg = resolve_kg(self.kgs, dictation, identify_finding(dictation))
        description = generate_description(dictation, kg, self.templates, self.property_order)

        index, locate_score = locate_normal_sentence(self.normal_template, entry.normal_description,
                                                     organ, self.match_threshold, self.smoothing)
        logger.info(f"口述 '{text}' -> 模板第 {index} 句")
        return GeneratedDescription(text, description, organ, entry.dictation, match_score, index, locate_score)

    def generate(self, dictation_text: str) -> Tuple[str, List[GeneratedDescription]]:
        """整段口述（可含多个发现） -> (报告文本, 每个发现的结果)"""
        return self.generate_many([dictation_text])

    def generate_many(self, dictations: Sequence[str]) -> Tuple[str, List[GeneratedDescription]]:
        """多条口述合并到同一份报告"""
        results: List[GeneratedDescription] = []
        for text in dictations:
            for piece in split_dictation(text, self.extractor.lexicon, self.abbreviations):
                results.append(self.describe(piece, f"d{len(results) + 1}"))
        report = assemble_report(self.normal_template, [(r.sentence_index, r.description) for r in results])
        return report, results
