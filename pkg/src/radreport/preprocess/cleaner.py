"""
句子切分与文本清洗
"""
import logging
import re
from typing import Iterable, List, Optional, Sequence

from .models import CleanSentence, RawReport
from .sections import SectionPattern, segment_report
from .spelling import SpellIndex, correct_token, is_exempt, segment_compound

logger = logging.getLogger(__name__)

DEFAULT_ABBREVIATIONS = ("e.g.", "i.e.", "dr.", "approx.", "vs.", "vol.")
BOUNDARY_RE = re.compile(r"[.!?](?=\s|$)")
WORD_RE = re.compile(r"[A-Za-z]+(?:[-'][A-Za-z]+)*")


def split_sentences(section_text: str, abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS) -> List[str]:
    """按换行和句末标点切句；小数和已知缩写不切分"""
    abbreviations = {a.lower() for a in abbreviations}
    sentences = []
    for line in section_text.splitlines():
        start = 0
        for match in BOUNDARY_RE.finditer(line):
            end = match.end()
            words = line[start:end].split()
            last = words[-1].lower() if words else ""
            if last in abbreviations:
                continue
            piece = line[start:end].strip()
            if piece:
                sentences.append(piece)
            start = end
        rest = line[start:].strip()
        if rest:
            sentences.append(rest)
    return sentences


def clean_sentence(sentence: str, index: Optional[SpellIndex], strip_chars: str = "-*•:;,") -> str:
    """逐词纠错，仍不在词典中的词再尝试复合词切分；去掉首尾的多余符号"""
    def fix(match: re.Match) -> str:
        token = match.group(0)
        if index is None or is_exempt(token):
            return token
        corrected = correct_token(token, index)
        if corrected.lower() in index.terms:
            return corrected
        pieces = segment_compound(corrected, index)
        if len(pieces) > 1:
            logger.debug(f"复合词切分 {corrected} -> {pieces}")
        return " ".join(pieces) if len(pieces) > 1 else corrected

    cleaned = WORD_RE.sub(fix, sentence)
    return cleaned.strip().strip(strip_chars + " \t").strip()


def preprocess_report(report: RawReport, section_patterns: Sequence[SectionPattern],
                      index: Optional[SpellIndex], abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS,
                      strip_chars: str = "-*•:;,") -> List[CleanSentence]:
    """分节 -> 取所见和印象 -> 切句 -> 清洗

    Raises:
        NoFindingsSection: 报告中没有所见/印象分节
    """
    sections = segment_report(report, section_patterns)
    results = []
    for section_text in (sections.findings, sections.impression):
        for sentence in split_sentences(section_text, abbreviations):
            cleaned = clean_sentence(sentence, index, strip_chars)
            if cleaned:
                results.append(CleanSentence(report.report_id, len(results), cleaned))
    return results
