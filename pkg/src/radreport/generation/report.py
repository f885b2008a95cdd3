"""
报告组装
口述在平行语料中查找最相近的条目，取其正常描述，在正常报告模板中定位对应句子并替换
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..evaluation import bleu, eval_tokens
from ..exceptions import BelowThreshold, ParseError
from ..utils import read_tsv
from .dictation import mask_measurements

logger = logging.getLogger(__name__)

DEFAULT_MATCH_THRESHOLD = 0.3


@dataclass(frozen=True)
class ParallelCorpusEntry:
    dictation: str
    normal_description: str

    def __post_init__(self):
        if not self.dictation.strip() or not self.normal_description.strip():
            raise ValueError("平行语料的口述和正常描述都不能为空")


def load_parallel_corpus(path: str) -> List[ParallelCorpusEntry]:
    """加载 `dictation<TAB>normal_description`，保持文件顺序"""
    df = read_tsv(path, ["dictation", "normal_description"], required=2)
    corpus = [ParallelCorpusEntry(row.dictation, row.normal_description) for row in df.itertuples(index=False)]
    logger.info(f"加载平行语料 {len(corpus)} 条")
    return corpus


@dataclass(frozen=True)
class TemplateSentence:
    text: str
    organ: Optional[str] = None


@dataclass(frozen=True)
class NormalReportTemplate:
    title: str
    sentences: Tuple[TemplateSentence, ...]

    def __len__(self):
        return len(self.sentences)

    def render(self, texts: Optional[Sequence[str]] = None) -> str:
        """标题、空行，然后按器官分段输出；texts 给出每个位置的句子"""
        texts = list(texts) if texts is not None else [s.text for s in self.sentences]
        lines = [self.title, ""] if self.title else []
        current = None
        for sentence, text in zip(self.sentences, texts):
            if sentence.organ != current:
                if current is not None or (lines and lines[-1] != ""):
                    lines.append("")
                if sentence.organ:
                    lines.append(f"{sentence.organ.upper()}:")
                current = sentence.organ
            lines.append(text)
        return "\n".join(lines).rstrip("\n") + "\n"


def load_normal_template(path: str) -> NormalReportTemplate:
    """正常报告模板: 每行一句，`#title:` 给出标题，`#organ:` 开始一个器官分段，其余 # 行为注释"""
    title, organ = "", None
    sentences = []
    with open(path, "r", encoding="utf-8") as f:
        for line_number, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                directive, _, value = line[1:].partition(":")
                directive = directive.strip().lower()
                if directive == "title":
                    title = value.strip()
                elif directive == "organ":
                    organ = value.strip().lower() or None
                continue
            sentences.append(TemplateSentence(line, organ))
    if not sentences:
        raise ParseError(0, f"{path}: 正常报告模板没有句子")
    return NormalReportTemplate(title, tuple(sentences))


def _similarity(candidate: str, reference: str, smoothing: bool, mask: bool) -> float:
    if mask:
        candidate, reference = mask_measurements(candidate), mask_measurements(reference)
    return bleu(eval_tokens(candidate), eval_tokens(reference), smoothing=smoothing)


def match_dictation(dictation_text: str, corpus: Sequence[ParallelCorpusEntry],
                    threshold: float = DEFAULT_MATCH_THRESHOLD, smoothing: bool = True,
                    mask: bool = True) -> Tuple[ParallelCorpusEntry, float]:
    """平行语料中 BLEU 最高的条目，并列取靠前者

    Raises:
        BelowThreshold: 最高分低于阈值
    """
    if not corpus:
        raise ValueError("平行语料为空")
    best, best_score = None, -1.0
    for entry in corpus:
        score = _similarity(dictation_text, entry.dictation, smoothing, mask)
        if score > best_score:
            best, best_score = entry, score
    if best_score < threshold:
        raise BelowThreshold(best_score, dictation_text)
    logger.debug(f"口述 '{dictation_text}' 匹配 '{best.dictation}' ({best_score:.4f})")
    return best, best_score


def locate_normal_sentence(template: NormalReportTemplate, normal_description: str,
                           organ: Optional[str] = None, threshold: float = DEFAULT_MATCH_THRESHOLD,
                           smoothing: bool = True) -> Tuple[int, float]:
    """模板中与正常描述最相近的句子下标；给定器官时只在该器官的句子中查找

    Raises:
        BelowThreshold: 最高分低于阈值
    """
    if not template.sentences:
        raise ValueError("正常报告模板为空")
    indices = range(len(template))
    if organ:
        tagged = [i for i in indices if template.sentences[i].organ == organ.lower()]
        if tagged:
            indices = tagged
        else:
            logger.debug(f"模板中没有 {organ} 分段，在全部句子中查找")

    best, best_score = -1, -1.0
    for i in indices:
        score = _similarity(template.sentences[i].text, normal_description, smoothing, mask=False)
        if score > best_score:
            best, best_score = i, score
    if best_score < threshold:
        raise BelowThreshold(best_score, normal_description)
    return best, best_score


def assemble_report(template: NormalReportTemplate, replacements: Sequence[Tuple[int, str]]) -> str:
    """替换模板句子，其余句子原样输出；同一位置的多条描述用空格拼接"""
    merged: Dict[int, List[str]] = {}
    for index, text in replacements:
        if not 0 <= index < len(template):
            raise IndexError(f"模板句子下标越界: {index}")
        merged.setdefault(index, []).append(text)

    texts = [s.text for s in template.sentences]
    for index, generated in merged.items():
        if len(generated) > 1:
            logger.warning(f"IndexCollisionWarning: 模板第 {index} 句被 {len(generated)} 条描述替换，已拼接")
        texts[index] = " ".join(generated)
    return template.render(texts)
