"""
文本相似度指标: BLEU、ROUGE-N、ROUGE-L、词频余弦
"""
import logging
import math
import re
from collections import Counter
from typing import List, Optional, Protocol, Sequence, Tuple

import numpy as np
import pandas as pd
from nltk.util import ngrams
from sklearn.feature_extraction.text import CountVectorizer
from sklearn.metrics.pairwise import cosine_similarity

logger = logging.getLogger(__name__)

EVAL_TOKEN_RE = re.compile(r"\d+(?:\.\d+)?|[a-z0-9]+(?:[-'][a-z0-9]+)*")

STOPWORDS = frozenset({
    "a", "an", "the", "of", "in", "is", "are", "and", "or", "with", "to", "for", "on", "at", "by",
    "be", "was", "were", "as", "there", "this", "that", "it",
})


def eval_tokens(text: str) -> List[str]:
    """小写、去标点，测量值（如 2.2）保持为一个词"""
    return EVAL_TOKEN_RE.findall(text.lower())


def _counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(ngrams(tokens, n)) if len(tokens) >= n else Counter()


def _f_measure(precision: float, recall: float) -> float:
    return 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0


def modified_precision(candidate: Sequence[str], reference: Sequence[str], n: int,
                       smoothing: bool = False) -> float:
    """按参考译文截断计数的 n-gram 精确率；平滑只作用于 n >= 2"""
    cand, ref = _counts(candidate, n), _counts(reference, n)
    total = sum(cand.values())
    clipped = sum(min(count, ref[gram]) for gram, count in cand.items())
    if smoothing and n >= 2:
        return (clipped + 1) / (total + 1)
    if total == 0:
        return 1.0 if not ref else 0.0
    return clipped / total


def bleu(candidate: Sequence[str], reference: Sequence[str], max_n: int = 4,
         weights: Optional[Sequence[float]] = None, smoothing: bool = False) -> float:
    """句子级 BLEU

    Args:
        candidate: 候选词序列
        reference: 参考词序列
        max_n: 最大阶数
        weights: 各阶权重，缺省为均匀权重；权重为0的阶跳过
        smoothing: 是否对 n >= 2 的计数做加一平滑

    Returns:
        float: [0, 1]
    """
    if max_n < 1:
        raise ValueError("max_n 必须 >= 1")
    if not candidate:
        return 0.0
    weights = list(weights) if weights is not None else [1.0 / max_n] * max_n
    if len(weights) != max_n:
        raise ValueError("weights 长度必须等于 max_n")

    log_sum = 0.0
    for n, weight in enumerate(weights, start=1):
        if weight == 0:
            continue
        precision = modified_precision(candidate, reference, n, smoothing)
        if precision == 0:
            return 0.0
        log_sum += weight * math.log(precision)

    c, r = len(candidate), len(reference)
    brevity = 1.0 if c > r else math.exp(1 - r / c)
    return min(1.0, brevity * math.exp(log_sum))


def individual_bleu(candidate, reference, n: int, smoothing: bool = False) -> float:
    return bleu(candidate, reference, max_n=n, weights=[0.0] * (n - 1) + [1.0], smoothing=smoothing)


def cumulative_bleu(candidate, reference, n: int, smoothing: bool = False) -> float:
    return bleu(candidate, reference, max_n=n, weights=[1.0 / n] * n, smoothing=smoothing)


def rouge_n(candidate: Sequence[str], reference: Sequence[str], n: int) -> Tuple[float, float, float]:
    """ROUGE-N (precision, recall, f)"""
    if n < 1:
        raise ValueError("n 必须 >= 1")
    cand, ref = _counts(candidate, n), _counts(reference, n)
    overlap = sum((cand & ref).values())
    precision = overlap / sum(cand.values()) if cand else 0.0
    recall = overlap / sum(ref.values()) if ref else 0.0
    return precision, recall, _f_measure(precision, recall)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """最长公共子序列长度，动态规划表"""
    if not a or not b:
        return 0
    table = np.zeros((len(a) + 1, len(b) + 1), dtype=np.int32)
    for i, x in enumerate(a, start=1):
        for j, y in enumerate(b, start=1):
            if x == y:
                table[i, j] = table[i - 1, j - 1] + 1
            else:
                table[i, j] = max(table[i - 1, j], table[i, j - 1])
    return int(table[len(a), len(b)])


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> Tuple[float, float, float]:
    """ROUGE-L (precision, recall, f)"""
    lcs = lcs_length(candidate, reference)
    precision = lcs / len(candidate) if candidate else 0.0
    recall = lcs / len(reference) if reference else 0.0
    return precision, recall, _f_measure(precision, recall)


class SimilarityBackend(Protocol):
    name: str

    def similarity(self, candidate: str, reference: str) -> float:
        ...


class TermFrequencyBackend:
    """词频向量余弦，去停用词"""
    name = "term-frequency"

    def __init__(self, stopwords=STOPWORDS):
        self.stopwords = frozenset(stopwords)

    def tokenize(self, text: str) -> List[str]:
        return [token for token in eval_tokens(text) if token not in self.stopwords]

    def similarity(self, candidate: str, reference: str) -> float:
        if not self.tokenize(candidate) or not self.tokenize(reference):
            return 0.0
        vectorizer = CountVectorizer(tokenizer=self.tokenize, lowercase=False, token_pattern=None)
        matrix = vectorizer.fit_transform([candidate, reference])
        score = float(cosine_similarity(matrix[0], matrix[1])[0][0])
        return min(1.0, max(0.0, score))


_DEFAULT_BACKEND = TermFrequencyBackend()


def lexical_cosine(candidate: str, reference: str, backend: Optional[SimilarityBackend] = None) -> float:
    """两句话的相似度，默认词频余弦；可替换为向量模型等其他后端"""
    return (backend or _DEFAULT_BACKEND).similarity(candidate, reference)


def description_scores(rows: Sequence[Tuple[str, str, str]], smoothing: bool = True,
                       backend: Optional[SimilarityBackend] = None) -> pd.DataFrame:
    """逐条描述打分：单阶/累积 BLEU 1-4、ROUGE-1..4、ROUGE-L 和词频余弦

    Args:
        rows: [(id, 生成描述, 参考描述), ...]
    """
    logger.info(f"BLEU 平滑模式: {'add-one(n>=2)' if smoothing else 'none'}")
    records = []
    for row_id, candidate, reference in rows:
        cand, ref = eval_tokens(candidate), eval_tokens(reference)
        record = {"id": row_id}
        for n in range(1, 5):
            record[f"bleu_{n}gram"] = individual_bleu(cand, ref, n, smoothing)
            record[f"bleu_cumulative_{n}gram"] = cumulative_bleu(cand, ref, n, smoothing)
        for n in range(1, 5):
            p, r, f = rouge_n(cand, ref, n)
            record.update({f"rouge{n}_p": p, f"rouge{n}_r": r, f"rouge{n}_f": f})
        p, r, f = rouge_l(cand, ref)
        record.update({"rougeL_p": p, "rougeL_r": r, "rougeL_f": f})
        record["lexical_cosine"] = lexical_cosine(candidate, reference, backend)
        records.append(record)
    return pd.DataFrame(records)
