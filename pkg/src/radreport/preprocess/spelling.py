"""
对称删除拼写纠错与复合词切分
词典: 正确词 -> 语料频次；删除索引: 删除变体 -> 可能的原词
"""
import logging
import math
import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Set, Tuple

import numpy as np

from ..utils import read_tsv

logger = logging.getLogger(__name__)

UNITS = frozenset({"mm", "cm", "cc", "ml"})


def deletion_variants(word: str, max_edit_distance: int) -> Set[str]:
    """最多删除 max_edit_distance 个字符得到的所有变体（含空串，不含原词）"""
    variants: Set[str] = set()
    frontier = {word}
    for _ in range(max_edit_distance):
        next_frontier = set()
        for item in frontier:
            for i in range(len(item)):
                shorter = item[:i] + item[i + 1:]
                if shorter not in variants:
                    variants.add(shorter)
                    next_frontier.add(shorter)
        frontier = next_frontier
    variants.discard(word)
    return variants


def osa_distance(a: str, b: str) -> int:
    """Damerau-Levenshtein（限制转置，OSA）编辑距离"""
    rows, cols = len(a) + 1, len(b) + 1
    table = np.zeros((rows, cols), dtype=np.int32)
    table[:, 0] = np.arange(rows)
    table[0, :] = np.arange(cols)
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            table[i, j] = min(table[i - 1, j] + 1, table[i, j - 1] + 1, table[i - 1, j - 1] + cost)
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                table[i, j] = min(table[i, j], table[i - 2, j - 2] + 1)
    return int(table[rows - 1, cols - 1])


@dataclass
class SpellIndex:
    terms: Dict[str, int] = field(default_factory=dict)
    deletion_index: Dict[str, List[str]] = field(default_factory=dict)
    max_edit_distance: int = 2

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.terms

    @property
    def total(self) -> int:
        return sum(self.terms.values())

    @property
    def longest(self) -> int:
        return max((len(term) for term in self.terms), default=0)

    def candidates(self, word: str) -> List[Tuple[str, int]]:
        """删除索引命中的、编辑距离不超过上限的词及其距离"""
        word = word.lower()
        seen: Set[str] = set()
        found = []
        for key in {word} | deletion_variants(word, self.max_edit_distance):
            for term in self.deletion_index.get(key, ()):
                if term in seen:
                    continue
                seen.add(term)
                distance = osa_distance(word, term)
                if distance <= self.max_edit_distance:
                    found.append((term, distance))
        return found

    def best(self, word: str) -> Optional[Tuple[str, int]]:
        """(距离, -频次, 字典序) 最小的候选"""
        found = self.candidates(word)
        if not found:
            return None
        return min(found, key=lambda item: (item[1], -self.terms[item[0]], item[0]))


def build_spell_index(word_frequencies: Mapping[str, int], max_edit_distance: int = 2) -> SpellIndex:
    """构建对称删除索引

    每个词也以自身作为删除键，多打了字符的输入删除后与原词相同，靠这个键命中。

    Args:
        word_frequencies: 词 -> 频次，频次小于1的词被忽略
        max_edit_distance: 1 或 2

    Returns:
        SpellIndex
    """
    if max_edit_distance not in (1, 2):
        raise ValueError(f"max_edit_distance 只能是1或2，收到: {max_edit_distance}")

    index = SpellIndex(max_edit_distance=max_edit_distance)
    for raw, count in word_frequencies.items():
        term = raw.strip().lower()
        if not term or int(count) < 1:
            logger.debug(f"忽略频次非法的词: {raw!r}")
            continue
        index.terms[term] = index.terms.get(term, 0) + int(count)

    for term in sorted(index.terms):
        for key in {term} | deletion_variants(term, max_edit_distance):
            index.deletion_index.setdefault(key, []).append(term)
    logger.info(f"拼写索引: {len(index.terms)} 个词，{len(index.deletion_index)} 个删除键")
    return index


def load_word_frequencies(path: str) -> Dict[str, int]:
    """加载 `term<TAB>count`"""
    frequencies: Dict[str, int] = {}
    df = read_tsv(path, ["term", "count"], required=2)
    for term, count in zip(df["term"], df["count"]):
        frequencies[term.lower()] = frequencies.get(term.lower(), 0) + int(count)
    return frequencies


def is_exempt(token: str) -> bool:
    """含数字、单位、单字符、带连字符的词不参与纠错"""
    lowered = token.lower()
    return (len(token) <= 1 or any(ch.isdigit() for ch in token) or lowered in UNITS
            or "-" in token or not re.fullmatch(r"[a-z']+", lowered))


def _match_case(original: str, corrected: str) -> str:
    if original.isupper() and len(original) > 1:
        return corrected.upper()
    if original[:1].isupper():
        return corrected[:1].upper() + corrected[1:]
    return corrected


def correct_token(token: str, index: SpellIndex) -> str:
    """返回最佳纠正；在词典中、被豁免或没有候选时原样返回"""
    if is_exempt(token) or token.lower() in index.terms:
        return token
    best = index.best(token)
    if best is None:
        return token
    corrected = _match_case(token, best[0])
    logger.debug(f"拼写纠正 {token} -> {corrected} (距离 {best[1]})")
    return corrected


def segment_compound(token: str, index: SpellIndex) -> List[str]:
    """把粘连词切成词典词，使各词频率乘积最大；无法完整切分时返回 [token]

    频率按总词频归一化，得分为各段 log(count / total) 之和，每一段都贡献一个负项。
    """
    word = token.lower()
    if not word or word in index.terms or not index.terms:
        return [token]

    total = index.total
    longest = index.longest
    n = len(word)
    score = np.full(n + 1, -np.inf)
    back = np.zeros(n + 1, dtype=np.int32)
    score[0] = 0.0
    for end in range(1, n + 1):
        for start in range(max(0, end - longest), end):
            piece = word[start:end]
            if piece not in index.terms or score[start] == -np.inf:
                continue
            candidate = score[start] + math.log(index.terms[piece] / total)
            if candidate > score[end]:
                score[end] = candidate
                back[end] = start

    if score[n] == -np.inf:
        return [token]
    pieces = []
    end = n
    while end > 0:
        start = int(back[end])
        pieces.append(word[start:end])
        end = start
    return pieces[::-1]
