"""
三元组抽取评估
逐句计算精确率/召回率，取平均后再算F1
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Literal, Mapping, Sequence, Tuple

import pandas as pd

from ..exceptions import IdMismatch
from ..extraction import TripleRecord, read_triples

logger = logging.getLogger(__name__)

TripleKey = Tuple[str, str, str]
Mode = Literal["full", "pair_only"]


@dataclass(frozen=True)
class GoldSentence:
    sentence_id: str
    gold_triples: FrozenSet[TripleKey]

    def __post_init__(self):
        normalized = frozenset((s.strip().lower(), r.strip(), o.strip().lower()) for s, r, o in self.gold_triples)
        object.__setattr__(self, "gold_triples", normalized)


@dataclass(frozen=True)
class SentenceScore:
    sentence_id: str
    precision: float
    recall: float


@dataclass
class MetricsReport:
    per_sentence: List[SentenceScore] = field(default_factory=list)
    avg_precision: float = 0.0
    avg_recall: float = 0.0
    f1_of_averages: float = 0.0
    mode: str = "full"

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "conventions": "both empty: P=R=1; system empty: P=1,R=0; gold empty: P=0,R=1",
            "per_sentence": [
                {"sentence_id": s.sentence_id, "precision": s.precision, "recall": s.recall}
                for s in self.per_sentence
            ],
            "aggregate": {
                "avg_precision": self.avg_precision,
                "avg_recall": self.avg_recall,
                "f1_of_averages": self.f1_of_averages,
            },
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(s.sentence_id, s.precision, s.recall) for s in self.per_sentence],
            columns=["sentence_id", "precision", "recall"],
        )


def _project(triples: Iterable[TripleKey], mode: Mode) -> set:
    normalized = {(s.strip().lower(), r.strip(), o.strip().lower()) for s, r, o in triples}
    if mode == "pair_only":
        return {(s, o) for s, _, o in normalized}
    return normalized


def sentence_prf(system: Iterable[TripleKey], gold: Iterable[TripleKey], mode: Mode = "full") -> Tuple[float, float]:
    system_set, gold_set = _project(system, mode), _project(gold, mode)
    if not system_set and not gold_set:
        return 1.0, 1.0
    if not system_set:
        return 1.0, 0.0
    if not gold_set:
        return 0.0, 1.0
    correct = len(system_set & gold_set)
    return correct / len(system_set), correct / len(gold_set)


def triple_prf(system: Mapping[str, Iterable[TripleKey]], gold: Sequence[GoldSentence],
               mode: Mode = "full") -> MetricsReport:
    """逐句 P/R，宏平均后计算 F1

    Args:
        system: sentence_id -> 系统三元组 (subject, relation, object)
        gold: 标准答案，决定句子顺序；系统缺失的句子按空集计
        mode: full 比较整条三元组，pair_only 只比较 (subject, object)

    Raises:
        IdMismatch: 系统输出中有标准答案不存在的句子
    """
    if mode not in ("full", "pair_only"):
        raise ValueError(f"不支持的评估模式: {mode}")
    gold_ids = {g.sentence_id for g in gold}
    for sentence_id in system:
        if sentence_id not in gold_ids:
            raise IdMismatch(sentence_id)

    scores = []
    for g in gold:
        precision, recall = sentence_prf(system.get(g.sentence_id, ()), g.gold_triples, mode)
        scores.append(SentenceScore(g.sentence_id, precision, recall))

    if not scores:
        return MetricsReport(mode=mode)
    avg_p = sum(s.precision for s in scores) / len(scores)
    avg_r = sum(s.recall for s in scores) / len(scores)
    f1 = 2 * avg_p * avg_r / (avg_p + avg_r) if avg_p + avg_r > 0 else 0.0
    logger.info(f"三元组评估({mode}): P={avg_p:.4f} R={avg_r:.4f} F1={f1:.4f}，共 {len(scores)} 句")
    return MetricsReport(scores, avg_p, avg_r, f1, mode)


def group_records(records: Iterable[TripleRecord], assertive_only: bool = False) -> Dict[str, List[TripleKey]]:
    """按 sentence_id 分组，保持首次出现顺序"""
    grouped: Dict[str, List[TripleKey]] = {}
    for record in records:
        if assertive_only and not record.assertive:
            continue
        grouped.setdefault(record.sentence_id, []).append(record.key)
    return grouped


def load_gold_triples(path: str, sentence_ids: Iterable[str] = ()) -> List[GoldSentence]:
    """加载标准三元组文件；sentence_ids 中没有任何三元组的句子作为空集补上"""
    grouped = group_records(read_triples(path))
    for sentence_id in sentence_ids:
        grouped.setdefault(sentence_id, [])
    return [GoldSentence(sentence_id, frozenset(keys)) for sentence_id, keys in grouped.items()]
