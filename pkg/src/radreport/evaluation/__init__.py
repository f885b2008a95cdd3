# 评估指标

from .text_metrics import (
    SimilarityBackend,
    TermFrequencyBackend,
    bleu,
    cumulative_bleu,
    description_scores,
    eval_tokens,
    individual_bleu,
    lcs_length,
    lexical_cosine,
    modified_precision,
    rouge_l,
    rouge_n,
)
from .triple_metrics import (
    GoldSentence,
    MetricsReport,
    SentenceScore,
    group_records,
    load_gold_triples,
    sentence_prf,
    triple_prf,
)

__all__ = [
    'GoldSentence',
    'MetricsReport',
    'SentenceScore',
    'triple_prf',
    'sentence_prf',
    'group_records',
    'load_gold_triples',
    'bleu',
    'individual_bleu',
    'cumulative_bleu',
    'modified_precision',
    'rouge_n',
    'rouge_l',
    'lcs_length',
    'lexical_cosine',
    'eval_tokens',
    'description_scores',
    'SimilarityBackend',
    'TermFrequencyBackend',
]
