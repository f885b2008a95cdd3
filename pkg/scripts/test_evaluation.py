#!/usr/bin/env python3
"""
测试评估指标
BLEU、ROUGE、词频余弦和三元组 P/R/F1
"""

import math
import os
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# 添加项目根目录到Python路径
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.radreport.evaluation import (  # noqa: E402
    GoldSentence,
    bleu,
    cumulative_bleu,
    description_scores,
    eval_tokens,
    individual_bleu,
    lcs_length,
    lexical_cosine,
    load_gold_triples,
    modified_precision,
    rouge_l,
    rouge_n,
    sentence_prf,
    triple_prf,
)
from src.radreport.exceptions import IdMismatch  # noqa: E402

from conftest import data_path  # noqa: E402

CANDIDATE = "the cat sat on the mat".split()
REFERENCE = "the cat is on the mat".split()


def test_eval_tokens_keep_decimals():
    assert eval_tokens("Cyst, 1.4 x 2.2 cm; non-enhancing.") == ["cyst", "1.4", "x", "2.2", "cm", "non-enhancing"]


def test_modified_precision_clips_counts():
    assert modified_precision(["the"] * 7, "the cat is on the mat".split(), 1) == pytest.approx(2 / 7)
    assert modified_precision(CANDIDATE, REFERENCE, 1) == pytest.approx(5 / 6)
    assert modified_precision(CANDIDATE, REFERENCE, 2) == pytest.approx(3 / 5)
    assert modified_precision(CANDIDATE, REFERENCE, 3) == pytest.approx(1 / 4)
    assert modified_precision(CANDIDATE, REFERENCE, 4) == 0.0


def test_smoothing_applies_from_bigrams():
    assert modified_precision(["x"], ["y"], 1, smoothing=True) == 0.0
    assert modified_precision(["x"], ["y"], 2, smoothing=True) == 1.0
    assert modified_precision(CANDIDATE, REFERENCE, 4, smoothing=True) == pytest.approx(1 / 4)


def test_bleu_values():
    assert bleu(CANDIDATE, CANDIDATE) == pytest.approx(1.0)
    assert bleu(CANDIDATE, REFERENCE) == 0.0
    assert bleu(CANDIDATE, REFERENCE, smoothing=True) == pytest.approx((1 / 18) ** 0.25)
    assert individual_bleu(CANDIDATE, REFERENCE, 1) == pytest.approx(5 / 6)
    assert individual_bleu(CANDIDATE, REFERENCE, 2) == pytest.approx(3 / 5)
    assert cumulative_bleu(CANDIDATE, REFERENCE, 2) == pytest.approx(math.sqrt(0.5))
    assert bleu([], REFERENCE) == 0.0


def test_bleu_brevity_penalty():
    assert bleu(["the", "cat"], CANDIDATE, max_n=1) == pytest.approx(math.exp(-2))


def test_bleu_rejects_bad_weights():
    with pytest.raises(ValueError):
        bleu(CANDIDATE, REFERENCE, max_n=2, weights=[1.0])
    with pytest.raises(ValueError):
        bleu(CANDIDATE, REFERENCE, max_n=0)


def test_rouge():
    assert rouge_n(CANDIDATE, REFERENCE, 1) == pytest.approx((5 / 6, 5 / 6, 5 / 6))
    assert rouge_n(CANDIDATE, REFERENCE, 2) == pytest.approx((3 / 5, 3 / 5, 3 / 5))
    assert lcs_length(CANDIDATE, REFERENCE) == 5
    assert rouge_l(CANDIDATE, REFERENCE) == pytest.approx((5 / 6, 5 / 6, 5 / 6))
    assert rouge_l([], REFERENCE) == (0.0, 0.0, 0.0)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from("abcd"), max_size=10), st.lists(st.sampled_from("abcd"), max_size=10))
def test_lcs_properties(a, b):
    lcs = lcs_length(a, b)
    assert lcs == lcs_length(b, a)
    assert lcs <= min(len(a), len(b))
    assert lcs_length(a, a) == len(a)
    precision, recall, f = rouge_l(a, b)
    assert 0.0 <= precision <= 1.0 and 0.0 <= recall <= 1.0
    assert f <= max(precision, recall) + 1e-12


def test_lexical_cosine():
    text = "Liver shows decreased echogenicity."
    assert lexical_cosine(text, text) == pytest.approx(1.0)
    assert lexical_cosine("the of", text) == 0.0
    assert lexical_cosine("spleen", text) == 0.0
    # 停用词不参与计算
    assert lexical_cosine("The liver", "liver") == pytest.approx(1.0)


def test_description_scores_columns():
    text = "There is evidence of a pseudo cyst in the head of pancreas."
    df = description_scores([("d1", text, text)])
    assert list(df["id"]) == ["d1"]
    for column in ("bleu_1gram", "bleu_cumulative_4gram", "rouge2_f", "rougeL_f", "lexical_cosine"):
        assert df.loc[0, column] == pytest.approx(1.0)


def test_sentence_prf_conventions():
    triple = ("lesion", "FoundIn", "liver")
    assert sentence_prf([], []) == (1.0, 1.0)
    assert sentence_prf([], [triple]) == (1.0, 0.0)
    assert sentence_prf([triple], []) == (0.0, 1.0)
    assert sentence_prf([("Lesion", "FoundIn", "Liver ")], [triple]) == (1.0, 1.0)


def test_triple_prf_macro_average():
    gold = [
        GoldSentence("s1", frozenset({("right lobe", "PartOf", "liver")})),
        GoldSentence("s2", frozenset()),
        GoldSentence("s3", frozenset({("cyst", "FoundIn", "liver")})),
        GoldSentence("s4", frozenset()),
    ]
    system = {"s1": [("Right Lobe", "PartOf", "liver")], "s4": [("cyst", "FoundIn", "liver")]}
    report = triple_prf(system, gold)
    assert [(s.precision, s.recall) for s in report.per_sentence] == [(1.0, 1.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]
    assert report.avg_precision == pytest.approx(0.75)
    assert report.avg_recall == pytest.approx(0.75)
    assert report.f1_of_averages == pytest.approx(0.75)
    assert report.to_dict()["aggregate"]["f1_of_averages"] == pytest.approx(0.75)
    assert list(report.to_frame().columns) == ["sentence_id", "precision", "recall"]


def test_pair_only_ignores_relation():
    gold = [GoldSentence("s1", frozenset({("lesion", "PartOf", "liver")}))]
    system = {"s1": [("lesion", "FoundIn", "liver")]}
    assert triple_prf(system, gold).f1_of_averages == 0.0
    assert triple_prf(system, gold, "pair_only").f1_of_averages == pytest.approx(1.0)
    with pytest.raises(ValueError):
        triple_prf(system, gold, "loose")


def test_unknown_system_sentence_rejected():
    gold = [GoldSentence("s1", frozenset())]
    with pytest.raises(IdMismatch) as excinfo:
        triple_prf({"zz": []}, gold)
    assert excinfo.value.sentence_id == "zz"


def test_load_gold_triples():
    gold = load_gold_triples(data_path("gold", "gold_triples.tsv"), ["g01", "extra"])
    by_id = {g.sentence_id: g for g in gold}
    assert ("lesion", "ObservedIn", "right lobe") in by_id["g01"].gold_triples
    assert by_id["extra"].gold_triples == frozenset()
    assert gold[-1].sentence_id == "extra"
