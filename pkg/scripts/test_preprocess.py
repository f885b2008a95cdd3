#!/usr/bin/env python3
"""
测试报告预处理
分节、切句、拼写纠错和复合词切分
"""

import math
import os
import sys
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# 添加项目根目录到Python路径
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.radreport.exceptions import NoFindingsSection  # noqa: E402
from src.radreport.preprocess import (  # noqa: E402
    RawReport,
    ScanType,
    build_spell_index,
    clean_sentence,
    correct_token,
    deletion_variants,
    is_exempt,
    load_reports,
    load_word_frequencies,
    osa_distance,
    preprocess_report,
    segment_compound,
    segment_report,
    split_sentences,
)
from src.radreport.preprocess.sections import SECTIONS  # noqa: E402

from conftest import data_path  # noqa: E402


def brute_osa(a, b):
    """逐字符递归定义的 OSA 距离"""
    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        best = min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))
        if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
            best = min(best, d(i - 2, j - 2) + 1)
        return best
    return d(len(a), len(b))


CORPUS_FREQUENCIES = load_word_frequencies(data_path("word_frequencies.tsv"))
CORPUS_INDEX = build_spell_index(CORPUS_FREQUENCIES, 2)

COMPOUND_FREQUENCIES = {"right": 30, "rig": 2, "ht": 1, "lobe": 20, "lo": 3, "be": 5,
                        "cyst": 10, "cy": 1, "st": 2, "liver": 25, "li": 1, "ver": 1}

HEADINGS = {
    "header": ["Patient Name", "Referred by"],
    "history": ["Clinical History", "Indication"],
    "findings": ["FINDINGS", "Observations"],
    "impression": ["Impression", "CONCLUSION"],
}
SECTION_TEXT = st.text(alphabet="xyz .\n", max_size=30)


def brute_best(word, index):
    """遍历全部词典词的最佳纠正"""
    found = [(term, brute_osa(word, term)) for term in index.terms]
    found = [item for item in found if item[1] <= index.max_edit_distance]
    if not found:
        return None
    return min(found, key=lambda item: (item[1], -index.terms[item[0]], item[0]))


@st.composite
def corrupted_terms(draw):
    """词典词上做至多两次删除、插入、替换或相邻转置"""
    word = draw(st.sampled_from(sorted(CORPUS_FREQUENCIES)))
    for _ in range(draw(st.integers(0, 2))):
        op = draw(st.sampled_from(["delete", "insert", "replace", "transpose"]))
        i = draw(st.integers(0, len(word) - 1))
        ch = draw(st.sampled_from("abcdehilnorstuy"))
        if op == "delete" and len(word) > 2:
            word = word[:i] + word[i + 1:]
        elif op == "insert":
            word = word[:i] + ch + word[i:]
        elif op == "replace":
            word = word[:i] + ch + word[i + 1:]
        elif op == "transpose" and i + 1 < len(word):
            word = word[:i] + word[i + 1] + word[i] + word[i + 2:]
    return word


def all_segmentations(word, terms):
    if not word:
        yield []
        return
    for end in range(1, len(word) + 1):
        if word[:end] in terms:
            for rest in all_segmentations(word[end:], terms):
                yield [word[:end]] + rest


def split_score(pieces, index):
    return sum(math.log(index.terms[piece] / index.total) for piece in pieces)


def is_subsequence(part, whole):
    remaining = iter(whole)
    return all(ch in remaining for ch in part)


def test_split_sentences_keeps_decimals_and_abbreviations():
    text = "Cyst measuring 1.4 x 3 cm. Approx. 2 cm mass seen.\nSpleen is normal"
    assert split_sentences(text) == [
        "Cyst measuring 1.4 x 3 cm.",
        "Approx. 2 cm mass seen.",
        "Spleen is normal",
    ]


def test_segment_report_sections(section_patterns):
    report = load_reports(data_path("corpus", "report_001.txt"))[0]
    sections = segment_report(report, section_patterns)
    assert "Dr. YYYY" in sections.header
    assert sections.history.startswith("Pain in right hypochondrium")
    assert sections.findings.splitlines()[0] == "Non-enhancing hypodense lesion noted in right lobe of liver."
    assert sections.impression == "Focal lesion in the rightlobe of liver."
    assert "Pain" not in sections.forwarded


def test_segment_report_without_findings(section_patterns):
    report = RawReport("r9", "Patient Name: X\nClinical History: pain\nLiver is normal.")
    with pytest.raises(NoFindingsSection):
        segment_report(report, section_patterns)


def test_alternative_headers_recognized(section_patterns):
    report = load_reports(data_path("corpus", "report_002.txt"))[0]
    sections = segment_report(report, section_patterns)
    assert sections.findings.startswith("Pancreas shows bulky size")
    assert sections.impression == "Acute pancreatitis with pseudo cyst in head of pancreas."


@st.composite
def sectioned_reports(draw):
    """按固定顺序出现的标题，所见必有，其余可选"""
    parts = [draw(SECTION_TEXT)]
    expected = {}
    for section in SECTIONS:
        if section != "findings" and not draw(st.booleans()):
            continue
        text = draw(SECTION_TEXT)
        expected[section] = text.strip()
        parts.append(f"{draw(st.sampled_from(HEADINGS[section]))}: {text}")
    return RawReport("r1", "\n".join(parts) + "\n"), expected


@settings(max_examples=150, deadline=None)
@given(sectioned_reports())
def test_sections_conserve_report_text(section_patterns, case):
    report, expected = case
    sections = segment_report(report, section_patterns)
    fields = [getattr(sections, name) for name in SECTIONS]
    assert is_subsequence("\n".join(f for f in fields if f), report.body)
    assert sections.findings == expected["findings"]
    assert sections.impression == expected.get("impression", "")


def test_corpus_sections_conserve_report_text(section_patterns):
    for report in load_reports(data_path("corpus")):
        sections = segment_report(report, section_patterns)
        fields = [getattr(sections, name) for name in SECTIONS]
        assert is_subsequence("\n".join(f for f in fields if f), report.body), report.report_id


def test_raw_report_rejects_empty_body():
    with pytest.raises(ValueError):
        RawReport("r1", "   \n")
    assert ScanType.parse("CT") == ScanType.CT


def test_deletion_variants():
    assert deletion_variants("abc", 1) == {"bc", "ac", "ab"}
    assert deletion_variants("abc", 2) == {"bc", "ac", "ab", "a", "b", "c"}


def test_osa_distance_examples():
    assert osa_distance("echotextre", "echotexture") == 1
    assert osa_distance("ca", "ac") == 1
    assert osa_distance("ca", "abc") == 3
    assert osa_distance("", "liver") == 5


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="abcd", max_size=7), st.text(alphabet="abcd", max_size=7))
def test_osa_distance_matches_recursive_definition(a, b):
    assert osa_distance(a, b) == brute_osa(a, b)


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="elivrso", min_size=2, max_size=8))
def test_correct_token_result_is_term_or_input(word):
    index = build_spell_index({"liver": 10, "lesion": 5, "solid": 3, "over": 2}, 2)
    corrected = correct_token(word, index)
    if corrected != word:
        assert corrected in index.terms
        assert osa_distance(word, corrected) <= 2


@settings(max_examples=250, deadline=None)
@given(corrupted_terms())
def test_spell_index_winner_matches_exhaustive_search(word):
    assert CORPUS_INDEX.best(word) == brute_best(word, CORPUS_INDEX)


@settings(max_examples=150, deadline=None)
@given(corrupted_terms())
def test_correct_token_idempotent(word):
    once = correct_token(word, CORPUS_INDEX)
    assert correct_token(once, CORPUS_INDEX) == once


def test_correct_token_idempotent_on_corpus(spell_index):
    for report in load_reports(data_path("corpus")):
        for token in report.body.split():
            token = token.strip(".,:;")
            if not token:
                continue
            once = correct_token(token, spell_index)
            assert correct_token(once, spell_index) == once, token


def test_correct_token_prefers_distance_then_frequency():
    index = build_spell_index({"liver": 1, "river": 50, "lever": 3}, 2)
    assert correct_token("livr", index) == "liver"
    assert correct_token("Liverr", index) == "Liver"
    # 距离相同时取高频词
    assert correct_token("xiver", index) == "river"


def test_exempt_tokens_untouched(spell_index):
    assert is_exempt("4.83")
    assert is_exempt("cm")
    assert is_exempt("non-enhancing")
    assert correct_token("mm", spell_index) == "mm"


def test_build_spell_index_rejects_bad_distance():
    with pytest.raises(ValueError):
        build_spell_index({"liver": 1}, 3)


def test_misspelling_corrected(spell_index):
    cleaned = clean_sentence("Pancreas shows bulky size and inhomogeneous echotextre.", spell_index)
    assert cleaned == "Pancreas shows bulky size and inhomogeneous echotexture."


def test_compound_segmentation(spell_index):
    assert segment_compound("rightlobe", spell_index) == ["right", "lobe"]
    assert segment_compound("qqqq", spell_index) == ["qqqq"]


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(sorted(COMPOUND_FREQUENCIES)), min_size=1, max_size=3), st.booleans())
def test_compound_segmentation_matches_exhaustive_split(words, garbled):
    index = build_spell_index(COMPOUND_FREQUENCIES, 1)
    token = "".join(words) + ("q" if garbled else "")
    result = segment_compound(token, index)
    if token in index.terms:
        assert result == [token]
        return
    options = list(all_segmentations(token, index.terms))
    if not options:
        assert result == [token]
        return
    assert "".join(result) == token
    assert all(piece in index.terms for piece in result)
    assert split_score(result, index) == pytest.approx(max(split_score(o, index) for o in options))


def test_clean_sentence_strips_list_markers(spell_index):
    assert clean_sentence("- Spleen is normal in size;", spell_index) == "Spleen is normal in size"


def test_preprocess_report(spell_index, section_patterns, config):
    report = load_reports(data_path("corpus", "report_001.txt"))[0]
    sentences = preprocess_report(report, section_patterns, spell_index, config.abbreviations)
    assert [s.sentence_index for s in sentences] == [0, 1, 2, 3, 4]
    assert sentences[0].text == "Non-enhancing hypodense lesion noted in right lobe of liver."
    assert sentences[-1].text == "Focal lesion in the right lobe of liver."
    assert all(s.report_id == "report_001" for s in sentences)


def test_load_reports_from_directory():
    reports = load_reports(data_path("corpus"))
    assert [r.report_id for r in reports] == ["report_001", "report_002", "report_003"]
