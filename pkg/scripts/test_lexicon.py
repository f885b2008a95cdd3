#!/usr/bin/env python3
"""
测试放射学词典和介词超义项
"""

import os
import sys

import pytest

# 添加项目根目录到Python路径
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.radreport.exceptions import CategoryConflict, ParseError  # noqa: E402
from src.radreport.lexicon import (  # noqa: E402
    LexiconEntry,
    decompose_phrase,
    load_lexicon,
    longest_match,
    map_supersense,
)
from src.radreport.ontology import CoarseCategory, LogicalRelation, signature_allows  # noqa: E402


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_synonyms_and_word_forms_resolve(lexicon):
    assert lexicon.lookup("gallbladder").preferred_name == "gall bladder"
    assert lexicon.lookup("Kidneys").surface == "kidney"
    assert lexicon.lookup("calculi").preferred_name == "calculus"
    assert lexicon.lookup("segment 6").surface == "segment vi"
    assert lexicon.lookup("cbd").category == CoarseCategory.ANATOMY
    assert lexicon.lookup("splenic") is None


def test_fine_tags(lexicon):
    assert lexicon.lookup("pancreatitis").fine_tag == "inflammation"
    assert lexicon.lookup("bulky").fine_tag == "size-modifier"
    assert lexicon.lookup("nodule").fine_tag == "mass"
    assert lexicon.lookup("liver").fine_tag is None


def test_override_file_adds_entries(lexicon):
    assert lexicon.lookup("echo pattern").surface == "echopattern"
    assert lexicon.lookup("walled").category == CoarseCategory.MODIFIER


def test_category_conflict_without_override(tmp_path):
    first = write(tmp_path, "a.tsv", "mass\tObservation\n")
    second = write(tmp_path, "b.tsv", "mass\tFinding\n")
    with pytest.raises(CategoryConflict) as excinfo:
        load_lexicon([first, second])
    assert excinfo.value.surface == "mass"


def test_override_directive_allows_category_change(tmp_path):
    first = write(tmp_path, "a.tsv", "mass\tObservation\n")
    second = write(tmp_path, "b.tsv", "#override\nmass\tFinding\tlesion\n")
    lexicon = load_lexicon([first, second])
    assert lexicon.lookup("mass").category == CoarseCategory.FINDING
    assert lexicon.lookup("mass").fine_tag == "lesion"


def test_missing_category_is_parse_error(tmp_path):
    path = write(tmp_path, "bad.tsv", "liver\tAnatomy\nspleen\t\n")
    with pytest.raises(ParseError) as excinfo:
        load_lexicon([path])
    assert excinfo.value.line == 2


def test_unknown_category_rejected(tmp_path):
    path = write(tmp_path, "bad.tsv", "liver\tOrgan\n")
    with pytest.raises(ValueError):
        load_lexicon([path])


def test_entry_normalization():
    entry = LexiconEntry("  Liver ", CoarseCategory.ANATOMY, synonyms=("liver", "hepar"))
    assert entry.surface == "liver"
    assert entry.preferred_name == "liver"
    assert entry.synonyms == ("hepar",)
    with pytest.raises(ValueError):
        LexiconEntry(" ", CoarseCategory.ANATOMY)


def test_longest_match(lexicon):
    words = "pancreatic thick walled pseudo cyst in the right lobe of liver".split()
    matches = [(span, entry.surface) for span, entry in longest_match(words, lexicon)]
    assert matches == [
        ((0, 1), "pancreatic"),
        ((1, 3), "thick walled"),
        ((3, 5), "pseudo cyst"),
        ((7, 9), "right lobe"),
        ((10, 11), "liver"),
    ]


def test_decompose_phrase(config):
    lexicon = load_lexicon(config.lexicon_files)
    parts = decompose_phrase("thick walled pseudo cyst", lexicon)
    assert [entry.surface for entry in parts] == ["thick walled", "pseudo", "cyst"]
    assert lexicon.lookup("pseudo").category == CoarseCategory.MODIFIER
    assert lexicon.lookup("thick walled pseudo cyst").category == CoarseCategory.FINDING
    # 解剖学名称保持完整
    assert [entry.surface for entry in decompose_phrase("upper pole", lexicon)] == ["upper pole"]


def test_prep_senses(senses):
    assert senses.sense_of("of") == "Whole"
    assert senses.sense_of("In") == "Locus"
    assert senses.map_supersense("Whole") == LogicalRelation.PART_OF
    assert senses.map_supersense("locus") == LogicalRelation.FOUND_IN
    assert senses.map_supersense("Manner") == LogicalRelation.PROPERTY_OF
    assert senses.map_supersense("Source") is None
    assert senses.is_part_whole("Gestalt")


def test_default_supersense_map():
    assert map_supersense("Part_Portion") == LogicalRelation.PART_OF
    assert map_supersense("Goal") is None
    assert map_supersense(None) is None


def test_relation_signatures():
    assert signature_allows(LogicalRelation.FOUND_IN, CoarseCategory.FINDING, CoarseCategory.ANATOMY)
    assert not signature_allows(LogicalRelation.FOUND_IN, CoarseCategory.PROPERTY, CoarseCategory.ANATOMY)
    assert not signature_allows(LogicalRelation.PART_OF, CoarseCategory.FINDING, CoarseCategory.ANATOMY)
    assert signature_allows(LogicalRelation.TYPE_OF, CoarseCategory.FINDING, CoarseCategory.FINDING)
