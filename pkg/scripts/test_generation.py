#!/usr/bin/env python3
"""
测试报告生成
描述模板、口述处理、知识图谱补全描述、平行语料匹配和报告组装
"""

import logging
import os
import sys

import pytest

# 添加项目根目录到Python路径
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.radreport.evaluation import lexical_cosine  # noqa: E402
from src.radreport.exceptions import BelowThreshold, MissingRequiredSlot, NoTemplate  # noqa: E402
from src.radreport.generation import (  # noqa: E402
    DescriptionTemplate,
    Dictation,
    assemble_report,
    extract_measurements,
    finding_phrase,
    identify_finding,
    load_description_templates,
    load_normal_template,
    load_parallel_corpus,
    locate_normal_sentence,
    mask_measurements,
    match_dictation,
    resolve_kg,
    split_dictation,
    template_for,
)
from src.radreport.ontology import CoarseCategory  # noqa: E402
from src.radreport.utils import read_tsv  # noqa: E402

from conftest import data_path  # noqa: E402

PSEUDOCYST = "Pancreatic thick walled pseudo cyst measuring 1.4 x 3 x 2.2 cm vol 4.83 cc in head."
CYST_SKELETON = "There is evidence of [{size_phrase} ]{finding}[ measuring {measurements}] noted in the {anatomy_chain}."


@pytest.fixture(scope="session")
def templates(config):
    return load_description_templates(config.description_templates)


@pytest.fixture(scope="session")
def normal_template(config):
    return load_normal_template(config.normal_template)


@pytest.fixture(scope="session")
def corpus(config):
    return load_parallel_corpus(config.parallel_corpus)


def test_template_parse_slots():
    template = DescriptionTemplate.parse("Cyst", CYST_SKELETON)
    assert template.finding_type == "cyst"
    assert template.required_slots == {"finding", "anatomy_chain"}
    assert template.optional_slots == {"size_phrase", "measurements"}


def test_template_render_drops_empty_optional_segments():
    template = DescriptionTemplate.parse("cyst", CYST_SKELETON)
    text = template.render({"finding": "simple cyst", "anatomy_chain": "left lobe of liver"})
    assert text == "There is evidence of simple cyst noted in the left lobe of liver."
    text = template.render({"finding": "cyst", "anatomy_chain": "liver", "size_phrase": "large",
                            "measurements": "2 cm"})
    assert text == "There is evidence of large cyst measuring 2 cm noted in the liver."


def test_template_missing_required_slot():
    template = DescriptionTemplate.parse("cyst", CYST_SKELETON)
    with pytest.raises(MissingRequiredSlot) as excinfo:
        template.render({"finding": "cyst", "anatomy_chain": " "})
    assert excinfo.value.slot == "anatomy_chain"


def test_template_rejects_unknown_slot_and_brackets():
    with pytest.raises(ValueError):
        DescriptionTemplate.parse("x", "{organ} has {colour}.")
    with pytest.raises(ValueError):
        DescriptionTemplate.parse("x", "[{finding} in {organ}.")


def test_template_lookup_falls_back_to_category(templates):
    assert template_for(templates, "cyst", CoarseCategory.FINDING).finding_type == "cyst"
    assert template_for(templates, "fluid", CoarseCategory.OBSERVATION).finding_type == "observation"
    assert template_for(templates, None, CoarseCategory.FINDING).finding_type == "finding"
    with pytest.raises(NoTemplate):
        template_for(templates, None, CoarseCategory.ANATOMY)


def test_measurements_kept_verbatim():
    assert extract_measurements(PSEUDOCYST) == ["1.4 x 3 x 2.2 cm", "vol 4.83 cc"]
    assert mask_measurements(PSEUDOCYST) == "Pancreatic thick walled pseudo cyst measuring in head."
    assert extract_measurements("Acute pancreatitis") == []


def test_dictation_measurements_must_come_from_text():
    with pytest.raises(ValueError):
        Dictation(text="Simple cyst.", measurements=("5 cm",))


def test_split_dictation(lexicon):
    text = "Acute pancreatitis. Hemangioma in right lobe of liver and calculus in gall bladder"
    assert split_dictation(text, lexicon) == [
        "Acute pancreatitis.",
        "Hemangioma in right lobe of liver",
        "calculus in gall bladder",
    ]
    # 'and' 一侧没有发现时不拆分
    assert split_dictation("Liver is normal in size and echotexture.", lexicon) == [
        "Liver is normal in size and echotexture.",
    ]


def test_identify_finding_and_organ(extractor, kgs):
    dictation = Dictation.from_text("Acute pancreatitis", extractor)
    finding = identify_finding(dictation)
    assert finding_phrase(dictation, finding) == "acute pancreatitis"
    organ, kg = resolve_kg(kgs, dictation, finding)
    assert organ == "pancreas" and kg is kgs["pancreas"]

    organ, _ = resolve_kg(kgs, Dictation.from_text("Acute hepatitis", extractor))
    assert organ == "liver"


def test_kg_defaults_fill_description(generator):
    result = generator.describe("Acute pancreatitis")
    assert result.description == (
        "Pancreas shows bulky size and inhomogeneous echotexture associated with peripancreatic "
        "fluid collection, suggestive of acute pancreatitis."
    )
    assert result.organ == "pancreas"


def test_dictation_location_and_measurements(generator):
    result = generator.describe(PSEUDOCYST)
    assert result.description == (
        "There is evidence of pancreatic thick walled pseudo cyst measuring 1.4 x 3 x 2.2 cm "
        "vol 4.83 cc noted in the head of pancreas."
    )


def test_descriptions_close_to_reference(generator):
    df = read_tsv(data_path("gold", "gold_descriptions.tsv"), ["dictation", "gold"], required=2)
    assert len(df) == 5
    for row in df.itertuples(index=False):
        description = generator.describe(row.dictation).description
        assert lexical_cosine(description, row.gold) >= 0.85, row.dictation


def test_match_dictation(corpus):
    entry, score = match_dictation(PSEUDOCYST, corpus)
    assert entry.dictation == "Pancreatic thick walled pseudo cyst in head."
    assert 0.3 <= score < 1.0
    entry, score = match_dictation("Acute pancreatitis", corpus)
    assert entry.normal_description == "Pancreas is normal in size and echotexture."
    assert score == pytest.approx(1.0)


def test_match_dictation_below_threshold(corpus):
    with pytest.raises(BelowThreshold) as excinfo:
        match_dictation("Splenomegaly", corpus)
    assert excinfo.value.score == 0.0


def test_dictation_without_organ_kg_uses_dictation_only(generator, caplog):
    with caplog.at_level(logging.WARNING, logger="src.radreport.generation.describe"):
        result = generator.describe("Right renal calculus.")
    assert result.organ is None
    assert result.description.startswith("A ")
    assert result.description.endswith("renal calculus is seen.")
    assert result.matched_dictation == "Right renal calculus."
    assert result.sentence_index == 10
    assert "可能不完整" in caplog.text


@pytest.mark.parametrize("text", ["is the", "and", "Splenomegaly"])
def test_unmatched_dictation_rejected_before_slot_filling(generator, text):
    with pytest.raises(BelowThreshold) as excinfo:
        generator.describe(text)
    assert excinfo.value.text == text


def test_load_normal_template(normal_template):
    assert normal_template.title == "ULTRASONOGRAPHY OF ABDOMEN AND PELVIS"
    assert len(normal_template) == 14
    assert normal_template.sentences[0].organ == "liver"
    assert normal_template.sentences[-1].organ == "urinary bladder"


def test_locate_normal_sentence_restricted_to_organ(normal_template):
    lesion = "No evidence of focal or diffuse lesion is seen."
    assert locate_normal_sentence(normal_template, lesion, "pancreas") == (7, pytest.approx(1.0))
    assert locate_normal_sentence(normal_template, lesion)[0] == 1
    index, _ = locate_normal_sentence(normal_template, "Spleen is normal in size and echotexture.", "spleen")
    assert index == 9


def test_assemble_report_joins_collisions(normal_template, caplog):
    with caplog.at_level(logging.WARNING, logger="src.radreport.generation.report"):
        report = assemble_report(normal_template, [(9, "Spleen is enlarged."), (9, "Splenic cyst noted.")])
    assert "Spleen is enlarged. Splenic cyst noted." in report
    assert "Spleen is normal in size and echotexture." not in report
    assert "IndexCollisionWarning" in caplog.text
    with pytest.raises(IndexError):
        assemble_report(normal_template, [(14, "x")])


def test_unchanged_template_renders_sections(normal_template):
    report = assemble_report(normal_template, [])
    lines = report.splitlines()
    assert lines[:3] == ["ULTRASONOGRAPHY OF ABDOMEN AND PELVIS", "", "LIVER:"]
    assert "PANCREAS:" in lines
    assert report.endswith("Urinary bladder is well distended with normal wall thickness.\n")


def test_generate_many_builds_report(generator):
    with open(data_path("gold", "dictations.txt"), encoding="utf-8") as f:
        dictations = [line.strip() for line in f if line.strip()]
    report, results = generator.generate_many(dictations)
    assert [r.sentence_index for r in results] == [6, 7]
    assert "Pancreas is normal in size and echotexture." not in report
    assert report.count("No evidence of focal or diffuse lesion is seen.") == 1
    assert "Liver is normal in size and echotexture." in report
    for result in results:
        assert result.description in report
        assert result.locate_score == pytest.approx(1.0)
