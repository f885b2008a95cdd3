#!/usr/bin/env python3
"""
测试命令行入口和运行配置
各子命令的输出文件与退出码
"""

import json
import os
import shutil
import sys

import pytest

# 添加项目根目录到Python路径
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.radreport.config import load_run_config  # noqa: E402
from src.radreport.exceptions import ConfigError  # noqa: E402
from src.radreport.extraction import read_triples  # noqa: E402
from src.radreport.generation import load_parallel_corpus  # noqa: E402
from src.radreport.main import main, read_sentences  # noqa: E402

from conftest import CONFIG_PATH, data_path  # noqa: E402

EXAMPLE_2 = "A lesion of increased echotexture in the right lobe of liver."
CORPUS_DICTATIONS = [entry.dictation for entry in load_parallel_corpus(data_path("parallel_corpus.tsv"))]


def run(*argv):
    return main(["--config", CONFIG_PATH, *argv])


def write_config(tmp_path, **overrides):
    with open(CONFIG_PATH, encoding="utf-8") as f:
        raw = json.load(f)
    base = os.path.dirname(CONFIG_PATH)
    for key in ("lexicon_files",):
        raw[key] = [os.path.join(base, p) for p in raw[key]]
    raw["preliminary_kgs"] = {k: os.path.join(base, p) for k, p in raw["preliminary_kgs"].items()}
    for key, value in raw.items():
        if isinstance(value, str) and os.path.exists(os.path.join(base, value)):
            raw[key] = os.path.join(base, value)
    raw.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw), encoding="utf-8")
    return str(path)


def test_config_resolves_relative_paths(config):
    assert os.path.isabs(config.supersense_map)
    assert config.preliminary_kgs["liver"].endswith(os.path.join("kg", "liver.tsv"))
    assert config.match_threshold == 0.3


def test_config_rejects_unknown_key(tmp_path):
    path = write_config(tmp_path, bogus=1)
    with pytest.raises(ConfigError) as excinfo:
        load_run_config(path)
    assert excinfo.value.key == "bogus"


def test_config_rejects_missing_path(tmp_path):
    path = write_config(tmp_path, lexicon_files=[str(tmp_path / "missing.tsv")])
    with pytest.raises(ConfigError) as excinfo:
        load_run_config(path)
    assert excinfo.value.key == "lexicon_files"


def test_config_rejects_bad_distance(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(write_config(tmp_path, max_edit_distance=3))


def test_bad_config_exit_code(tmp_path):
    path = write_config(tmp_path, bogus=1)
    assert main(["--config", path, "dump-kg", "--organ", "liver"]) == 1
    assert main(["--config", str(tmp_path / "none.json"), "dump-kg", "--organ", "liver"]) == 1


def test_preprocess(tmp_path):
    out = tmp_path / "sentences.jsonl"
    assert run("--out", str(out), "preprocess", data_path("corpus")) == 0
    records = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert records[0]["report_id"] == "report_001"
    assert records[0]["text"] == "Non-enhancing hypodense lesion noted in right lobe of liver."
    assert {r["report_id"] for r in records} == {"report_001", "report_002", "report_003"}

    sentences = read_sentences(str(out))
    assert sentences[0] == ("report_001:0", records[0]["text"])


def test_preprocess_strict_skipped_report(tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    shutil.copy(data_path("corpus", "report_001.txt"), corpus / "report_001.txt")
    (corpus / "report_009.txt").write_text("Patient Name: X\nClinical History: pain\nLiver is normal.\n",
                                           encoding="utf-8")
    out = str(tmp_path / "sentences.jsonl")
    assert run("--out", out, "preprocess", str(corpus)) == 0
    assert run("--out", out, "--strict", "preprocess", str(corpus)) == 2


def test_extract_then_evaluate(tmp_path):
    triples = tmp_path / "triples.tsv"
    assert run("--out", str(triples), "extract", data_path("gold", "sentences.tsv")) == 0
    records = read_triples(str(triples))
    assert records[0].sentence_id == "g01"
    assert any(not r.assertive for r in records)

    metrics = tmp_path / "metrics.json"
    assert run("--out", str(metrics), "evaluate", str(triples),
               "--gold", data_path("gold", "gold_triples.tsv")) == 0
    summary = json.loads(metrics.read_text(encoding="utf-8"))
    assert summary["mode"] == "full"
    assert len(summary["per_sentence"]) == 30
    assert summary["aggregate"]["f1_of_averages"] >= 0.9

    csv_path = tmp_path / "metrics.csv"
    assert run("--out", str(csv_path), "evaluate", str(triples), "--gold",
               data_path("gold", "gold_triples.tsv"), "--mode", "pair_only", "--csv") == 0
    assert csv_path.read_text(encoding="utf-8").splitlines()[0] == "sentence_id,precision,recall"


def test_evaluate_requires_gold(tmp_path):
    assert run("evaluate", data_path("gold", "gold_triples.tsv")) == 1


def test_evaluate_descriptions(tmp_path):
    rows = tmp_path / "descriptions.tsv"
    rows.write_text("d1\tLiver shows decreased echogenicity.\tLiver shows decreased echogenicity.\n",
                    encoding="utf-8")
    out = tmp_path / "scores.json"
    assert run("--out", str(out), "evaluate", "--descriptions", str(rows)) == 0
    summary = json.loads(out.read_text(encoding="utf-8"))
    assert summary["smoothing"] == "add-one(n>=2)"
    assert summary["mean"]["lexical_cosine"] == pytest.approx(1.0)


def test_build_kg_and_dump(tmp_path):
    sentences = tmp_path / "sentences.tsv"
    sentences.write_text(f"x1\t{EXAMPLE_2}\n", encoding="utf-8")
    triples = tmp_path / "triples.tsv"
    assert run("--out", str(triples), "extract", str(sentences)) == 0

    out_dir = tmp_path / "kg"
    assert run("--out", str(out_dir), "build-kg", str(triples)) == 0
    assert (out_dir / "pancreas.augmented.nt").exists()
    assert (out_dir / "quarantine.tsv").exists()
    summary = json.loads((out_dir / "augmentation_report.json").read_text(encoding="utf-8"))
    assert summary["liver"]["added_nodes"] == ["echotexture@lesion/increased"]
    assert summary["pancreas"]["added_edges"] == []

    nt_path = out_dir / "liver.augmented.nt"
    dumped = tmp_path / "dump.nt"
    assert run("--out", str(dumped), "dump-kg", str(nt_path)) == 0
    assert dumped.read_bytes() == nt_path.read_bytes()


def test_dump_kg_queries(tmp_path):
    out = tmp_path / "location.txt"
    assert run("--out", str(out), "dump-kg", "--organ", "liver", "--query-location", "segment vi") == 0
    assert out.read_text(encoding="utf-8").splitlines() == ["segment vi", "right lobe", "liver"]

    assert run("--out", str(out), "dump-kg", "--organ", "liver", "--query-defaults", "fatty liver") == 0
    assert out.read_text(encoding="utf-8").splitlines()[0] == "echogenicity\tDefaultPropertyOf\tfatty liver"

    assert run("dump-kg", "--organ", "spleen") == 1
    assert run("dump-kg", "--organ", "liver", "--query-location", "spleen") == 1


def test_generate_report_file(tmp_path):
    out = tmp_path / "report.txt"
    details = tmp_path / "details.json"
    assert run("--out", str(out), "generate", "--file", data_path("gold", "dictations.txt"),
               "--details", str(details)) == 0
    report = out.read_text(encoding="utf-8")
    assert report.startswith("ULTRASONOGRAPHY OF ABDOMEN AND PELVIS\n")
    assert "suggestive of acute pancreatitis." in report
    rows = json.loads(details.read_text(encoding="utf-8"))
    assert [row["sentence_index"] for row in rows] == [6, 7]
    assert rows[1]["matched_dictation"] == "Pancreatic thick walled pseudo cyst in head."


def test_generate_below_threshold(tmp_path, capsys):
    out = tmp_path / "report.txt"
    assert run("--out", str(out), "generate", "--dictation", "Hemangioma noted.") == 3
    assert "Hemangioma noted." in capsys.readouterr().err
    assert not out.exists()


@pytest.mark.parametrize("text", ["is the", "and", "Splenomegaly"])
def test_generate_unmatched_dictation_exit_code(tmp_path, capsys, text):
    out = tmp_path / "report.txt"
    assert run("--out", str(out), "generate", "--dictation", text) == 3
    assert text in capsys.readouterr().err
    assert not out.exists()


@pytest.mark.parametrize("text", CORPUS_DICTATIONS)
def test_generate_every_corpus_dictation(tmp_path, text):
    out = tmp_path / "report.txt"
    assert run("--out", str(out), "generate", "--dictation", text) == 0
    assert out.read_text(encoding="utf-8").startswith("ULTRASONOGRAPHY OF ABDOMEN AND PELVIS\n")
