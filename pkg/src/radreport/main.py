"""
命令行入口
子命令: preprocess / extract / build-kg / generate / evaluate / dump-kg
退出码: 0 成功，1 输入或配置错误，2 --strict 下有报告被跳过，3 口述匹配低于阈值
"""
import argparse
import json
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed
from pydantic import ValidationError

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..")))

from src.radreport.annotation import AnnotatedSentence, load_annotations  # noqa: E402
from src.radreport.config import DEFAULT_CONFIG_PATH, LOG_LEVEL, OUTPUT_DIR, RunConfig, load_run_config  # noqa: E402
from src.radreport.evaluation import (  # noqa: E402
    description_scores,
    group_records,
    load_gold_triples,
    triple_prf,
)
from src.radreport.exceptions import BelowThreshold, NoFindingsSection, RadReportError  # noqa: E402
from src.radreport.extraction import (  # noqa: E402
    Triple,
    TripleExtractor,
    load_category_patterns,
    load_chunk_patterns,
    read_triples,
    records_to_triples,
    write_triples,
)
from src.radreport.generation import (  # noqa: E402
    ReportGenerator,
    load_description_templates,
    load_normal_template,
    load_parallel_corpus,
)
from src.radreport.kg import (  # noqa: E402
    KnowledgeGraph,
    augment,
    build_dynamic_kg,
    load_preliminary_kg,
    match_path,
    query_defaults,
    query_location,
    read_kg,
    save_kg,
    to_ntriples,
    write_quarantine,
)
from src.radreport.lexicon import Lexicon, load_lexicon, load_supersense_lexicon  # noqa: E402
from src.radreport.logging_config import setup_logging  # noqa: E402
from src.radreport.preprocess import (  # noqa: E402
    build_spell_index,
    load_reports,
    load_section_patterns,
    load_word_frequencies,
    preprocess_report,
)
from src.radreport.utils import read_tsv  # noqa: E402

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SKIPPED = 2
EXIT_BELOW_THRESHOLD = 3


# ---------------------------------------------------------------------- 资源

def build_extractor(config: RunConfig, lexicon: Optional[Lexicon] = None) -> TripleExtractor:
    lexicon = lexicon or load_lexicon(config.lexicon_files)
    return TripleExtractor(
        lexicon=lexicon,
        senses=load_supersense_lexicon(config.supersense_map, config.prep_senses),
        chunk_patterns=load_chunk_patterns(config.chunk_patterns),
        category_patterns=load_category_patterns(config.category_patterns),
        subject_labels=list(config.subject_labels),
        object_labels=list(config.object_labels),
        negation_triggers=list(config.negation_triggers),
    )


def load_organ_kgs(config: RunConfig, lexicon: Optional[Lexicon] = None,
                   overrides: Sequence[str] = ()) -> Dict[str, KnowledgeGraph]:
    """按配置顺序加载各器官图谱；overrides 中的文件（如增强后的 .nt）按根节点名替换同名器官"""
    kgs = {organ: load_preliminary_kg(path, lexicon) for organ, path in config.preliminary_kgs.items()}
    for path in overrides:
        graph = read_kg(path, lexicon)
        organ = graph.node(graph.organ).preferred_name if graph.organ else os.path.basename(path)
        kgs[organ] = graph
        logger.info(f"使用 {path} 作为 {organ} 图谱")
    return kgs


def spell_frequencies(config: RunConfig, lexicon: Lexicon) -> Dict[str, int]:
    """词频表加上词典中的词（频次1），词典词不会被纠错"""
    frequencies = load_word_frequencies(config.word_frequencies)
    for surface in lexicon.surfaces():
        for word in surface.split():
            frequencies.setdefault(word, 1)
    return frequencies


def _output_path(args, default_name: str) -> str:
    if args.out:
        return args.out
    return os.path.join(OUTPUT_DIR, default_name)


def _write_text(path: Optional[str], text: str):
    if path is None:
        sys.stdout.write(text)
        return
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.info(f"结果已写入 {path}")


# ---------------------------------------------------------------------- preprocess

def cmd_preprocess(args, config: RunConfig) -> int:
    lexicon = load_lexicon(config.lexicon_files)
    index = build_spell_index(spell_frequencies(config, lexicon), config.max_edit_distance)
    patterns = load_section_patterns(config.section_patterns)
    reports = load_reports(args.corpus)

    def run(report):
        try:
            return report.report_id, preprocess_report(report, patterns, index, config.abbreviations,
                                                       config.strip_chars)
        except NoFindingsSection:
            return report.report_id, None

    results = Parallel(n_jobs=args.jobs)(delayed(run)(report) for report in reports)

    lines, skipped = [], 0
    for report_id, result in results:
        if result is None:
            logger.warning(f"跳过报告 {report_id}: 没有 Findings 或 Impression 段落")
            skipped += 1
            continue
        lines.extend(json.dumps(sentence.to_dict(), ensure_ascii=False) for sentence in result)

    _write_text(_output_path(args, "sentences.jsonl"), "".join(line + "\n" for line in lines))
    logger.info(f"预处理完成: {len(reports) - skipped} 份报告，{len(lines)} 句，跳过 {skipped} 份")
    return EXIT_SKIPPED if skipped and args.strict else EXIT_OK


# ---------------------------------------------------------------------- extract

def read_sentences(path: str) -> List[Tuple[str, str]]:
    """读取待抽取句子: .jsonl（预处理输出）或每行一句的文本（可写成 id<TAB>句子）"""
    sentences = []
    with open(path, "r", encoding="utf-8") as f:
        for line_number, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if path.endswith(".jsonl"):
                record = json.loads(line)
                sentences.append((f"{record['report_id']}:{record['sentence_index']}", record["text"]))
            elif "\t" in line:
                sentence_id, text = line.split("\t", 1)
                sentences.append((sentence_id.strip(), text.strip()))
            else:
                sentences.append((f"s{line_number}", line))
    return sentences


def _extract_text(extractor: TripleExtractor, sentence_id: str, text: str) -> List[Triple]:
    return extractor.extract_text(text, sentence_id)


def _extract_annotated(extractor: TripleExtractor, sentence: AnnotatedSentence) -> List[Triple]:
    return extractor.extract(sentence)


def extract_all(extractor: TripleExtractor, path: str, use_annotations: bool, jobs: int = 1) -> List[Triple]:
    """逐句抽取，结果按输入顺序拼接"""
    if use_annotations:
        annotated = load_annotations(path)
        batches = Parallel(n_jobs=jobs)(delayed(_extract_annotated)(extractor, s) for s in annotated)
    else:
        sentences = read_sentences(path)
        batches = Parallel(n_jobs=jobs)(delayed(_extract_text)(extractor, sid, text) for sid, text in sentences)
    return [triple for batch in batches for triple in batch]


def cmd_extract(args, config: RunConfig) -> int:
    extractor = build_extractor(config)
    use_annotations = args.annotations or config.annotation_mode == "file"
    triples = extract_all(extractor, args.input, use_annotations, args.jobs)
    write_triples(_output_path(args, "triples.tsv"), triples)
    return EXIT_OK


# ---------------------------------------------------------------------- build-kg

def cmd_build_kg(args, config: RunConfig) -> int:
    lexicon = load_lexicon(config.lexicon_files)
    if args.kg:
        graph = load_preliminary_kg(args.kg, lexicon)
        kgs = {graph.node(graph.organ).preferred_name: graph}
    else:
        kgs = load_organ_kgs(config, lexicon)
        if args.organ:
            if args.organ not in kgs:
                raise RadReportError(f"配置中没有器官 {args.organ}")
            kgs = {args.organ: kgs[args.organ]}

    grouped = records_to_triples(read_triples(args.triples), lexicon)
    current = dict(kgs)
    quarantine, summary = [], {organ: {"added_nodes": [], "added_edges": [], "quarantined": [], "notes": []}
                                for organ in kgs}
    for sentence_id, triples in grouped.items():
        dynamic = build_dynamic_kg(triples)
        if not len(dynamic):
            continue
        # 锚点最多的器官图谱，并列取配置顺序靠前者
        organ = max(current, key=lambda name: (len(match_path(dynamic, current[name]).pairs),
                                                -list(current).index(name)))
        report = augment(current[organ], dynamic)
        current[organ] = report.graph
        quarantine.extend((sentence_id, edge) for edge in report.quarantined)
        for key, values in report.to_dict().items():
            if key in summary[organ]:
                summary[organ][key].extend(values)

    out_dir = args.out or os.path.join(OUTPUT_DIR, "kg")
    os.makedirs(out_dir, exist_ok=True)
    for organ, graph in current.items():
        if graph is kgs[organ]:
            graph = graph.copy(kind="augmented")
        save_kg(graph, os.path.join(out_dir, f"{organ}.augmented.nt"), config.namespace)
    write_quarantine(os.path.join(out_dir, "quarantine.tsv"), quarantine)
    with open(os.path.join(out_dir, "augmentation_report.json"), "w", encoding="utf-8", newline="\n") as f:
        json.dump(summary, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")
    logger.info(f"图谱增强完成，隔离 {len(quarantine)} 条边")
    return EXIT_OK


# ---------------------------------------------------------------------- generate

def build_generator(config: RunConfig, kg_overrides: Sequence[str] = ()) -> ReportGenerator:
    extractor = build_extractor(config)
    return ReportGenerator(
        extractor=extractor,
        kgs=load_organ_kgs(config, extractor.lexicon, kg_overrides),
        templates=load_description_templates(config.description_templates),
        corpus=load_parallel_corpus(config.parallel_corpus),
        normal_template=load_normal_template(config.normal_template),
        match_threshold=config.match_threshold,
        smoothing=config.bleu_smoothing,
        mask_measurements=config.mask_measurements,
        property_order=list(config.property_order),
        abbreviations=list(config.abbreviations),
    )


def cmd_generate(args, config: RunConfig) -> int:
    if args.file:
        with open(args.file, "r", encoding="utf-8") as f:
            dictations = [line.strip() for line in f if line.strip() and not line.startswith("#")]
    else:
        dictations = [args.dictation]

    generator = build_generator(config, args.kg or ())
    report, results = generator.generate_many(dictations)
    _write_text(args.out, report)
    if args.details:
        _write_text(args.details, json.dumps([r.to_dict() for r in results], ensure_ascii=False, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------- evaluate

def read_description_rows(path: str) -> List[Tuple[str, str, str]]:
    """`id<TAB>生成描述<TAB>参考描述`"""
    df = read_tsv(path, ["id", "candidate", "reference"], required=3)
    return [(row.id, row.candidate, row.reference) for row in df.itertuples(index=False)]


def cmd_evaluate(args, config: RunConfig) -> int:
    if args.descriptions:
        frame = description_scores(read_description_rows(args.descriptions), smoothing=config.bleu_smoothing)
        summary = {
            "smoothing": "add-one(n>=2)" if config.bleu_smoothing else "none",
            "mean": {column: float(frame[column].mean()) for column in frame.columns if column != "id"},
            "per_description": frame.to_dict(orient="records"),
        }
    else:
        if not args.gold:
            raise RadReportError("三元组评估需要 --gold")
        gold = load_gold_triples(args.gold)
        system = group_records(read_triples(args.system), assertive_only=False)
        report = triple_prf(system, gold, args.mode)
        frame = report.to_frame()
        summary = report.to_dict()

    if args.csv:
        path = args.out or os.path.join(OUTPUT_DIR, "metrics.csv")
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        frame.to_csv(path, index=False, lineterminator="\n")
        logger.info(f"评估结果已写入 {path}")
    else:
        _write_text(args.out, json.dumps(summary, ensure_ascii=False, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------- dump-kg

def cmd_dump_kg(args, config: Optional[RunConfig]) -> int:
    lexicon = load_lexicon(config.lexicon_files) if config is not None else None
    if args.organ:
        if config is None or args.organ not in config.preliminary_kgs:
            raise RadReportError(f"配置中没有器官 {args.organ}")
        graph = load_preliminary_kg(config.preliminary_kgs[args.organ], lexicon)
    elif args.path:
        graph = read_kg(args.path, lexicon)
    else:
        raise RadReportError("dump-kg 需要图谱路径或 --organ")

    if args.query_location:
        lines = [entity.text for entity in query_location(graph, args.query_location)]
        text = "\n".join(lines) + "\n"
    elif args.query_defaults:
        rows = query_defaults(graph, args.query_defaults)
        text = "".join(f"{s.text}\t{relation.value}\t{o.text}\n" for s, relation, o in rows)
    else:
        namespace = config.namespace if config is not None else None
        text = (to_ntriples(graph, namespace) if namespace else to_ntriples(graph)).decode("utf-8")
    _write_text(args.out, text)
    return EXIT_OK


# ---------------------------------------------------------------------- 参数

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radreport", description="放射报告信息抽取、知识图谱增强与报告生成")
    parser.add_argument("--config", default=DEFAULT_CONFIG_PATH, help="运行配置 JSON")
    parser.add_argument("--out", default=None, help="输出文件或目录")
    parser.add_argument("--strict", action="store_true", help="有报告被跳过时以退出码2结束")
    parser.add_argument("--jobs", type=int, default=1, help="逐句并行的进程数")
    parser.add_argument("--log-level", default=LOG_LEVEL, help="日志级别")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="报告分节、拼写纠错、切句")
    p.add_argument("corpus", help="报告目录、单个 .txt 或清单 TSV")
    p.set_defaults(handler=cmd_preprocess)

    p = sub.add_parser("extract", help="抽取三元组")
    p.add_argument("input", help="句子文件（.jsonl 或文本）或标注文件")
    p.add_argument("--annotations", action="store_true", help="输入为标注文件")
    p.set_defaults(handler=cmd_extract)

    p = sub.add_parser("build-kg", help="用三元组增强器官图谱")
    p.add_argument("triples", help="三元组文件")
    p.add_argument("--kg", default=None, help="初始图谱文件，缺省使用配置中的全部器官")
    p.add_argument("--organ", default=None, help="只增强该器官")
    p.set_defaults(handler=cmd_build_kg)

    p = sub.add_parser("generate", help="由口述生成患者报告")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--dictation", help="口述文本")
    group.add_argument("--file", help="每行一条口述的文件")
    p.add_argument("--kg", action="append", help="替换配置图谱的文件（可重复），如增强后的 .nt")
    p.add_argument("--details", default=None, help="把每条口述的匹配详情写成 JSON")
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("evaluate", help="三元组或描述评估")
    p.add_argument("system", nargs="?", help="系统输出三元组文件")
    p.add_argument("--gold", default=None, help="金标准三元组文件")
    p.add_argument("--mode", choices=("full", "pair_only"), default="full")
    p.add_argument("--descriptions", default=None, help="id<TAB>生成<TAB>参考 的描述文件")
    p.add_argument("--csv", action="store_true", help="输出逐行 CSV")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("dump-kg", help="输出规范 N-Triples 或查询结果")
    p.add_argument("path", nargs="?", help="TSV 或 .nt 图谱")
    p.add_argument("--organ", default=None, help="配置中的器官")
    p.add_argument("--query-location", default=None, help="输出发现的解剖链")
    p.add_argument("--query-defaults", default=None, help="输出发现的默认项")
    p.set_defaults(handler=cmd_dump_kg)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)

    try:
        if args.command == "dump-kg" and args.path and not os.path.exists(args.config):
            config = None
        else:
            config = load_run_config(args.config)
        return args.handler(args, config)
    except BelowThreshold as e:
        logger.error(f"口述无法可靠匹配: {e}")
        sys.stderr.write(f"{e.text}\n")
        return EXIT_BELOW_THRESHOLD
    except (RadReportError, OSError, ValidationError, ValueError) as e:
        logger.error(f"{args.command} 失败: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
