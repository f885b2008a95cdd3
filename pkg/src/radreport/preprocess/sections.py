"""
报告分节
按配置的标题模式把报告正文切成 header / history / findings / impression
"""
import glob
import logging
import os
import re
from dataclasses import dataclass
from typing import Dict, List, Pattern, Sequence

from ..exceptions import NoFindingsSection, ParseError
from ..utils import read_tsv
from .models import RawReport, ReportSections, ScanType

logger = logging.getLogger(__name__)

SECTIONS = ("header", "history", "findings", "impression")


@dataclass(frozen=True)
class SectionPattern:
    section: str
    regex: Pattern

    @classmethod
    def compile(cls, section: str, pattern: str) -> "SectionPattern":
        section = section.strip().lower()
        if section not in SECTIONS:
            raise ValueError(f"不支持的分节名称: {section}")
        return cls(section, re.compile(rf"\b({pattern})\s*:", re.IGNORECASE))


def load_section_patterns(path: str) -> List[SectionPattern]:
    """加载 `section_name<TAB>pattern`，保持文件顺序"""
    patterns = []
    df = read_tsv(path, ["section", "pattern"], required=2)
    for line, row in enumerate(df.itertuples(index=False), start=1):
        try:
            patterns.append(SectionPattern.compile(row.section, row.pattern))
        except (ValueError, re.error) as e:
            raise ParseError(line, f"{path}: {e}")
    if not patterns:
        raise ParseError(0, f"{path}: 没有任何分节模式")
    return patterns


def segment_report(report: RawReport, section_patterns: Sequence[SectionPattern]) -> ReportSections:
    """按标题切分报告

    第一个标题之前的文本归入 header；每个标题到下一个标题之间的文本归入该标题的分节，
    同一分节出现多次时按顺序拼接。

    Raises:
        NoFindingsSection: 既没有所见标题也没有印象标题
    """
    if not section_patterns:
        raise ValueError("section_patterns 不能为空")

    hits = []
    for order, pattern in enumerate(section_patterns):
        for match in pattern.regex.finditer(report.body):
            hits.append((match.start(), -(match.end() - match.start()), order, match.end(), pattern.section))
    hits.sort()

    headers = []
    last_end = -1
    for start, _, _, end, section in hits:
        if start < last_end:
            continue
        headers.append((start, end, section))
        last_end = end

    if not any(section in ("findings", "impression") for _, _, section in headers):
        raise NoFindingsSection(report.report_id)

    parts: Dict[str, List[str]] = {section: [] for section in SECTIONS}
    preamble = report.body[:headers[0][0]].strip()
    if preamble:
        parts["header"].append(preamble)
    for i, (_, end, section) in enumerate(headers):
        stop = headers[i + 1][0] if i + 1 < len(headers) else len(report.body)
        text = report.body[end:stop].strip()
        if text:
            parts[section].append(text)

    sections = ReportSections(**{section: "\n".join(texts) for section, texts in parts.items()})
    logger.debug(f"报告 {report.report_id} 丢弃 header/history 共 {len(sections.header) + len(sections.history)} 字符")
    return sections


def load_reports(path: str) -> List[RawReport]:
    """读取报告：目录下的 *.txt，或清单 TSV（path<TAB>scan_type，相对路径按清单目录解析）"""
    if os.path.isdir(path):
        files = [(f, ScanType.ULTRASOUND.value) for f in sorted(glob.glob(os.path.join(path, "*.txt")))]
    elif path.endswith(".txt"):
        files = [(path, ScanType.ULTRASOUND.value)]
    else:
        base = os.path.dirname(os.path.abspath(path))
        df = read_tsv(path, ["path", "scan_type"], required=1)
        files = [(p if os.path.isabs(p) else os.path.join(base, p), s or ScanType.ULTRASOUND.value)
                 for p, s in zip(df["path"], df["scan_type"])]

    reports = []
    for file_path, scan_type in files:
        with open(file_path, "r", encoding="utf-8") as f:
            body = f.read()
        report_id = os.path.splitext(os.path.basename(file_path))[0]
        reports.append(RawReport(report_id, body, ScanType.parse(scan_type)))
    logger.info(f"读取 {len(reports)} 份报告")
    return reports
