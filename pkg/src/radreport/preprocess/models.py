from dataclasses import dataclass
from enum import Enum


class ScanType(Enum):
    ULTRASOUND = "ultrasound"
    CT = "ct"
    MRI = "mri"
    XRAY = "xray"

    @classmethod
    def parse(cls, value: str) -> "ScanType":
        for member in cls:
            if member.value == str(value).strip().lower():
                return member
        raise ValueError(f"不支持的检查类型: {value}")


@dataclass(frozen=True)
class RawReport:
    report_id: str
    body: str
    scan_type: ScanType = ScanType.ULTRASOUND

    def __post_init__(self):
        if not self.body.strip():
            raise ValueError(f"报告 {self.report_id} 内容为空")


@dataclass(frozen=True)
class ReportSections:
    header: str = ""
    history: str = ""
    findings: str = ""
    impression: str = ""

    @property
    def forwarded(self) -> str:
        """向下游传递的文本: 所见 + 印象"""
        return "\n".join(part for part in (self.findings, self.impression) if part)


@dataclass(frozen=True)
class CleanSentence:
    report_id: str
    sentence_index: int
    text: str

    def to_dict(self) -> dict:
        return {"report_id": self.report_id, "sentence_index": self.sentence_index, "text": self.text}
