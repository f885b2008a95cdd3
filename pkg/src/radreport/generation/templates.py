"""
病理描述模板
骨架中 {slot} 为槽位，[...] 包住的部分为可选片段，其中任一槽位为空时整段省略
"""
import logging
import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Mapping, Optional

from ..exceptions import MissingRequiredSlot, NoTemplate, ParseError
from ..ontology import CoarseCategory
from ..utils import read_tsv

logger = logging.getLogger(__name__)

SLOT_NAMES = frozenset({
    "organ", "anatomy_chain", "size_phrase", "measurements", "observations", "properties", "finding",
})

SLOT_RE = re.compile(r"\{([a-z_]+)\}")
OPTIONAL_RE = re.compile(r"\[([^\[\]]*)\]")


@dataclass(frozen=True)
class DescriptionTemplate:
    finding_type: str
    skeleton: str
    required_slots: FrozenSet[str]
    optional_slots: FrozenSet[str]

    @classmethod
    def parse(cls, finding_type: str, skeleton: str) -> "DescriptionTemplate":
        """解析骨架，可选片段外的槽位为必填

        Raises:
            ValueError: 未声明的槽位或方括号不配对
        """
        finding_type = finding_type.strip().lower()
        optional = {slot for group in OPTIONAL_RE.findall(skeleton) for slot in SLOT_RE.findall(group)}
        outside = OPTIONAL_RE.sub("", skeleton)
        if "[" in outside or "]" in outside:
            raise ValueError(f"模板 {finding_type} 的方括号不配对或嵌套")
        required = set(SLOT_RE.findall(outside))
        unknown = (optional | required) - SLOT_NAMES
        if unknown:
            raise ValueError(f"模板 {finding_type} 含未声明的槽位: {', '.join(sorted(unknown))}")
        return cls(finding_type, skeleton, frozenset(required), frozenset(optional - required))

    @property
    def slots(self) -> FrozenSet[str]:
        return self.required_slots | self.optional_slots

    def render(self, values: Mapping[str, str]) -> str:
        """填充槽位，句首字母大写

        Raises:
            MissingRequiredSlot: 必填槽位为空
        """
        for slot in sorted(self.required_slots):
            if not values.get(slot, "").strip():
                raise MissingRequiredSlot(slot)

        def fill(text: str) -> str:
            return SLOT_RE.sub(lambda m: values[m.group(1)].strip(), text)

        def optional(match: re.Match) -> str:
            group = match.group(1)
            if all(values.get(slot, "").strip() for slot in SLOT_RE.findall(group)):
                return fill(group)
            return ""

        text = fill(OPTIONAL_RE.sub(optional, self.skeleton))
        text = re.sub(r"\s+", " ", text).strip()
        return text[:1].upper() + text[1:]


def load_description_templates(path: str) -> Dict[str, DescriptionTemplate]:
    """加载 `finding_type<TAB>skeleton`"""
    templates: Dict[str, DescriptionTemplate] = {}
    df = read_tsv(path, ["finding_type", "skeleton"], required=2)
    for line, row in enumerate(df.itertuples(index=False), start=1):
        try:
            template = DescriptionTemplate.parse(row.finding_type, row.skeleton)
        except ValueError as e:
            raise ParseError(line, f"{path}: {e}")
        if template.finding_type in templates:
            raise ParseError(line, f"{path}: 模板 {template.finding_type} 重复")
        templates[template.finding_type] = template
    logger.info(f"加载 {len(templates)} 个描述模板")
    return templates


def template_for(templates: Mapping[str, DescriptionTemplate], fine_tag: Optional[str],
                 category: CoarseCategory) -> DescriptionTemplate:
    """先按细粒度标签取模板，没有时退回高层类别

    Raises:
        NoTemplate: 两者都没有模板
    """
    for key in (fine_tag, category.value.lower()):
        if key and key.lower() in templates:
            return templates[key.lower()]
    raise NoTemplate(fine_tag or category.value)
