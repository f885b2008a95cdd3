"""
异常定义
所有模块抛出的业务异常都继承自 RadReportError，命令行据此映射退出码
"""


class RadReportError(Exception):
    """业务异常基类"""


class ConfigError(RadReportError):
    def __init__(self, key: str, reason: str):
        self.key = key
        self.reason = reason
        super().__init__(f"配置错误 [{key}]: {reason}")


class NoFindingsSection(RadReportError):
    def __init__(self, report_id: str):
        self.report_id = report_id
        super().__init__(f"报告 {report_id} 中没有找到 Findings 或 Impression 段落")


class ParseError(RadReportError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"第 {line} 行解析失败: {reason}")


class CyclicDependency(RadReportError):
    def __init__(self, sentence_id: str):
        self.sentence_id = sentence_id
        super().__init__(f"句子 {sentence_id} 的依存关系存在环")


class MergeConflict(RadReportError):
    def __init__(self, sentence_id: str, reason: str = ""):
        self.sentence_id = sentence_id
        super().__init__(f"句子 {sentence_id} 合并名词短语后不再是树: {reason}")


class CategoryConflict(RadReportError):
    def __init__(self, surface: str, first: str, second: str):
        self.surface = surface
        self.first = first
        self.second = second
        super().__init__(f"词条 '{surface}' 类别冲突: {first} vs {second}")


class OrphanNode(RadReportError):
    def __init__(self, node_id: str):
        self.node_id = node_id
        super().__init__(f"节点 {node_id} 无法从根节点到达")


class CyclicPartOf(RadReportError):
    def __init__(self, path):
        self.path = list(path)
        super().__init__(f"PartOf 层级存在环: {' -> '.join(self.path)}")


class NotFound(RadReportError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"知识图谱中找不到: {name}")


class NTriplesSyntaxError(RadReportError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"N-Triples 第 {line} 行格式错误: {reason}")


class NoTemplate(RadReportError):
    def __init__(self, finding_type: str):
        self.finding_type = finding_type
        super().__init__(f"没有适用于 '{finding_type}' 的描述模板")


class MissingRequiredSlot(RadReportError):
    def __init__(self, slot: str):
        self.slot = slot
        super().__init__(f"必填槽位 {{{slot}}} 无法从口述或知识图谱中获得")


class BelowThreshold(RadReportError):
    def __init__(self, score: float, text: str = ""):
        self.score = score
        self.text = text
        super().__init__(f"最佳匹配得分 {score:.4f} 低于阈值: {text}")


class IdMismatch(RadReportError):
    def __init__(self, sentence_id: str):
        self.sentence_id = sentence_id
        super().__init__(f"系统输出的句子 {sentence_id} 在金标准中不存在")
