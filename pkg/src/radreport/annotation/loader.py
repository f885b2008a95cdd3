"""
标注文件读写
格式（UTF-8，制表符分隔，每行一个词元，句子之间空行）:
SENT_ID INDEX TEXT LEMMA POS SUPERSENSE HEAD DEP_LABEL CHUNK_ID CHUNK_ROOT_FLAG
"""
import logging
from typing import Dict, Iterable, List, Tuple

from ..exceptions import CyclicDependency, ParseError
from .models import AnnotatedSentence, NounChunk, Token

logger = logging.getLogger(__name__)

N_COLUMNS = 10
NONE = "_"
ROOT_FLAG = "R"


def _opt(value: str):
    return None if value == NONE else value


def find_cycle(heads: List[int]) -> bool:
    """heads[i] 为 i 的父节点，根指向自身；存在不经过根的环时返回 True"""
    n = len(heads)
    for start in range(n):
        seen = set()
        node = start
        while heads[node] != node:
            if node in seen:
                return True
            seen.add(node)
            node = heads[node]
            if len(seen) > n:
                return True
    return False


def _build_sentence(sentence_id: str, rows: List[Tuple[int, List[str]]]) -> AnnotatedSentence:
    n = len(rows)
    tokens = []
    chunk_rows: Dict[str, List[Tuple[int, bool]]] = {}
    roots = []

    for position, (line_no, cols) in enumerate(rows):
        try:
            index = int(cols[1])
            head = int(cols[6])
        except ValueError:
            raise ParseError(line_no, "INDEX 和 HEAD 必须是整数")
        if index != position:
            raise ParseError(line_no, f"INDEX 应为 {position}，实际为 {index}")
        if not 0 <= head < n:
            raise ParseError(line_no, f"HEAD {head} 超出句子范围 [0, {n})")

        dep_label = cols[7]
        if dep_label.lower() == "root":
            if head != index:
                raise ParseError(line_no, "root 词元的 HEAD 必须指向自身")
            roots.append(line_no)
        elif head == index:
            raise ParseError(line_no, "只有 root 词元可以指向自身")

        tokens.append(Token(
            index=index,
            text=cols[2],
            lemma=cols[3],
            pos=cols[4],
            supersense=_opt(cols[5]),
            head=head,
            dep_label=dep_label,
        ))

        if cols[8] != NONE:
            if cols[9] not in (ROOT_FLAG, NONE):
                raise ParseError(line_no, f"CHUNK_ROOT_FLAG 只能是 R 或 _，实际为 {cols[9]}")
            chunk_rows.setdefault(cols[8], []).append((index, cols[9] == ROOT_FLAG))

    first_line = rows[0][0]
    if len(roots) != 1:
        raise ParseError(first_line, f"句子 {sentence_id} 应恰有一个 root，实际 {len(roots)} 个")
    if find_cycle([token.head for token in tokens]):
        raise CyclicDependency(sentence_id)

    chunks = []
    for chunk_id, members in chunk_rows.items():
        indices = [index for index, _ in members]
        chunk_roots = [index for index, is_root in members if is_root]
        if indices != list(range(indices[0], indices[-1] + 1)):
            raise ParseError(first_line, f"名词短语 {chunk_id} 不连续")
        if len(chunk_roots) != 1:
            raise ParseError(first_line, f"名词短语 {chunk_id} 应恰有一个中心词")
        chunks.append(NounChunk(indices[0], indices[-1] + 1, chunk_roots[0]))

    chunks.sort(key=lambda chunk: chunk.start)
    return AnnotatedSentence(sentence_id=sentence_id, tokens=tuple(tokens), chunks=tuple(chunks))


def parse_annotations(lines: Iterable[str]) -> List[AnnotatedSentence]:
    """解析标注行，错误带行号"""
    sentences = []
    rows: List[Tuple[int, List[str]]] = []
    sentence_id = None

    def flush():
        if rows:
            sentences.append(_build_sentence(sentence_id, rows))

    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            flush()
            rows, sentence_id = [], None
            continue
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            raise ParseError(line_no, f"应有 {N_COLUMNS} 列，实际 {len(cols)} 列")
        if sentence_id is not None and cols[0] != sentence_id:
            flush()
            rows = []
        sentence_id = cols[0]
        rows.append((line_no, cols))
    flush()
    return sentences


def load_annotations(path: str) -> List[AnnotatedSentence]:
    """加载标注文件

    Args:
        path: 标注文件路径

    Returns:
        list: AnnotatedSentence 列表，每个句子都满足树结构约束

    Raises:
        ParseError: 列数或下标错误，带行号
        CyclicDependency: 依存关系成环
    """
    with open(path, "r", encoding="utf-8") as f:
        sentences = parse_annotations(f)
    logger.info(f"从 {path} 加载 {len(sentences)} 个标注句")
    return sentences


def serialize_annotations(sentences: Iterable[AnnotatedSentence]) -> str:
    """把标注句写回同一格式，load_annotations 可逐字段还原"""
    blocks = []
    for sentence in sentences:
        chunk_ids = {}
        for number, chunk in enumerate(sentence.chunks, start=1):
            for index in range(chunk.start, chunk.end):
                chunk_ids[index] = (f"c{number}", index == chunk.root)
        lines = []
        for token in sentence.tokens:
            chunk_id, is_root = chunk_ids.get(token.index, (NONE, False))
            lines.append("\t".join([
                sentence.sentence_id,
                str(token.index),
                token.text,
                token.lemma,
                token.pos,
                token.supersense or NONE,
                str(token.head),
                token.dep_label,
                chunk_id,
                ROOT_FLAG if is_root else NONE,
            ]))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")
