import logging

from ..exceptions import MergeConflict
from .loader import find_cycle
from .models import AnnotatedSentence, ChunkedSentence, Node, ROOT_LABEL

logger = logging.getLogger(__name__)


def merge_chunks(sentence: AnnotatedSentence) -> ChunkedSentence:
    """把每个名词短语合并成一个节点，并把依存边重新挂到节点上

    短语内部的边被丢弃；短语对外的边取中心词的边（中心词的父节点在短语内部时，
    取第一个父节点在短语外的词元）。

    Raises:
        MergeConflict: 合并后出现环
    """
    tokens = sentence.tokens
    spans = []
    token_to_node = {}
    chunk_starts = {chunk.start: chunk for chunk in sentence.chunks}

    i = 0
    while i < len(tokens):
        chunk = chunk_starts.get(i)
        if chunk is not None:
            spans.append((chunk.start, chunk.end, chunk.root, True))
            i = chunk.end
        else:
            spans.append((i, i + 1, i, False))
            i += 1

    for node_id, (start, end, _, _) in enumerate(spans):
        for index in range(start, end):
            token_to_node[index] = node_id

    heads = []
    labels = []
    for node_id, (start, end, root, is_chunk) in enumerate(spans):
        edge_token = tokens[root]
        if start <= edge_token.head < end and not edge_token.is_root:
            external = [tokens[k] for k in range(start, end) if not start <= tokens[k].head < end or tokens[k].is_root]
            edge_token = external[0] if external else edge_token

        if edge_token.is_root:
            heads.append(node_id)
            labels.append(ROOT_LABEL)
        else:
            heads.append(token_to_node[edge_token.head])
            labels.append(edge_token.dep_label)

        for k in range(start, end):
            other = tokens[k]
            if other is edge_token or other.is_root or start <= other.head < end:
                continue
            if token_to_node[other.head] != heads[-1]:
                logger.debug(f"句子 {sentence.sentence_id}: 丢弃短语内词元 {other.text} 的外部边")

    roots = [node_id for node_id, head in enumerate(heads) if head == node_id]
    if len(roots) != 1:
        raise MergeConflict(sentence.sentence_id, f"合并后有 {len(roots)} 个根")
    if find_cycle(heads):
        raise MergeConflict(sentence.sentence_id, "短语之间的外部边成环")

    nodes = tuple(
        Node(
            node_id=node_id,
            start=start,
            end=end,
            root=root,
            head=heads[node_id],
            dep_label=labels[node_id],
            tokens=tokens[start:end],
            is_chunk=is_chunk,
        )
        for node_id, (start, end, root, is_chunk) in enumerate(spans)
    )
    return ChunkedSentence(
        sentence_id=sentence.sentence_id,
        nodes=nodes,
        token_to_node=token_to_node,
        source=sentence,
    )
