"""
标注句数据模型
词元带词性/词元/依存/超义项，外加名词短语跨度；合并名词短语后得到以短语为节点的依存树
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

ROOT_LABEL = "root"


@dataclass(frozen=True)
class Token:
    """词元，head 为自身下标时表示根"""
    index: int
    text: str
    lemma: str
    pos: str
    supersense: Optional[str]
    head: int
    dep_label: str

    @property
    def lower(self) -> str:
        return self.text.lower()

    @property
    def is_root(self) -> bool:
        return self.dep_label.lower() == ROOT_LABEL


@dataclass(frozen=True)
class NounChunk:
    """名词短语 [start, end)，root 为中心词下标"""
    start: int
    end: int
    root: int

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"名词短语跨度非法: [{self.start}, {self.end})")
        if not self.start <= self.root < self.end:
            raise ValueError(f"中心词 {self.root} 不在跨度 [{self.start}, {self.end}) 内")

    def __len__(self):
        return self.end - self.start

    def __contains__(self, index: int) -> bool:
        return self.start <= index < self.end


@dataclass(frozen=True)
class AnnotatedSentence:
    sentence_id: str
    tokens: Tuple[Token, ...]
    chunks: Tuple[NounChunk, ...] = ()

    @property
    def text(self) -> str:
        return " ".join(token.text for token in self.tokens)

    def chunk_of(self, index: int) -> Optional[NounChunk]:
        for chunk in self.chunks:
            if index in chunk:
                return chunk
        return None


@dataclass(frozen=True)
class Node:
    """合并后的节点：一个名词短语或一个普通词元"""
    node_id: int
    start: int
    end: int
    root: int
    head: int
    dep_label: str
    tokens: Tuple[Token, ...]
    is_chunk: bool

    @property
    def root_token(self) -> Token:
        return self.tokens[self.root - self.start]

    @property
    def pos(self) -> str:
        return self.root_token.pos

    @property
    def text(self) -> str:
        return " ".join(token.text for token in self.tokens)

    @property
    def is_root(self) -> bool:
        return self.head == self.node_id


@dataclass(frozen=True)
class ChunkedSentence:
    sentence_id: str
    nodes: Tuple[Node, ...]
    token_to_node: Dict[int, int] = field(default_factory=dict)
    source: Optional[AnnotatedSentence] = None

    @property
    def root(self) -> Node:
        for node in self.nodes:
            if node.is_root:
                return node
        raise ValueError(f"句子 {self.sentence_id} 没有根节点")

    def parent(self, node: Node) -> Optional[Node]:
        return None if node.is_root else self.nodes[node.head]

    def children(self, node: Node) -> List[Node]:
        return [other for other in self.nodes if other.head == node.node_id and not other.is_root]

    def leaves(self) -> List[Node]:
        heads = {node.head for node in self.nodes if not node.is_root}
        return [node for node in self.nodes if node.node_id not in heads]

    def path_to_root(self, node: Node) -> List[Node]:
        path = [node]
        while not path[-1].is_root:
            path.append(self.nodes[path[-1].head])
        return path
