"""
放射学词典
实体表面形式 -> (本体类别, 细粒度标签, 首选名, 同义词, 词形) ，支持最长匹配查找
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..exceptions import CategoryConflict
from ..ontology import CoarseCategory
from ..utils import has_directive, read_tsv, split_list

logger = logging.getLogger(__name__)

LEXICON_COLUMNS = ["surface", "category", "fine_tag", "preferred_name", "synonyms", "word_forms"]

Span = Tuple[int, int]


@dataclass(frozen=True)
class LexiconEntry:
    """词典词条"""
    surface: str
    category: CoarseCategory
    fine_tag: Optional[str] = None
    preferred_name: str = ""
    synonyms: Tuple[str, ...] = ()
    word_forms: Tuple[str, ...] = ()

    def __post_init__(self):
        surface = self.surface.strip().lower()
        if not surface:
            raise ValueError("词条表面形式不能为空")
        object.__setattr__(self, "surface", surface)
        object.__setattr__(self, "preferred_name", (self.preferred_name or surface).strip().lower())
        object.__setattr__(self, "synonyms", tuple(s for s in dict.fromkeys(self.synonyms) if s and s != surface))
        object.__setattr__(self, "word_forms", tuple(w for w in dict.fromkeys(self.word_forms) if w and w != surface))

    @property
    def forms(self) -> Tuple[str, ...]:
        return (self.surface,) + self.synonyms + self.word_forms

    @property
    def token_count(self) -> int:
        return max(len(form.split()) for form in self.forms)


@dataclass
class Lexicon:
    """词典，所有同义词和词形都被索引并解析到同一个词条"""
    entries: Dict[str, LexiconEntry] = field(default_factory=dict)
    max_phrase_len: int = 0
    _index: Dict[str, LexiconEntry] = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, text: str) -> bool:
        return text.strip().lower() in self._index

    def lookup(self, text: str) -> Optional[LexiconEntry]:
        return self._index.get(text.strip().lower())

    def surfaces(self) -> List[str]:
        return sorted(self._index)

    def add(self, entry: LexiconEntry, override: bool = False) -> LexiconEntry:
        """加入词条；同一表面形式出现不同类别时，除非 override 否则报冲突"""
        existing = self.entries.get(entry.surface) or self._index.get(entry.surface)
        if existing is not None and existing.category != entry.category and not override:
            raise CategoryConflict(entry.surface, existing.category.value, entry.category.value)

        for form in entry.forms:
            other = self._index.get(form)
            if other is None or other.surface == entry.surface:
                continue
            if other.category != entry.category and not override:
                raise CategoryConflict(form, other.category.value, entry.category.value)

        if existing is not None and existing.surface != entry.surface:
            # 以同义词身份出现过的表面形式被提升为独立词条
            logger.debug(f"词条 '{entry.surface}' 覆盖了 '{existing.surface}' 的同义词索引")

        stale = self.entries.get(entry.surface)
        if stale is not None:
            for form in stale.forms:
                if self._index.get(form) is stale:
                    del self._index[form]

        self.entries[entry.surface] = entry
        for form in entry.forms:
            self._index[form] = entry
        self.max_phrase_len = max(self.max_phrase_len, entry.token_count)
        return entry


def _row_to_entry(row) -> LexiconEntry:
    return LexiconEntry(
        surface=row.surface,
        category=CoarseCategory.parse(row.category),
        fine_tag=row.fine_tag.lower() or None,
        preferred_name=row.preferred_name,
        synonyms=tuple(split_list(row.synonyms)),
        word_forms=tuple(split_list(row.word_forms)),
    )


def load_lexicon(files: Sequence[str]) -> Lexicon:
    """按顺序加载词典文件

    后加载的文件逐词条覆盖先加载的文件。类别不同的覆盖只允许出现在首行
    标记了 '#override' 的文件中，否则抛出 CategoryConflict。

    Args:
        files: 词典TSV文件列表

    Returns:
        Lexicon: 词典
    """
    lexicon = Lexicon()
    for path in files:
        override = has_directive(path, "override")
        df = read_tsv(path, LEXICON_COLUMNS, required=2)
        for row in df.itertuples(index=False):
            entry = _row_to_entry(row)
            current = lexicon.entries.get(entry.surface)
            if current == entry:
                continue
            lexicon.add(entry, override=override)
        logger.info(f"加载词典 {path}: {len(df)} 行，override={override}")

    logger.info(f"词典共 {len(lexicon)} 个词条，最长短语 {lexicon.max_phrase_len} 个词")
    return lexicon


def longest_match(tokens: Sequence[str], lexicon: Lexicon) -> List[Tuple[Span, LexiconEntry]]:
    """从左到右贪心最长匹配

    在每个位置从 max_phrase_len 到 1 尝试跨度，匹配到的跨度互不重叠。

    Args:
        tokens: 小写词序列
        lexicon: 词典

    Returns:
        list: [((start, end), entry), ...]
    """
    matches = []
    n = len(tokens)
    i = 0
    while i < n:
        matched = None
        for length in range(min(lexicon.max_phrase_len, n - i), 0, -1):
            entry = lexicon.lookup(" ".join(tokens[i:i + length]))
            if entry is not None:
                matched = ((i, i + length), entry)
                break
        if matched is None:
            i += 1
            continue
        matches.append(matched)
        i = matched[0][1]
    return matches


def decompose_phrase(phrase: str, lexicon: Lexicon) -> List[LexiconEntry]:
    """把长词汇短语拆成中心词和若干修饰词

    中心词继承短语的类别，前面的词（或已登记的多词跨度）作为修饰词；
    缺失的词条会被加入词典，整个短语本身也保持可查。解剖学名称不拆分。

    Args:
        phrase: 词汇短语
        lexicon: 词典（会被原地扩充）

    Returns:
        list: 拆分后的词条，按出现顺序
    """
    tokens = phrase.strip().lower().split()
    whole = lexicon.lookup(" ".join(tokens)) if tokens else None
    if len(tokens) < 2:
        return [whole] if whole is not None else []
    if whole is not None and whole.category == CoarseCategory.ANATOMY:
        return [whole]

    head_entry = lexicon.lookup(tokens[-1])
    if whole is not None:
        category, fine_tag = whole.category, whole.fine_tag
    elif head_entry is not None:
        category, fine_tag = head_entry.category, head_entry.fine_tag
    else:
        category, fine_tag = CoarseCategory.OBSERVATION, None

    result: List[LexiconEntry] = []
    modifiers = tokens[:-1]
    known = {span[0]: (span, entry) for span, entry in longest_match(modifiers, lexicon)}
    i = 0
    while i < len(modifiers):
        if i in known:
            (start, end), entry = known[i]
            result.append(entry)
            i = end
            continue
        result.append(lexicon.add(LexiconEntry(modifiers[i], CoarseCategory.MODIFIER)))
        i += 1

    if head_entry is None:
        head_entry = lexicon.add(LexiconEntry(tokens[-1], category, fine_tag))
    result.append(head_entry)

    if whole is None:
        lexicon.add(LexiconEntry(" ".join(tokens), category, fine_tag))

    logger.debug(f"短语拆分 '{phrase}' -> {[e.surface for e in result]}")
    return result


def decompose_long_phrases(lexicon: Lexicon, min_tokens: int = 3) -> int:
    """构建阶段：拆分词典中所有足够长的非解剖短语，返回新增词条数"""
    before = len(lexicon)
    long_phrases: Iterable[LexiconEntry] = [
        entry for entry in list(lexicon.entries.values())
        if len(entry.surface.split()) >= min_tokens and entry.category != CoarseCategory.ANATOMY
    ]
    for entry in long_phrases:
        decompose_phrase(entry.surface, lexicon)
    added = len(lexicon) - before
    if added:
        logger.info(f"长短语拆分新增 {added} 个词条")
    return added
