"""
基于词典的后备标注器
没有外部句法分析器时，用词典类别 + 封闭词表 + 后缀规则标注词性，
再用浅层挂接文法生成名词短语和依存树。输出完全确定。
"""
import logging
import re
from typing import Dict, List, Optional, Sequence, Tuple

from ..lexicon import Lexicon, LexiconEntry, SupersenseLexicon, longest_match
from ..ontology import CoarseCategory
from .models import AnnotatedSentence, NounChunk, Token

logger = logging.getLogger(__name__)

TOKEN_RE = re.compile(r"\d+(?:\.\d+)?|[A-Za-z]+(?:[-'][A-Za-z]+)*|[^\sA-Za-z\d]")
NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")

DETERMINERS = {"a", "an", "the", "no", "any", "this", "these", "that", "those", "both", "all", "each"}
PREPOSITIONS = {
    "in", "of", "with", "at", "on", "within", "from", "to", "for", "into", "along", "near",
    "involving", "without", "by", "over", "under", "behind", "around", "across", "between",
    "through", "throughout", "beyond", "upon",
}
VERBS = {
    "is", "are", "was", "were", "be", "been", "being", "seen", "noted", "shows", "show",
    "showing", "shown", "appears", "appear", "measuring", "measures", "measured", "visualized",
    "visualised", "identified", "observed", "demonstrated", "reveals", "revealed", "has", "have",
    "contains", "containing", "extending", "extends",
}
COPULAS = {"is", "are", "was", "were", "be", "been", "being"}
CONJUNCTIONS = {"and", "or"}
PARTICLES = {"not"}
PRONOUNS = {"there", "it"}
ADVERBS = {"also", "well", "very", "otherwise"}

UNITS = {"mm", "cm", "cc", "ml"}
VOLUME_WORDS = {"vol", "volume"}

ADJ_SUFFIXES = ("ous", "al", "ic", "ive", "ent", "ant", "ar", "dense", "oid", "ible", "able",
                "less", "ful", "ary", "ile", "echoic", "genic")
VERB_SUFFIXES = ("ed", "ing")

CHUNK_POS = {"ADJ", "NOUN", "NUM"}
INTRA_CHUNK_LABELS = {"ADJ": "amod", "NOUN": "compound", "NUM": "nummod"}


def tokenize(sentence: str) -> List[str]:
    """拆分词元：小数和带连字符的词保持完整，标点单独成词"""
    return TOKEN_RE.findall(sentence)


def _tag_measurements(lower: Sequence[str], pos: List[Optional[str]]):
    n = len(lower)
    for i, word in enumerate(lower):
        if NUMBER_RE.fullmatch(word):
            pos[i] = "NUM"
    for i, word in enumerate(lower):
        if word == "x" and 0 < i < n - 1 and pos[i - 1] == "NUM" and NUMBER_RE.fullmatch(lower[i + 1]):
            pos[i] = "NUM"
        elif word in UNITS and i > 0 and pos[i - 1] == "NUM":
            pos[i] = "NUM"
        elif word in VOLUME_WORDS and i < n - 1 and NUMBER_RE.fullmatch(lower[i + 1]):
            pos[i] = "NUM"


def _closed_class(word: str) -> Optional[str]:
    if word in DETERMINERS:
        return "DET"
    if word in PREPOSITIONS:
        return "ADP"
    if word in VERBS:
        return "VERB"
    if word in CONJUNCTIONS:
        return "CCONJ"
    if word in PARTICLES:
        return "PART"
    if word in PRONOUNS:
        return "PRON"
    if word in ADVERBS:
        return "ADV"
    if not any(ch.isalnum() for ch in word):
        return "PUNCT"
    return None


def _suffix_pos(word: str) -> str:
    if word.endswith("ly"):
        return "ADV"
    if word.endswith(ADJ_SUFFIXES):
        return "ADJ"
    if word.endswith(VERB_SUFFIXES):
        return "VERB"
    return "NOUN"


def tag_tokens(words: Sequence[str], lexicon: Lexicon) -> Tuple[List[str], Dict[int, LexiconEntry]]:
    """词性标注：测量值 -> 词典类别 -> 封闭词表 -> 后缀规则"""
    lower = [word.lower() for word in words]
    pos: List[Optional[str]] = [None] * len(words)
    entries: Dict[int, LexiconEntry] = {}

    _tag_measurements(lower, pos)
    for (start, end), entry in longest_match(lower, lexicon):
        if any(pos[k] is not None for k in range(start, end)):
            continue
        for k in range(start, end):
            pos[k] = "ADJ" if entry.category == CoarseCategory.MODIFIER else "NOUN"
            entries[k] = entry

    for i, word in enumerate(lower):
        if pos[i] is None:
            pos[i] = _closed_class(word) or _suffix_pos(word)
    return pos, entries


def find_chunks(pos: Sequence[str]) -> List[NounChunk]:
    """名词短语 = ADJ/NOUN/NUM 的最大连续段，以最后一个 NOUN 结尾并作为中心词"""
    chunks = []
    i, n = 0, len(pos)
    while i < n:
        if pos[i] not in CHUNK_POS:
            i += 1
            continue
        j = i
        while j < n and pos[j] in CHUNK_POS:
            j += 1
        nouns = [k for k in range(i, j) if pos[k] == "NOUN"]
        if nouns:
            chunks.append(NounChunk(i, nouns[-1] + 1, nouns[-1]))
        i = j
    return chunks


class _Grammar:
    """浅层挂接文法，在词元+名词短语组成的单元序列上工作"""

    def __init__(self, words, pos, chunks, prep_senses: SupersenseLexicon):
        self.words = [word.lower() for word in words]
        self.pos = pos
        self.chunks = chunks
        self.senses = prep_senses
        self.n = len(words)
        self.heads: List[Optional[int]] = [None] * self.n
        self.deps: List[Optional[str]] = [None] * self.n

        # 单元: (start, end, root, is_chunk)
        self.units = []
        chunk_at = {chunk.start: chunk for chunk in chunks}
        i = 0
        while i < self.n:
            chunk = chunk_at.get(i)
            if chunk is not None:
                self.units.append((chunk.start, chunk.end, chunk.root, True))
                i = chunk.end
            else:
                self.units.append((i, i + 1, i, False))
                i += 1

    def _unit_pos(self, u):
        return "CHUNK" if self.units[u][3] else self.pos[self.units[u][2]]

    def _find_main_verb(self) -> Tuple[Optional[int], List[int]]:
        verbs = [i for i in range(self.n) if self.pos[i] == "VERB"]
        if not verbs:
            return None, []
        main, run = verbs[0], [verbs[0]]
        k = verbs[0] + 1
        while k < self.n and self.pos[k] in ("VERB", "ADV", "PART"):
            if self.pos[k] == "VERB":
                main = k
                run.append(k)
            k += 1
        return main, run[:-1]

    def _coordination(self) -> Dict[int, int]:
        """并列组: 短语 (分隔符 短语)+，分隔符只能是逗号/连词/限定词且至少含一个连词"""
        conj = {}
        u = 0
        while u < len(self.units):
            if not self.units[u][3]:
                u += 1
                continue
            group, has_cc = [u], False
            v = u + 1
            while True:
                seps, w = [], v
                while w < len(self.units) and not self.units[w][3] and (
                        self.words[self.units[w][2]] == "," or self._unit_pos(w) in ("CCONJ", "DET")):
                    seps.append(w)
                    w += 1
                if not seps or w >= len(self.units) or not self.units[w][3]:
                    break
                if not any(self.words[self.units[s][2]] == "," or self._unit_pos(s) == "CCONJ" for s in seps):
                    break
                has_cc = has_cc or any(self._unit_pos(s) == "CCONJ" for s in seps)
                group.append(w)
                v = w + 1
            if len(group) > 1 and has_cc:
                for member in group[1:]:
                    conj[member] = group[0]
            u = group[-1] + 1
        return conj

    def _previous_unit(self, u, skip=("DET", "ADV")):
        v = u - 1
        while v >= 0 and not self.units[v][3] and self._unit_pos(v) in skip:
            v -= 1
        return v

    def _introduced_by_preposition(self, u) -> bool:
        prev = self._previous_unit(u)
        return prev >= 0 and self._unit_pos(prev) == "ADP"

    def _attach_preposition(self, u, unit_head, unit_dep) -> Optional[int]:
        """介词挂到最近的前置候选单元；非整体-部分介词会跳出 'of' 类补语"""
        candidate = None
        for v in range(u - 1, -1, -1):
            if self.units[v][3] or self._unit_pos(v) in ("VERB", "ADJ"):
                candidate = v
                break
        if candidate is None:
            return None

        sense = self.senses.sense_of(self.words[self.units[u][2]])
        if not self.senses.is_part_whole(sense):
            while unit_dep.get(candidate) == "pobj":
                prep = unit_head[candidate]
                prep_sense = self.senses.sense_of(self.words[self.units[prep][2]])
                if not self.senses.is_part_whole(prep_sense) or unit_head.get(prep) is None:
                    break
                candidate = unit_head[prep]
        return candidate

    def parse(self):
        main, aux = self._find_main_verb()
        conj = self._coordination()
        unit_of = {}
        for u, (start, end, _, _) in enumerate(self.units):
            for k in range(start, end):
                unit_of[k] = u

        # 根: 主动词，否则第一个不由介词引出的短语，否则第一个非标点词
        if main is not None:
            root_unit = unit_of[main]
        else:
            chunk_units = [u for u in range(len(self.units)) if self.units[u][3]]
            free = [u for u in chunk_units if not self._introduced_by_preposition(u)]
            if free:
                root_unit = free[0]
            elif chunk_units:
                root_unit = chunk_units[0]
            else:
                non_punct = [u for u in range(len(self.units)) if self._unit_pos(u) != "PUNCT"]
                root_unit = non_punct[0] if non_punct else 0

        unit_head: Dict[int, Optional[int]] = {root_unit: root_unit}
        unit_dep: Dict[int, str] = {root_unit: "root"}
        pending_adp = None
        has_subject = False
        main_unit = unit_of[main] if main is not None else None
        copular = main is not None and self.words[main] in COPULAS

        for u, (start, end, root, is_chunk) in enumerate(self.units):
            if u == root_unit:
                pending_adp = None
                continue
            kind = self._unit_pos(u)

            if is_chunk:
                prev = self._previous_unit(u)
                if pending_adp is not None and prev == pending_adp:
                    unit_head[u], unit_dep[u] = pending_adp, "pobj"
                elif u in conj:
                    unit_head[u], unit_dep[u] = conj[u], "conj"
                elif main_unit is not None and u < main_unit and not has_subject:
                    unit_head[u], unit_dep[u] = main_unit, "nsubj"
                    has_subject = True
                elif main_unit is not None and u > main_unit:
                    unit_head[u], unit_dep[u] = main_unit, "attr" if copular else "dobj"
                else:
                    unit_head[u], unit_dep[u] = root_unit, "dep"
                pending_adp = None
                continue

            if kind == "ADP":
                target = self._attach_preposition(u, unit_head, unit_dep)
                unit_head[u] = root_unit if target is None else target
                unit_dep[u] = "prep"
                pending_adp = u
                continue

            if kind == "VERB":
                unit_head[u] = main_unit
                unit_dep[u] = "aux" if root in aux else "advcl"
            elif kind == "ADJ":
                if main_unit is not None and u > main_unit:
                    unit_head[u], unit_dep[u] = main_unit, "acomp"
                else:
                    unit_head[u], unit_dep[u] = root_unit, "dep"
            elif kind == "DET":
                nxt = u + 1
                while nxt < len(self.units) and not self.units[nxt][3] and self._unit_pos(nxt) == "DET":
                    nxt += 1
                target = nxt if nxt < len(self.units) and self.units[nxt][3] else root_unit
                unit_head[u], unit_dep[u] = target, "det"
                continue
            elif kind == "CCONJ":
                prev_chunks = [v for v in range(u - 1, -1, -1) if self.units[v][3]]
                unit_head[u] = prev_chunks[0] if prev_chunks else root_unit
                unit_dep[u] = "cc"
            elif kind == "PUNCT":
                unit_head[u], unit_dep[u] = root_unit, "punct"
            elif kind == "NUM":
                unit_head[u], unit_dep[u] = root_unit, "nummod"
            elif kind == "PART":
                unit_head[u], unit_dep[u] = root_unit, "neg"
            elif kind == "PRON":
                unit_head[u], unit_dep[u] = root_unit, "expl"
            elif kind == "ADV":
                unit_head[u], unit_dep[u] = root_unit, "advmod"
            else:
                unit_head[u], unit_dep[u] = root_unit, "dep"
            if kind not in ("ADV", "PART"):
                pending_adp = None

        for u, (start, end, root, is_chunk) in enumerate(self.units):
            head_unit = unit_head[u]
            self.heads[root] = self.units[head_unit][2]
            self.deps[root] = unit_dep[u]
            for k in range(start, end):
                if k != root:
                    self.heads[k] = root
                    self.deps[k] = INTRA_CHUNK_LABELS.get(self.pos[k], "compound")
        return self.heads, self.deps


def fallback_annotate(sentence: str, lexicon: Lexicon, prep_senses: SupersenseLexicon,
                      sentence_id: str = "s1") -> AnnotatedSentence:
    """用词典和浅层文法标注一句话

    Args:
        sentence: 句子文本
        lexicon: 放射学词典
        prep_senses: 介词默认超义项
        sentence_id: 句子编号

    Returns:
        AnnotatedSentence: 标注结果，同样的输入总是得到同样的输出
    """
    words = tokenize(sentence)
    if not words:
        words = [sentence.strip() or "."]

    pos, entries = tag_tokens(words, lexicon)
    chunks = find_chunks(pos)
    heads, deps = _Grammar(words, pos, chunks, prep_senses).parse()

    tokens = []
    for i, word in enumerate(words):
        lower = word.lower()
        entry = entries.get(i)
        lemma = lower
        if entry is not None and len(entry.surface.split()) == 1:
            lemma = entry.preferred_name
        supersense = None
        if pos[i] == "ADP":
            supersense = prep_senses.sense_of(lower)
        elif entry is not None and entry.category == CoarseCategory.ANATOMY:
            supersense = "BODY"
        tokens.append(Token(
            index=i,
            text=word,
            lemma=lemma,
            pos=pos[i],
            supersense=supersense,
            head=heads[i],
            dep_label=deps[i],
        ))

    logger.debug(f"后备标注 {sentence_id}: {[(t.text, t.pos, t.head, t.dep_label) for t in tokens]}")
    return AnnotatedSentence(sentence_id=sentence_id, tokens=tuple(tokens), chunks=tuple(chunks))
