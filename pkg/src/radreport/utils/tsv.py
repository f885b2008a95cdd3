import csv
import logging
import re
from typing import List, Sequence

import pandas as pd

from ..exceptions import ParseError

logger = logging.getLogger(__name__)

_LINE_RE = re.compile(r"line (\d+)")


def read_tsv(path: str, columns: Sequence[str], required: int = 1) -> pd.DataFrame:
    """读取制表符分隔的配置/词典文件

    '#' 开头的行是注释，缺失的可选列填空字符串

    Args:
        path: 文件路径
        columns: 列名
        required: 必须非空的前几列数量

    Returns:
        pandas.DataFrame: 全部为字符串的表
    """
    try:
        df = pd.read_csv(
            path,
            sep="\t",
            header=None,
            names=list(columns),
            dtype=str,
            keep_default_na=False,
            comment="#",
            quoting=csv.QUOTE_NONE,
            skip_blank_lines=True,
            engine="python",
        )
    except pd.errors.EmptyDataError:
        return pd.DataFrame(columns=list(columns))
    except pd.errors.ParserError as e:
        match = _LINE_RE.search(str(e))
        raise ParseError(int(match.group(1)) if match else 0, f"{path}: 列数不正确")

    df = df.fillna("")
    for column in df.columns:
        df[column] = df[column].astype(str).str.strip()

    for position, row in enumerate(df.itertuples(index=False), start=1):
        missing = [columns[i] for i in range(required) if not row[i]]
        if missing:
            raise ParseError(position, f"{path}: 缺少必填列 {', '.join(missing)}")

    return df


def split_list(value: str) -> List[str]:
    """逗号分隔的列表字段"""
    return [item.strip().lower() for item in value.split(",") if item.strip()]


def has_directive(path: str, directive: str) -> bool:
    """文件首行是否带有 '#directive' 标记"""
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline().strip().lower()
    return first == f"#{directive}"
