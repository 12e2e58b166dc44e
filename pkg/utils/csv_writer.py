"""
CSV 输出：表头 + 每条记录一行，数值保留 12 位有效数字

先写入同目录的临时文件，成功后再重命名，出错时不会留下半个文件。
"""
import csv
import math
import os
import tempfile
from typing import Iterable, Optional, Sequence

import numpy as np


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.12g}"
    return str(value)


def emit_csv(records: Iterable, path: str, columns: Optional[Sequence[str]] = None) -> int:
    """
    将记录写入 CSV

    Args:
        records: 带 as_row() 与 COLUMNS 的记录
        path: 输出路径
        columns: 表头（为空时取第一条记录的 COLUMNS）

    Returns:
        写入的数据行数
    """
    records = list(records)
    if columns is None:
        if not records:
            raise ValueError("columns are required for an empty record stream")
        columns = records[0].COLUMNS

    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", suffix=".csv", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for record in records:
                writer.writerow([format_value(v) for v in record.as_row()])
        os.chmod(tmp_path, 0o644)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    return len(records)
