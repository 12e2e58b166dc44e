"""
工具模块：CSV 输出
"""
from .csv_writer import emit_csv, format_value

__all__ = ['emit_csv', 'format_value']
