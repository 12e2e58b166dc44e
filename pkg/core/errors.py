"""
异常类型：所有置信球序列相关错误的统一层次
"""
from typing import Iterable, List, Optional, Tuple


class CSSError(ValueError):
    """置信球序列库的基础异常"""


class NoEstimateError(CSSError):
    """t = 0 时查询估计值或半径（尚无估计）"""

    def __init__(self, message: str = "no estimate exists before the first observation"):
        super().__init__(message)


class ObservationError(CSSError):
    """观测值不合法：维度不匹配、非有限值、超出范数上界 B"""


class WeightError(CSSError):
    """权重 λ 不在 (0, cap] 或超出 ψ 的定义域"""


class ConfigError(CSSError):
    """构造期配置错误，携带所有出错字段"""

    def __init__(self, problems, field: Optional[str] = None):
        if isinstance(problems, str):
            problems = [(field or "config", problems)]
        self.problems: List[Tuple[str, str]] = list(problems)
        super().__init__("; ".join(f"{name}: {msg}" for name, msg in self.problems))

    @property
    def fields(self) -> List[str]:
        """出错字段名列表"""
        return [name for name, _ in self.problems]

    @classmethod
    def collect(cls, problems: Iterable[Tuple[str, str]]):
        """有问题时抛出，否则什么都不做"""
        problems = list(problems)
        if problems:
            raise cls(problems)
