"""
异常定义模块
所有计算模块共用的异常层级
"""


class ZiVerifyError(Exception):
    """验证工具包的根异常"""


class ArithmeticDomainError(ZiVerifyError, ValueError):
    """输入超出算术定义域，如零模、对零或单位元做分解"""


class ComponentOverflowError(ArithmeticDomainError, OverflowError):
    """高斯整数分量超出 64 位安全范围"""


class AdmissibilityError(ArithmeticDomainError):
    """模不满足二次特征 χ_q 的可容许条件"""


class CostGuardError(ZiVerifyError, RuntimeError):
    """求和项数超过代价上限"""


class RegimeError(ZiVerifyError, ValueError):
    """渐近公式在其适用范围之外被调用"""


class ConvergenceError(ZiVerifyError, RuntimeError):
    """级数或数值积分未收敛"""


class ConfigError(ZiVerifyError, ValueError):
    """未知套件或配置格式错误"""
