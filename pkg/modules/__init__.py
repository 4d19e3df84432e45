"""
ℚ(i) 次凸性机制验证工具模块包
"""

__version__ = '1.0.0'
