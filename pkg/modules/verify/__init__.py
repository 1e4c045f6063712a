"""
验证模块
连接、Menger 分隔、子划分嵌入、路径宽/树宽以及各引理检查的精确搜索
"""

__version__ = "1.0.0"

# 子模块列表
CHECKERS = [
    "linkage",       # 连接搜索与命中鲁棒性
    "menger",        # 分隔集与 3-扇
    "subdivision",   # 子划分嵌入枚举
    "widths",        # 精确路径宽/树宽
    "claims",        # 引理级检查
]
