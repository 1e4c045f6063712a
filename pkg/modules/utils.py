"""
通用工具模块

这个模块提供了项目中所有其他模块需要的通用功能，包括：
- 统一的日志系统配置
- 文件操作（JSON读写、文件哈希）

日志与目录配置从 modules.core.config 读取，确保整个项目的一致性。
"""

import os
import sys
import json
import hashlib
import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Dict, Any, Optional, Union

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# ===================================
# 1. 日志系统配置
# ===================================


def parse_size(max_size: Union[str, int]) -> int:
    """把 "10MB" / "512KB" / 整数 解析为字节数"""
    if isinstance(max_size, int):
        return max_size
    text = max_size.strip().upper()
    if text.endswith("MB"):
        return int(text[:-2]) * 1024 * 1024
    if text.endswith("KB"):
        return int(text[:-2]) * 1024
    return int(text)


def setup_logging(verbose: bool = False, config=None) -> logging.Logger:
    """
    设置项目的统一日志系统

    控制台处理器写到 stderr（stdout 留给数据输出）；
    配置项 logging.to_file 为真时额外挂载轮换文件处理器。

    Args:
        verbose (bool): True 时使用 DEBUG 级别，否则使用 system.log_level
        config: SystemConfig 实例，缺省时使用全局配置

    Returns:
        logging.Logger: 配置完成的根日志记录器
    """
    if config is None:
        from modules.core.config import get_config
        config = get_config()

    level_name = "DEBUG" if verbose else str(config.get("system.log_level", "INFO")).upper()
    log_level = getattr(logging, level_name, logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)

    # 清除现有的处理器（避免重复配置）
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    formatter = logging.Formatter(fmt=LOG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if config.get("logging.to_file", False):
        logs_dir = Path(config.get("paths.logs_dir", "logs"))
        try:
            logs_dir.mkdir(parents=True, exist_ok=True)
            file_handler = RotatingFileHandler(
                filename=logs_dir / "eposa.log",
                maxBytes=parse_size(config.get("logging.max_size", "10MB")),
                backupCount=int(config.get("logging.backup_count", 3)),
                encoding="utf-8"
            )
            file_handler.setLevel(log_level)
            file_handler.setFormatter(formatter)
            root_logger.addHandler(file_handler)
        except OSError as e:
            # 文件处理器失败时控制台日志仍然可用
            root_logger.warning(f"配置文件日志处理器失败: {e}")

    return root_logger


def get_logger(name: str) -> logging.Logger:
    """
    获取指定名称的日志记录器

    Example:
        >>> logger = get_logger(__name__)
        >>> logger.info("开始搜索")
    """
    return logging.getLogger(name)

# ===================================
# 2. 文件操作功能
# ===================================


def save_json(data: Union[Dict[str, Any], list], file_path: Union[str, Path], indent: int = 2) -> None:
    """
    将数据保存为JSON文件（键顺序保持插入顺序，保证输出稳定）

    Raises:
        OSError: 写入失败
    """
    path = Path(file_path)
    if path.parent and not path.parent.exists():
        os.makedirs(path.parent, exist_ok=True)

    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=indent, ensure_ascii=False, separators=(',', ': '))
        f.write("\n")

    get_logger(__name__).debug(f"JSON文件保存成功: {path}")


def load_json(file_path: Union[str, Path]) -> Optional[Union[Dict[str, Any], list]]:
    """
    从JSON文件加载数据

    Returns:
        成功时返回加载的数据; 文件不存在时返回 None

    Raises:
        json.JSONDecodeError: JSON 格式错误
    """
    path = Path(file_path)
    if not path.exists():
        get_logger(__name__).warning(f"JSON文件不存在: {path}")
        return None

    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def file_sha256(file_path: Union[str, Path]) -> str:
    """计算文件的 sha256, 用于报告中的输入实例描述"""
    digest = hashlib.sha256()
    with open(file_path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()
