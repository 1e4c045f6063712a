"""
统一配置管理系统
整合搜索预算、输出格式、日志等配置项，提供统一的配置接口

加载顺序（后者覆盖前者）：
1. 内置默认值
2. config.yaml（或 --config 指定的 YAML/JSON 文件）
3. .env 文件与 EPOSA_* 环境变量
4. 命令行覆盖
"""

import os
import json
import yaml
from typing import Dict, Any, Optional
from pathlib import Path
from dataclasses import dataclass
from enum import Enum

from dotenv import load_dotenv

from .exceptions import ConfigurationError, ErrorCode

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent
ENV_PREFIX = "EPOSA_"

# 文档约定的简写环境变量
ENV_ALIASES = {
    "EPOSA_NODE_BUDGET": "search.node_budget",
}


class ConfigSource(Enum):
    """配置来源"""
    DEFAULT = "default"
    FILE = "file"
    ENV = "environment"
    OVERRIDE = "override"


@dataclass
class ConfigItem:
    """配置项"""
    key: str
    value: Any
    source: ConfigSource
    description: str = ""


class SystemConfig:
    """系统配置管理器"""

    def __init__(self, config_file: Optional[str] = None, use_env: bool = True):
        self.config_file = config_file or str(PROJECT_ROOT / "config.yaml")
        self.use_env = use_env
        self.config_data: Dict[str, ConfigItem] = {}

        # 初始化默认配置
        self._init_default_config()

        # 加载配置
        self.load_config()

        # 验证配置
        self.validate_config()

    def _init_default_config(self):
        """初始化默认配置"""

        # 系统基础配置
        self.set_default("system.name", "eposa_toolkit")
        self.set_default("system.version", "1.0.0")
        self.set_default("system.log_level", "INFO")

        # 目录配置
        self.set_default("paths.output_dir", "output")
        self.set_default("paths.logs_dir", "logs")

        # 日志配置
        self.set_default("logging.to_file", False)
        self.set_default("logging.max_size", "10MB")
        self.set_default("logging.backup_count", 3)

        # 搜索配置
        self.set_default("search.node_budget", 5_000_000, "单次精确搜索的节点预算, <=0 表示不限")
        self.set_default("search.min_apart", 70, "build_z 的 apartness 下限")
        self.set_default("search.samples", 20, "Sampled 模式的抽样次数")
        self.set_default("search.seed", 0)
        self.set_default("search.jobs", 1)
        self.set_default("search.progress", False)

        # 输出配置
        self.set_default("output.format", "json")  # json, yaml
        self.set_default("output.indent", 2)
        self.set_default("output.deterministic", False)

    def set_default(self, key: str, value: Any, description: str = ""):
        """设置默认配置项"""
        self.config_data[key] = ConfigItem(
            key=key,
            value=value,
            source=ConfigSource.DEFAULT,
            description=description
        )

    def load_config(self):
        """加载配置文件"""

        # 1. 从文件加载
        self._load_from_file()

        # 2. 从环境变量加载
        if self.use_env:
            self._load_from_env()

    def _load_from_file(self):
        """从配置文件加载; 文件不存在时沿用默认值"""
        config_path = Path(self.config_file)

        if not config_path.exists():
            return

        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                if config_path.suffix.lower() in ('.yaml', '.yml'):
                    file_config = yaml.safe_load(f) or {}
                elif config_path.suffix.lower() == '.json':
                    file_config = json.load(f)
                else:
                    raise ConfigurationError(f"不支持的配置文件格式: {config_path.suffix}",
                                             ErrorCode.CONFIG_LOAD_FAILED)
        except (OSError, yaml.YAMLError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"配置文件加载失败: {config_path}",
                                     ErrorCode.CONFIG_LOAD_FAILED, cause=e)

        # 扁平化配置并更新
        for key, value in self._flatten_dict(file_config).items():
            self.set(key, value, ConfigSource.FILE)

    def _load_from_env(self):
        """从 .env 与环境变量加载"""
        load_dotenv(PROJECT_ROOT / ".env", override=False)

        for env_key, key in ENV_ALIASES.items():
            if env_key in os.environ:
                self._apply_env(key, env_key, os.environ[env_key])

        for key in list(self.config_data):
            env_key = f"{ENV_PREFIX}{key.upper().replace('.', '_')}"
            if env_key in os.environ:
                self._apply_env(key, env_key, os.environ[env_key])

    def _apply_env(self, key: str, env_key: str, env_value: str):
        """按默认值的类型转换环境变量"""
        current = self.get(key)
        try:
            if isinstance(current, bool):
                value: Any = env_value.lower() in ('true', '1', 'yes', 'on')
            elif isinstance(current, int):
                value = int(env_value.replace("_", ""))
            elif isinstance(current, float):
                value = float(env_value)
            else:
                value = env_value
        except ValueError as e:
            raise ConfigurationError(f"环境变量 {env_key} 类型转换失败: {env_value!r}", cause=e)
        self.set(key, value, ConfigSource.ENV)

    def _flatten_dict(self, d: Dict[str, Any], parent_key: str = '', sep: str = '.') -> Dict[str, Any]:
        """扁平化嵌套字典"""
        items = []
        for k, v in d.items():
            new_key = f"{parent_key}{sep}{k}" if parent_key else k
            if isinstance(v, dict):
                items.extend(self._flatten_dict(v, new_key, sep=sep).items())
            else:
                items.append((new_key, v))
        return dict(items)

    def get(self, key: str, default: Any = None) -> Any:
        """获取配置值"""
        config_item = self.config_data.get(key)
        if config_item:
            return config_item.value
        return default

    def set(self, key: str, value: Any, source: ConfigSource = ConfigSource.OVERRIDE):
        """设置配置值"""
        if key in self.config_data:
            self.config_data[key].value = value
            self.config_data[key].source = source
        else:
            self.config_data[key] = ConfigItem(key=key, value=value, source=source)

    def get_section(self, section: str) -> Dict[str, Any]:
        """获取配置段"""
        prefix = f"{section}."
        return {key[len(prefix):]: item.value
                for key, item in self.config_data.items() if key.startswith(prefix)}

    def validate_config(self):
        """验证配置"""
        errors = []

        for key in ("search.node_budget", "search.min_apart", "search.samples",
                    "search.seed", "search.jobs", "output.indent"):
            value = self.get(key)
            if not isinstance(value, int) or isinstance(value, bool):
                errors.append(f"{key} 必须是整数, 当前为 {value!r}")

        if isinstance(self.get("search.min_apart"), int) and self.get("search.min_apart") < 0:
            errors.append("search.min_apart 不能为负数")
        if isinstance(self.get("search.jobs"), int) and self.get("search.jobs") < 1:
            errors.append("search.jobs 至少为 1")
        if self.get("output.format") not in ("json", "yaml"):
            errors.append(f"不支持的输出格式: {self.get('output.format')}")

        if errors:
            raise ConfigurationError("配置验证失败:\n" + "\n".join(errors),
                                     context={"errors": errors})

    def get_config_info(self) -> Dict[str, Any]:
        """获取配置信息"""
        return {
            "total_configs": len(self.config_data),
            "sources": {
                source.value: sum(1 for item in self.config_data.values() if item.source == source)
                for source in ConfigSource
            },
            "config_file": self.config_file,
            "file_exists": Path(self.config_file).exists()
        }


# 全局配置实例
_system_config: Optional[SystemConfig] = None


def get_config() -> SystemConfig:
    """获取全局配置实例"""
    global _system_config
    if _system_config is None:
        _system_config = SystemConfig()
    return _system_config


def initialize_config(config_file: Optional[str] = None) -> SystemConfig:
    """初始化配置系统的便捷函数"""
    global _system_config
    _system_config = SystemConfig(config_file)
    return _system_config


def get_config_value(key: str, default: Any = None) -> Any:
    """获取配置值的便捷函数"""
    return get_config().get(key, default)


def set_config_value(key: str, value: Any):
    """设置配置值的便捷函数"""
    get_config().set(key, value)
