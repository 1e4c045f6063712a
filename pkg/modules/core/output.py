"""
统一输出管理
把运行报告序列化为 JSON / YAML, 字段顺序固定, 可选去除耗时字段以保证字节稳定
"""

import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Union

import yaml

from modules.models import RunReport
from modules.utils import get_logger

logger = get_logger(__name__)


class OutputFormat(Enum):
    """输出格式类型"""
    JSON = "json"
    YAML = "yaml"


class UnifiedOutput:
    """运行报告输出器"""

    def __init__(self,
                 report: RunReport,
                 format_type: OutputFormat = OutputFormat.JSON,
                 indent: int = 2,
                 deterministic: bool = False):
        self.report = report
        self.format = format_type
        self.indent = indent
        self.deterministic = deterministic

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典格式（保持模型声明顺序）"""
        data = self.report.model_dump(mode="json")
        if self.deterministic:
            data["wall_clock_ms"] = None
            for check in data["checks"]:
                check["wall_clock_ms"] = None
        return data

    def to_json(self) -> str:
        """转换为JSON字符串"""
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=self.indent) + "\n"

    def to_yaml(self) -> str:
        """转换为YAML字符串"""
        return yaml.safe_dump(self.to_dict(), sort_keys=False, allow_unicode=True)

    def render(self) -> str:
        if self.format == OutputFormat.YAML:
            return self.to_yaml()
        return self.to_json()

    def save_to_file(self, path: Union[str, Path]) -> Path:
        """保存到文件"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render(), encoding="utf-8")
        logger.info(f"报告已写入: {path}")
        return path


def create_output(report: RunReport, config=None) -> UnifiedOutput:
    """按配置创建输出器的便捷函数"""
    if config is None:
        from modules.core.config import get_config
        config = get_config()
    return UnifiedOutput(
        report,
        OutputFormat(config.get("output.format", "json")),
        indent=int(config.get("output.indent", 2)),
        deterministic=bool(config.get("output.deterministic", False)),
    )
