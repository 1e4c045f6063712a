"""
数据模型定义
使用 Pydantic 定义图交换格式和验证报告的结构化数据模型
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

# ===================================
# 图交换格式（JSON）
# ===================================


class LabelDocument(BaseModel):
    """单个顶点的角色标签"""
    role: str = Field(description="角色名, 如 TerminalA / Bottleneck / PathVertex")
    index: List[int] = Field(default_factory=list, description="角色下标")


class GraphDocument(BaseModel):
    """命令行使用的标准图交换格式"""
    n: int = Field(ge=0, description="顶点数, 顶点编号为 0..n-1")
    edges: List[Tuple[int, int]] = Field(default_factory=list)
    labels: Dict[str, LabelDocument] = Field(default_factory=dict)

    @field_validator("labels")
    @classmethod
    def _keys_are_vertex_ids(cls, value: Dict[str, LabelDocument]) -> Dict[str, LabelDocument]:
        for key in value:
            if not key.lstrip("-").isdigit():
                raise ValueError(f"标签键必须是顶点编号: {key!r}")
        return value

# ===================================
# 验证报告
# ===================================


class CheckResult(str, Enum):
    """三态检查结果"""
    PASS = "pass"
    FAIL = "fail"
    RESOURCE_LIMIT = "resource_limit"


class InstanceDescriptor(BaseModel):
    """实例描述: 生成器及参数, 或输入文件及其哈希"""
    generator: Optional[str] = None
    parameters: Dict[str, Any] = Field(default_factory=dict)
    input_file: Optional[str] = None
    sha256: Optional[str] = None


class ClaimReport(BaseModel):
    """单项检查的报告"""
    claim: str
    instance: InstanceDescriptor
    mode: Optional[str] = None
    result: CheckResult
    witness: Optional[Any] = None
    nodes_explored: int = 0
    wall_clock_ms: Optional[float] = None
    details: Dict[str, Any] = Field(default_factory=dict)


class RunReport(BaseModel):
    """一次命令行运行的完整报告, 可由 command 字段重新执行"""
    command: List[str]
    tool_version: str
    instances: List[InstanceDescriptor] = Field(default_factory=list)
    checks: List[ClaimReport] = Field(default_factory=list)
    wall_clock_ms: Optional[float] = None

    def exit_code(self) -> int:
        """0 全部成立; 1 有检查不成立; 3 有检查触及资源上限"""
        results = {check.result for check in self.checks}
        if CheckResult.RESOURCE_LIMIT in results:
            return 3
        if CheckResult.FAIL in results:
            return 1
        return 0
