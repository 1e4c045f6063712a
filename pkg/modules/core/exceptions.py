"""
统一异常处理框架
为图构造、墙几何和验证搜索提供分层的异常体系

功能特点：
1. 分层异常体系（图 / 构件 / 几何 / 验证 / 配置）
2. 错误码和错误消息
3. 异常链追踪
4. 异常到命令行退出码的统一映射
"""

from collections import deque
from typing import Any, Deque, Dict, Optional
from enum import Enum
import traceback
import json
from datetime import datetime


class ErrorLevel(Enum):
    """错误级别"""
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class ErrorCode(Enum):
    """错误码"""
    # 系统级错误 (1000-1999)
    CONFIG_LOAD_FAILED = 1002
    CONFIG_INVALID = 1003

    # 图结构错误 (2000-2999)
    LOOP_EDGE = 2001
    UNKNOWN_EDGE = 2002
    UNKNOWN_VERTEX = 2003
    DEGENERATE_CONTRACTION = 2004
    MALFORMED_GRAPH6 = 2005
    MALFORMED_GRAPH_FILE = 2006

    # 构件错误 (3000-3999)
    INVALID_SIZE = 3001
    DEGENERATE_WALL = 3002
    NOT_SUBCUBIC = 3003
    EDGES_NOT_FAR_APART = 3004
    BAD_INCIDENCE = 3005
    BAD_DESIGNATION = 3006

    # 墙几何错误 (4000-4999)
    NOT_A_PATH = 4001
    SAME_BRICK = 4002
    UNKNOWN_BRICK = 4003
    NO_SUCH_PAIR = 4004

    # 验证错误 (5000-5999)
    RESOURCE_LIMIT = 5001
    INVALID_PARAMETER = 5002
    INVALID_EMBEDDING = 5003
    INVALID_DECOMPOSITION = 5004

    # 未知错误 (9000-9999)
    UNKNOWN_ERROR = 9000


# 退出码约定：0 成立，1 不成立（附反例），2 用法或输入错误，3 资源上限
EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_USAGE = 2
EXIT_RESOURCE_LIMIT = 3

# 处理器保留的最近错误条数
ERROR_LOG_LIMIT = 100


class ToolkitException(Exception):
    """工具包基础异常类"""

    def __init__(self,
                 message: str,
                 error_code: ErrorCode = ErrorCode.UNKNOWN_ERROR,
                 level: ErrorLevel = ErrorLevel.ERROR,
                 context: Optional[Dict[str, Any]] = None,
                 cause: Optional[Exception] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.level = level
        self.context = context or {}
        self.cause = cause
        self.timestamp = datetime.now()

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典格式"""
        return {
            "error_code": self.error_code.value,
            "error_name": self.error_code.name,
            "level": self.level.value,
            "message": self.message,
            "context": self.context,
            "cause": str(self.cause) if self.cause else None
        }

    def to_json(self) -> str:
        """转换为JSON格式"""
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, default=str)


class ConfigurationError(ToolkitException):
    """配置异常"""

    def __init__(self, message: str, error_code: ErrorCode = ErrorCode.CONFIG_INVALID, **kwargs):
        super().__init__(message, error_code, ErrorLevel.CRITICAL, **kwargs)


# ===================================
# 图结构异常
# ===================================

class GraphException(ToolkitException):
    """图结构异常"""

    def __init__(self, message: str, error_code: ErrorCode = ErrorCode.UNKNOWN_VERTEX, **kwargs):
        super().__init__(message, error_code, ErrorLevel.ERROR, **kwargs)


class LoopEdge(GraphException):
    def __init__(self, vertex: int):
        super().__init__(f"不允许自环边: {{{vertex},{vertex}}}", ErrorCode.LOOP_EDGE,
                         context={"vertex": vertex})


class UnknownEdge(GraphException):
    def __init__(self, edge):
        super().__init__(f"边不在图中: {tuple(edge)}", ErrorCode.UNKNOWN_EDGE,
                         context={"edge": list(edge)})


class UnknownVertex(GraphException):
    def __init__(self, vertex):
        super().__init__(f"顶点不在图中: {vertex}", ErrorCode.UNKNOWN_VERTEX,
                         context={"vertex": vertex})


class DegenerateContraction(GraphException):
    """收缩度为2的顶点会产生自环或重边"""

    def __init__(self, vertex: int, neighbours):
        super().__init__(f"收缩顶点 {vertex} 会产生自环或重边 (邻居 {sorted(neighbours)})",
                         ErrorCode.DEGENERATE_CONTRACTION,
                         context={"vertex": vertex, "neighbours": sorted(neighbours)})


class MalformedGraph6(GraphException):
    def __init__(self, message: str, cause: Optional[Exception] = None):
        super().__init__(f"graph6 解码失败: {message}", ErrorCode.MALFORMED_GRAPH6, cause=cause)


class MalformedGraphFile(GraphException):
    def __init__(self, message: str, cause: Optional[Exception] = None):
        super().__init__(f"图文件格式错误: {message}", ErrorCode.MALFORMED_GRAPH_FILE, cause=cause)


# ===================================
# 构件异常
# ===================================

class GadgetException(ToolkitException):
    """构件生成异常"""

    def __init__(self, message: str, error_code: ErrorCode = ErrorCode.INVALID_SIZE, **kwargs):
        super().__init__(message, error_code, ErrorLevel.ERROR, **kwargs)


class InvalidSize(GadgetException):
    def __init__(self, message: str, **kwargs):
        super().__init__(message, ErrorCode.INVALID_SIZE, **kwargs)


class Degenerate(GadgetException):
    def __init__(self, message: str, **kwargs):
        super().__init__(message, ErrorCode.DEGENERATE_WALL, **kwargs)


class NotSubcubic(GadgetException):
    def __init__(self, vertex: int, degree: int):
        super().__init__(f"模式图不是次三正则的: 顶点 {vertex} 的度为 {degree}",
                         ErrorCode.NOT_SUBCUBIC, context={"vertex": vertex, "degree": degree})


class EdgesNotFarApart(GadgetException):
    def __init__(self, pair, apartness: int, required: int):
        super().__init__(f"端点对 {tuple(pair)} 仅 {apartness}-apart, 要求 {required}",
                         ErrorCode.EDGES_NOT_FAR_APART,
                         context={"pair": list(pair), "apartness": apartness, "required": required})


class BadIncidence(GadgetException):
    def __init__(self, message: str, **kwargs):
        super().__init__(message, ErrorCode.BAD_INCIDENCE, **kwargs)


class BadDesignation(GadgetException):
    def __init__(self, message: str, **kwargs):
        super().__init__(message, ErrorCode.BAD_DESIGNATION, **kwargs)


# ===================================
# 墙几何异常
# ===================================

class GeometryException(ToolkitException):
    """墙几何查询异常"""

    def __init__(self, message: str, error_code: ErrorCode = ErrorCode.NOT_A_PATH, **kwargs):
        super().__init__(message, error_code, ErrorLevel.WARNING, **kwargs)


class NotAPath(GeometryException):
    def __init__(self, path):
        super().__init__(f"顶点序列不是墙中的路径: {list(path)}", ErrorCode.NOT_A_PATH,
                         context={"path": list(path)})


class SameBrick(GeometryException):
    def __init__(self, brick: int):
        super().__init__(f"两个砖块相同: {brick}", ErrorCode.SAME_BRICK, context={"brick": brick})


class UnknownBrick(GeometryException):
    def __init__(self, brick: int):
        super().__init__(f"砖块编号不存在: {brick}", ErrorCode.UNKNOWN_BRICK, context={"brick": brick})


class NoSuchPair(GeometryException):
    def __init__(self, d: int):
        super().__init__(f"墙太小, 不存在 {d}-apart 的边对", ErrorCode.NO_SUCH_PAIR, context={"d": d})


# ===================================
# 验证异常
# ===================================

class VerificationException(ToolkitException):
    """验证搜索异常"""

    def __init__(self, message: str, error_code: ErrorCode = ErrorCode.INVALID_PARAMETER, **kwargs):
        super().__init__(message, error_code, ErrorLevel.ERROR, **kwargs)


class ResourceLimitExceeded(VerificationException):
    """搜索节点预算耗尽; 这不是否定结论"""

    def __init__(self, nodes: int, budget: int, search: str = "search"):
        super().__init__(f"{search} 超出节点预算 ({nodes}/{budget})", ErrorCode.RESOURCE_LIMIT,
                         context={"nodes": nodes, "budget": budget, "search": search})
        self.nodes = nodes
        self.budget = budget


class InvalidParameter(VerificationException):
    def __init__(self, message: str, **kwargs):
        super().__init__(message, ErrorCode.INVALID_PARAMETER, **kwargs)


class InvalidEmbedding(VerificationException):
    def __init__(self, message: str, **kwargs):
        super().__init__(message, ErrorCode.INVALID_EMBEDDING, **kwargs)


class InvalidDecomposition(VerificationException):
    def __init__(self, message: str, **kwargs):
        super().__init__(message, ErrorCode.INVALID_DECOMPOSITION, **kwargs)


class ExceptionHandler:
    """异常处理器: 把异常翻译为命令行可用的结果字典和退出码"""

    def __init__(self):
        self.handlers = {}
        self.error_logs: Deque[Dict[str, Any]] = deque(maxlen=ERROR_LOG_LIMIT)

        # 注册默认处理器（先注册的优先匹配）
        self._register_default_handlers()

    def _register_default_handlers(self):
        """注册默认异常处理器"""
        self.register_handler(ResourceLimitExceeded, self._handle_resource_limit)
        self.register_handler(ToolkitException, self._handle_toolkit_exception)

    def register_handler(self, exception_type: type, handler_func):
        """注册异常处理器"""
        self.handlers[exception_type] = handler_func

    def handle_exception(self, exception: Exception) -> Dict[str, Any]:
        """处理异常"""

        # 记录异常
        self._log_exception(exception)

        # 查找处理器
        for exc_type, handler_func in self.handlers.items():
            if isinstance(exception, exc_type):
                return handler_func(exception)
        return self._handle_unknown_exception(exception)

    def _log_exception(self, exception: Exception):
        """记录异常"""
        if isinstance(exception, ToolkitException):
            self.error_logs.append(exception.to_dict())
        else:
            self.error_logs.append({
                "error_code": ErrorCode.UNKNOWN_ERROR.value,
                "level": ErrorLevel.ERROR.value,
                "message": str(exception),
                "traceback": traceback.format_exc()
            })

    def _handle_resource_limit(self, exception: ResourceLimitExceeded) -> Dict[str, Any]:
        return {
            "success": False,
            "error": exception.to_dict(),
            "exit_code": EXIT_RESOURCE_LIMIT
        }

    def _handle_toolkit_exception(self, exception: ToolkitException) -> Dict[str, Any]:
        return {
            "success": False,
            "error": exception.to_dict(),
            "exit_code": EXIT_USAGE
        }

    def _handle_unknown_exception(self, exception: Exception) -> Dict[str, Any]:
        """处理未知异常"""
        return {
            "success": False,
            "error": {
                "error_code": ErrorCode.UNKNOWN_ERROR.value,
                "level": ErrorLevel.ERROR.value,
                "message": str(exception),
                "traceback": traceback.format_exc()
            },
            "exit_code": EXIT_USAGE
        }


# 全局异常处理器
_exception_handler = ExceptionHandler()


def handle_exception(exception: Exception) -> Dict[str, Any]:
    """处理异常的便捷函数"""
    return _exception_handler.handle_exception(exception)
