"""
搜索节点预算
每次精确搜索调用持有一个独立的 SearchBudget, 耗尽时抛出 ResourceLimitExceeded
"""

from typing import Optional

from modules.core.config import get_config_value
from modules.core.exceptions import ResourceLimitExceeded


class SearchBudget:
    """节点计数器; limit <= 0 表示不限"""

    def __init__(self, limit: Optional[int] = None, search: str = "search"):
        if limit is None:
            limit = int(get_config_value("search.node_budget", 5_000_000))
        self.limit = limit
        self.search = search
        self.nodes = 0

    @property
    def unlimited(self) -> bool:
        return self.limit <= 0

    def tick(self, k: int = 1) -> None:
        self.nodes += k
        if self.limit > 0 and self.nodes > self.limit:
            raise ResourceLimitExceeded(self.nodes, self.limit, self.search)

    def __repr__(self) -> str:
        return f"SearchBudget({self.nodes}/{self.limit}, {self.search})"


def resolve_budget(budget: Optional[SearchBudget], search: str) -> SearchBudget:
    """调用方未给出预算时按配置新建一个"""
    return budget if budget is not None else SearchBudget(search=search)
