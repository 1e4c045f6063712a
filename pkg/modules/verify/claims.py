"""
引理级检查
  * check_no_hitting_set: 删去任意至多 budget 条边后 Z 仍含 H 的子划分
  * all_subdivisions_contain_linkage: 统计每个嵌入在构件内是否含连接 (观测工具)
  * heinlein_pathwidth_claim: Heinlein 墙的路径宽不超过给定界
"""

import random
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from multiprocessing import Pool
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from tqdm import tqdm

from modules.core.exceptions import InvalidParameter, ResourceLimitExceeded
from modules.gadgets import CounterexampleInstance, HeinleinWall, TerminalGadget, heinlein_wall
from modules.graph_core import Edge, Graph, delete_edges, norm_edge
from modules.models import CheckResult
from modules.utils import get_logger
from modules.verify.budget import SearchBudget
from modules.verify.linkage import find_linkage_hitting_set
from modules.verify.subdivision import iter_subdivisions
from modules.verify.traces import expand_embedding, gadget_traces, trace_host, trace_viable
from modules.verify.widths import PathDecomposition, pathwidth_exact, validate_path_decomposition

logger = get_logger(__name__)


class SweepMode(str, Enum):
    EXHAUSTIVE = "exhaustive"
    STRUCTURAL = "structural"
    SAMPLED = "sampled"


@dataclass
class HittingSetReport:
    """命中集检查的结果; failing_sets 中每个 U 使 Z-U 不含 H 的子划分"""
    mode: SweepMode
    budget: int
    result: CheckResult
    failing_sets: List[Tuple[Edge, ...]] = field(default_factory=list)
    checked: int = 0
    nodes: int = 0
    details: Dict[str, Any] = field(default_factory=dict)

    def witness(self) -> Optional[List[List[int]]]:
        if not self.failing_sets:
            return None
        return [list(e) for e in self.failing_sets[0]]


@dataclass
class LinkageSurveyReport:
    """嵌入在构件内含连接与否的计数

    conforming/violating 按 (外部规范嵌入, 构件内实现) 计类; total_* 已乘以孪生展开因子,
    即全部嵌入的个数。
    """
    conforming: int = 0
    violating: int = 0
    total_conforming: int = 0
    total_violating: int = 0
    nodes: int = 0
    first_violation: Optional[Dict[str, object]] = None
    truncated: bool = False
    trace_types: int = 0
    traces: int = 0

    @property
    def embeddings(self) -> int:
        return self.conforming + self.violating

    def expansion_factor(self) -> Optional[float]:
        if not self.embeddings:
            return None
        return (self.total_conforming + self.total_violating) / self.embeddings

    def to_dict(self) -> Dict[str, object]:
        return {
            "embeddings": self.embeddings,
            "conforming": self.conforming,
            "violating": self.violating,
            "total_conforming": self.total_conforming,
            "total_violating": self.total_violating,
            "expansion_factor": self.expansion_factor(),
            "truncated": self.truncated,
            "trace_types": self.trace_types,
            "traces": self.traces,
        }

# ===================================
# 边子集扫描
# ===================================


def edge_subsets(edges: Sequence[Edge], max_size: int) -> Iterator[Tuple[Edge, ...]]:
    """按大小、再按字典序枚举全部至多 max_size 条边的子集"""
    ordered = sorted(edges)
    for size in range(max_size + 1):
        yield from combinations(ordered, size)


def _survives(task: Tuple[Graph, Graph, Tuple[Edge, ...], int]) -> Tuple[str, int]:
    """子进程任务; 返回 ("yes" | "no" | "limit", 节点数)"""
    pattern, z, removed, limit = task
    budget = SearchBudget(limit, "no_hitting_set")
    try:
        for _ in iter_subdivisions(pattern, delete_edges(z, removed), budget):
            return "yes", budget.nodes
    except ResourceLimitExceeded:
        return "limit", budget.nodes
    return "no", budget.nodes


def sweep_edge_subsets(pattern: Graph, z: Graph, subsets: Sequence[Tuple[Edge, ...]],
                       node_limit: int, jobs: int = 1, progress: bool = False
                       ) -> List[Tuple[Tuple[Edge, ...], str, int]]:
    """对每个 U 判定 Z-U 是否含 H 的子划分; 结果顺序与 subsets 一致"""
    tasks = [(pattern, z, removed, node_limit) for removed in subsets]
    bar = dict(total=len(tasks), desc="Z-U 子划分", ncols=100, leave=False, disable=not progress)
    if jobs <= 1:
        outcomes = [_survives(t) for t in tqdm(tasks, **bar)]
    else:
        with Pool(jobs) as pool:
            outcomes = list(tqdm(pool.imap(_survives, tasks, chunksize=4), **bar))
    return [(removed, status, nodes) for removed, (status, nodes) in zip(subsets, outcomes)]

# ===================================
# 命中集检查
# ===================================


def _structural(inst: CounterexampleInstance, budget: int, node_limit: Optional[int]) -> HittingSetReport:
    """每束 2r 条长度为2的路径至少留下一条, 且构件删去 U 后仍含连接"""
    paths_per_bundle = 2 * inst.r
    surviving = paths_per_bundle - budget
    search = SearchBudget(node_limit, "hitting_robustness")
    hitting = find_linkage_hitting_set(inst.gadget, budget, search)
    report = HittingSetReport(SweepMode.STRUCTURAL, budget, CheckResult.PASS, nodes=search.nodes)
    report.details = {
        "bundles": len(inst.bundles),
        "paths_per_bundle": paths_per_bundle,
        "min_surviving_paths": surviving,
        "gadget_robust": hitting is None,
    }
    if hitting is not None:
        gmap = inst.gadget_map
        report.failing_sets.append(tuple(sorted(norm_edge(gmap[x], gmap[y]) for x, y in hitting)))
    if surviving < 1 or hitting is not None:
        report.result = CheckResult.FAIL
    return report


def check_no_hitting_set(inst: CounterexampleInstance, budget: int,
                         mode: SweepMode = SweepMode.EXHAUSTIVE, seed: int = 0, samples: int = 20,
                         node_limit: Optional[int] = None, jobs: int = 1,
                         progress: bool = False) -> HittingSetReport:
    """对至多 budget 条边的 U 检查 Z-U 是否仍含 H 的子划分

    Exhaustive 枚举全部 U; Structural 按构造论证检查; Sampled 用 random.Random(seed)
    抽取 samples 个大小恰为 budget 的 U。
    """
    mode = SweepMode(mode)
    if budget < 0 or budget > inst.r:
        raise InvalidParameter(f"budget 必须在 0..r={inst.r} 之间: {budget}")
    if node_limit is None:
        node_limit = SearchBudget().limit

    if mode == SweepMode.STRUCTURAL:
        return _structural(inst, budget, node_limit)

    edges = sorted(inst.z.edges)
    if mode == SweepMode.EXHAUSTIVE:
        subsets = list(edge_subsets(edges, budget))
    else:
        rng = random.Random(seed)
        subsets = [tuple(sorted(rng.sample(edges, budget))) for _ in range(samples)]

    logger.info(f"检查 {len(subsets)} 个边集 (模式 {mode.value}, |U| <= {budget})")
    outcomes = sweep_edge_subsets(inst.pattern, inst.z, subsets, node_limit, jobs, progress)
    report = HittingSetReport(mode, budget, CheckResult.PASS, checked=len(outcomes))
    report.nodes = sum(nodes for _, _, nodes in outcomes)
    report.failing_sets = [removed for removed, status, _ in outcomes if status == "no"]
    limited = [removed for removed, status, _ in outcomes if status == "limit"]
    if mode == SweepMode.SAMPLED:
        report.details["seed"] = seed
        report.details["samples"] = samples
    if limited:
        report.details["resource_limited"] = [[list(e) for e in u] for u in limited]
        report.result = CheckResult.RESOURCE_LIMIT
        logger.warning(f"{len(limited)} 个边集触及节点预算")
    elif report.failing_sets:
        report.result = CheckResult.FAIL
    return report

# ===================================
# 连接统计
# ===================================


def linkage_survey(pattern: Graph, z: Graph, gadget: TerminalGadget, gadget_map: Sequence[int],
                   budget: Optional[SearchBudget] = None, max_embeddings: Optional[int] = None,
                   progress: bool = False) -> LinkageSurveyReport:
    """穷尽统计 H 在 z 中的全部嵌入, 检查 Φ(H) 落在构件内的部分是否含 (a*–b*, c*–d*) 连接

    gadget_map 把构件顶点映到 z 的顶点; 构件只经由四个端点与其余部分相连。
    嵌入按构件迹分解 (见 modules.verify.traces): 先枚举构件内的全部实现并按迹类型分组,
    再对每个类型在外部宿主中枚举规范嵌入, 两者之积即这一类的嵌入。
    max_embeddings 限制计入的类数, 达到时截断。
    """
    budget = budget if budget is not None else SearchBudget(search="linkage_survey")
    classes = gadget_traces(gadget, pattern.degrees(), budget)
    report = LinkageSurveyReport(trace_types=len(classes), traces=sum(len(c.traces) for c in classes.values()))
    gadget_edges = frozenset(norm_edge(gadget_map[x], gadget_map[y]) for x, y in gadget.graph.edges)
    interior = [gadget_map[v] for v in gadget.interior()]
    terminals = [gadget_map[t] for t in gadget.terminals]

    for ttype, tc in tqdm(sorted(classes.items()), desc="迹类型", ncols=100, leave=False, disable=not progress):
        if report.truncated:
            break
        if not trace_viable(ttype, pattern):
            continue
        host = trace_host(z, gadget_edges, interior, terminals, ttype)
        found = iter_subdivisions(pattern, host.graph, budget, frozen=host.frozen,
                                  hosts=host.hosts, anchors=host.anchors, required=host.strand_vertices)
        class_linked = tc.linked
        for item in found:
            room = len(tc.traces)
            if max_embeddings is not None:
                room = min(room, max_embeddings - report.embeddings)
            chunk = tc.traces[:room]
            linked = class_linked if room == len(tc.traces) else sum(1 for t in chunk if t.linked)
            report.conforming += linked
            report.violating += room - linked
            report.total_conforming += item.multiplicity * linked
            report.total_violating += item.multiplicity * (room - linked)
            if report.first_violation is None and room > linked:
                trace = next(t for t in chunk if not t.linked)
                report.first_violation = expand_embedding(item.embedding, host, trace, gadget_map).to_dict()
            if max_embeddings is not None and report.embeddings >= max_embeddings:
                report.truncated = True
                break

    report.nodes = budget.nodes
    logger.info(f"迹类型 {report.trace_types} 个, 嵌入类 {report.embeddings} 个: "
                f"含连接 {report.conforming}, 不含 {report.violating}")
    return report


def all_subdivisions_contain_linkage(inst: CounterexampleInstance,
                                     budget: Optional[SearchBudget] = None,
                                     max_embeddings: Optional[int] = None,
                                     progress: bool = False) -> LinkageSurveyReport:
    """在反例实例上统计 H 的全部子划分嵌入在构件内是否含连接"""
    return linkage_survey(inst.pattern, inst.z, inst.gadget, inst.gadget_map, budget, max_embeddings, progress)

# ===================================
# 路径宽
# ===================================


def heinlein_pathwidth_claim(r: int, bound: int = 5,
                             budget: Optional[SearchBudget] = None) -> Tuple[bool, PathDecomposition]:
    """heinlein_wall(r) 的精确路径宽是否不超过 bound; 证书校验后返回"""
    w: HeinleinWall = heinlein_wall(r)
    pd = pathwidth_exact(w.graph, budget)
    validate_path_decomposition(w.graph, pd)
    return pd.width <= bound, pd
