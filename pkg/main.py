#!/usr/bin/env python3
"""
边 Erdős–Pósa 反例工具 - 主程序
构造 Heinlein 墙、wall' 与反例图 Z, 并对各项有限规模断言做精确检查

退出码:
  0 检查的性质成立
  1 性质不成立 (报告中附见证)
  2 用法或输入错误
  3 触及节点预算
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

# 添加模块路径
sys.path.append(str(Path(__file__).parent))

from modules.core.config import get_config_value, initialize_config, set_config_value
from modules.core.exceptions import (
    InvalidParameter, MalformedGraphFile, NoSuchPair, ResourceLimitExceeded, handle_exception,
)
from modules.core.output import create_output
from modules.gadgets import (
    CounterexampleInstance, TerminalGadget, WallDesignation, build_z, crossed_paths_gadget,
    designate_whole, elementary_grid, gadget_from_graph, heinlein_wall, make_wall, multiply_edge,
)
from modules.graph_core import (
    Graph, Role, is_planar, read_graph, render_graph, suppress_degree_two, validate_embedding,
)
from modules.models import CheckResult, ClaimReport, InstanceDescriptor, RunReport
from modules.utils import file_sha256, get_logger, load_json, save_json, setup_logging
from modules.verify.budget import SearchBudget
from modules.verify.claims import SweepMode, all_subdivisions_contain_linkage, check_no_hitting_set
from modules.verify.linkage import (
    find_linkage, find_linkage_hitting_set, find_two_edge_disjoint_linkages,
)
from modules.verify.menger import compute_b_m, find_fan, separate
from modules.verify.subdivision import find_subdivision
from modules.verify.widths import (
    pathwidth_exact, treewidth_exact, validate_path_decomposition, validate_tree_decomposition,
)
from modules.wall_geom import Wall, apartness_witness, bricks_apart, cols_met, rows_met, select_far_edge_pair

logger = get_logger("main")

GRAPH_FORMATS = ("graph6", "dot", "json")

# ===================================
# 参数解析
# ===================================


def _pair(text: str) -> Tuple[int, int]:
    try:
        u, v = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"需要 u,v 形式的整数对: {text!r}")
    return u, v


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"需要逗号分隔的整数: {text!r}")


def _terminals(text: str) -> Tuple[int, int, int, int]:
    values = _int_list(text)
    if len(values) != 4:
        raise argparse.ArgumentTypeError(f"需要四个端点 a,b,c,d: {text!r}")
    return tuple(values)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="边 Erdős–Pósa 反例构造与验证工具",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例用法:
  python main.py gen heinlein --size 2 --format json
  python main.py gen wall --rows 2 --cols 2 --prime --out w22.json
  python main.py gen z --pattern w22.json -r 1 --min-apart 0 --out z.json
  python main.py check two-linkages --heinlein 2
  python main.py check robustness --heinlein 1 --budget 1 --json report.json
  python main.py check no-hitting-set --instance z.instance.json --budget 1 --mode exhaustive
  python main.py check lemma5-survey --instance z.instance.json
  python main.py check apart --wall 4,4 --prime --u 7 --v 12 --details
        """
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--verbose', '-v', action='store_true', help='详细日志')
    common.add_argument('--config', type=str, help='配置文件路径')

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument('--format', choices=GRAPH_FORMATS, default="json", help='图文件格式')
    output.add_argument('--out', type=str, help='输出文件 (缺省写到标准输出)')

    target = argparse.ArgumentParser(add_help=False)
    source = target.add_mutually_exclusive_group(required=True)
    source.add_argument('--heinlein', type=int, metavar='R', help='大小为 R 的 Heinlein 墙')
    source.add_argument('--wall', type=_pair, metavar='M,N', help='M×N 的墙')
    source.add_argument('--instance', type=str, help='gen z 写出的实例边车文件')
    source.add_argument('--input', type=str, help='图文件 (.json / .g6)')
    target.add_argument('--prime', action='store_true', help="--wall 使用 wall'")
    target.add_argument('--terminals', type=_terminals, metavar='A,B,C,D', help='--input 图的端点')
    target.add_argument('--json', type=str, metavar='PATH', help='报告写入文件')
    target.add_argument('--budget-nodes', type=int, metavar='N', help='每次搜索的节点预算')
    target.add_argument('--deterministic', action='store_true', help='报告中不写耗时')
    target.add_argument('--progress', action='store_true', help='显示进度条')

    commands = parser.add_subparsers(dest="command", required=True)

    # gen
    gen = commands.add_parser("gen", help="生成构件")
    kinds = gen.add_subparsers(dest="kind", required=True)
    p = kinds.add_parser("heinlein", parents=[common, output], help="Heinlein 墙")
    p.add_argument('--size', type=int, required=True)
    p = kinds.add_parser("wall", parents=[common, output], help="基本墙或 wall'")
    p.add_argument('--rows', type=int, required=True)
    p.add_argument('--cols', type=int, required=True)
    p.add_argument('--prime', action='store_true')
    p = kinds.add_parser("grid", parents=[common, output], help="基本网格")
    p.add_argument('--rows', type=int, required=True)
    p.add_argument('--cols', type=int, required=True)
    p = kinds.add_parser("multiply", parents=[common, output], help="边倍增")
    p.add_argument('--input', type=str, required=True)
    p.add_argument('--edge', type=_pair, required=True)
    p.add_argument('-k', type=int, required=True)
    p = kinds.add_parser("suppress", parents=[common, output], help="收缩度为2的顶点")
    p.add_argument('--input', type=str, required=True)
    p.add_argument('--protect', type=_int_list, default=[])
    p = kinds.add_parser("z", parents=[common, output], help="反例图 Z 及实例边车文件")
    p.add_argument('--pattern', type=str, required=True, help='模式图 H')
    p.add_argument('--designation', type=str, help="H 中 wall' 的指定文件")
    p.add_argument('--e1', type=_pair)
    p.add_argument('--e2', type=_pair)
    p.add_argument('-r', type=int, required=True)
    p.add_argument('--min-apart', type=int)
    p.add_argument('--gadget', choices=("heinlein", "crossed"), default="heinlein")

    # convert
    p = commands.add_parser("convert", parents=[common, output], help="图文件格式转换")
    p.add_argument('--input', type=str, required=True)

    # check
    check = commands.add_parser("check", help="检查断言")
    checks = check.add_subparsers(dest="check", required=True)
    for name, (_, help_text) in CHECKS.items():
        aliases = [alias for alias, canonical in CHECK_ALIASES.items() if canonical == name]
        p = checks.add_parser(name, aliases=aliases, parents=[common, target], help=help_text)
        for flag, options in CHECK_OPTIONS.get(name, ()):
            p.add_argument(*flag, **options)
    return parser

# ===================================
# 实例
# ===================================


@dataclass
class Target:
    """检查对象: 图以及可能附带的端点、墙几何和反例实例"""
    graph: Graph
    descriptor: InstanceDescriptor
    gadget: Optional[TerminalGadget] = None
    wall: Optional[Wall] = None
    instance: Optional[CounterexampleInstance] = None

    def require_gadget(self) -> TerminalGadget:
        if self.gadget is None:
            raise InvalidParameter("该检查需要带端点的构件 (--heinlein, --instance 或 --terminals)")
        return self.gadget

    def require_wall(self) -> Wall:
        if self.wall is None:
            raise InvalidParameter("该检查需要墙几何 (--wall 或 --instance)")
        return self.wall

    def require_instance(self) -> CounterexampleInstance:
        if self.instance is None:
            raise InvalidParameter("该检查需要实例边车文件 (--instance)")
        return self.instance


def _file_descriptor(path: str) -> InstanceDescriptor:
    return InstanceDescriptor(input_file=path, sha256=file_sha256(path))


def load_instance(path: str) -> CounterexampleInstance:
    data = load_json(path)
    if data is None:
        raise MalformedGraphFile(f"实例文件不存在: {path}")
    return CounterexampleInstance.from_dict(data)


def load_target(args) -> Target:
    if args.heinlein is not None:
        w = heinlein_wall(args.heinlein)
        return Target(w.graph, InstanceDescriptor(generator="heinlein", parameters={"r": args.heinlein}), gadget=w)
    if args.wall is not None:
        m, n = args.wall
        kind = "prime" if args.prime else "elementary"
        w = make_wall(kind, m, n)
        return Target(w.graph, InstanceDescriptor(generator="wall", parameters={"kind": kind, "m": m, "n": n}),
                      wall=w)
    if args.instance is not None:
        inst = load_instance(args.instance)
        return Target(inst.z, _file_descriptor(args.instance), gadget=inst.gadget,
                      wall=inst.designation.wall, instance=inst)
    g = read_graph(args.input)
    gadget = None
    if args.terminals is not None:
        gadget = TerminalGadget(g, args.terminals)
    elif g.find_role(Role.TERMINAL_A) is not None:
        gadget = gadget_from_graph(g)
    return Target(g, _file_descriptor(args.input), gadget=gadget)

# ===================================
# 检查
# ===================================


@dataclass
class Outcome:
    result: CheckResult
    witness: Any = None
    nodes: int = 0
    mode: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict)


def _verdict(holds: bool) -> CheckResult:
    return CheckResult.PASS if holds else CheckResult.FAIL


def check_linkage(args, target: Target) -> Outcome:
    w = target.require_gadget()
    budget = SearchBudget(search="find_linkage")
    link = find_linkage(w.graph, *w.terminals, budget=budget)
    return Outcome(_verdict(link is not None), link.to_dict() if link else None, budget.nodes)


def check_two_linkages(args, target: Target) -> Outcome:
    w = target.require_gadget()
    budget = SearchBudget(search="two_linkages")
    pair = find_two_edge_disjoint_linkages(w.graph, *w.terminals, budget=budget)
    witness = [pair[0].to_dict(), pair[1].to_dict()] if pair else None
    return Outcome(_verdict(pair is None), witness, budget.nodes)


def check_robustness(args, target: Target) -> Outcome:
    w = target.require_gadget()
    budget = SearchBudget(search="hitting_robustness")
    hitting = find_linkage_hitting_set(w, args.budget, budget)
    witness = [list(e) for e in hitting] if hitting is not None else None
    return Outcome(_verdict(hitting is None), witness, budget.nodes, details={"budget": args.budget})


def check_no_hitting(args, target: Target) -> Outcome:
    inst = target.require_instance()
    samples = args.samples if args.samples is not None else int(get_config_value("search.samples", 20))
    seed = args.seed if args.seed is not None else int(get_config_value("search.seed", 0))
    jobs = args.jobs if args.jobs is not None else int(get_config_value("search.jobs", 1))
    report = check_no_hitting_set(inst, args.budget, SweepMode(args.mode), seed=seed, samples=samples,
                                  jobs=jobs, progress=args.progress)
    details = {"budget": args.budget, "checked": report.checked,
               "failing_sets": [[list(e) for e in u] for u in report.failing_sets], **report.details}
    return Outcome(report.result, report.witness(), report.nodes, args.mode, details)


def check_pathwidth(args, target: Target) -> Outcome:
    budget = SearchBudget(search="pathwidth")
    pd = pathwidth_exact(target.graph, budget)
    validate_path_decomposition(target.graph, pd)
    holds = args.at_most is None or pd.width <= args.at_most
    return Outcome(_verdict(holds), pd.to_dict(), budget.nodes,
                   details={"width": pd.width, "at_most": args.at_most, "certificate_valid": True})


def check_treewidth(args, target: Target) -> Outcome:
    budget = SearchBudget(search="treewidth")
    td = treewidth_exact(target.graph, budget)
    validate_tree_decomposition(target.graph, td)
    holds = args.at_most is None or td.width <= args.at_most
    return Outcome(_verdict(holds), td.to_dict(), budget.nodes,
                   details={"width": td.width, "at_most": args.at_most, "certificate_valid": True})


def check_apart(args, target: Target) -> Outcome:
    w = target.require_wall()
    res = apartness_witness(w, args.u, args.v)
    holds = args.d is None or res.apartness >= args.d
    details = {"apartness": res.apartness, "d": args.d}
    if args.details and res.witness is not None:
        # 见证路径经过的行数与列数
        details["rows_met"] = rows_met(w, res.witness)
        details["cols_met"] = cols_met(w, res.witness)
    return Outcome(_verdict(holds), res.to_dict(), details=details)


def check_bricks_apart(args, target: Target) -> Outcome:
    holds = bricks_apart(target.require_wall(), args.b1, args.b2, args.d)
    return Outcome(_verdict(holds), details={"b1": args.b1, "b2": args.b2, "d": args.d})


def check_far_pair(args, target: Target) -> Outcome:
    try:
        e1, e2 = select_far_edge_pair(target.require_wall(), args.d)
    except NoSuchPair:
        return Outcome(CheckResult.FAIL, details={"d": args.d})
    return Outcome(CheckResult.PASS, {"e1": list(e1), "e2": list(e2)}, details={"d": args.d})


def check_subdivision(args, target: Target) -> Outcome:
    h = read_graph(args.pattern)
    budget = SearchBudget(search="find_subdivision")
    emb = find_subdivision(h, target.graph, budget)
    if emb is not None:
        validate_embedding(h, target.graph, emb)
    return Outcome(_verdict(emb is not None), emb.to_dict() if emb else None, budget.nodes)


def check_linkage_survey(args, target: Target) -> Outcome:
    inst = target.require_instance()
    budget = SearchBudget(search="linkage_survey")
    report = all_subdivisions_contain_linkage(inst, budget, args.max_embeddings, args.progress)
    holds = not (args.strict and report.violating)
    return Outcome(_verdict(holds), report.first_violation, report.nodes, details=report.to_dict())


def check_planar(args, target: Target) -> Outcome:
    return Outcome(_verdict(is_planar(target.graph)))


def check_separator(args, target: Target) -> Outcome:
    res = separate(target.graph, args.source, args.targets, args.bound, args.protect_targets)
    return Outcome(_verdict(res.separator is not None), res.to_dict())


def check_fan(args, target: Target) -> Outcome:
    fan = find_fan(target.graph, args.center, args.targets, args.size)
    return Outcome(_verdict(fan is not None), fan.to_dict() if fan else None)


def check_bm(args, target: Target) -> Outcome:
    if args.branch_set:
        g, branch = target.graph, args.branch_set
    elif target.instance is not None:
        g, branch = target.instance.pattern, target.instance.designation.proper_branch_vertices()
    else:
        w = target.require_wall()
        g, branch = w.graph, w.proper_branch_vertices()
    result = compute_b_m(g, branch)
    missing = sorted(set(branch) - result)
    return Outcome(_verdict(not missing), sorted(result),
                   details={"branch_set": sorted(branch), "missing": missing})


CHECKS: Dict[str, Tuple[Callable[[Any, Target], Outcome], str]] = {
    "linkage": (check_linkage, "存在 (a*–b*, c*–d*) 连接"),
    "two-linkages": (check_two_linkages, "不存在两个边不交的连接"),
    "robustness": (check_robustness, "删去至多 k 条边后连接仍存在"),
    "no-hitting-set": (check_no_hitting, "删去至多 k 条边后 Z 仍含 H 的子划分"),
    "pathwidth": (check_pathwidth, "精确路径宽 (可断言上界)"),
    "treewidth": (check_treewidth, "精确树宽 (可断言上界)"),
    "apart": (check_apart, "两个墙顶点的 apartness"),
    "subdivision": (check_subdivision, "宿主图含模式图的子划分"),
    "lemma5-survey": (check_linkage_survey, "统计各嵌入在构件内是否含连接"),
    "planar": (check_planar, "平面性"),
    "separator": (check_separator, "有界顶点分隔集"),
    "fan": (check_fan, "扇 (缺省为 3-扇)"),
    "bm": (check_bm, "B_M 包含全部度3分支顶点"),
    "bricks-apart": (check_bricks_apart, "两个砖块 d-apart"),
    "far-pair": (check_far_pair, "存在 d-apart 的边对"),
}

# 子命令别名 -> 规范名
CHECK_ALIASES: Dict[str, str] = {"linkage-survey": "lemma5-survey"}

CHECK_OPTIONS: Dict[str, List[Tuple[Tuple[str, ...], Dict[str, Any]]]] = {
    "robustness": [(("--budget",), dict(type=int, required=True, help="删边数上限 k"))],
    "no-hitting-set": [
        (("--budget",), dict(type=int, required=True)),
        (("--mode",), dict(choices=[m.value for m in SweepMode], default="exhaustive")),
        (("--seed",), dict(type=int)),
        (("--samples",), dict(type=int)),
        (("--jobs",), dict(type=int)),
    ],
    "pathwidth": [(("--at-most",), dict(type=int))],
    "treewidth": [(("--at-most",), dict(type=int))],
    "apart": [
        (("--u",), dict(type=int, required=True)),
        (("--v",), dict(type=int, required=True)),
        (("--d",), dict(type=int)),
        (("--details",), dict(action="store_true", help="附带见证路径经过的行数与列数")),
    ],
    "subdivision": [(("--pattern",), dict(type=str, required=True))],
    "lemma5-survey": [
        (("--max-embeddings",), dict(type=int)),
        (("--strict",), dict(action="store_true", help="存在不含连接的嵌入时判为不成立")),
    ],
    "separator": [
        (("--source",), dict(type=int, required=True)),
        (("--targets",), dict(type=_int_list, required=True)),
        (("--bound",), dict(type=int, required=True)),
        (("--protect-targets",), dict(action="store_true")),
    ],
    "fan": [
        (("--center",), dict(type=int, required=True)),
        (("--targets",), dict(type=_int_list, required=True)),
        (("--size",), dict(type=int, default=3)),
    ],
    "bm": [(("--branch-set",), dict(type=_int_list))],
    "bricks-apart": [
        (("--b1",), dict(type=int, required=True)),
        (("--b2",), dict(type=int, required=True)),
        (("--d",), dict(type=int, required=True)),
    ],
    "far-pair": [(("--d",), dict(type=int, required=True))],
}


def run_check(args, argv: List[str]) -> int:
    if args.budget_nodes is not None:
        set_config_value("search.node_budget", args.budget_nodes)
    if args.deterministic:
        set_config_value("output.deterministic", True)
    if not args.progress:
        args.progress = bool(get_config_value("search.progress", False))

    started = time.perf_counter()
    target = load_target(args)
    args.check = CHECK_ALIASES.get(args.check, args.check)
    handler, _ = CHECKS[args.check]
    logger.info(f"🔍 检查 {args.check}")
    try:
        outcome = handler(args, target)
    except ResourceLimitExceeded as e:
        logger.warning(f"⚠️ {e.message}")
        outcome = Outcome(CheckResult.RESOURCE_LIMIT, nodes=e.nodes, details={"budget": e.budget})
    elapsed = (time.perf_counter() - started) * 1000

    claim = ClaimReport(
        claim=args.check,
        instance=target.descriptor,
        mode=outcome.mode,
        result=outcome.result,
        witness=outcome.witness,
        nodes_explored=outcome.nodes,
        wall_clock_ms=elapsed,
        details=outcome.details,
    )
    report = RunReport(
        command=list(argv),
        tool_version=str(get_config_value("system.version", "1.0.0")),
        instances=[target.descriptor],
        checks=[claim],
        wall_clock_ms=elapsed,
    )
    output = create_output(report)
    sys.stdout.write(output.render())
    if args.json:
        output.save_to_file(args.json)
    logger.info(f"✓ {args.check}: {outcome.result.value}")
    return report.exit_code()

# ===================================
# 生成
# ===================================


def _emit(g: Graph, args) -> None:
    text = render_graph(g, args.format)
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"图已写入: {path}")
    else:
        sys.stdout.write(text)


def _sidecar(out: str, suffix: str) -> Path:
    return Path(out).with_suffix(suffix)


def load_designation(pattern: str, explicit: Optional[str]) -> WallDesignation:
    path = Path(explicit) if explicit else _sidecar(pattern, ".designation.json")
    data = load_json(path)
    if data is None:
        raise InvalidParameter(f"找不到墙指定文件: {path} (用 --designation 给出)")
    return WallDesignation.from_dict(data)


def gen_z(args) -> Graph:
    h = read_graph(args.pattern)
    designation = load_designation(args.pattern, args.designation)
    min_apart = args.min_apart if args.min_apart is not None else int(get_config_value("search.min_apart", 70))
    if args.e1 is None or args.e2 is None:
        (a, b), (c, d) = select_far_edge_pair(designation.wall, min_apart)
        vmap = designation.vertex_map
        e1, e2 = (vmap[a], vmap[b]), (vmap[c], vmap[d])
    else:
        e1, e2 = args.e1, args.e2
    gadget = crossed_paths_gadget() if args.gadget == "crossed" else None
    inst = build_z(h, designation, e1, e2, args.r, min_apart, gadget=gadget)
    if args.out:
        sidecar = _sidecar(args.out, ".instance.json")
        save_json(inst.to_dict(), sidecar)
        logger.info(f"实例边车文件: {sidecar}")
    else:
        logger.warning("未给出 --out, 不写实例边车文件")
    return inst.z


def run_gen(args) -> int:
    if args.kind == "heinlein":
        g = heinlein_wall(args.size).graph
    elif args.kind == "wall":
        w = make_wall("prime" if args.prime else "elementary", args.rows, args.cols)
        g = w.graph
        if args.out:
            data = designate_whole(w).to_dict()
            data["geometry"] = w.to_dict()
            save_json(data, _sidecar(args.out, ".designation.json"))
    elif args.kind == "grid":
        g = elementary_grid(args.rows, args.cols)
    elif args.kind == "multiply":
        g = multiply_edge(read_graph(args.input), args.edge, args.k)
    elif args.kind == "suppress":
        g = suppress_degree_two(read_graph(args.input), args.protect)
    else:
        g = gen_z(args)
    _emit(g, args)
    return 0

# ===================================
# 入口
# ===================================


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        config = initialize_config(args.config)
        setup_logging(args.verbose, config)
        if args.command == "gen":
            return run_gen(args)
        if args.command == "convert":
            _emit(read_graph(args.input), args)
            return 0
        return run_check(args, argv)
    except Exception as e:
        result = handle_exception(e)
        logger.error(f"❌ {result['error']['message']}")
        sys.stderr.write(json.dumps(result["error"], ensure_ascii=False) + "\n")
        return result["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
