#!/usr/bin/env python3
"""
测试命令行入口: 生成、转换、检查报告与退出码
"""

import json
import sys
from pathlib import Path

import pytest

# 添加模块路径
sys.path.append(str(Path(__file__).parent))

from main import main
from modules.core.config import initialize_config
from modules.gadgets import wall_prime
from modules.wall_geom import cols_met, rows_met


@pytest.fixture(autouse=True)
def fresh_config():
    """命令行覆盖会写入全局配置, 每个用例之后重置"""
    yield
    initialize_config()


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_report(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def prism_files(tmp_path, capsys):
    """gen wall 与 gen z 写出的三棱柱及其 Z"""
    wall = tmp_path / "w22.json"
    assert main(["gen", "wall", "--rows", "2", "--cols", "2", "--prime", "--out", str(wall)]) == 0
    z = tmp_path / "z.json"
    assert main(["gen", "z", "--pattern", str(wall), "-r", "1", "--min-apart", "0", "--out", str(z)]) == 0
    capsys.readouterr()
    return wall, z


def test_gen_heinlein_to_stdout(capsys):
    code, out = run(capsys, "gen", "heinlein", "--size", "1")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 6
    assert len(data["edges"]) == 6


def test_gen_heinlein_dot(capsys):
    code, out = run(capsys, "gen", "heinlein", "--size", "2", "--format", "dot")
    assert code == 0
    assert out.startswith("graph G {")
    assert "a*" in out


def test_gen_wall_writes_designation(prism_files):
    """测试 gen wall --out 同时写出墙指定边车文件"""
    wall, _ = prism_files
    sidecar = wall.with_suffix(".designation.json")
    data = json.loads(sidecar.read_text(encoding="utf-8"))
    assert data["kind"] == "prime"
    assert data["size"] == [2, 2]
    assert data["vertex_map"] == list(range(6))


def test_gen_z_writes_instance(prism_files):
    """测试 gen z 自动选取远离边对并写出实例边车文件"""
    _, z = prism_files
    graph = json.loads(z.read_text(encoding="utf-8"))
    assert graph["n"] == 29
    instance = json.loads(z.with_suffix(".instance.json").read_text(encoding="utf-8"))
    assert instance["e1"] == [0, 2]
    assert instance["e2"] == [1, 5]
    assert instance["r"] == 1


def test_gen_z_without_designation(tmp_path, capsys):
    pattern = tmp_path / "h.json"
    assert main(["gen", "heinlein", "--size", "1", "--out", str(pattern)]) == 0
    code, _ = run(capsys, "gen", "z", "--pattern", str(pattern), "-r", "1")
    assert code == 2


def test_degenerate_wall_is_usage_error(capsys):
    code, out = run(capsys, "gen", "wall", "--rows", "1", "--cols", "1", "--prime")
    assert code == 2
    assert out == ""


def test_bad_arguments(capsys):
    assert main(["gen", "heinlein"]) == 2
    assert main(["check", "linkage"]) == 2
    assert main(["check", "separator", "--heinlein", "1", "--source", "0",
                 "--targets", "1,x", "--bound", "1"]) == 2


def test_convert_graph6(tmp_path, capsys):
    """测试格式转换: json -> graph6"""
    path = tmp_path / "k.json"
    path.write_text(json.dumps({"n": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}),
                    encoding="utf-8")
    code, out = run(capsys, "convert", "--input", str(path), "--format", "graph6")
    assert code == 0
    assert out.strip() == "C~"


def test_robustness_reports_witness(capsys):
    """测试 hw(1) 删一条边即可破坏连接: 退出码1并给出见证"""
    code, report = run_report(capsys, "check", "robustness", "--heinlein", "1", "--budget", "1")
    assert code == 1
    check = report["checks"][0]
    assert check["claim"] == "robustness"
    assert check["result"] == "fail"
    assert check["witness"] == [[2, 3]]
    assert report["instances"][0]["generator"] == "heinlein"


def test_robustness_holds(capsys):
    code, report = run_report(capsys, "check", "robustness", "--heinlein", "2", "--budget", "1")
    assert code == 0
    assert report["checks"][0]["result"] == "pass"


def test_two_linkages_and_json_copy(tmp_path, capsys):
    """测试 --json 写出与标准输出相同的报告"""
    out_file = tmp_path / "reports" / "two.json"
    code, out = run(capsys, "check", "two-linkages", "--heinlein", "2",
                    "--json", str(out_file), "--deterministic")
    assert code == 0
    assert out_file.read_text(encoding="utf-8") == out
    report = json.loads(out)
    assert report["wall_clock_ms"] is None
    assert report["checks"][0]["wall_clock_ms"] is None
    assert report["command"][:2] == ["check", "two-linkages"]


def test_node_budget_exhaustion(capsys):
    """测试节点预算耗尽时退出码为3"""
    code, report = run_report(capsys, "check", "two-linkages", "--heinlein", "2", "--budget-nodes", "1")
    assert code == 3
    assert report["checks"][0]["result"] == "resource_limit"
    assert report["checks"][0]["details"]["budget"] == 1


def test_pathwidth_check(capsys):
    code, report = run_report(capsys, "check", "pathwidth", "--heinlein", "1", "--at-most", "5")
    assert code == 0
    details = report["checks"][0]["details"]
    assert details["width"] == 2
    assert details["certificate_valid"]
    code, _ = run_report(capsys, "check", "pathwidth", "--heinlein", "1", "--at-most", "1")
    assert code == 1


def test_wall_geometry_checks(capsys):
    """测试墙几何相关检查"""
    code, report = run_report(capsys, "check", "far-pair", "--wall", "2,2", "--prime", "--d", "0")
    assert code == 0
    assert report["checks"][0]["witness"] == {"e1": [0, 2], "e2": [1, 5]}
    code, _ = run_report(capsys, "check", "far-pair", "--wall", "2,2", "--prime", "--d", "70")
    assert code == 1
    code, report = run_report(capsys, "check", "apart", "--wall", "2,2", "--prime",
                              "--u", "0", "--v", "1", "--d", "1")
    assert code == 1
    assert report["checks"][0]["details"]["apartness"] == 0
    code, _ = run_report(capsys, "check", "bm", "--wall", "4,4", "--prime")
    assert code == 0


def test_apart_details_reports_rows_and_columns(capsys):
    """测试 check apart --details 给出见证路径经过的行数与列数"""
    w = wall_prime(4, 4)
    u, v = [x for x in w.graph.vertices if x not in set(w.outercycle)][:2]
    code, report = run_report(capsys, "check", "apart", "--wall", "4,4", "--prime",
                              "--u", str(u), "--v", str(v), "--details")
    assert code == 0
    check = report["checks"][0]
    path = check["witness"]["witness_path_if_bounded"]
    details = check["details"]
    assert details["rows_met"] == rows_met(w, path)
    assert details["cols_met"] == cols_met(w, path)
    assert max(details["rows_met"], details["cols_met"]) <= details["apartness"] + 1
    code, report = run_report(capsys, "check", "apart", "--wall", "4,4", "--prime", "--u", str(u), "--v", str(v))
    assert "rows_met" not in report["checks"][0]["details"]


def test_check_needs_terminals(capsys):
    """测试墙没有端点时 linkage 检查报用法错误"""
    code, out = run(capsys, "check", "linkage", "--wall", "2,2")
    assert code == 2
    assert out == ""


def test_separator_on_input_graph(tmp_path, capsys):
    path = tmp_path / "p3.json"
    path.write_text(json.dumps({"n": 3, "edges": [[0, 1], [1, 2]]}), encoding="utf-8")
    code, report = run_report(capsys, "check", "separator", "--input", str(path),
                              "--source", "0", "--targets", "2", "--bound", "1")
    assert code == 0
    assert report["instances"][0]["input_file"] == str(path)
    assert len(report["instances"][0]["sha256"]) == 64


def test_checks_on_instance(prism_files, capsys):
    """测试实例边车文件上的检查"""
    _, z = prism_files
    instance = str(z.with_suffix(".instance.json"))
    code, report = run_report(capsys, "check", "no-hitting-set", "--instance", instance, "--budget", "0")
    assert code == 0
    assert report["checks"][0]["mode"] == "exhaustive"
    assert report["checks"][0]["details"]["checked"] == 1
    code, _ = run_report(capsys, "check", "no-hitting-set", "--instance", instance,
                         "--budget", "1", "--mode", "structural")
    assert code == 0
    code, _ = run_report(capsys, "check", "linkage", "--instance", instance)
    assert code == 0
    code, out = run(capsys, "check", "no-hitting-set", "--instance", instance, "--budget", "2")
    assert code == 2
    assert out == ""


def test_subcommand_tree_covers_operations():
    """测试子命令树: 每个检查和生成器都可从命令行到达"""
    import argparse
    from main import CHECK_ALIASES, CHECKS, build_parser

    def choices(parser, dest):
        for action in parser._actions:
            if isinstance(action, argparse._SubParsersAction) and action.dest == dest:
                return action.choices
        return {}

    top = choices(build_parser(), "command")
    assert set(top) == {"gen", "convert", "check"}
    assert set(choices(top["gen"], "kind")) == {"heinlein", "wall", "grid", "multiply", "suppress", "z"}
    assert set(choices(top["check"], "check")) == set(CHECKS) | set(CHECK_ALIASES)
    assert {"linkage", "two-linkages", "robustness", "no-hitting-set", "pathwidth", "treewidth",
            "apart", "subdivision", "lemma5-survey"} <= set(CHECKS)
    assert CHECK_ALIASES["linkage-survey"] == "lemma5-survey"


def test_width_and_subdivision_checks(tmp_path, capsys):
    """测试 Heinlein 墙的宽度检查与子划分检查"""
    code, report = run_report(capsys, "check", "pathwidth", "--heinlein", "2", "--at-most", "5")
    assert code == 0
    code, report = run_report(capsys, "check", "treewidth", "--heinlein", "1")
    assert code == 0
    assert report["checks"][0]["details"]["width"] == 2
    k4 = tmp_path / "k4.json"
    k4.write_text(json.dumps({"n": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}),
                  encoding="utf-8")
    code, _ = run_report(capsys, "check", "subdivision", "--wall", "3,3", "--prime", "--pattern", str(k4))
    assert code == 0
    code, _ = run_report(capsys, "check", "planar", "--input", str(k4))
    assert code == 0


def test_gen_transforms(tmp_path, capsys):
    """测试 gen multiply 与 gen suppress"""
    path = tmp_path / "p3.json"
    path.write_text(json.dumps({"n": 3, "edges": [[0, 1], [1, 2]]}), encoding="utf-8")
    code, out = run(capsys, "gen", "multiply", "--input", str(path), "--edge", "0,1", "-k", "2")
    assert code == 0
    assert json.loads(out)["n"] == 5
    code, out = run(capsys, "gen", "suppress", "--input", str(path), "--protect", "0,2")
    assert code == 0
    assert json.loads(out)["edges"] == [[0, 1]]


def test_survey_subcommand_and_alias(prism_files, capsys):
    """测试嵌入连接统计: lemma5-survey 与别名 linkage-survey 给出同一检查"""
    _, z = prism_files
    instance = str(z.with_suffix(".instance.json"))
    for name in ("lemma5-survey", "linkage-survey"):
        code, report = run_report(capsys, "check", name, "--instance", instance, "--max-embeddings", "5")
        assert code == 0
        check = report["checks"][0]
        assert check["claim"] == "lemma5-survey"
        assert 0 < check["details"]["embeddings"] <= 5
        assert check["details"]["trace_types"] > 0
