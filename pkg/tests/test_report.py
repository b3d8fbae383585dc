import json
import math

import pytest

from vaguelab.report import (CheckResult, config_hash, dump_report,
                             render_report, report_merge)


def _check(name, passed):
    return CheckResult(name, passed, statistics={"v": 1.0}, params={})


def test_config_hash_is_canonical():
    assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})
    assert len(config_hash({})) == 16


def test_render_report_pass_logic():
    good = render_report([_check("x", True)], {"k": 1})
    assert good["pass"] is True and good["schema"] == "1"
    bad = render_report([_check("x", True), _check("y", False)], {"k": 1})
    assert bad["pass"] is False
    # inconclusive counts as not passing
    unknown = render_report([_check("x", None)], {"k": 1})
    assert unknown["pass"] is False


def test_report_embeds_config_and_hash():
    cfg = {"alpha": 0.5}
    rep = render_report([_check("x", True)], cfg)
    assert rep["config"] == cfg
    assert rep["config_hash"] == config_hash(cfg)


def test_report_merge():
    cfg = {"k": 1}
    a = render_report([_check("x", True)], cfg)
    b = render_report([_check("y", True)], cfg)
    merged = report_merge([a, b])
    assert merged["pass"] is True and merged["failing"] == []
    c = render_report([_check("z", False)], cfg)
    merged = report_merge([a, c])
    assert merged["pass"] is False and merged["failing"] == ["z"]


def test_report_merge_hash_mismatch():
    a = render_report([_check("x", True)], {"k": 1})
    b = render_report([_check("y", True)], {"k": 2})
    with pytest.raises(ValueError):
        report_merge([a, b])
    with pytest.raises(ValueError):
        report_merge([])


def test_dump_report_reproducible():
    rep = render_report([_check("x", True)], {"b": 2, "a": 1})
    assert dump_report(rep) == dump_report(rep)
    assert dump_report(rep).endswith("\n")
    json.loads(dump_report(rep))  # valid JSON


def test_nonfinite_values_serializable():
    check = CheckResult("x", False,
                        statistics={"a": math.inf, "b": math.nan,
                                    "c": complex(1, 2)})
    text = dump_report(render_report([check], {}))
    doc = json.loads(text)
    stats = doc["checks"][0]["statistics"]
    assert stats["a"] == "inf" and stats["b"] == "nan"
    assert stats["c"] == [1.0, 2.0]
