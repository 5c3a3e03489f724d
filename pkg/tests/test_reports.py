import json

import pytest

from ovmoments import genfun as G
from ovmoments.reports import Report
from ovmoments.series import QSeries, SeriesCache, cached, qseries_from_json, qseries_to_json
from ovmoments.verify import Perturbation, run_suite
from fractions import Fraction


def test_report_fail_records_exact_values():
    rep = Report("demo", {"N": 3})
    rep.check("n=1", Fraction(1, 3), Fraction(1, 3))
    rep.check("n=2", Fraction(2, 7), 0)
    assert rep.status == "fail" and rep.failure_count == 1
    assert (rep.failures[0].expected, rep.failures[0].actual) == ("2/7", "0")


def test_report_roundtrip():
    rep = Report("demo", {"N": 3}, notes=["x"], data={"rows": [[1, "2"]]})
    rep.fail("here", 1, 2)
    back = Report.from_json(rep.to_json())
    assert back.to_json() == rep.to_json()


def test_report_schema_checked():
    with pytest.raises(ValueError):
        Report.from_dict({"schema": "other"})


def test_qseries_json():
    a = QSeries([1, Fraction(-3, 7), 0, 5], 4)
    blob = json.loads(json.dumps(qseries_to_json(a)))
    assert qseries_from_json(blob) == a


def test_cache_hit_equals_cold(tmp_path):
    cache = SeriesCache(tmp_path)
    calls = []

    def build(n):
        calls.append(n)
        return G.overpartition_gf(n)

    cold = cached("pbar-test", 40, build, cache)
    warm = cached("pbar-test", 30, build, cache)
    assert calls == [40]
    assert warm == cold.truncate(30)


def test_cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("OVMOMENTS_CACHE_DIR", str(tmp_path))
    a = G.moment_series("crank2", 4, 50).series
    assert list(tmp_path.glob("*.json"))
    b = G.moment_series("crank2", 4, 50).series
    assert a == b


def test_cache_ignores_stale_version(tmp_path):
    cache = SeriesCache(tmp_path)
    cache.put("x", QSeries([1, 2], 2))
    path = next(tmp_path.glob("*.json"))
    obj = json.loads(path.read_text())
    obj["version"] = -1
    path.write_text(json.dumps(obj))
    assert cache.get("x", 2) is None


def test_perturbation_parse():
    assert Perturbation.parse("M_2:5") == Perturbation("M_2", 5)
    assert Perturbation.parse("table:M_4:0:3") == Perturbation("table:M_4", 0, 3)
    assert Perturbation.parse("rank:7:1:2") == Perturbation("rank", 7, 1, 2)
    with pytest.raises(ValueError):
        Perturbation.parse("rank")


def test_suites_deterministic_modulo_time():
    a = run_suite("theorem4", 100).to_json(include_time=False)
    b = run_suite("theorem4", 100).to_json(include_time=False)
    assert a == b
