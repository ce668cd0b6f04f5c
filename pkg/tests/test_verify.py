import json
import re

import pytest

from curv.curvature import constant_curvature, gauss_bonnet, random_algebraic_curvature
from curv import doubleform as df
from curv.verify import oracles
from curv.verify.bench import bench
from curv.verify.registry import REGISTRY, RunConfig
from curv.verify.suite import FilterError, run_suite, select


def test_registry_size_and_ids():
    assert len(REGISTRY) >= 40
    prefixes = {c.id.split(".")[0] for c in REGISTRY.values()}
    assert prefixes == {"combinatorics", "doubleform", "curvature", "lovelock", "geometry"}
    for c in REGISTRY.values():
        assert c.anchor and "\n" not in c.anchor


def test_reported_discrepancies_present():
    reported = {c.id for c in REGISTRY.values() if c.reported}
    assert {"lovelock.hereditary_printed", "curvature.inversion_printed_g"} <= reported


def test_filter_semantics():
    assert all(c.id.startswith("lovelock.") for c in select("lovelock.*"))
    with pytest.raises(FilterError):
        select("no_such_check")
    with pytest.raises(FilterError):
        select("(")


def test_corrupt_fails_and_clean_passes():
    clean = run_suite(RunConfig(filter="curvature.oracle_dd_star_p", samples=1))
    bad = run_suite(RunConfig(filter="curvature.oracle_dd_star_p", samples=1, corrupt=True))
    assert [c.status for c in clean.checks] == ["pass"]
    assert [c.status for c in bad.checks] == ["fail"]


def test_report_schema_and_determinism():
    cfg = RunConfig(filter="^lovelock\\.(hereditary|d_of_n)", samples=1)
    a, b = run_suite(cfg).to_json(), run_suite(cfg).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["version"] == 1
    assert set(doc["checks"][0]) == {"id", "anchor", "mode", "residual", "tolerance", "status"}
    statuses = {c["id"]: c["status"] for c in doc["checks"]}
    assert statuses["lovelock.hereditary"] == "pass"
    assert statuses["lovelock.hereditary_printed"] == "reported"


def test_oracle_examples():
    S4 = constant_curvature(4, 1)
    assert oracles.oracle_dd_star_p(S4, 0).scalar() == 6
    assert df.norm(oracles.oracle_dd_star_p(constant_curvature(5, 0), 2)) == 0
    S5 = constant_curvature(5, 1)
    assert df.norm(oracles.oracle_pq_curvature(S5, 1, 2) - df.scale(df.metric(5), 6)) == 0
    R = random_algebraic_curvature(8, 5)
    assert oracles.oracle_pq_curvature(R, 0, 2).scalar() == gauss_bonnet(R, 2)
    assert df.norm(oracles.oracle_pq_curvature(R, 2, 1) - oracles.oracle_dd_star_p(R, 2)) == 0


def test_oracle_cost_guard():
    with pytest.raises(oracles.CostGuardError):
        oracles.oracle_dd_star_p(constant_curvature(7, 1), 2)
    with pytest.raises(oracles.CostGuardError):
        oracles.oracle_pq_curvature(constant_curvature(6, 1), 0, 2)


def test_bench_rows():
    rows = bench([5])
    assert len(rows) >= 2 and all(r.equal for r in rows)
    with pytest.raises(oracles.CostGuardError):
        bench([7])
    for r in bench([4]):
        if r.tensor == "dd_star_p" and r.p == 1:
            assert r.oracle_seconds < 1 and r.optimized_seconds < 1


def test_parallel_run_matches_serial(monkeypatch):
    cfg = RunConfig(filter="^combinatorics\\.", samples=1)
    serial = run_suite(cfg).to_json()
    monkeypatch.setenv("CURV_THREADS", "2")
    assert run_suite(cfg).to_json() == serial
    monkeypatch.setenv("CURV_THREADS", "zero")
    with pytest.raises(ValueError):
        run_suite(cfg)
