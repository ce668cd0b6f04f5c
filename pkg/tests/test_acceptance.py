"""Acceptance criteria 1-13, each at its stated scale and tolerance.

Every test records one PASS/FAIL line; the lines are printed at the end of
the pytest run (and directly when this file is executed as a script).
"""
import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from curv import doubleform as df
from curv.curvature import core as cc
from curv.curvature import planes as sc
from curv.curvature import pq as lv
from curv.geometry import calculus as gc
from curv.geometry import models as gm
from curv.verify.registry import REGISTRY, RunConfig
from curv.verify.suite import run_check

RESULTS: list[str] = []


def record(number: int, ok: bool, detail: str) -> None:
    line = f"AC{number:>2} {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def run(check_id: str, **cfg):
    return run_check(REGISTRY[check_id], RunConfig(**cfg))


def summarize(results) -> tuple[bool, str]:
    ok = all(r.status == "pass" for r in results)
    worst = max(r.residual for r in results)
    return ok, f"{len(results)} checks, worst residual {worst:.1e}"


def test_ac01_oracle_equivalence():
    rs = [run("curvature.oracle_dd_star_p", samples=20), run("lovelock.oracle_pq", samples=20)]
    ok = all(r.status == "pass" and r.mode == "rational" and r.residual == 0 for r in rs)
    record(1, ok, "oracle == optimized exactly: *R*_p (n=4,5,6, 20 tensors), R^(p,2) (n=5, p=0,1)")


def test_ac02_constant_curvature_table():
    rs = [run("curvature.constant_curvature_table", mode=m) for m in ("rational", "float")]
    ok, detail = summarize(rs)
    ok &= rs[0].mode == "rational" and rs[0].residual == 0
    g = df.metric
    S = {n: cc.constant_curvature(n, 1) for n in (4, 5, 6)}
    ok &= df.norm(lv.lovelock(S[5], 2) - df.scale(g(5), 6)) == 0
    # the closed form (k/2)^q (n-1)!/(n-2q-1)! gives 30 at n=6, q=2
    ok &= df.norm(lv.lovelock(S[6], 2) - df.scale(g(6), 30)) == 0
    ok &= lv.gauss_bonnet(S[4], 2) == 6 and lv.gauss_bonnet(S[5], 2) == 30
    record(2, ok, f"S^n(1), n=4..7, rational + float ({detail}); T4(S5)=6g, T4(S6)=30g, h4=6,30")


def test_ac03_h4_three_routes():
    r = run("lovelock.h4_three_routes", samples=100)
    record(3, r.status == "pass" and r.residual == 0, "100 tensors x n=4,5,6, exact")


def test_ac04_ruse_lanczos_hierarchy():
    ids = ["curvature.ruse_lanczos_2", "curvature.ruse_lanczos_general", "curvature.trace_hereditary",
           "curvature.same_weyl"]
    rs = [run(i, samples=10) for i in ids]
    ok, detail = summarize(rs)
    record(4, ok and all(r.residual == 0 for r in rs), f"exact: {detail}")


def test_ac05_lovelock_identities():
    ids = ["lovelock.iota_lemma", "lovelock.greub_vanstone", "lovelock.lanczos_c3", "lovelock.t4_composition"]
    rs = [run(i, samples=50) for i in ids]
    ok, detail = summarize(rs)
    record(5, ok and all(r.residual == 0 for r in rs), f"50 tensors, exact: {detail}")


def test_ac06_hereditary():
    r = run("lovelock.hereditary")
    printed = run("lovelock.hereditary_printed")
    ok = r.status == "pass" and r.residual == 0 and printed.status == "reported" and printed.residual > 0
    record(6, ok, f"coefficient n-2q-p+1 exact; printed coefficient reported (residual {printed.residual:.3g})")


def test_ac07_inversion():
    r = run("curvature.inversion_roundtrip", samples=100)
    hand = run("curvature.inversion_s4_hand")
    ok = r.status == hand.status == "pass" and r.residual == 0
    record(7, ok, "100 tensors x n=4..7 exact; S^4 hand computation g^2/2 - 3g^2 + 3g^2 = g^2/2")


def test_ac08_duality_witnesses():
    rs = [run(i, mode="float") for i in ("curvature.self_dual_witnesses", "curvature.anti_self_dual_witness")]
    wrong = run("curvature.wrong_sign_witness")
    ok = all(r.status == "pass" and r.residual <= 1e-10 for r in rs) and wrong.status == "pass"
    record(8, ok, f"defects <= 1e-10 on S4, S2xS2, S2xH2; wrong sign {wrong.inputs['observed']:.3f} > 0.1")


def _literal_sign_n4():
    """*delta* = (-1)^p D literally, on n=4 charts."""
    worst = 0.0
    for s in range(3):
        m = gm.perturbed_flat(4, seed=100 + s, epsilon=0.05, degree=3)
        for x in m.sample_points(s, 5):
            for p in (1, 2):
                F = (lambda fc, p=p: cc.dd_star_p(fc.R, p))
                lhs = gc.star_delta_star(m.chart, F, x)
                worst = max(worst, df.norm(lhs - df.scale(gc.bianchi_sum_D(m.chart, F, x), (-1) ** p)))
            F = lambda fc: cc.ricci(fc.R)
            lhs = gc.star_delta_star(m.chart, F, x)
            worst = max(worst, df.norm(lhs + gc.bianchi_sum_D(m.chart, F, x)))
    return worst


def test_ac09_differential_claims():
    ids = ["geometry.divergence_dd_star", "geometry.divergence_lovelock", "geometry.second_bianchi",
           "geometry.non_codazzi_witness", "geometry.star_delta_star"]
    rs = [run(i, points=5, chart_seeds=3) for i in ids]
    ok, detail = summarize(rs)
    literal = _literal_sign_n4()
    ok &= literal <= 1e-6
    record(9, ok, f"n=4,5, 3 seeds x 5 points ({detail}); *delta* = (-1)^p D literal at n=4 "
                  f"({literal:.1e}), with sign (-1)^(n+p) at n=5")


def test_ac10_uniqueness_spanning_sets():
    r = run("geometry.uniqueness_spanning_sphere", points=5)
    R = gm.sphere(5).exact_curvature
    singleton = all(len(cc.spanning_set(p, False, False, R)) == 1 for p in range(1, 4))
    record(10, r.status == "pass" and singleton, f"S^5(1) case b) divergence {r.residual:.1e}; case a) singleton")


def test_ac11_s2_scal_and_p_curvature():
    s2 = run("curvature.scal_from_s2", samples=10)
    routes = run("curvature.p_curvature_routes", samples=5)
    planes = run("curvature.s2_product_planes")
    ok = s2.residual == 0 and s2.mode == "rational" and routes.inputs["frames"] >= 100
    ok &= all(r.status == "pass" for r in (s2, routes, planes))
    record(11, ok, f"scal_from_s2 exact; {routes.inputs['frames']} frames, worst {routes.residual:.1e}; "
                   "S2xS2 s2 = 0 mixed, 2 intra-factor")


def test_ac12_dn_and_effectiveness():
    rs = [run(i) for i in ("lovelock.d_of_n", "lovelock.effective_threshold", "lovelock.effective_injectivity")]
    ok, detail = summarize(rs)
    record(12, ok, f"n=4..12 closed form == brute force ({detail})")


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "curv", *args], capture_output=True, text=True)


def test_ac13_determinism_and_interface(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    ra = _cli("verify", "--seed", "7", "--out", str(a))
    rb = _cli("verify", "--seed", "7", "--out", str(b))
    ok = ra.returncode == 0 and rb.returncode == 0 and a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    ok &= doc["summary"]["fail"] == 0 and doc["summary"]["total"] >= 40
    bench = _cli("bench", "--n", "4..5")
    rows = json.loads(bench.stdout)["rows"] if bench.returncode == 0 else []
    ok &= bool(rows) and all(r["equal"] for r in rows)
    record(13, ok, f"verify exit 0 twice, byte-identical ({doc['summary']['total']} checks); "
                   f"bench {len(rows)} rows all equal")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
