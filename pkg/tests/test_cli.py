import json
import os
import subprocess
import sys

import pytest

from tropbun import catalog, cli, io
from tropbun.elliptic import e_trop, point_bundle, psi
from tropbun.suite import CriterionResult


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return write


@pytest.fixture
def theta_file(files):
    return files("theta.json", io.graph_to_json(catalog.theta()))


def run(*argv):
    return cli.run([str(a) for a in argv])


K_THETA = [{"point": {"vertex": "u"}, "coeff": 1}, {"point": {"vertex": "v"}, "coeff": 1}]


class TestDivisor:
    def test_rank_of_canonical(self, files, theta_file):
        assert run("divisor", "rank", "--graph", theta_file, "--divisor", files("K.json", K_THETA)) == (0, {"rank": 1})

    def test_malformed_rational(self, files, theta_file):
        bad = files("bad.json", [{"point": {"edge": "e1", "offset": "1/0"}, "coeff": 1}])
        code, doc = run("divisor", "rank", "--graph", theta_file, "--divisor", bad)
        assert code == 2 and doc["error"] == "InvalidInput"

    def test_degree_and_rr(self, files, theta_file):
        k = files("K.json", K_THETA)
        assert run("divisor", "degree", "--graph", theta_file, "--divisor", k) == (0, {"degree": 2})
        assert run("divisor", "rr-check", "--graph", theta_file, "--divisor", k) == (0, {"lhs": 1, "rhs": 1, "holds": True})

    def test_reduce_with_each_base_form(self, files, theta_file):
        d = files("d.json", [{"point": {"edge": "e1", "offset": "1/2"}, "coeff": 1}])
        docs = set()
        for base in ("u", '{"vertex":"u"}', files("base.json", {"vertex": "u"})):
            code, doc = run("divisor", "reduce", "--graph", theta_file, "--divisor", d, "--base", base)
            assert code == 0
            docs.add(json.dumps(doc, sort_keys=True))
        assert len(docs) == 1

    def test_equiv_and_jacobian(self, files, theta_file):
        one = files("u.json", [{"point": {"vertex": "u"}, "coeff": 1}])
        two = files("v.json", [{"point": {"vertex": "v"}, "coeff": 1}])
        assert run("divisor", "equiv", "--graph", theta_file, "--divisor", one, "--divisor", two) == (0, {"equivalent": False})
        code, doc = run("divisor", "jacobian", "--graph", theta_file, "--divisor", one, "--base", "v")
        assert code == 0 and doc["coords"] == ["1/1", "1/1"] and doc["genus"] == 2

    def test_equiv_cross_check(self, files, theta_file, monkeypatch):
        one = files("u.json", [{"point": {"vertex": "u"}, "coeff": 1}])
        monkeypatch.setattr(cli, "jac_equiv", lambda a, b: False)
        code, doc = run("divisor", "equiv", "--graph", theta_file, "--divisor", one, "--divisor", one)
        assert code == 4 and doc["error"] == "InvariantViolation"

    def test_size_limit(self, files, theta_file):
        d = files("d.json", [{"point": {"edge": "e1", "offset": "1/97"}, "coeff": 1}])
        code, doc = run("divisor", "rank", "--graph", theta_file, "--divisor", d, "--limit", 50)
        assert code == 3 and doc["error"] == "SizeLimitExceeded"
        assert "TROPBUN_LIMIT" not in os.environ

    def test_missing_flag(self, theta_file):
        assert run("divisor", "rank", "--graph", theta_file)[0] == 2
        assert run("divisor", "rank", "--graph", "/nonexistent.json", "--divisor", "x")[0] == 2


class TestGraphAndCovers:
    def test_graph_info(self, theta_file):
        code, doc = run("graph", "info", "--graph", theta_file)
        assert code == 0
        assert (doc["euler_characteristic"], doc["genus"], doc["simple"]) == (-1, [2], False)

    def test_enumerate(self, files):
        circ = files("circ.json", io.graph_to_json(catalog.circle()))
        code, doc = run("cover", "enumerate", "--graph", circ, "--degree", 3)
        assert code == 0 and doc["count"] == 3

    def test_build_components_deck(self, files, theta_file):
        c = files("c.json", {"degree": 2, "sigma": {"e2": [2, 1]}})
        code, doc = run("cover", "build", "--graph", theta_file, "--cover", c)
        assert code == 0 and doc["connected"] and doc["components"] == [{"sheets": [1, 2], "genus": 3}]
        assert run("cover", "components", "--graph", theta_file, "--cover", c)[1] == {"components": [{"sheets": [1, 2], "genus": 3}]}
        assert run("cover", "deck", "--graph", theta_file, "--cover", c)[1]["order"] == 2

    def test_product(self, files):
        circ = files("circ.json", io.graph_to_json(catalog.circle()))
        c = files("c.json", {"degree": 2, "sigma": {"e2": [2, 1]}})
        code, doc = run("cover", "product", "--graph", circ, "--cover", c, "--cover", c)
        assert code == 0 and doc["cover"]["degree"] == 4 and len(doc["components"]) == 2


class TestBundles:
    def test_wrr_check_e21(self, files):
        e21 = files("e21.json", io.multidivisor_to_json(e_trop(2, 1)))
        assert run("bundle", "wrr-check", "--bundle", e21) == (0, {"lhs": 1, "rhs": 1, "holds": True})

    def test_operations(self, files):
        e21 = files("e21.json", io.multidivisor_to_json(e_trop(2, 1)))
        line = files("l.json", io.multidivisor_to_json(point_bundle("1/3")))
        code, doc = run("bundle", "tensor", "--bundle", e21, "--bundle", line)
        assert code == 0 and len(doc["divisor"]) >= 1
        assert run("bundle", "degree", "--bundle", e21)[1] == {"degree": 1, "rank": 2}
        assert run("bundle", "rank", "--bundle", e21)[1] == {"rank": 0}
        assert run("bundle", "stability", "--bundle", e21)[1] == {"slope": "1/2", "semistable": True, "stable": True}
        assert run("bundle", "iso", "--bundle", e21, "--bundle", e21)[1] == {"isomorphic": True}
        code, doc = run("bundle", "sum", "--bundle", e21, "--bundle", line)
        assert doc["cover"]["degree"] == 3
        code, det = run("bundle", "det", "--bundle", e21)
        assert code == 0 and det["cover"]["degree"] == 1
        code, dual = run("bundle", "dual", "--bundle", e21)
        assert [t["coeff"] for t in dual["divisor"]] == [-1]

    def test_convert_round_trip(self, files):
        e21 = files("e21.json", io.multidivisor_to_json(e_trop(2, 1)))
        code, cocycle = run("bundle", "convert", "--bundle", e21)
        assert code == 0 and cocycle["rank"] == 2
        back = files("back.json", cocycle)
        code, bundle = run("bundle", "convert", "--bundle", back)
        assert code == 0
        assert run("bundle", "iso", "--bundle", e21, "--bundle", files("b2.json", bundle))[1] == {"isomorphic": True}

    def test_local_systems(self, files):
        pair = files("p.json", io.multidivisor_to_json(psi("1/3", 1, 0)))
        code, lam = run("bundle", "to-localsys", "--bundle", pair)
        assert code == 0
        assert [s for m in lam["monodromy"].values() for s in m["shift"]] == ["1/3"]
        code, back = run("bundle", "from-localsys", "--bundle", files("lam.json", lam))
        assert code == 0
        assert run("bundle", "iso", "--bundle", pair, "--bundle", files("b.json", back))[1] == {"isomorphic": True}

    def test_unstable_to_localsys(self, files):
        e21 = files("e21.json", io.multidivisor_to_json(e_trop(2, 1)))
        assert run("bundle", "to-localsys", "--bundle", e21)[0] == 2


class TestElliptic:
    def test_etrop_and_classify(self, files):
        code, doc = run("elliptic", "etrop", "--rank", 2, "--degree", 1)
        assert code == 0
        code, form = run("elliptic", "classify", "--bundle", files("e.json", doc))
        assert form == {"n": 2, "d": 1, "h": 1, "points": ["0/1"], "circumference": "1/1"}

    def test_psi_length(self, files):
        code, doc = run("elliptic", "psi", "--point", "1/4", "--rank", 2, "--degree", 1, "--length", "3/1")
        assert code == 0
        assert run("elliptic", "classify", "--bundle", files("p.json", doc))[1]["points"] == ["1/4"]
        assert run("elliptic", "psi", "--point", "1/4", "--rank", 2, "--degree", 1, "--length", "-1")[0] == 2

    def test_membership(self, files):
        E = files("E.json", io.multidivisor_to_json(point_bundle(0)))
        assert run("elliptic", "bn-member", "--bundle", E, "--rank", 0)[1] == {"member": True, "bn_rank": 0}
        L = files("L.json", io.multidivisor_to_json(point_bundle("1/2")))
        assert run("elliptic", "theta-member", "--bundle", L, "--bundle", L)[1] == {"member": True}
        assert run("elliptic", "theta-member", "--bundle", E, "--bundle", L)[1] == {"member": False}


class TestRootDatum:
    def test_validate_and_weyl(self, files):
        assert run("rootdatum", "validate", "--gl", 3)[1]["ok"]
        assert run("rootdatum", "weyl", "--sl", 4)[1]["order"] == 24
        bad = files("bad.json", {"rank": 1, "roots": [[1]], "coroots": [[1]]})
        code, doc = run("rootdatum", "validate", "--datum", bad)
        assert code == 0 and doc["axiom_i"] is False
        assert run("rootdatum", "weyl", "--datum", bad)[0] == 2
        assert run("rootdatum", "weyl", "--gl", 2, "--sl", 2)[0] == 2


class TestSuite:
    def _fake(self, monkeypatch, ok):
        result = CriterionResult(1, "fake", ok, "", 0.0, 1.0)
        monkeypatch.setattr(cli, "run_suite", lambda **kw: [result])

    def test_passes(self, monkeypatch):
        self._fake(monkeypatch, True)
        code, doc = run("suite", "run")
        assert code == 0 and doc["passed"]

    def test_fails(self, monkeypatch):
        self._fake(monkeypatch, False)
        code, doc = run("suite", "run", "--grid", 4)
        assert code == 1 and not doc["passed"]

    def test_grid_checked(self):
        assert run("suite", "run", "--grid", 0)[0] == 2


def test_unknown_command():
    assert run("divisor", "frobnicate")[0] == 2
    assert run()[0] == 2


def test_deterministic_process_output(files, theta_file):
    k = files("K.json", K_THETA)
    argv = [sys.executable, "-m", "tropbun", "divisor", "rr-check", "--graph", theta_file, "--divisor", k]
    outs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1] == b'{"holds":true,"lhs":1,"rhs":1}\n'
    pretty = subprocess.run([*argv, "--pretty"], capture_output=True, check=True).stdout
    assert json.loads(pretty) == json.loads(outs[0])


def test_process_exit_code(files, theta_file):
    bad = files("bad.json", [{"point": {"edge": "e1", "offset": "2/4"}, "coeff": 1}])
    proc = subprocess.run(
        [sys.executable, "-m", "tropbun", "divisor", "rank", "--graph", theta_file, "--divisor", bad], capture_output=True
    )
    assert proc.returncode == 2
    assert json.loads(proc.stdout)["error"] == "InvalidInput"
