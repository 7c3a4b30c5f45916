from __future__ import annotations

import io
import json

import pytest

from gl2def import cli
from gl2def.defring import DefRingReport, failed


@pytest.fixture(autouse=True)
def cache(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path / "cache"))
    return tmp_path / "cache"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run(*argv)
    return code, json.loads(out) if out else None


def test_chartable_q3():
    code, env = run_json("chartable", "3", "--format", "json")
    assert code == 0
    assert env["schema"] == cli.SCHEMA and env["status"] == "ok"
    assert env["result"]["class_count"] == 8 and env["result"]["irreducible_count"] == 8
    assert env["result"]["field"]["g2"] == "x"


def test_defring_level0_verified():
    code, env = run_json("defring", "5", "3", "--theta", "1", "--verify")
    assert code == 0
    flags = env["result"]["flags"]
    assert all(f["status"] == "verified" for f in flags.values())
    assert any(k.startswith("lvl0_") for k in flags)
    assert env["result"]["generator"]["fq2_modulus"] == [2, 1, 1]


def test_defring_failure_carries_witness():
    code, env = run_json("defring", "5", "3", "--theta", "0", "--verify")
    assert code == 1
    idem = env["result"]["flags"]["idempotent"]
    assert idem["status"] == "failed" and "witness" in idem
    assert env["result"]["flags"]["cusp1_Q_vanishes"]["status"] == "verified"


def test_cap_exhaustion_has_its_own_status(monkeypatch):
    from gl2def import defring

    real = defring.defring_report

    def capped(*a, **kw):
        rep: DefRingReport = real(*a, **kw)
        rep.flags["lattice_stabilized"] = failed({"degree_cap": 1})
        return rep

    monkeypatch.setattr(defring, "defring_report", capped)
    code, env = run_json("defring", "5", "3", "--theta", "1", "--no-cache")
    assert code == cli.EXIT_CAP and env["status"] == "cap-exhausted"


def test_langlands_level0():
    code, env = run_json("langlands", "5", "3", "--pair", "level0", "--theta", "1")
    assert code == 0
    res = env["result"]
    assert res["points"] == {"pi": 81, "rho": 81}
    assert all(res["checks"].values())
    assert res["conventions"]["delta"]["unif_value"] == "-1/5"


def test_langlands_ramified_and_primitive():
    code, env = run_json("langlands", "7", "3", "--pair", "ramified", "--unit-exp", "1", "--unif", "1/4",
                         "--wild", "level=1", "--ring", "O/l")
    assert code == 0 and env["result"]["branch"] == "det-determined"
    code, _ = run_json("langlands", "5", "3", "--pair", "primitive", "--unit-exp", "1", "--level", "3")
    assert code == 0


def test_pair_and_transport():
    code, env = run_json("pair", "5", "3", "--ext", "unramified", "--unit-exp", "1")
    assert code == 0
    assert env["result"]["type"]["case"] == 1 and env["result"]["pi"]["supercuspidal"]
    code, env = run_json("transport", "5", "3", "--ext", "unramified", "--unit-exp", "1", "--wild", "level=2")
    assert code == 0
    assert [r["ring"] for r in env["result"]["reports"]] == ["F_3^2[eps]", "F_3^2", "GR(3^2,2)"]
    assert all(r["baseline_change"]["ok"] for r in env["result"]["reports"])


def test_modl():
    code, env = run_json("modl", "5", "3")
    assert code == 0 and all(env["result"]["checks"].values())


@pytest.mark.parametrize(
    "argv",
    [
        ("modl", "5", "5"),
        ("modl", "5", "2"),
        ("modl", "6", "3"),
        ("chartable", "6"),
        ("chartable", "256"),
        ("defring", "5", "3"),
        ("defring", "5", "3", "--theta", "1", "--max-degree", "0"),
        ("nonsense",),
        ("pair", "5", "3", "--ext", "unramified", "--unit-exp", "0"),
        ("pair", "5", "3", "--ext", "ramified", "--unit-exp", "1", "--wild", "level=2"),
        ("langlands", "5", "3", "--pair", "level0"),
        ("langlands", "5", "3", "--pair", "ramified", "--unit-exp", "1"),
        ("transport", "5", "3", "--ext", "unramified", "--unit-exp", "1", "--ring", "O/l^9"),
    ],
)
def test_usage_errors(argv, capsys):
    code, out, err = run(*argv)
    assert code == 2
    assert out == ""


def test_text_format():
    code, out, _ = run("defring", "5", "3", "--theta", "1", "--format", "text")
    assert code == 0
    assert "status: ok" in out and "generator: g2 = x" in out


# cache and determinism -----------------------------------------------------------


def test_cache_hit_is_byte_identical(cache):
    c1, o1, _ = run("chartable", "4")
    files = list(cache.glob("*.json"))
    assert len(files) == 1
    entry = json.loads(files[0].read_text())
    assert entry["provenance"]["version"] and entry["key"] == files[0].stem
    c2, o2, _ = run("chartable", "4")
    c3, o3, _ = run("chartable", "4", "--no-cache")
    assert o1 == o2 == o3 and c1 == c2 == c3 == 0


def test_cache_key_ignores_presentation_flags():
    k = cli.cache_key("chartable", {"q": 3})
    assert k == cli.cache_key("chartable", {"q": 3})
    assert k != cli.cache_key("chartable", {"q": 4})
    p1 = cli.canonical_params(cli.build_parser().parse_args(["chartable", "3", "--format", "text", "--jobs", "2"]))
    p2 = cli.canonical_params(cli.build_parser().parse_args(["chartable", "3"]))
    assert p1 == p2


def test_cache_entry_from_other_version_is_ignored(cache, monkeypatch):
    run("chartable", "3")
    (f,) = cache.glob("*.json")
    entry = json.loads(f.read_text())
    entry["payload"]["result"]["class_count"] = 999
    entry["provenance"]["version"] = "0.0.0"
    f.write_text(json.dumps(entry))
    _, env = run_json("chartable", "3")
    assert env["result"]["class_count"] == 8


def test_no_cache_writes_nothing(cache):
    run("chartable", "3", "--no-cache")
    assert not cache.exists() or not list(cache.glob("*.json"))


def test_verify_fq_deterministic_and_parallel_safe():
    c1, o1, _ = run("verify", "fq", "--max-q", "4", "--no-cache")
    c2, o2, _ = run("verify", "fq", "--max-q", "4", "--no-cache", "--jobs", "2")
    assert c1 == c2 == 0 and o1 == o2
    env = json.loads(o1)
    assert env["result"]["counts"]["failed"] == 0
    assert {r["params"]["q"] for r in env["result"]["checks"]} == {2, 3, 4}


def test_verify_plan_is_fixed():
    from gl2def.verify import plan

    assert plan("all", 7) == plan("all", 7)
    assert ("defring_job", (17, 3)) not in plan("defring", 7)
    assert ("defring_job", (17, 3)) in plan("defring")
    with pytest.raises(ValueError):
        plan("everything")
