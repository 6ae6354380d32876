import json

import pytest

from buchstaber import cli
from buchstaber.cache import ENV_VAR, ResultCache, resolve_path
from buchstaber.complexes import Skeleton
from buchstaber.constructions import build_f24_to_f35_map, vandermonde_skeleton_map
from buchstaber.invariants import sp_skeleton
from buchstaber.search import SearchBudget
from buchstaber.registry import TABLE_1, TABLE_2


@pytest.fixture
def run(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "cache.json"))

    def _run(*argv):
        code = cli.main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


def test_skeleton(run):
    code, out, _ = run("skeleton", "--m", 6, "--k", 3, "--p", 3, "--no-cache")
    assert code == 0 and out.strip() == "s_3 = 2 (closed-form + search)"
    code, out, _ = run("skeleton", "--m", 2, "--k", 2, "--p", 7, "--no-cache")
    assert code == 0 and out.startswith("s_7 = 0")


def test_skeleton_budget_interval(run):
    code, out, err = run("skeleton", "--m", 9, "--k", 2, "--p", 3, "--budget-nodes", 1, "--no-cache")
    assert code == 3
    assert "[" in out and "unproven" in err


def test_skeleton_usage_errors(run):
    assert run("skeleton", "--m", 3, "--k", 5, "--p", 3)[0] == 2
    assert run("skeleton", "--m", 3, "--p", 3)[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["skeleton", "--m", "3", "--k", "1", "--p", "4"])
    assert exc.value.code == 2


def test_witness_roundtrip(run, tmp_path):
    w = tmp_path / "w.json"
    code, _, _ = run("skeleton", "--m", 7, "--k", 3, "--p", 3, "--witness", w, "--no-cache")
    assert code == 0
    src = write(tmp_path, "src.json", {"skeleton": {"m": 7, "k": 3}})
    assert run("check-map", src, w)[0] == 0


def test_table_p3(run):
    code, out, _ = run("table", "--p", 3, "--max-m", 9, "--no-cache")
    assert code == 0
    rows = {}
    for line in out.splitlines()[2:]:
        cells = [c.strip() for c in line.strip("|").split("|")]
        rows[int(cells[0])] = cells[1:]
    for (m, k), v in TABLE_1.items():
        if m <= 9:
            assert rows[m][k] == str(v), (m, k)


def test_table_formats_and_determinism(run):
    code, a, _ = run("table", "--p", 5, "--max-m", 4, "--format", "csv", "--no-cache")
    assert code == 0
    assert a.splitlines()[4] == "4,4,3,2,1,0"
    _, b, _ = run("table", "--p", 5, "--max-m", 4, "--format", "csv", "--no-cache")
    assert a == b
    code, j, _ = run("table", "--p", 2, "--max-m", 3, "--format", "json", "--no-cache")
    cells = json.loads(j)["cells"]
    assert all(c["exact"] for c in cells) and len(cells) == 2 + 3 + 4


def test_table_p2_matches_black_entries(run):
    code, out, _ = run("table", "--p", 2, "--max-m", 7, "--format", "csv", "--no-cache")
    assert code == 0
    lines = out.splitlines()[1:]
    for (m, k), v in TABLE_2[2].items():
        if m <= 7:
            assert lines[m - 1].split(",")[k + 1] == str(v)


def test_table_guard(run):
    assert run("table", "--p", 3, "--max-m", 10)[0] == 2


def test_search_map(run, tmp_path):
    src = write(tmp_path, "u.json", {"universal": {"p": 2, "n": 4}})
    assert run("search-map", src, "--p", 3, "--r", 4)[0] == 1
    w = tmp_path / "w.json"
    code, _, err = run("search-map", src, "--p", 3, "--r", 5, "--witness", w)
    assert code == 0 and "found" in err
    assert run("check-map", src, w)[0] == 0
    sk = write(tmp_path, "s.json", {"skeleton": {"m": 3, "k": 3}})
    assert run("search-map", sk, "--p", 2, "--r", 3)[0] == 1
    big = write(tmp_path, "b.json", {"skeleton": {"m": 9, "k": 3}})
    assert run("search-map", big, "--p", 3, "--r", 5, "--budget-nodes", 1)[0] == 3


def test_search_map_bad_json(run, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("search-map", bad, "--p", 3, "--r", 2)[0] == 2
    odd = write(tmp_path, "odd.json", {"torus": {}})
    assert run("search-map", odd, "--p", 3, "--r", 2)[0] == 2


def test_check_map(run, tmp_path):
    src = write(tmp_path, "u.json", {"universal": {"p": 2, "n": 4}})
    f24 = write(tmp_path, "f.json", build_f24_to_f35_map().to_json())
    assert run("check-map", src, f24)[0] == 0
    tri = write(tmp_path, "t.json", {"skeleton": {"m": 2, "k": 2}})
    flat = write(tmp_path, "flat.json", {"p": 2, "r": 3, "assignments": {"0": [1, 0, 0], "1": [0, 1, 0], "2": [1, 1, 0]}})
    code, out, _ = run("check-map", tri, flat)
    assert code == 1 and "[0, 1, 2]" in out
    vs = write(tmp_path, "vs.json", {"skeleton": {"m": 5, "k": 2}})
    vdm = write(tmp_path, "vdm.json", vandermonde_skeleton_map(5, 2, 5).to_json())
    assert run("check-map", vs, vdm)[0] == 0
    short = write(tmp_path, "short.json", {"p": 2, "r": 3, "assignments": {"0": [1, 0, 0]}})
    assert run("check-map", tri, short)[0] == 2
    zero = write(tmp_path, "zero.json", {"p": 2, "r": 2, "assignments": {"0": [0, 0], "1": [1, 0], "2": [0, 1]}})
    assert run("check-map", tri, zero)[0] == 2


def test_count(run):
    assert run("count", "--p", 3, "--n", 2, "--j", 1)[1].strip() == "4"
    assert run("count", "--p", 2, "--n", 3, "--j", 2)[1].strip() == "7"
    assert run("count", "--p", 2, "--n", 5, "--j", 1)[1].strip() == "0"
    code, out, _ = run("count", "--p", 2, "--n", 3, "--j", 2, "--brute-force")
    assert code == 0 and "MATCH" in out
    assert run("count", "--p", 3, "--n", 1, "--j", 1)[0] == 2
    assert run("count", "--p", 3, "--n", 2, "--j", 3)[0] == 2


def test_universal(run):
    code, out, _ = run("universal", "--source-p", 2, "--n", 4, "--p", 3, "--no-cache")
    assert code == 0 and out.startswith("s_3 = 10")
    code, out, _ = run("universal", "--source-p", 3, "--n", 3, "--p", 3, "--no-cache")
    assert out.startswith("s_3 = 23")


def test_cache_transparency(run, tmp_path):
    cache = tmp_path / "c.json"
    a = run("skeleton", "--m", 7, "--k", 2, "--p", 3, "--cache", cache, "--format", "json")
    b = run("skeleton", "--m", 7, "--k", 2, "--p", 3, "--cache", cache, "--format", "json")
    c = run("skeleton", "--m", 7, "--k", 2, "--p", 3, "--no-cache", "--format", "json")
    values = [json.loads(x[1])["lo"] for x in (a, b, c)]
    assert values == [values[0]] * 3
    assert json.loads(b[1])["method"].startswith("cached:")
    assert cache.exists()


def test_cache_rejects_intervals_and_survives_corruption(tmp_path):
    path = tmp_path / "c.json"
    cache = ResultCache(path)
    assert not cache.put(sp_skeleton(9, 2, 3, SearchBudget(max_nodes=1)))
    assert cache.put(sp_skeleton(6, 3, 3))
    assert ResultCache(path).get(Skeleton(6, 3).key(), 3).value == 2
    path.write_text("{broken")
    with pytest.warns(UserWarning):
        fresh = ResultCache(path)
    assert fresh.get(Skeleton(6, 3).key(), 3) is None


def test_cache_path_resolution(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "env.json"))
    assert resolve_path("flag.json").name == "flag.json"
    assert resolve_path(None) == tmp_path / "env.json"
    monkeypatch.delenv(ENV_VAR)
    monkeypatch.setenv("XDG_DATA_HOME", str(tmp_path))
    assert resolve_path(None) == tmp_path / "buchstaber" / "cache.json"


def test_verify_paper_skip_slow_with_poisoned_cache(run, tmp_path):
    path = tmp_path / "poison.json"
    res = sp_skeleton(6, 3, 3)
    res.lo = res.hi = 5
    ResultCache(path).put(res)
    # verification recomputes everything and never consults the cache
    code, out, _ = run("verify-paper", "--skip-slow", "--format", "json", "--cache", path)
    report = {r["criterion"]: r for r in json.loads(out)}
    assert report[3]["status"] == "SKIPPED"
    assert "SKIPPED" in report[5]["detail"]
    assert report[1]["status"] == "PASS"
