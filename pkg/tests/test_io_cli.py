import json
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import path, star
from descent_fixtures import suite
from llskit import io as jio
from llskit.cli import main
from llskit.descent import FiniteGroup, GSet, check_sheaf, find_natural_isomorphism
from llskit.errors import InvariantError, JSONFormatError, SchemaError
from llskit.finite_sites import datum_from_sheaf, galois_datum, galois_site, gset_hom_sheaf, isolated_site

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


# --- parsing ---------------------------------------------------------------


def test_invalid_json_reports_location(tmp_path):
    p = write(tmp_path, "bad.json", '{"vertices": [')
    with pytest.raises(JSONFormatError) as info:
        jio.parse_inputs("graph", p)
    assert info.value.code == "E_JSON"
    assert "line 1" in str(info.value)


def test_missing_vertex_names_the_edge():
    obj = jio.dump_graph(path([0, 0]))
    obj["edges"][0]["ends"] = ["v1", "v9"]
    with pytest.raises(SchemaError) as info:
        jio.parse_graph(obj)
    assert info.value.code == "E_SCHEMA"
    assert "'e1'" in str(info.value) and "'v9'" in str(info.value)
    assert info.value.pointer == "/edges/0/ends"


def test_wrong_type_has_pointer():
    obj = jio.dump_graph(path([0, 0]))
    obj["vertices"][1]["genus"] = "one"
    with pytest.raises(SchemaError) as info:
        jio.parse_graph(obj)
    assert info.value.pointer == "/vertices/1/genus"


def test_inconsistent_sides_are_invariant_errors():
    g = path([0, 0])
    obj = {"d": 3, "sides": [{"edge": "e1", "half": ["v1"], "value": 1},
                             {"edge": "e1", "half": ["v2"], "value": 1}]}
    with pytest.raises(InvariantError) as info:
        jio.parse_multidegree(obj, g)
    assert info.value.code == "E_INVARIANT"
    assert info.value.pointer == "/sides/1"
    obj["sides"][1]["value"] = 2
    assert jio.parse_multidegree(obj, g).canonical_values() == {"e1": 1}


def test_multidegree_needs_every_edge():
    with pytest.raises(SchemaError, match="no side"):
        jio.parse_multidegree({"d": 2, "sides": []}, path([0, 0]))


def test_graph_and_family_round_trip():
    for g in (star(4), path([0, 1, 1])):
        assert jio.parse_graph(json.loads(jio.dumps(jio.dump_graph(g)))) == g
    fam = jio.parse_inputs("family", SAMPLES / "two_degenerations.json")
    assert jio.dump_family(jio.parse_family(jio.dump_family(fam))) == jio.dump_family(fam)


def test_multidegree_round_trip():
    g = jio.parse_inputs("graph", SAMPLES / "path3.json")
    md = jio.parse_inputs("multidegree", SAMPLES / "path3_md.json", g)
    assert jio.parse_multidegree(jio.dump_multidegree(md), g) == md


def test_site_and_sheaf_round_trip():
    for fx in suite():
        dumped = json.loads(jio.dumps(jio.dump_site(fx.site)))
        site = jio.parse_site(dumped)
        assert jio.dump_site(site) == dumped
        for F in fx.sheaves:
            G = jio.parse_sheaf(json.loads(jio.dumps(jio.dump_sheaf(F))), site.category)
            assert jio.dump_sheaf(G) == jio.dump_sheaf(F)
            assert check_sheaf(site, G).ok


def test_datum_round_trip():
    gs = galois_site(FiniteGroup.cyclic(2))
    datum = galois_datum(gs, [0, 1], {(g, x): (x + g) % 2 for g in (0, 1) for x in (0, 1)})
    again = jio.parse_datum(json.loads(jio.dumps(jio.dump_datum(datum))), gs.site)
    assert jio.dump_datum(again) == jio.dump_datum(datum)


def test_site_schema_errors():
    with pytest.raises(SchemaError, match="missing object"):
        jio.parse_site({"objects": ["a"], "arrows": [{"id": "f", "src": "a", "dst": "b"}]})
    with pytest.raises(SchemaError) as info:
        jio.parse_site({"objects": ["a"], "coverings": [{"target": "a", "by": ["nope"]}]})
    assert info.value.code == "E_SCHEMA"


# --- CLI in-process -----------------------------------------------------------


def test_rho(capsys):
    assert run(capsys, "rho", "4", "1", "3") == (0, "0", "")
    assert run(capsys, "rho", "6", "1", "4", "--format", "json") == (0, "0", "")


def test_schubert_commands(capsys):
    code, out, _ = run(capsys, "schubert", "count", "--r", "1", "--d", "3", "1", "1", "1", "1")
    assert (code, out) == (0, "2")
    code, out, _ = run(capsys, "--format", "json", "schubert", "product", "--r", "1", "--d", "3", "1", "1")
    assert json.loads(out) == [{"partition": [1, 1], "coefficient": 1}, {"partition": [2], "coefficient": 1}]
    code, out, _ = run(capsys, "schubert", "count", "--r", "1", "--d", "3", "--method", "lr", "1", "1", "1", "1")
    assert out == "2"


def test_lls_commands(capsys):
    g4 = str(SAMPLES / "genus4_star.json")
    assert run(capsys, "lls", "count", g4, "--r", "1", "--d", "3")[:2] == (0, "2")
    code, out, _ = run(capsys, "lls", "enumerate", g4, "--r", "1", "--d", "3", "--format", "json")
    types = json.loads(out)
    assert code == 0 and len(types) == 1 and types[0]["multiplicity"] == 2
    code, out, _ = run(capsys, "lls", "real-counts", "--d", "4")
    assert out == '{"total":5,"cools_coppens":3,"eremenko_gabrielov":1}'
    code, out, _ = run(capsys, "lls", "galois", g4, str(SAMPLES / "tail_swap.json"), "--d", "3", "--format", "json")
    res = json.loads(out)
    assert res["strata"] == 1 and res["determines_points"] is False


def test_md_commands(capsys):
    g, md = str(SAMPLES / "path3.json"), str(SAMPLES / "path3_md.json")
    code, out, _ = run(capsys, "md", "fiber", g, md)
    assert json.loads(out) == {"v1": 1, "v2": 1, "v3": 2}
    code, out, _ = run(capsys, "md", "twist", g, md, "--edge", "e1", "--half", "v1")
    assert json.loads(out)["sides"][0]["value"] == 0
    code, out, _ = run(capsys, "md", "sufficient", str(SAMPLES / "two_degenerations.json"), "--d", "4")
    assert code == 0 and len(json.loads(out)) == 2


def test_descent_commands(capsys, tmp_path):
    gs = galois_site(FiniteGroup.cyclic(2))
    site = write(tmp_path, "site.json", jio.dump_site(gs.site))
    Y = GSet((0, 1), {(g, x): (x + g) % 2 for g in (0, 1) for x in (0, 1)})
    F = gset_hom_sheaf(gs, Y)
    sheaf = write(tmp_path, "sheaf.json", jio.dump_sheaf(F))
    code, out, _ = run(capsys, "descent", "check", site, "--sheaf", sheaf, "--pi", "Bp")
    res = json.loads(out)
    assert code == 0 and res["sheaf"] is True and res["factorable"] is True
    datum = write(tmp_path, "datum.json", jio.dump_datum(datum_from_sheaf(gs.site, F, ["Bp"])))
    code, out, _ = run(capsys, "descent", "glue", site, datum, "--format", "json")
    glued = jio.parse_sheaf(json.loads(out), gs.site.category)
    assert find_natural_isomorphism(glued, F) is not None


def test_descent_check_reports_failures(capsys, tmp_path):
    site = write(tmp_path, "iso.json", jio.dump_site(isolated_site()))
    code, out, _ = run(capsys, "descent", "check", site, "--pi", "a")
    assert json.loads(out) == {"objects": 2, "arrows": 2, "coverings": 2, "factorable": False, "witness": "z"}


def test_reruns_are_byte_identical(capsys):
    argv = ["lls", "enumerate", str(SAMPLES / "genus6_star.json"), "--r", "1", "--d", "4", "--format", "json"]
    first = run(capsys, *argv)
    assert first == run(capsys, *argv)


# --- exit codes ---------------------------------------------------------------


def test_domain_errors_exit_one(capsys):
    code, _, err = run(capsys, "lls", "count", str(SAMPLES / "genus4_star.json"), "--r", "1", "--d", "4")
    assert code == 1 and "rho" in err


def test_malformed_input_exits_two(capsys, tmp_path):
    code, _, err = run(capsys, "lls", "count", str(tmp_path / "missing.json"), "--r", "1", "--d", "3")
    assert code == 2 and "E_SCHEMA" in err
    bad = write(tmp_path, "bad.json", "{")
    code, _, err = run(capsys, "--format", "json", "lls", "count", bad, "--r", "1", "--d", "3")
    assert code == 2 and json.loads(err)["error"] == "E_JSON"
    g = jio.dump_graph(path([0, 0]))
    md = write(tmp_path, "md.json", {"d": 3, "sides": [{"edge": "e1", "half": ["v1"], "value": 1},
                                                       {"edge": "e1", "half": ["v2"], "value": 1}]})
    code, _, err = run(capsys, "md", "fiber", write(tmp_path, "g.json", g), md, "--format", "json")
    assert code == 2 and json.loads(err) == {
        "error": "E_INVARIANT", "message": json.loads(err)["message"], "pointer": "/sides/1"}


def test_usage_errors_exit_two(capsys):
    assert run(capsys, "bogus")[0] == 2
    code, _, err = run(capsys, "rho", "4", "1")
    assert code == 2 and "E_USAGE" in err
    assert run(capsys, "--format", "yaml", "rho", "4", "1", "3")[0] == 2


def test_box_guard(capsys, monkeypatch):
    monkeypatch.setenv("LLSKIT_MAX_BOX", "3")
    code, _, err = run(capsys, "schubert", "count", "--r", "1", "--d", "3", "1")
    assert code == 1 and "LLSKIT_MAX_BOX=3" in err
    monkeypatch.setenv("LLSKIT_MAX_BOX", "lots")
    assert run(capsys, "schubert", "count", "--r", "1", "--d", "3", "1")[0] == 2
    monkeypatch.delenv("LLSKIT_MAX_BOX")
    assert run(capsys, "schubert", "count", "--r", "1", "--d", "3", "1", "1", "1", "1")[:2] == (0, "2")


def test_subprocess_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "llskit", "lls", "count", str(SAMPLES / "genus6_star.json"), "--r", "1", "--d", "4"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "5"
    proc = subprocess.run([sys.executable, "-m", "llskit", "rho"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2 and proc.stderr.startswith("error[E_USAGE]")
