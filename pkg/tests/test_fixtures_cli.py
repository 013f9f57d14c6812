"""Fixture bundle determinism and the command line surface."""

import json
import subprocess
import sys

from extriang.cli import main
from extriang.fixtures import build_example51
from extriang.quivrep import dump_algebra_text, is_indecomposable


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_cli_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    return code, json.loads(out)


def test_bundle_is_deterministic(bundle):
    again = build_example51.__wrapped__(p=2, bound=2)  # bypass the cache
    assert again.mod_a.to_json() == bundle.mod_a.to_json()
    assert again.mod_lambda.to_json() == bundle.mod_lambda.to_json()
    assert again.lambda_names == bundle.lambda_names


def test_named_objects_resolve(bundle):
    m = bundle.mod_lambda.indecs[bundle.lambda_names["[P1;P1]_1"]]
    assert m.dims == (1, 1, 1, 1)
    assert is_indecomposable(m)
    # every display label of the worked example resolves
    for label in ("[P1;0]_0", "[0;S2]_0", "[S1;S1]_1", "[S2;0]_0", "[P1;S2]_f",
                  "[P1;P1]_1", "[S1;P1]_g", "[0;S1]_0", "[S1;0]_0", "[0;P1]_0",
                  "[S2;S2]_1"):
        assert label in bundle.lambda_names
    # the one display label that cannot name an indecomposable is documented
    assert "[S2;S2]_0" not in bundle.lambda_names
    assert any("[S2;S2]_1" in note for note in bundle.notes)


def test_c_ext_has_one_indec(bundle):
    assert len(bundle.c_ext.indec_indices()) == 1


def test_lambda_algebra_text_round_trip(bundle, tmp_path):
    text = dump_algebra_text(bundle.lambda_algebra)
    from extriang.quivrep import parse_algebra_text
    assert parse_algebra_text(text) == bundle.lambda_algebra
    assert dump_algebra_text(parse_algebra_text(text)) == text


def test_cli_catalog_example(capsys):
    code, payload = run_cli_json(capsys, "catalog", "--example51", "modLambda")
    assert code == 0
    assert payload["schema"] == 1
    assert payload["count"] == 11
    code, payload = run_cli_json(capsys, "catalog", "--example51", "modA")
    assert code == 0 and payload["count"] == 3


def test_cli_catalog_from_file(capsys, tmp_path, bundle):
    path = tmp_path / "lambda.alg"
    path.write_text(dump_algebra_text(bundle.lambda_algebra))
    code, payload = run_cli_json(capsys, "catalog", str(path))
    assert code == 0 and payload["count"] == 11


def test_cli_catalog_bad_file(tmp_path):
    path = tmp_path / "bad.alg"
    path.write_text("vertex 1\nvertex 2\narrow a 1 2\nbogus\n")
    proc = subprocess.run(
        [sys.executable, "-m", "extriang", "catalog", str(path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert "line 4" in proc.stderr


def test_cli_recollement_check(capsys):
    for which in ("restricted", "full"):
        code, payload = run_cli_json(capsys, "recollement", "check", "--example51", which)
        assert code == 0
        assert payload["report"]["pass"] is True


def test_cli_recollement_classify(capsys):
    code, payload = run_cli_json(capsys, "recollement", "classify", "--example51", "restricted")
    assert code == 0
    labels = {name: rec["label"] for name, rec in payload["classifications"].items()}
    assert labels["i_upper_star"] == "right_exact"
    assert labels["i_upper_shriek"] == "exact"


def test_cli_glue(capsys, bundle):
    code, payload = run_cli_json(
        capsys, "glue", "--example51", "--t1", "P1", "--f1", "S2", "--t2", "P1", "--f2", "-")
    assert code == 0
    result = payload["result"]
    names = bundle.lambda_names
    assert sorted(result["t"]) == sorted(
        [names["[P1;0]_0"], names["[P1;P1]_1"], names["[0;P1]_0"]])
    assert result["f"] == [names["[S2;0]_0"]]
    assert result["verdict"]["valid"] is True
    assert result["hypothesis"]["i_upper_star_exact"] is False


def test_cli_glue_rejects_non_pair(capsys):
    code, payload = run_cli_json(
        capsys, "glue", "--example51", "--t1", "P1", "--f1", "P1", "--t2", "P1", "--f2", "-")
    assert code == 1
    assert "error" in payload


def test_cli_torsion_enumerate_and_verify(capsys, golden_torsion_pairs):
    code, payload = run_cli_json(capsys, "torsion", "enumerate", "--example51", "B")
    assert code == 0
    golden = json.loads(golden_torsion_pairs)
    assert payload["pairs"] == golden["pairs"]
    code, _ = run_cli_json(
        capsys, "torsion", "verify", "--example51", "B",
        "--t", "[P1;0]_0", "--f", "[0;P1]_0,[S2;0]_0")
    assert code == 0
    code, _ = run_cli_json(
        capsys, "torsion", "verify", "--example51", "B",
        "--t", "[S2;0]_0", "--f", "[0;P1]_0")
    assert code == 1


def test_cli_restrict(capsys, bundle):
    code, payload = run_cli_json(
        capsys, "restrict", "--example51",
        "--t", "[P1;0]_0", "--f", "[0;P1]_0,[S2;0]_0")
    assert code == 0
    res = payload["result"]
    assert res["a_pair"]["t"] == [bundle.a_names["P1"]]
    assert res["a_pair"]["f"] == [bundle.a_names["S2"]]
    assert res["c_pair"]["t"] == []
    assert res["c_pair"]["f"] == [bundle.a_names["P1"]]
    assert all(res["hypotheses"].values())


def test_cli_cluster_tilting(capsys):
    code, payload = run_cli_json(
        capsys, "cluster-tilting", "verify",
        "--t", "[P1;P1]_1,[0;P1]_0,[S2;0]_0")
    assert code == 1
    assert payload["report"]["rigid"] is True
    assert payload["report"]["approximation_failures"]


def test_cli_quotient(capsys, bundle):
    code, payload = run_cli_json(
        capsys, "quotient", "--t", "[P1;P1]_1,[0;P1]_0,[S2;0]_0")
    assert code == 0
    assert payload["result"]["surviving"] == [bundle.lambda_names["[P1;0]_0"]]


def test_cli_quotient_recollement(capsys):
    code, payload = run_cli_json(
        capsys, "quotient-recollement", "--t", "[P1;P1]_1,[0;P1]_0,[S2;0]_0")
    assert code == 1
    assert payload["result"]["constructed"] is False
    code, payload = run_cli_json(
        capsys, "quotient-recollement", "--force", "--t", "[P1;P1]_1,[0;P1]_0,[S2;0]_0")
    assert payload["result"]["constructed"] is True


def test_cli_unknown_label(capsys):
    code = main(["torsion", "verify", "--example51", "B", "--t", "NOPE", "--f", "-"])
    assert code == 2


def test_cli_member_outside_category(capsys):
    # [S1;0] exists in the catalog but is not a member of the middle subcategory
    code = main(["torsion", "verify", "--example51", "B", "--t", "[S1;0]_0", "--f", "-"])
    assert code == 2


def test_cli_catalog_other_fields(capsys):
    # the indecomposable counts of both bundled algebras are field independent
    code, payload = run_cli_json(capsys, "catalog", "--example51", "modA", "--field", "3")
    assert code == 0 and payload["count"] == 3
    code, payload = run_cli_json(capsys, "catalog", "--example51", "modLambda",
                                 "--field", "3", "--bound", "1")
    assert code == 0 and payload["count"] == 11


def test_subcat_spec_dimension_vector_patterns(bundle):
    sub = bundle.parse_subcat("(1,1,0,0),(0,0,1,1)", bundle.mod_lambda)
    assert sub.members == {bundle.lambda_names["[P1;0]_0"], bundle.lambda_names["[0;P1]_0"]}
    sub2 = bundle.parse_subcat("(1,1)", bundle.mod_a)
    assert sub2.members == {bundle.a_names["P1"]}


def test_conflation_json_emission(bundle):
    from extriang.homext import conflations_to_json
    payload = json.loads(conflations_to_json(bundle.b_ext.conflations[:5], cap=2))
    assert payload["schema"] == 1
    assert payload["end_summand_cap"] == 2
    for rec in payload["conflations"]:
        assert set(rec) == {"a", "middle", "c", "class", "split"}


def test_cli_pretty_renders(capsys):
    code, out = run_cli(capsys, "catalog", "--example51", "modA", "--pretty")
    assert code == 0
    assert "count: 3" in out
