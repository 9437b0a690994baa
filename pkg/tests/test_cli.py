import json

import pytest

from sll.cli import main
from sll.jsonio import series_from_json, series_to_json
from sll.base_rings import FiniteField, WittRing
from sll.series import SeriesRing
from sll.singularity import NormalFormResult
from sll import jsonio


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_witt_add_one_plus_one(capsys):
    code, doc = run_cli(
        capsys, "witt", "add", '{"p":2,"m":1,"n":2,"coeffs":[[1],[1]]}'
    )
    assert code == 0
    assert doc["coeffs"] == [2]
    assert doc["digits"] == [0, 1]


def test_witt_mul_and_frobenius(capsys):
    code, doc = run_cli(
        capsys, "witt", "mul", '{"p":3,"m":1,"n":2,"coeffs":[[2],[2]]}'
    )
    assert code == 0 and doc["coeffs"] == [4]
    code, doc = run_cli(
        capsys, "witt", "frob", '{"p":2,"m":2,"n":2,"coeffs":[[0,1]]}'
    )
    assert code == 0
    ring = WittRing(FiniteField(2, 2), 2)
    assert ring.element(tuple(doc["coeffs"])) == ring.frobenius(ring.gen())


def test_witt_digits_accepts_digit_encoding_back(capsys):
    code, doc = run_cli(
        capsys, "witt", "digits", '{"p":2,"m":1,"n":3,"coeffs":[[6]]}'
    )
    assert code == 0
    assert doc["digits"] == [0, 1, 1]
    assert doc["valuation"] == 1
    # round trip through the digit encoding
    code, doc2 = run_cli(
        capsys, "witt", "frob", json.dumps({"p": 2, "m": 1, "n": 3, "digits": [doc["digits"]]})
    )
    assert code == 0 and doc2["coeffs"] == [6]


def test_witt_validation_errors(capsys):
    code, doc = run_cli(capsys, "witt", "add", '{"p":2,"m":1,"n":2,"coeffs":[[1]]}')
    assert code == 2 and "error" in doc
    code, doc = run_cli(capsys, "witt", "add", '{"p":2,"m":1,"n":2}')
    assert code == 2
    code, doc = run_cli(capsys, "witt", "add", "{not json")
    assert code == 2


def test_missing_file_is_io_error(capsys):
    code, doc = run_cli(capsys, "series-reduce", "/nonexistent/path.json")
    assert code == 3


def test_series_reduce_roundtrip(tmp_path, capsys):
    ring = WittRing(FiniteField(2), 3)
    S = SeriesRing(ring, 4, 6)
    x = S.variables()
    f = S.constant(ring.p_element()) + x[0] * x[3] - x[1] * x[2] + x[0] * x[0] * x[0]
    path = tmp_path / "f.json"
    path.write_text(json.dumps(series_to_json(f)))
    code, doc = run_cli(capsys, "series-reduce", str(path))
    assert code == 0
    assert doc["class"] == "OrdinaryDoublePoint"
    nf = doc["normal_form"]
    assert nf["a_prime"]["coeffs"] == [2]
    # certificate re-verified from the emitted phi and unit
    phi = [series_from_json(d) for d in nf["phi"]]
    unit = series_from_json(nf["unit"])
    q_prime = jsonio.quadform_from_json(ring, nf["q_prime"])
    a_prime = ring.element(tuple(nf["a_prime"]["coeffs"]))
    result = NormalFormResult(a_prime, q_prime, phi, unit)
    assert result.certificate_holds(f)


def test_series_reduce_smooth_input(capsys):
    ring = WittRing(FiniteField(2), 2)
    S = SeriesRing(ring, 2, 4)
    x = S.variables()
    f = x[0] + x[0] * x[1]
    code, doc = run_cli(capsys, "series-reduce", json.dumps(series_to_json(f)))
    assert code == 0 and doc["class"] == "Smooth"


def test_dieudonne_invariants_fixture_ordinary(capsys):
    code, doc = run_cli(capsys, "dieudonne", "invariants", "--fixture", "ordinary")
    assert code == 0
    assert doc == {"a_number": 0, "p_rank": 2, "kernel_type": "NotSuperspecial"}


def test_dieudonne_validate_with_spot_checks(capsys):
    code, doc = run_cli(
        capsys, "--seed", "5", "dieudonne", "validate", "--fixture", "iib",
        "--q", "2", "--n", "2", "--spot-checks", "3",
    )
    assert code == 0
    assert doc["valid"] is True
    assert doc["spot_checks"] == {"runs": 3, "invariant_stable": True}


def test_dieudonne_file_roundtrip(tmp_path, capsys):
    from sll.dieudonne import make_standard

    module = make_standard(WittRing(FiniteField(2), 2), "iia")
    path = tmp_path / "m.json"
    path.write_text(json.dumps(module.to_json()))
    code, doc = run_cli(capsys, "dieudonne", "invariants", "--file", str(path))
    assert code == 0
    assert doc["kernel_type"] == "NonAlphaSquare"


def test_dieudonne_requires_exactly_one_source(capsys):
    code, doc = run_cli(capsys, "dieudonne", "invariants")
    assert code == 2
    code, doc = run_cli(
        capsys, "dieudonne", "invariants", "--fixture", "iia", "--file", "x.json"
    )
    assert code == 2


def test_dieudonne_lagrangian_search(capsys):
    code, doc = run_cli(
        capsys, "dieudonne", "lagrangian-search", "--fixture", "iia", "--q", "2", "--n", "2"
    )
    assert code == 0 and doc["found"] is True and "witness" in doc
    code, doc = run_cli(
        capsys, "dieudonne", "lagrangian-search", "--fixture", "iib", "--q", "2", "--n", "2"
    )
    assert code == 0 and doc["found"] is False


def test_deform_fixture_iib(capsys):
    code, doc = run_cli(capsys, "deform", "--fixture", "iib", "--q", "2", "--n", "3")
    assert code == 0
    assert doc["relation"] == "2 + t11*t22 - t12*t21"
    assert doc["class"] == "OrdinaryDoublePoint"
    assert doc["a_prime_valuation"] == 1


def test_deform_fixture_lagrangian(capsys):
    code, doc = run_cli(capsys, "deform", "--fixture", "lagrangian_generic", "--q", "3")
    assert code == 0 and doc["class"] == "Smooth"


def test_deform_output_feeds_series_reduce(capsys):
    # emitted series documents are accepted back as input
    code, doc = run_cli(capsys, "deform", "--fixture", "iib", "--q", "3", "--n", "3")
    assert code == 0
    code, doc2 = run_cli(capsys, "series-reduce", json.dumps(doc["relation_series"]))
    assert code == 0
    assert doc2["class"] == "OrdinaryDoublePoint"
    assert doc2["normal_form"]["a_prime"]["coeffs"] == [3]


def test_deform_explicit_frame(capsys):
    code, doc = run_cli(
        capsys, "deform", "--fixture", "iib", "--q", "2", "--n", "2", "--frame", "3,4"
    )
    assert code == 0 and doc["class"] == "OrdinaryDoublePoint"
    code, doc = run_cli(
        capsys, "deform", "--fixture", "iib", "--q", "2", "--n", "2", "--frame", "1,2"
    )
    assert code == 2  # X1, X2 do not span the Hodge filtration


def test_local_model_points_and_tangents(capsys):
    code, doc = run_cli(capsys, "local-model", "points", "--q", "2")
    assert code == 0
    assert doc["count"] == 19
    radical = {"basis": [[[1], [0], [0], [0]], [[0], [0], [0], [1]]]}
    assert radical in doc["points"]
    code, doc = run_cli(capsys, "local-model", "tangents", "--q", "2")
    assert code == 0
    assert doc["singular"] == [radical]
    assert {p["tangent_dimension"] for p in doc["points"]} == {3, 4}


def test_local_model_chart(capsys):
    code, doc = run_cli(capsys, "local-model", "chart", "--q", "3", "--n", "3")
    assert code == 0
    assert doc["equation"] == "3 + t11*t22 - t12*t21"
    assert doc["class"] == "OrdinaryDoublePoint"
    assert doc["a_prime_valuation"] == 1


def test_output_is_deterministic(capsys):
    code1 = main(["local-model", "points", "--q", "3"])
    out1 = capsys.readouterr().out
    code2 = main(["local-model", "points", "--q", "3"])
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert out1 == out2


def test_env_precision_default(capsys, monkeypatch):
    monkeypatch.setenv("SLL_PRECISION", "2")
    code, doc = run_cli(capsys, "local-model", "chart", "--q", "2")
    assert code == 0 and doc["n"] == 2
    monkeypatch.setenv("SLL_PRECISION", "bogus")
    code, doc = run_cli(capsys, "local-model", "chart", "--q", "2")
    assert code == 2


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["local-model", "bogus-op", "--q", "2"])
    assert err.value.code == 2
