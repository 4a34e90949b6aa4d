import json

import pytest

import gradedq


def test_catalog_and_names():
    names = [e["name"] for e in gradedq.catalog()]
    assert len(names) >= 7
    assert "atiyah-so3" in names
    assert set(gradedq.model_kinds()) == {"algebroid", "action", "qfield", "extension", "ruth", "cocycle", "mc",
                                          "exact_courant", "transitive_courant"}
    assert "check-q" in gradedq.commands()
    assert "pontryagin" in gradedq.constructions()


@pytest.mark.parametrize("name", [e["name"] for e in gradedq.catalog()])
def test_every_example_passes(name):
    rep = gradedq.example(name)
    assert rep["passed"], rep["residuals"]
    assert rep["residuals"] == []
    assert rep["wall_time_s"] >= 0 if "wall_time_s" in rep else True


def test_sign_ledger_constants():
    assert gradedq.sign_table(4) == [1, -1, -1, 1]
    c = gradedq.hamiltonian_constant()
    assert c == {"from_homological": "-1/2", "from_poisson": "-1/2", "stable": True}
    rep = gradedq.example("atiyah-so3")
    assert any("k=1:+1 k=2:-1 k=3:-1 k=4:+1" in c for c in rep["conventions"])


def test_broken_jacobi_fails_with_residual(fixtures_dir):
    rep = gradedq.check("check-q", fixtures_dir / "negative" / "broken-jacobi.json")
    assert not rep["passed"]
    assert rep["residuals"][0]["value"] == "e3: -2 e1 e2 e3"


def test_model_round_trip_through_dicts():
    m = gradedq.example_model("ruth-2term")
    assert gradedq.normalize_model(m) == m
    assert gradedq.normalize_model(json.dumps(m)) == m


def test_seeded_random_action():
    a = gradedq.example_model("random-action", seed=3)
    assert a == gradedq.example_model("random-action", seed=3)
    assert a != gradedq.example_model("random-action", seed=4)
    assert gradedq.check("roundtrip", a)["passed"]
    assert gradedq.example("random-action", seed=3)["details"]["seed"] == "3"


def test_arity_cap():
    m = gradedq.example_model("transitive-courant-so3")
    assert gradedq.check("check-morphism", m)["details"]["arity"] == "3"
    assert gradedq.check("check-morphism", m, arity=1)["details"]["arity"] == "1"
    with pytest.raises(gradedq.UsageError):
        gradedq.check("check-morphism", m, arity=-1)


def test_errors():
    with pytest.raises(gradedq.ModelError) as e:
        gradedq.normalize_model({"kind": "qfield", "chart": [{"name": "x"}, {"name": "x"}], "field": {}})
    assert e.value.issues == [{"pointer": "/chart/1/name", "message": "duplicate generator name 'x'"}]
    with pytest.raises(gradedq.ModelError) as e:
        gradedq.normalize_model({"kind": "qfield", "chart": [{"name": "xi", "degree": 1}], "field": {},
                                 "restrict": {"xi": "1/2"}})
    assert e.value.issues[0]["pointer"] == "/restrict/xi"
    with pytest.raises(gradedq.ModelError):
        gradedq.normalize_model("{not json")
    with pytest.raises(gradedq.ModelError) as e:
        gradedq.load_model("/nonexistent/model.json")
    assert e.value.issues[0]["pointer"] == ""
    with pytest.raises(gradedq.UsageError):
        gradedq.example("unknown")
    with pytest.raises(gradedq.UsageError):
        gradedq.check("frobnicate", gradedq.example_model("atiyah-so3"))
    # ModelError and UsageError are ValueErrors
    assert issubclass(gradedq.ModelError, ValueError)


def test_decompose_assemble_files(tmp_path, fixtures_dir):
    q = tmp_path / "q.json"
    a = tmp_path / "a.json"
    assert gradedq.check("assemble", fixtures_dir / "random_action.json", output=q)["passed"]
    assert gradedq.check("decompose", q, output=a)["passed"]
    assert gradedq.load_model(a) == gradedq.load_model(fixtures_dir / "random_action.json")


def test_lie_bracket_of_odd_and_even_fields():
    chart = [{"name": "x", "degree": 0}, {"name": "xi", "degree": 1}]
    # [xi d/dx, x d/dxi] = x d/dx + xi d/dxi
    assert gradedq.lie_bracket(chart, {"x": "xi"}, {"xi": "x"}) == {"x": "x", "xi": "xi"}
    # an odd field squares to half its self-bracket
    assert gradedq.lie_bracket(chart, {"x": "xi"}, {"x": "xi"}) == {}
