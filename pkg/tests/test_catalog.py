import json

import pytest

from nildolbeault.algebra import is_integrable_structure
from nildolbeault.catalog import (CatalogError, builtin_names, dumps, load_builtin, parse_data,
                                  parse_file, serialize, serialize_module)
from nildolbeault.complexes import de_rham
from nildolbeault.representations import adjoint_module


@pytest.mark.parametrize("name", builtin_names(6))
def test_round_trip(name):
    e = load_builtin(name)
    doc = serialize(e.algebra, e.J, name=name)
    back = parse_data(json.loads(dumps(doc)))
    assert back.algebra.c == e.algebra.c
    assert (back.J is None) == (e.J is None)
    if e.J is not None:
        assert back.J.J == e.J.J
    assert dumps(serialize(back.algebra, back.J, name=name)) == dumps(doc)


def test_module_round_trip(catalog):
    e = catalog["kodaira-thurston"]
    rep = adjoint_module(e.algebra, e.J)
    back = parse_data(serialize(e.algebra, e.J, rep)).module
    assert back.dimE == rep.dimE and back.I.J == rep.I.J
    assert [m.to_dense() for m in back.rho] == [m.to_dense() for m in rep.rho]


def test_counterexample_flag(catalog):
    e = catalog["kt-nonintegrable-J"]
    assert e.counterexample and not is_integrable_structure(e.algebra, e.J)
    assert all(not catalog[n].counterexample for n in ("iwasawa", "kodaira-thurston"))


def test_unknown_names():
    with pytest.raises(KeyError):
        load_builtin("abelian-3")
    with pytest.raises(KeyError):
        load_builtin("no-such-algebra")


def test_bad_rational_names_field():
    doc = {"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "1/0"}}]}
    with pytest.raises(CatalogError) as exc:
        parse_data(doc)
    assert "brackets[1].coeffs[3]" in str(exc.value)


def test_jacobi_failure_is_reported():
    doc = {"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": 1}},
                                  {"i": 2, "j": 3, "coeffs": {"1": 1}},
                                  {"i": 1, "j": 3, "coeffs": {"1": 1}}]}
    with pytest.raises(CatalogError) as exc:
        parse_data(doc)
    assert any(p.startswith("jacobi: triple") for p in exc.value.problems)


def test_antisymmetry_and_duplicates():
    doc = {"dim": 2, "brackets": [{"i": 2, "j": 1, "coeffs": {"1": 1}}]}
    with pytest.raises(CatalogError, match="antisymmetry"):
        parse_data(doc)
    doc = {"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": 1}}] * 2}
    with pytest.raises(CatalogError, match="duplicate"):
        parse_data(doc)


def test_bad_J_rejected():
    doc = {"dim": 2, "brackets": [], "J": [[1, 0], [0, 1]]}
    with pytest.raises(CatalogError, match="^J"):
        parse_data(doc)


def test_file_without_J(tmp_path):
    p = tmp_path / "h3.json"
    p.write_text(json.dumps({"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "1"}}]}))
    inp = parse_file(p)
    assert inp.J is None and inp.name == "h3"
    assert de_rham(inp.algebra).h == [1, 2, 2, 1]


def test_invalid_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{")
    with pytest.raises(CatalogError, match="invalid JSON"):
        parse_file(p)
