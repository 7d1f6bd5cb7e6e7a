"""CLI behavior: reports, exit codes, KFile round trips and the sign mutation test."""

import json
import re

import pytest

from koszulate import bases
from koszulate.cli import main
from koszulate.families import codim_one, random_subspace, split_bundle_p1, weyman
from koszulate.fields import FieldConfig
from koszulate.kfile import (KFileError, read_kfile, subspace_from_json, subspace_to_json,
                             vector_space_to_json, write_json_atomic, write_kfile)

QQ = FieldConfig.rational()
FLOAT = re.compile(r"\d\.\d|\de[+-]?\d", re.I)


def run(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def no_floats(doc):
    if isinstance(doc, float):
        return False
    if isinstance(doc, dict):
        return all(no_floats(v) for v in doc.values())
    if isinstance(doc, list):
        return all(no_floats(v) for v in doc)
    return True


@pytest.fixture
def kfile(tmp_path):
    def make(K, name="k.json"):
        path = tmp_path / name
        write_kfile(path, K)
        return str(path)
    return make


# -- KFile -------------------------------------------------------------------------

def test_round_trip(tmp_path, kfile):
    for K in (random_subspace(5, 4, QQ, 2), weyman(5, FieldConfig.prime(101)),
              random_subspace(4, 3, FieldConfig.prime(2**61 - 1), 1)):
        back = read_kfile(kfile(K))
        assert back.field == K.field and back.n == K.n and back.basis == K.basis


def test_rational_coefficients_survive(tmp_path):
    doc = {"n": 3, "field": {"kind": "rational"}, "pairs_order": "lex",
           "basis": [["1/3", "-2", "12345678901234567890"]]}
    K = subspace_from_json(doc)
    assert subspace_to_json(K)["basis"] == doc["basis"]


@pytest.mark.parametrize("doc", [
    {"n": 3, "field": {"kind": "rational"}, "pairs_order": "colex", "basis": []},
    {"n": 3, "field": {"kind": "rational"}, "pairs_order": "lex", "basis": [["1", "0"]]},
    {"n": 3, "field": {"kind": "rational"}, "pairs_order": "lex", "basis": [[1, 0, 0]]},
    {"n": 3, "field": {"kind": "rational"}, "pairs_order": "lex", "basis": [["1.5", "0", "0"]]},
    {"n": 3, "field": {"kind": "prime", "p": "9"}, "pairs_order": "lex", "basis": []},
    {"n": 3, "field": {"kind": "rational"}, "pairs_order": "lex",
     "basis": [["1", "0", "0"], ["2", "0", "0"]]},
    {"n": 0, "field": {"kind": "rational"}, "pairs_order": "lex", "basis": []},
])
def test_bad_kfiles_rejected(doc):
    with pytest.raises(KFileError):
        subspace_from_json(doc)


def test_atomic_write_leaves_no_temp(tmp_path):
    write_json_atomic(tmp_path / "a.json", {"x": "1"})
    assert [p.name for p in tmp_path.iterdir()] == ["a.json"]


# -- commands ------------------------------------------------------------------------

def test_hilbert_and_wq(capsys, kfile):
    path = kfile(codim_one(4))
    code, rep = run(capsys, "hilbert", "--input", path, "--qmax", "3")
    assert code == 0 and rep["results"]["dims"] == ["1", "2", "3", "4"]
    assert rep["command"] == "hilbert" and rep["field"] == "QQ"
    assert set(rep) == {"command", "inputs", "field", "results", "timing"}
    code, rep = run(capsys, "wq", "--input", kfile(weyman(5), "w.json"), "--q", "1",
                    "--route", "presentation")
    assert rep["results"]["dim"] == "5" and rep["results"]["route"] == "presentation"


def test_resonance_report(capsys, kfile):
    code, rep = run(capsys, "resonance", "--input", kfile(weyman(5)), "--paranoid")
    assert code == 0
    assert rep["results"] == {"trivial": True, "dim": "0", "q": "2"}


def test_points(capsys, kfile):
    K = split_bundle_p1(1, 1, FieldConfig.prime(3))
    code, rep = run(capsys, "points", "--input", kfile(K), "--prime", "3")
    assert code == 0 and rep["results"]["count"] == "16"
    # a rational K is reduced mod the requested prime
    code, rep = run(capsys, "points", "--input", kfile(split_bundle_p1(1, 1), "q.json"),
                    "--prime", "5")
    assert rep["results"]["count"] == "36" and rep["field"] == "GF(5)"


def test_isotropy(capsys, kfile, tmp_path):
    sub = tmp_path / "vbar.json"
    write_json_atomic(sub, vector_space_to_json(5, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]], QQ))
    code, rep = run(capsys, "isotropy", "--input", kfile(codim_one(5)), "--subspace", str(sub))
    assert code == 0
    assert rep["results"] == {"isotropic": True, "separable": True, "strongly_isotropic": True}


def test_family(capsys, tmp_path):
    out = tmp_path / "w.json"
    code, rep = run(capsys, "family", "weyman", "--n", "5", "--out", str(out))
    assert code == 0 and rep["results"]["m"] == "7"
    assert read_kfile(out).same_space(weyman(5))
    code, rep = run(capsys, "family", "split-p1", "--a", "1", "--b", "1", "--prime", "3")
    assert rep["results"] == {"n": "4", "m": "3"} and rep["field"] == "GF(3)"
    code, rep = run(capsys, "family", "codim-one", "--n", "6")
    assert rep["results"]["m"] == "14"
    code, rep = run(capsys, "family", "random", "--n", "4", "--m", "2", "--prime", "auto")
    assert rep["field"] == "GF(2305843009213693951)"


def test_formula_commands(capsys):
    _, rep = run(capsys, "degrees", "--n", "6")
    assert rep["results"] == {"koszul": "56", "chow": "14", "identity": True}
    _, rep = run(capsys, "classes", "voisin", "--r", "5")
    assert rep["results"]["class"] == {"hhat": "66"} and rep["results"]["derived_matches"]
    _, rep = run(capsys, "classes", "voisin", "--r", "6")
    assert rep["results"]["class"] == {"hhat": "429/2"}
    _, rep = run(capsys, "classes", "resonance-divisor", "--e", "5")
    assert rep["results"]["class"] == {"c1E": "-14", "c1F": "5"}
    _, rep = run(capsys, "classes", "canonical-pencil", "--g", "4")
    assert rep["results"]["class"] == {"lambda": "-5", "psi_sum": "6"}
    _, rep = run(capsys, "mukai", "h1", "--r", "3", "--b", "2")
    assert rep["results"]["h1"] == "3"
    _, rep = run(capsys, "mukai", "pair", "--v", "3,1,2", "--w", "3,1,2", "--g", "6")
    assert rep["results"]["pairing"] == "-2"
    _, rep = run(capsys, "mukai", "sym", "--r", "2", "--s", "2", "--g", "4", "--b", "2",
                 "--spherical")
    assert rep["results"]["vector"] == {"rank": "3", "L": "3", "s": "6", "g": "4"}


def test_reports_have_no_float_tokens(capsys, kfile):
    for argv in (["hilbert", "--input", kfile(codim_one(4)), "--qmax", "2"],
                 ["classes", "voisin", "--r", "6"], ["degrees", "--n", "9"],
                 ["mukai", "sym", "--r", "3", "--s", "1", "--g", "5", "--b", "2"]):
        main(argv + ["--json"])
        text = capsys.readouterr().out
        doc = json.loads(text)
        assert no_floats(doc)
        body = json.dumps({k: v for k, v in doc.items() if k != "timing"})
        assert not FLOAT.search(body)


def test_human_output(capsys, kfile):
    assert main(["hilbert", "--input", kfile(codim_one(4)), "--qmax", "3"]) == 0
    assert "dims: [1, 2, 3, 4]" in capsys.readouterr().out


# -- exit codes -------------------------------------------------------------------------

def test_exit_code_invalid_input(capsys, tmp_path, kfile):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["hilbert", "--input", str(bad), "--qmax", "2"]) == 1
    assert main(["hilbert", "--input", str(tmp_path / "missing.json"), "--qmax", "2"]) == 1
    assert main(["wq", "--input", kfile(weyman(4)), "--q", "zero"]) == 1
    # a rational K needs --prime before points can be enumerated
    assert main(["points", "--input", kfile(weyman(4), "r.json")]) == 1
    assert main(["degrees", "--n", "2"]) == 1
    assert main(["mukai", "pair", "--v", "1,0,0", "--w", "0,0,1"]) == 1
    assert main(["mukai", "sym", "--r", "2", "--s", "2", "--g", "5", "--b", "2",
                 "--spherical"]) == 1
    assert main(["family", "weyman"]) == 1
    assert main(["nonsense"]) == 1
    capsys.readouterr()


def test_exit_code_budget(capsys, kfile):
    K = weyman(6, FieldConfig.prime(2**61 - 1))
    assert main(["points", "--input", kfile(K)]) == 2
    K = weyman(4, FieldConfig.prime(7))
    assert main(["points", "--input", kfile(K, "small.json"), "--budget", "10"]) == 2
    assert "budget" in capsys.readouterr().err


def test_points_prime_mismatch(capsys, kfile):
    K = weyman(4, FieldConfig.prime(7))
    assert main(["points", "--input", kfile(K), "--prime", "5"]) == 1
    capsys.readouterr()


# -- verify -------------------------------------------------------------------------------

@pytest.fixture
def broken_sign():
    saved = bases._SIGNS
    bases._SIGNS = (1, 1)
    bases._delta_columns.cache_clear()
    yield
    bases._SIGNS = saved
    bases._delta_columns.cache_clear()


def test_verify_fast_passes(capsys):
    assert main(["verify", "--level", "fast"]) == 0
    out = capsys.readouterr().out
    assert "all criteria passed" in out
    assert out.count("[PASS]") == 13


def test_verify_detects_sign_mutation(capsys, broken_sign):
    code = main(["verify", "--level", "fast", "--json"])
    report = json.loads(capsys.readouterr().out)
    assert code == 3
    assert not report["results"]["passed"]
    assert "13" in report["results"]["failed"]
    text = json.dumps(report)
    assert "complex property violated" in text
