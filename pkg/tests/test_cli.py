import csv
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from pencilroots import GeneratorSpec, Pencil, generate_pencil
from pencilroots.cli import main
from pencilroots.io import (format_complex, parse_complex, pencil_from_document,
                            pencil_to_document, read_document, read_matrix_market_pair,
                            write_document, write_matrix_market_pair)

finite = st.floats(allow_nan=False, allow_infinity=False)


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_document_round_trip_is_bit_identical(m, n, data):
    parts = [data.draw(arrays(np.float64, (m, n), elements=finite)) for _ in range(4)]
    p = Pencil(parts[0] + 1j * parts[1], parts[2] + 1j * parts[3])
    lam = complex(data.draw(finite), data.draw(finite))
    doc = json.loads(json.dumps(pencil_to_document(p, lam, {"note": "x"})))
    q, lam2, meta = pencil_from_document(doc)
    assert np.array_equal(q.L0, p.L0) and np.array_equal(q.L1, p.L1)
    assert lam2 == lam and meta == {"note": "x"}


def test_document_file_round_trip(tmp_path):
    p = generate_pencil(GeneratorSpec((1, 0), (2, 1), seed=1, fill="complex"))
    path = tmp_path / "p.json"
    write_document(path, pencil_to_document(p))
    q, lam, _ = read_document(path)
    assert lam is None and np.array_equal(q.L0, p.L0) and np.array_equal(q.L1, p.L1)


@pytest.mark.parametrize("text,value", [("0", 0), ("1.5-2i", 1.5 - 2j), ("-i", -1j),
                                        (" 2 + 3j ", 2 + 3j), ("1e-3+0i", 1e-3)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_format_complex_round_trip():
    for z in (0, 1.25 - 3j, -0.1 + 1e-300j):
        assert parse_complex(format_complex(z)) == complex(z)


def test_matrix_market_pair(tmp_path):
    p = generate_pencil(GeneratorSpec((1, 0), (2, 1), seed=2, fill="complex"))
    a, e = tmp_path / "A.mtx", tmp_path / "E.mtx"
    write_matrix_market_pair(p, a, e)
    q = read_matrix_market_pair(a, e)
    assert np.allclose(q.L0, p.L0, rtol=1e-15) and np.allclose(q.L1, p.L1, rtol=1e-15)


def test_analyze_all_lambda_example(tmp_path, capsys):
    path = tmp_path / "p.json"
    write_document(path, pencil_to_document(Pencil(np.zeros((2, 2)), np.ones((2, 2)))))
    code, out, _ = _run(capsys, "analyze", path, "--verify")
    rep = json.loads(out)
    assert code == 0
    assert rep["indices"]["right_minimal"] == [0]
    assert rep["indices"]["partial_multiplicities"] == [1]
    assert rep["toeplitz"]["agrees"] is True
    assert set(rep["residuals"]) == {"eps_kappa", "back", "off", "resN", "normN", "resR", "normR"}


def test_analyze_identity_pencil(tmp_path, capsys):
    path = tmp_path / "p.json"
    write_document(path, pencil_to_document(Pencil(np.eye(3), np.eye(3))))
    code, out, _ = _run(capsys, "analyze", path)
    rep = json.loads(out)
    assert code == 0
    assert rep["minimal_basis"]["degrees"] == [] and rep["root_polynomials"]["orders"] == []
    assert np.array(rep["minimal_basis"]["coefficients"]).size == 0


def test_analyze_matrix_market_and_monomial(tmp_path, capsys):
    p = generate_pencil(GeneratorSpec((4, 2, 0), (5, 3, 1), seed=1, disguise=True, lambda0=1 - 1j))
    a, e = tmp_path / "A.mtx", tmp_path / "E.mtx"
    write_matrix_market_pair(p, a, e)
    out_path = tmp_path / "r.json"
    code, _, _ = _run(capsys, "analyze", "--A", a, "--E", e, "--lambda0", "1-1i",
                      "--expand-monomial", "-o", out_path)
    rep = json.loads(out_path.read_text())
    assert code == 0
    assert sorted(rep["indices"]["right_minimal"]) == [0, 1, 2]
    assert sorted(rep["indices"]["partial_multiplicities"]) == [1, 2]
    assert rep["minimal_basis"]["variable"] == "lam"
    # monomial coefficients: L(lam) N(lam) vanishes at a test point
    C = np.array(rep["minimal_basis"]["coefficients"])
    C = C[..., 0] + 1j * C[..., 1]
    lam = 0.3 + 0.8j
    N = sum(C[i] * lam ** i for i in range(C.shape[0]))
    assert np.linalg.norm(p(lam) @ N) <= 1e-10 * np.linalg.norm(N)


def test_generate_then_analyze(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert _run(capsys, "generate", "--seed", 3, "--disguise", "-o", path)[0] == 0
    doc = json.loads(path.read_text())
    assert (doc["m"], doc["n"]) == (6, 9) and doc["metadata"]["s"] == [4, 2, 0]
    code, out, _ = _run(capsys, "analyze", path)
    assert code == 0 and json.loads(out)["split"]["red"]["t"] == [3, 2, 1]


def test_generate_empty_rows(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert _run(capsys, "generate", "--s", "--t", 3, "-o", path)[0] == 0
    code, out, _ = _run(capsys, "analyze", path)
    rep = json.loads(out)
    assert rep["shape"] == [0, 3] and rep["indices"]["right_minimal"] == [0, 0, 0]


def test_disguised_specs_recovered(tmp_path, capsys):
    rng = np.random.default_rng(12)
    done = 0
    while done < 50:
        k = int(rng.integers(1, 4))
        seq = sorted(rng.integers(0, 4, size=2 * k).tolist(), reverse=True)
        seq[0] = max(seq[0], 1)
        s, t = seq[1::2], seq[0::2]
        tr = int(rng.integers(0, 3))
        tc = int(rng.integers(0, tr + 1))
        if sum(s) + tr > 12 or sum(t) + tc > 12:
            continue
        path = tmp_path / f"g{done}.json"
        args = ["generate", "--s", *s, "--t", *t, "--seed", done, "--disguise",
                "--fill", "complex", "--tail", tr, tc, "-o", path]
        assert _run(capsys, *args)[0] == 0
        code, out, _ = _run(capsys, "analyze", path)
        sc = json.loads(out)["staircase"]
        while s and s[-1] == 0 and t[-1] == 0:
            s, t = s[:-1], t[:-1]
        assert code == 0 and (sc["s"], sc["t"]) == (s, t)
        done += 1


def test_table1_csv(capsys):
    code, out, _ = _run(capsys, "table1", "--seeds", 3)
    rows = list(csv.reader(out.splitlines()))
    assert code == 0 and rows[0] == ["eps_kappa", "back", "off", "resN", "normN", "resR", "normR"]
    assert len(rows) == 4
    again = _run(capsys, "table1", "--seeds", 3)[1]
    assert again == out
    for r in rows[1:]:
        assert float(r[3]) <= 1e-11 and float(r[5]) <= 1e-11
    assert _run(capsys, "table1", "--seeds", 0)[1] == "eps_kappa,back,off,resN,normN,resR,normR\n"


@pytest.mark.parametrize("content", ["{", '{"m": 1}', '{"m": 1, "n": 1, "A": [[[1]]], "E": [[[1, 0]]]}',
                                     '{"m": 1, "n": 1, "A": [[[NaN, 0]]], "E": [[[1, 0]]]}',
                                     '{"m": 1, "n": 1, "A": [[[1, 0]]], "E": [[[1, 0]]], "lambda0": "x"}'])
def test_bad_documents_exit_2(tmp_path, capsys, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, out, err = _run(capsys, "analyze", path)
    assert code == 2 and err.startswith("error:")


def test_usage_errors_exit_2(tmp_path, capsys):
    assert _run(capsys, "analyze")[0] == 2
    assert _run(capsys, "analyze", tmp_path / "missing.json")[0] == 2
    assert _run(capsys, "generate", "--s", 2, "--t", 1)[0] == 2
    assert _run(capsys, "table1", "--seeds", -1)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_contract_violation_exit_3(monkeypatch, tmp_path, capsys):
    from pencilroots import ContractViolation, cli

    def boom(*a, **k):
        raise ContractViolation("stair lost rank")

    monkeypatch.setattr(cli, "analyze", boom)
    path = tmp_path / "p.json"
    write_document(path, pencil_to_document(Pencil(np.eye(1), np.eye(1))))
    code, _, err = _run(capsys, "analyze", path)
    assert code == 3 and "stair lost rank" in err
