import json
import math

import numpy as np
import pytest

from knotsub.cli import (
    SCHEMA_VERSION,
    build_parser,
    decode_matrix,
    encode_matrix,
    main,
    parse_document,
    parse_family,
    read_documents,
    run,
    torus_embedding,
)
from knotsub.exceptions import InvalidInputError

SU3 = {"family": "su", "matrix": [[[0, 3], 0, 0], [0, [0, 5], 0], [0, 0, [0, -8]]]}
SL2_ROT = {"family": "sl2R", "sl2_coords": [0, 0, 1]}
HEIS = {"family": "heisenberg", "matrix": [[0, 1, 1], [0, 0, 1], [0, 0, 0]]}
SIGMA_X = {"family": "su", "matrix": [[[0, 1], 0], [0, [0, -1]]]}
NILPOTENT = {"family": "sl2R", "sl2_coords": [1, 0, 1]}
X4_03 = {"family": "sl3R", "matrix": [[0, 3, 0], [-3, 0, 0], [0, 0, 0]]}


def invoke(command, docs, *flags):
    args = build_parser().parse_args([command, *flags])
    text = "\n".join(json.dumps(d) for d in docs)
    return run(args, text)


def check_schema(rec):
    """Every record: JSON-serializable, versioned, indexed, and either an error or a payload."""
    again = json.loads(json.dumps(rec, allow_nan=False))
    assert again == rec
    assert rec["schema_version"] == SCHEMA_VERSION
    assert isinstance(rec["document"], int)
    if "error" in rec:
        assert set(rec["error"]) == {"kind", "message"}
    for key in ("generator", "conjugator"):
        if key in rec:
            decode_matrix(rec[key])


class TestEncoding:
    def test_round_trip(self, rng):
        A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        np.testing.assert_array_equal(decode_matrix(encode_matrix(A)), A)

    def test_pairs_always_emitted(self):
        assert encode_matrix(np.eye(2))[0][0] == [1.0, 0.0]

    def test_bare_reals_accepted(self):
        A = decode_matrix([[0, 1.5], [-1.5, 0]])
        assert np.isrealobj(A)

    @pytest.mark.parametrize("rows", [[], [[1, 2], [3]], [[1, 2]], [[True]], [["x"]], [[[1, 2, 3]]], "1"])
    def test_rejects(self, rows):
        with pytest.raises(InvalidInputError):
            decode_matrix(rows)

    def test_family_syntax(self):
        assert str(parse_family("su(3)", 3)) == "su(3)"
        assert str(parse_family("so", 4)) == "so(4)"
        with pytest.raises(InvalidInputError):
            parse_family("su(2)", 3)

    def test_document_needs_exactly_one_payload(self):
        with pytest.raises(InvalidInputError):
            parse_document({"family": "sl2R", "sl2_coords": [0, 0, 1], "matrix": [[0, 1], [-1, 0]]})
        with pytest.raises(InvalidInputError):
            parse_document({"family": "sl2R"})

    def test_read_documents_formats(self):
        assert len(read_documents(json.dumps([SU3, SL2_ROT]))) == 2
        assert len(read_documents(json.dumps(SU3))) == 1
        docs = read_documents(json.dumps(SU3) + "\nnot json\n")
        assert isinstance(docs[1], InvalidInputError)

    def test_embedding_start(self):
        assert torus_embedding(3, 2, 0.0) == [3.0, 0.0, 0.0]


class TestClassify:
    def test_examples(self):
        records, status = invoke("classify", [SL2_ROT, SU3, HEIS])
        assert status == 0
        for r in records:
            check_schema(r)
        assert records[0]["verdict"] == "Knotted"
        assert records[0]["period"] == pytest.approx(2 * math.pi)
        assert records[1]["verdict"] == "Knotted"
        assert records[1]["knot"] == {"p": 5, "q": 3}
        assert records[2]["verdict"] == "InjectiveLine"

    def test_oracle_agreement(self):
        records, status = invoke("classify", [SL2_ROT, SU3, HEIS, NILPOTENT], "--oracle")
        assert status == 0
        assert all(r["oracle"]["agrees"] for r in records)

    def test_oracle_withholds_unconfirmed_knotted(self):
        # a horizon shorter than the period leaves the oracle without a return
        records, _ = invoke("classify", [SU3], "--oracle", "--tmax", "3")
        assert records[0]["verdict"] == "Unconfirmed"
        assert "warning" in records[0]

    def test_error_record(self):
        bad = {"family": "so", "matrix": [[1, 0], [0, 1]]}
        records, status = invoke("classify", [SU3, bad])
        assert status == 1
        check_schema(records[1])
        assert records[1]["error"]["kind"] == "invalid-input"
        assert records[0]["verdict"] == "Knotted"

    def test_family_override(self):
        records, _ = invoke("classify", [{"matrix": [[0, -2], [2, 0]]}], "--family", "so")
        assert records[0]["period"] == pytest.approx(math.pi)

    def test_qmax_flag(self):
        doc = {"family": "su", "matrix": [[[0, 1], 0, 0], [0, [0, 7 / 13], 0], [0, 0, [0, -20 / 13]]]}
        strict, _ = invoke("classify", [doc], "--qmax", "10")
        loose, _ = invoke("classify", [doc])
        assert strict[0]["verdict"] == "InjectiveLine"
        assert loose[0]["verdict"] == "Knotted"


class TestOtherCommands:
    def test_period(self):
        records, status = invoke("period", [SIGMA_X])
        assert status == 0 and records[0]["period"] == pytest.approx(2 * math.pi)

    def test_period_not_periodic(self):
        records, status = invoke("period", [NILPOTENT])
        assert status == 1 and records[0]["error"]["kind"] == "not-periodic"

    def test_canonicalize_sl3(self):
        records, status = invoke("canonicalize", [X4_03])
        assert status == 0
        r = records[0]
        check_schema(r)
        assert r["form_tag"] == "X4" and r["knotted"]
        assert r["params"] == pytest.approx([0.0, 3.0])
        np.testing.assert_allclose(decode_matrix(r["generator"]), [[0, 3, 0], [-3, 0, 0], [0, 0, 0]], atol=1e-12)

    def test_canonicalize_su_path(self):
        records, _ = invoke("canonicalize", [SU3])
        assert records[0]["ambient_path_residual"] <= 1e-8
        assert records[0]["residual"] <= 1e-8

    def test_canonicalize_heisenberg_is_domain_error(self):
        records, status = invoke("canonicalize", [HEIS])
        assert status == 1 and records[0]["error"]["kind"] == "domain"

    def test_oracle_no_period(self):
        records, _ = invoke("oracle", [NILPOTENT])
        r = records[0]
        assert r["period"] is None and r["message"] == "no period <= t_max"
        assert r["closed_form_residual"] <= 1e-9

    def test_oracle_seeded(self, monkeypatch):
        monkeypatch.setenv("KNOTSUB_SEED", "7")
        a, _ = invoke("oracle", [SIGMA_X], "--tmax", "10")
        b, _ = invoke("oracle", [SIGMA_X], "--tmax", "10")
        assert a == b
        assert a[0]["period"] == pytest.approx(2 * math.pi, abs=1e-6)
        assert a[0]["probe_min_distance"] > 1e-3

    def test_sample_closure_and_embedding(self):
        doc = {"family": "su", "matrix": [[[0, 3], 0, 0], [0, [0, 2], 0], [0, 0, [0, -5]]]}
        records, _ = invoke("sample", [doc], "--samples", "3")
        assert [r["t"] for r in records] == pytest.approx([0, math.pi, 2 * math.pi])
        first = np.array(records[0]["point"]).ravel()
        last = np.array(records[-1]["point"]).ravel()
        np.testing.assert_allclose(first, np.eye(3, dtype=complex).view(float).ravel(), atol=1e-7)
        np.testing.assert_allclose(last, first, atol=1e-6)
        assert records[0]["embedding3d"] == [3.0, 0.0, 0.0]
        np.testing.assert_allclose(records[-1]["embedding3d"], records[0]["embedding3d"], atol=1e-6)

    def test_sample_injective_has_no_embedding(self):
        records, _ = invoke("sample", [{"family": "sl2R", "sl2_coords": [1, 0, 0]}], "--samples", "2")
        assert len(records) == 2 and all("embedding3d" not in r for r in records)

    def test_sample_count(self):
        records, status = invoke("sample", [SU3], "--samples", "1")
        assert status == 1 and records[0]["error"]["kind"] == "invalid-input"


class TestMain:
    def test_file_io(self, tmp_path):
        src = tmp_path / "in.jsonl"
        out = tmp_path / "out.jsonl"
        src.write_text(json.dumps(SL2_ROT) + "\n" + json.dumps(HEIS) + "\n")
        assert main(["classify", "--input", str(src), "--output", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert [json.loads(x)["verdict"] for x in lines] == ["Knotted", "InjectiveLine"]

    def test_stdout_and_exit_code(self, tmp_path, capsys):
        src = tmp_path / "in.jsonl"
        src.write_text(json.dumps({"family": "so", "matrix": [[1]]}))
        assert main(["classify", "--input", str(src)]) == 1
        rec = json.loads(capsys.readouterr().out)
        check_schema(rec)

    def test_missing_file(self, tmp_path, capsys):
        assert main(["classify", "--input", str(tmp_path / "nope")]) == 1
        assert json.loads(capsys.readouterr().out)["error"]["kind"] == "io"
