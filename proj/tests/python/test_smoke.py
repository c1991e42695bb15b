import json

import pytest

import docex


def test_version():
    assert docex.__version__ == "0.1.0"


def test_metrics():
    assert docex.cer("TOTAL 12.50", "T0TAL 12.50") == pytest.approx(1 / 11)
    assert docex.wer("a b", "a c") == pytest.approx(0.5)
    assert docex.word_accuracy(1.5) == 0.0
    assert docex.levenshtein("kitten", "sitting") == 3
    s = docex.score(3, 1, 0)
    assert s["f1"] == pytest.approx(6 / 7)
    assert s["support"] == 3


def test_errors_carry_codes():
    with pytest.raises(docex.DocexError) as info:
        docex.cer("", "x")
    assert info.value.code == "EmptyReference"
    with pytest.raises(docex.DocexError) as info:
        docex.pdf_to_document(b"not a pdf")
    assert info.value.code == "NotAPdf"


def test_otsu_bimodal():
    hist = [0] * 256
    hist[40] = 100
    hist[200] = 100
    t = docex.otsu_threshold(hist)
    assert 40 <= t < 200


def test_pdf_roundtrip_and_rules():
    pages = [["COMPANY: Acme Trading", "DATE: 02/01/2023", "", "TOTAL: $12.50"]]
    for flate in (False, True):
        data = docex.generate_pdf(pages, flate=flate)
        assert data.startswith(b"%PDF-1.")
        doc = docex.pdf_to_document(data, "r", "r.pdf")
        assert docex.flatten_text(doc) == "COMPANY: Acme Trading\nDATE: 02/01/2023\n\nTOTAL: $12.50"
    result = json.loads(docex.extract_kv(docex.receipt_schema(), doc))
    assert result["doc_id"] == "r"
    text = json.dumps(result)
    assert "12.50" in text and "2023-01-02" in text


def test_normalize():
    assert docex.normalize_field("$1,234.5", "money") == "1234.50"
    assert docex.normalize_field("02/01/2023", "date", "month_first") == "2023-02-01"


def test_commands(tmp_path):
    fx = tmp_path / "fx"
    rc, _ = docex.gen_fixtures(fx, seed=7, count=2)
    assert rc == 0
    rc, log = docex.extract(fx, fx / "docex.toml", tmp_path / "out", engine="mock-vision", jobs=1)
    assert rc == 0, log
    rc, _ = docex.evaluate(tmp_path / "out", fx, tmp_path / "report.csv")
    assert rc == 0
    assert (tmp_path / "report.csv").read_text().startswith("engine,docs,words,cer,wer,word_accuracy\n")
    rc, _ = docex.compare(fx, ["nope"], fx / "docex.toml", tmp_path / "c.csv")
    assert rc == 2
