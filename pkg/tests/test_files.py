import pytest

from logstencil import files


def test_read_log_records_skips_blank_lines(tmp_path):
    log = tmp_path / "a.log"
    log.write_text("one alpha\n\n   \ntwo beta\n", encoding="utf-8")
    records = files.read_log_records(log)
    assert [(r.line_id, r.content) for r in records] == [(1, "one alpha"), (2, "two beta")]


def test_read_log_records_header_pattern_groups(tmp_path):
    log = tmp_path / "a.log"
    log.write_text("08:00 INFO disk ok\nmalformed line\n", encoding="utf-8")
    records = files.read_log_records(log, r"^\S+ (?P<Level>\w+) (?P<Content>.*)$")
    assert records[0].content == "disk ok"
    assert records[0].header == {"Level": "INFO"}
    # a line the pattern does not match is kept whole
    assert records[1].content == "malformed line"
    assert records[1].header is None


def test_read_log_records_header_pattern_without_groups(tmp_path):
    log = tmp_path / "a.log"
    log.write_text("[ts-1] payload here\n", encoding="utf-8")
    records = files.read_log_records(log, r"^\[\S+\] ")
    assert records[0].content == "payload here"


def test_read_content_csv_rejects_duplicate_ids(tmp_path):
    path = tmp_path / "in.csv"
    path.write_text("LineId,Content\n1,a b\n1,c d\n", encoding="utf-8")
    with pytest.raises(ValueError, match="duplicate LineId"):
        files.read_content_csv(path)


def test_read_pairs_csv_requires_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("Foo,Bar\n1,2\n", encoding="utf-8")
    with pytest.raises(ValueError, match="EventTemplate"):
        files.read_pairs_csv(path)


def test_read_keywords(tmp_path):
    path = tmp_path / "kw.txt"
    path.write_text("Exception\n\n  panic  \n", encoding="utf-8")
    assert files.read_keywords(path) == frozenset({"Exception", "panic"})


def test_scripted_responses_unescape(tmp_path):
    path = tmp_path / "script.txt"
    path.write_text("`a <*>`\nline one\\nline two\nback\\\\slash\n", encoding="utf-8")
    responses = files.read_scripted_responses(path)
    assert responses == ["`a <*>`", "line one\nline two", "back\\slash"]
