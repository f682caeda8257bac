import json

import pytest

from vfsplit.errors import InputError
from vfsplit.session import parse_session, serialize, session_from_dict

from conftest import CORPUS_FILES


@pytest.mark.parametrize("path", CORPUS_FILES, ids=lambda p: p.name)
def test_corpus_round_trip_is_byte_identical(path):
    assert serialize(parse_session(path)) == path.read_text(encoding="utf-8")


def test_empty_session():
    s = session_from_dict({"schema": 1, "base": {"free": ["a"]}})
    assert not s.splittings and not s.families


def test_schema_version_checked():
    with pytest.raises(InputError, match="schema"):
        session_from_dict({"schema": 2, "base": {"free": ["a"]}})


def test_unknown_generator_names_path_and_token():
    d = {"schema": 1, "base": {"free": ["a", "b"]},
         "families": {"H": [["a.q"]]}}
    with pytest.raises(InputError) as e:
        session_from_dict(d)
    assert "families.H[0][0]" in str(e.value) and "'q'" in str(e.value)


def test_dangling_vertex_reference():
    d = {"schema": 1, "base": {"free": ["a", "b"]},
         "splittings": {"T": {"vertices": [{"name": "A", "group": ["a", "b"]}],
                              "edges": [{"name": "e", "source": "A", "target": "Z",
                                         "group": [], "stable": "1"}]}}}
    with pytest.raises(InputError, match="splittings.T"):
        session_from_dict(d)


def test_syntax_error_names_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "schema": 1,\n  "base": {"free": ["a"]\n}\n')
    with pytest.raises(InputError, match=r"bad\.json: line 5"):
        parse_session(p)


def test_bad_group_table():
    d = {"schema": 1, "base": {"vertices": [{"name": "P", "group": {"table": [[0, 1], [0, 1]]}}]}}
    with pytest.raises(InputError, match="base"):
        session_from_dict(d)


def test_serialize_is_sorted(tmp_path):
    text = serialize(parse_session(CORPUS_FILES[0]))
    d = json.loads(text)
    assert text == json.dumps(d, indent=2, sort_keys=True) + "\n"
