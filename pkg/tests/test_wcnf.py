import random

import pytest
from hypothesis import given

from conftest import formulas, small_formula
from dynsat.model import Assignment, Formula, cost
from dynsat.wcnf import WcnfParseError, dump, load, parse_wcnf, read_wcnf, write_wcnf


def test_two_clause_example():
    f = parse_wcnf("p wcnf 3 2 100\n100 1 -2 0\n5 2 3 0\n")
    assert f.num_vars == 3 and f.hard_limit == 100
    c1, c2 = f.clauses
    assert (c1.id, c1.weight, c1.dimacs(), f.is_hard(c1)) == (1, 100, (1, -2), True)
    assert (c2.id, c2.weight, c2.dimacs(), f.is_hard(c2)) == (2, 5, (2, 3), False)


def test_comments_skipped():
    doc = read_wcnf("c comment\np wcnf 1 1 10\n10 1 0\n")
    assert doc.comment_lines == ("c comment",)
    assert doc.header == (1, 1, 10)
    assert len(doc.body.clauses) == 1


def test_comments_among_clauses_and_whitespace():
    f = parse_wcnf("p   wcnf 2 2 9\n3  1   2 0\nc mid\n\n4 -1 0")
    assert [c.dimacs() for c in f.clauses] == [(1, 2), (-1,)]


@pytest.mark.parametrize("text, line", [
    ("p wcnf 1 2 10\n10 1 0\n", None),
    ("p cnf 1 1\n1 0\n", 1),
    ("1 1 0\n", 1),
    ("p wcnf 1 1 10\np wcnf 1 1 10\n", 2),
    ("p wcnf 2 1 10\n0 1 0\n", 2),
    ("p wcnf 2 1 10\n3 1 2\n", 2),
    ("p wcnf 2 1 10\n3 0\n", 2),
    ("p wcnf 2 1 10\n3 1 0 2 0\n", 2),
    ("p wcnf 2 1 10\n3 1 5 0\n", 2),
    ("p wcnf 2 1 10\n3 1 x 0\n", 2),
    ("p wcnf 2 1 10\n3 1 -1 0\n", 2),
    ("c only a comment\n", None),
])
def test_parse_errors(text, line):
    with pytest.raises(WcnfParseError) as info:
        parse_wcnf(text)
    assert info.value.line == line
    if line is not None:
        assert f"line {line}" in str(info.value)


def test_empty_formula_writes_header_only():
    assert write_wcnf(Formula(0, (), 7)) == "p wcnf 0 0 7\n"


def test_writer_is_canonical():
    f = parse_wcnf("p wcnf 3 2 100\n100  1 -2 0\n5 2 3 0")
    assert write_wcnf(f) == "p wcnf 3 2 100\n100 1 -2 0\n5 2 3 0\n"
    assert write_wcnf(f, comments=["hello"]).startswith("c hello\np wcnf")


@given(formulas(max_vars=8, max_clauses=20))
def test_roundtrip_identity(f):
    text = write_wcnf(f)
    g = parse_wcnf(text)
    assert g == f
    assert write_wcnf(g) == text


def test_roundtrip_preserves_cost():
    r = random.Random(5)
    for seed in range(100):
        f = small_formula(seed, num_vars=10, num_clauses=25)
        g = parse_wcnf(write_wcnf(f))
        for _ in range(50):
            m = Assignment(tuple(r.random() < 0.5 for _ in range(f.num_vars)))
            assert cost(g, m) == cost(f, m)


def test_load_dump(tmp_path, traffic_path):
    f = load(traffic_path)
    assert (f.num_vars, len(f.clauses), f.hard_limit) == (8, 16, 17)
    out = tmp_path / "copy.wcnf"
    dump(f, out)
    assert load(out) == f
    assert b"\r" not in out.read_bytes()
