import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confalg import catalog as cat
from confalg.dsl import DSLError, detect_kind, parse_algebra, parse_dmap, parse_file, parse_map, parse_product
from confalg.lca import bq_truncated, current, sl2_structure_constants, virasoro, wb
from confalg.maps import ConformalLinearMap
from confalg.cmod import LambdaElement
from confalg.plca import LambdaProduct
from confalg.polyring import LAM, D, Poly

WB_TEXT = """\
# the W(b) family
algebra Wb
params b
basis L H
bracket L L = (D + 2*lam) L
bracket L H = (D + (1-b)*lam) H
bracket H H = 0
"""


def test_parse_wb():
    A = parse_algebra(WB_TEXT)
    assert A.name == "Wb" and A.same_table(wb("b"))


@pytest.mark.parametrize("A", [virasoro(), wb("b"), wb(2), bq_truncated(3, "q"),
                               current(3, sl2_structure_constants()[1], sl2_structure_constants()[0])],
                         ids=lambda A: A.name)
def test_algebra_round_trip(A):
    B = parse_algebra(A.dsl())
    assert B.same_table(A) and B.basis == A.basis and B.params == A.params


@pytest.mark.parametrize("cid", ["wb.plca.b1", "wb.plca.gen.prime", "w0.plca.affine", "wb.plca.normal.b1.n5"])
def test_product_round_trip(cid):
    B = cat.build(cid)
    P = parse_product(B.object.dsl(), B.algebra)
    assert P.table == B.object.table


def test_map_round_trip():
    B = cat.build("wb.rb.b2")
    T = parse_map(B.object.dsl(B.algebra.basis, ("a", "c")), B.algebra)
    assert T.cols == B.object.cols


def test_missing_map_lines_are_zero():
    T = parse_map("map T\nT H = (-1) H\n", wb(1))
    assert T.cols[0].is_zero() and T.cols[1].coords == (Poly.zero(), Poly.const(-1))


def test_dmap_allows_lambda():
    d = parse_dmap("dmap d\nd L = (D + 2*lam) L\n", virasoro())
    assert isinstance(d, ConformalLinearMap) and d.cols[0].coords == (D + 2 * LAM,)


def test_map_rejects_lambda_with_position():
    with pytest.raises(DSLError) as e:
        parse_map("map T\nT L = (lam) L\n", virasoro())
    assert (e.value.line, e.value.column) == (2, 8)


@pytest.mark.parametrize("text,line,column", [
    ("", 1, 1),
    ("algebra\n", 1, 8),
    ("algebra A\nbasis L\nbracket L L = (D + * 2) L\n", 3, 20),
    ("algebra A\nbasis L\nbracket L L = (D) X\n", 3, 19),
    ("algebra A\nbasis L\nbracket L X = (D) L\n", 3, 11),
    ("algebra A\nbasis L\nbracket L L (D) L\n", 3, 18),
    ("algebra A\nbasis L L\n", 2, 9),
    ("algebra A\nbasis L\nbracket L L = D L\n", 3, 15),
    ("algebra A\nbasis L\nbracket L L = (D + 2*lam L\n", 3, 27),
    ("algebra A\n\n# comment\nbasis L\nfoo L L = 0\n", 5, 1),
])
def test_error_positions(text, line, column):
    with pytest.raises(DSLError) as e:
        parse_algebra(text)
    assert (e.value.line, e.value.column) == (line, column)
    assert f"{line}:{column}" in str(e.value)


def test_axiom_failure_points_at_entry_line():
    with pytest.raises(DSLError) as e:
        parse_algebra("algebra A\nbasis L\n\nbracket L L = (D + lam) L\n")
    assert e.value.line == 4


def test_reserved_names():
    with pytest.raises(DSLError):
        parse_algebra("algebra A\nbasis D\n")
    with pytest.raises(DSLError):
        parse_algebra("algebra A\nparams L\nbasis L\n")


def test_product_basis_must_match():
    with pytest.raises(DSLError):
        parse_product("product P\nbasis L\n", wb(0))


def test_detect_kind():
    assert detect_kind("# x\n\nmap T\n") == "map"
    assert detect_kind("hello\n") == ""


def test_parse_file(tmp_path):
    p = tmp_path / "wb.lca"
    p.write_text(WB_TEXT)
    A = parse_file(str(p))
    m = tmp_path / "t.map"
    m.write_text("map T\nparams c\nT L = (c*D) H\nT H = (-1) H\n")
    T = parse_file(str(m), A)
    assert T.cols[0].coords[1] == Poly.var("c") * D
    with pytest.raises(DSLError) as e:
        parse_file(str(m))
    assert str(p.parent) in str(e.value)


coeffs = st.integers(-3, 3)
mono = st.tuples(coeffs, st.integers(0, 2), st.integers(0, 2))


def element(terms, rank, gen):
    p = sum((Poly.const(c) * D ** i * LAM ** j for c, i, j in terms), Poly.zero())
    return tuple(p if k == gen else Poly.zero() for k in range(rank))


@settings(max_examples=60)
@given(st.lists(st.tuples(st.lists(mono, max_size=3), st.integers(0, 1)), min_size=4, max_size=4))
def test_random_product_round_trip(entries):
    rows = [[LambdaElement(element(entries[2 * i + j][0], 2, entries[2 * i + j][1])) for j in range(2)]
            for i in range(2)]
    P = LambdaProduct("P", ("x", "y"), (), tuple(tuple(r) for r in rows))
    assert parse_product(P.dsl()).table == P.table
