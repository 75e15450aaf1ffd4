import pytest

from stemchase.stems import NamedClass, StemTable, StemTableError


@pytest.fixture(scope="module")
def table():
    return StemTable.shipped()


def nc(text):
    return NamedClass.parse(text)


def test_shipped_table_loads_clean(table):
    assert len(table.group_entries()) >= 19
    dims = {e.dim for e in table.group_entries() if e.locality == "2"}
    assert dims == set(range(27))


def test_group_lookups(table):
    assert table.group(18, "2").render() == "Z/2{h1P2h1} + Z/8{h2h4}"
    assert table.group(13, "2").render() == "0"
    assert table.group(7, "2").render() == "Z/16{h3}"
    assert table.group(11, "2").render() == "Z/8{Ph2}"
    assert table.group(26, "3").render() == "Z/3{beta2}"


def test_group_orders_match_computations(table):
    expected = {
        1: [2], 2: [2], 3: [8], 6: [2], 7: [16], 8: [2, 2], 9: [2, 2, 2],
        10: [2], 11: [8], 13: [], 14: [2, 2], 15: [2, 32], 16: [2, 2],
        17: [2, 2, 2, 2], 18: [2, 8], 23: [2, 8, 16], 24: [2, 2], 26: [2, 2],
    }
    for dim, orders in expected.items():
        assert list(table.group(dim, "2").group.factors) == orders, dim


def test_missing_entry_is_an_error_not_zero(table):
    with pytest.raises(StemTableError):
        table.group(99, "2")
    with pytest.raises(StemTableError):
        table.group(18, "3")


def test_resolution_consistency(table):
    _, four = table.resolve(nc("4*h2h4"))
    doubled = 2 * four
    _, eight = table.resolve(nc("8*h2h4"))
    assert doubled == eight
    assert eight.is_zero()


def test_products(table):
    assert table.product(nc("h1"), nc("Ph2")).is_zero()
    assert table.product(nc("h2"), nc("Ph1")).is_zero()
    # Bilinearity: (2h2).h3 = 2.(h2 h3) = 0 via the recorded nu sigma fact.
    v = table.product(nc("2*h2"), nc("h3"))
    assert v is not None and v.is_zero()
    # Unrecorded pairs are Unknown, not zero.
    assert table.product(nc("h3"), nc("h0h4")) is None
    assert str(table.product(nc("Ph1"), nc("Ph1"))) == "h1P2h1"


def test_products_symmetric_lookup(table):
    a = table.product(nc("h1"), nc("h3"))
    b = table.product(nc("h3"), nc("h1"))
    assert a == b and str(a) == "h1h3"


def test_brackets(table):
    b = table.bracket([nc("h3"), nc("2*h2"), nc("h3")])
    assert b.value.serialize() == "2*h2h4"
    assert b.indeterminacy == "0"
    b = table.bracket([nc("h3"), nc("4*h3"), nc("h2")])
    assert b.value.serialize() == "2*h2h4"
    # <h3, 2h3, h1> = 2 h1h4, which is zero in the order-2 factor.
    b = table.bracket([nc("h3"), nc("2*h3"), nc("h1")])
    assert b.value.serialize() == "2*h1h4"
    assert table.resolve(b.value)[1].is_zero()
    assert table.bracket([nc("h1"), nc("h2"), nc("h3")]) is None


def test_dimension_mismatch_rejected():
    text = (
        'group 1 2 2 h1 "src"\n'
        'group 3 2 8 h2 "src"\n'
        'product h1 h1 h2 "bogus"\n'
    )
    with pytest.raises(StemTableError, match="dimension mismatch"):
        StemTable.loads(text)


def test_dangling_reference_rejected():
    text = 'product h1 h1 0 "src"\n'
    with pytest.raises(StemTableError, match="does not resolve"):
        StemTable.loads(text)


def test_empty_table_rejected():
    with pytest.raises(StemTableError, match="empty table"):
        StemTable.loads("# only a comment\n")


def test_missing_source_rejected():
    with pytest.raises(StemTableError, match="source"):
        StemTable.loads("group 1 2 2 h1\n")


def test_parse_error_carries_line_number():
    text = 'group 1 2 2 h1 "ok"\nproduct h1 "broken"\n'
    with pytest.raises(StemTableError, match=":2:"):
        StemTable.loads(text)


def test_dim18_invariant_enforced():
    text = 'group 18 2 2,2 a,b "wrong structure"\n'
    with pytest.raises(StemTableError, match="orders \\(2, 8\\)"):
        StemTable.loads(text)


def test_graded_commutativity_checked():
    text = (
        'group 1 2 2 h1 "src"\n'
        'group 2 2 2 h1^2 "src"\n'
        'product h1 h1 h1^2 "src"\n'
    )
    StemTable.loads(text)  # fine: single symmetric record
    bad = (
        'group 1 2 2 h1 "src"\n'
        'group 7 2 16 h3 "src"\n'
        'group 8 2 2,2 h1h3,c0 "src"\n'
        'product h1 h3 h1h3 "src"\n'
        'product h3 h1 0 "src"\n'
    )
    with pytest.raises(StemTableError, match="commutativity"):
        StemTable.loads(bad)


def test_serialize_roundtrip_byte_identical(table):
    from importlib import resources
    raw = resources.files("stemchase.data").joinpath(
        "stems2.tbl").read_text(encoding="utf-8")
    canon = "\n".join(
        line.rstrip() for line in raw.splitlines()
        if line.strip() and not line.lstrip().startswith("#")) + "\n"
    assert table.serialize() == canon
    reloaded = StemTable.loads(table.serialize())
    assert reloaded.serialize() == table.serialize()


def test_survival_and_attaching_facts(table):
    dcp9 = table.survival_facts("D(CP9)")
    assert len(dcp9) == 9
    subjects = {tuple(t.serialize() for t in f.subject) for f in dcp9}
    assert ("h2h4",) in subjects
    assert ("h1P2h1",) in subjects
    assert ("h1P2h1", "4*h2h4") in subjects
    for fact in table.attaching_facts():
        upper, lower = fact.cell_pair
        assert upper > lower
        assert fact.source
    mos = [f for f in table.attaching_facts() if f.cell_pair == (14, 6)]
    assert mos[0].knowledge().serialize() == "2*h3"
