import pytest
from hypothesis import given
from hypothesis import strategies as st

from hinwalk import DirectedRelation, MetaPath, format_metapath, parse_metapath, relations_only

name_st = st.from_regex(r"[A-Za-z][A-Za-z0-9_]{0,8}", fullmatch=True)


def test_round_trip_typed():
    text = "Person -found-> Organization -found~-> Person"
    path = parse_metapath(text)
    assert path.node_types == ("Person", "Organization", "Person")
    assert path.relations == (DirectedRelation("found"), DirectedRelation("found", True))
    assert format_metapath(path) == text


def test_zero_length_path():
    path = parse_metapath("Venue")
    assert path.length == 0
    assert str(path) == "Venue"


def test_relations_only_fills_wildcard():
    path = relations_only((DirectedRelation("r"),))
    assert path.node_types == ("Object", "Object")


@pytest.mark.parametrize(
    "bad",
    ["", "A -r->", "A r B", "A -r-> B extra-token-pair", "-r-> A", "A --> B"],
)
def test_malformed_rejected(bad):
    with pytest.raises(ValueError):
        parse_metapath(bad)


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        MetaPath(("A",), (DirectedRelation("r"),))


@given(
    types=st.lists(name_st, min_size=1, max_size=5),
    rel_names=st.lists(name_st, min_size=0, max_size=4),
    inverted=st.lists(st.booleans(), min_size=0, max_size=4),
)
def test_format_parse_round_trip(types, rel_names, inverted):
    n = min(len(types) - 1, len(rel_names), len(inverted))
    path = MetaPath(
        tuple(types[: n + 1]),
        tuple(DirectedRelation(r, i) for r, i in zip(rel_names[:n], inverted[:n])),
    )
    assert parse_metapath(format_metapath(path)) == path
