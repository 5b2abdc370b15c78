import itertools

import pytest
from hypothesis import given, settings, strategies as st

from expanse.cantor_maps import (ZERO, BoxMap, OverlapError, Region, TableMap, box_canonical, box_compose,
                                 box_equal, box_image, box_inverse, box_reduce, compose, disjoint_union,
                                 equal_extensional, extensional, image_cones, inverse, normalize_cones,
                                 prefix_map, reduce, restrict)

G = TableMap.of(("0", "101"), ("10", "00"), ("11", "100"))


def words(n):
    return ["".join(p) for p in itertools.product("01", repeat=n)]


def ev(rows, w):
    """Reference evaluation straight from the rows, independent of TableMap.__call__."""
    for d, i in rows:
        if w.startswith(d):
            return i + w[len(d):]
    return None


def graph(rows, n=6):
    return {w: ev(rows, w) for w in words(n) if ev(rows, w) is not None}


def chain(n, *tables):
    """Graph of t1 ∘ t2 ∘ ... on words of length n, evaluated right to left."""
    out = {}
    for w in words(n):
        x = w
        for t in reversed(tables):
            x = ev(t.rows, x)
            if x is None:
                break
        if x is not None:
            out[w] = x
    return out


# ------------------------------------------------------------------ oracles

def test_compose_examples():
    assert compose(prefix_map("0", "1"), prefix_map("", "0")) == prefix_map("", "1")
    assert compose(prefix_map("00", "1"), prefix_map("1", "01")) == ZERO
    assert compose(ZERO, prefix_map("", "1")) == ZERO
    assert graph(compose(prefix_map("0", "1"), prefix_map("", "0")).rows) == graph([("", "1")])


def test_inverse_examples():
    assert inverse(prefix_map("0", "101")) == prefix_map("101", "0")
    assert inverse(ZERO) == ZERO
    assert set(inverse(G).rows) == {("101", "0"), ("00", "10"), ("100", "11")}


def test_restrict_examples():
    assert restrict(prefix_map("", "1"), ["0"]) == prefix_map("0", "10")
    assert restrict(G, [""]) == G
    assert restrict(G, ["0"]) == TableMap.of(("0", "101"))
    got = restrict(prefix_map("", "1"), ["0"])
    assert graph(got.rows) == {w: v for w, v in graph([("", "1")]).items() if w.startswith("0")}


def test_disjoint_union_examples():
    g = disjoint_union([prefix_map("0", "101"), prefix_map("10", "00"), prefix_map("11", "100")])
    assert g == G
    assert disjoint_union([G]) == G
    with pytest.raises(OverlapError) as e:
        disjoint_union([prefix_map("0", "0"), prefix_map("01", "1")])
    assert "01" in str(e.value)


def test_reduce_examples():
    assert reduce(TableMap((("0", "00"), ("1", "01")))).rows == (("", "0"),)
    assert reduce(TableMap.of(("", ""))).rows == (("", ""),)
    t = TableMap.of(("0", "10"), ("1", "0"))
    assert set(t.rows) == {("0", "10"), ("1", "0")}
    assert graph(t.rows) == graph([("0", "10"), ("1", "0")])


def test_equal_extensional_examples():
    assert equal_extensional(TableMap.of(("0", "00"), ("1", "01")), TableMap.of(("", "0")))
    assert equal_extensional(G, G)
    assert not equal_extensional(prefix_map("", "0"), prefix_map("", "1"))


def test_image_cones():
    assert image_cones(G) == {"00", "100", "101"}
    assert image_cones(TableMap.identity()) == {""}
    assert image_cones(prefix_map("0", "101")) == {"101"}


def test_extensional_depth_guard():
    with pytest.raises(ValueError):
        extensional(prefix_map("00000", "1"), depth=6)


def test_normalize_cones():
    assert normalize_cones(["00", "01", "1"]) == {""}
    assert normalize_cones(["0", "01", "10"]) == {"0", "10"}


# ------------------------------------------------------------------ boxes

F5 = BoxMap(2, ((("0", ""), ("01", "0")), (("1", "1"), ("11", "")), (("1", "0"), ("0", "1"))))


def test_box_image_example():
    assert box_image(F5) == {("01", "0"), ("11", ""), ("0", "1")}
    assert box_compose(BoxMap.identity(2), F5) == box_canonical(F5)


def test_box_reduce_identity_split():
    split = BoxMap(2, tuple(((a, b), (a, b)) for a in "01" for b in "01"))
    assert box_equal(box_reduce(split), BoxMap.identity(2))
    assert box_canonical(split) == BoxMap.identity(2)


def test_box_inverse_roundtrip():
    ident = box_compose(box_inverse(F5), F5)
    assert box_equal(ident, BoxMap.identity(2))


def test_region_ops():
    a = Region.from_boxes([("0", "")], 2)
    b = Region.from_boxes([("1", "0"), ("1", "1")], 2)
    assert (a | b).is_full()
    assert a.isdisjoint(b)
    assert Region.from_boxes([("0", "1")], 2).issubset(a)
    assert a.complement() == b


# ------------------------------------------------------------------ properties

@st.composite
def tilings(draw, max_depth=3):
    leaves = [""]
    for _ in range(draw(st.integers(0, 4))):
        opts = [w for w in leaves if len(w) < max_depth]
        if not opts:
            break
        w = draw(st.sampled_from(sorted(opts)))
        leaves.remove(w)
        leaves += [w + "0", w + "1"]
    return sorted(leaves)


@st.composite
def table_maps(draw, partial=True):
    dom = draw(tilings())
    img = draw(tilings().filter(lambda t: len(t) >= len(dom)))
    img = draw(st.permutations(img))[:len(dom)]
    rows = list(zip(dom, img))
    if partial and len(rows) > 1:
        keep = draw(st.lists(st.booleans(), min_size=len(rows), max_size=len(rows)))
        rows = [r for r, k in zip(rows, keep) if k] or rows[:1]
    return TableMap(tuple(rows))


@settings(max_examples=60, deadline=None)
@given(table_maps(), table_maps(), table_maps())
def test_compose_associative(s1, s2, s3):
    lhs = compose(compose(s1, s2), s3)
    rhs = compose(s1, compose(s2, s3))
    assert lhs == rhs
    assert graph(lhs.rows, 10) == chain(10, s1, s2, s3)


@settings(max_examples=60, deadline=None)
@given(table_maps(), table_maps())
def test_compose_matches_reference(s1, s2):
    assert graph(compose(s1, s2).rows, 7) == chain(7, s1, s2)


@settings(max_examples=60, deadline=None)
@given(table_maps(), table_maps())
def test_inverse_antihomomorphism(s1, s2):
    assert inverse(compose(s1, s2)) == compose(inverse(s2), inverse(s1))
    assert inverse(inverse(s1)) == s1


@settings(max_examples=60, deadline=None)
@given(table_maps())
def test_inverse_semigroup_law(s):
    assert compose(s, inverse(s)) == TableMap.identity(image_cones(s))
    assert compose(compose(s, inverse(s)), s) == s


@settings(max_examples=60, deadline=None)
@given(table_maps())
def test_reduce_idempotent_and_order_free(s):
    assert reduce(s) == s
    # splitting every row once more and reducing comes back to the same rows
    finer = tuple((d + b, i + b) for d, i in s.rows for b in "01")
    assert reduce(TableMap(finer[::-1])) == s
    assert graph(finer) == graph(s.rows)


@settings(max_examples=40, deadline=None)
@given(table_maps(partial=False))
def test_union_then_restrict(s):
    parts = [TableMap((r,)) for r in s.rows]
    u = disjoint_union(parts)
    assert u == s
    for p in parts:
        assert restrict(u, [d for d, _ in p.rows]) == p
