import pytest
from hypothesis import given
from hypothesis import strategies as st

from guarded_proc.canon_set import (
    FinSet,
    empty,
    fmap,
    from_iter,
    member,
    order_key,
    preimage_witness,
    render,
    singleton,
    subset,
    union,
)
from strategies import ATOMS, atoms, finsets, int_finsets, small_ints


def test_empty():
    assert empty().elems == ()
    assert not member("a", empty())


def test_singleton():
    assert singleton("a").elems == ("a",)
    assert member("a", singleton("a"))
    assert union(singleton("a"), singleton("a")) == singleton("a")


def test_union_example():
    u = union(FinSet(["a", "b"]), FinSet(["b", "c"]))
    assert u.elems == ("a", "b", "c")
    # membership oracle over the three elements
    for e in "abc":
        assert member(e, u) == (member(e, FinSet("ab")) or member(e, FinSet("bc")))


def test_member_and_subset_examples():
    abc = FinSet("abc")
    assert member("b", abc)
    assert not member("d", abc)
    assert subset(FinSet("a"), FinSet("ab"))
    assert not subset(FinSet("ab"), FinSet("a"))


def test_map_examples():
    assert fmap(str.upper, empty()) == empty()
    assert fmap(lambda _: "c", FinSet("ab")) == FinSet("c")


def test_preimage_witness_examples():
    x = FinSet(["a0", "a1"])
    assert preimage_witness(str.upper, x, "A1") == "a1"
    assert preimage_witness(str.upper, x, "B") is None
    assert preimage_witness(lambda _: "c", x, "c") == "a0"


def test_canonical_order_is_strict():
    s = from_iter(["c", "a", "b", "a"])
    assert s.elems == ("a", "b", "c")
    keys = [order_key(e) for e in s]
    assert all(k1 < k2 for k1, k2 in zip(keys, keys[1:]))


def test_mixed_structured_elements():
    s = FinSet([("b", FinSet([2, 1])), ("a", FinSet()), ("b", FinSet([1, 2]))])
    assert len(s) == 2
    assert s.elems[0] == ("a", FinSet())


def test_render():
    assert render(FinSet(["b", "a"])) == "{a, b}"
    assert render(FinSet([("a", FinSet(["b", "c"]))])) == "{(a, {b, c})}"
    assert str(empty()) == "{}"


def test_immutable():
    with pytest.raises(AttributeError):
        FinSet("a").elems = ()


def test_unorderable_rejected():
    with pytest.raises(TypeError):
        singleton(object())


# normal-form laws: each semilattice equation holds as plain equality


@given(finsets)
def test_left_unit(x):
    assert union(empty(), x) == x


@given(finsets, finsets, finsets)
def test_assoc(x, y, z):
    assert union(union(x, y), z) == union(x, union(y, z))


@given(atoms)
def test_idem(a):
    assert union(singleton(a), singleton(a)) == singleton(a)


@given(finsets, finsets)
def test_comm(x, y):
    assert union(x, y) == union(y, x)


@given(finsets, finsets, atoms)
def test_member_of_union(x, y, a):
    assert member(a, union(x, y)) == (member(a, x) or member(a, y))


@given(finsets, finsets)
def test_extensionality(x, y):
    same_members = all(member(a, y) for a in x) and all(member(a, x) for a in y)
    assert (x == y) == same_members
    assert (subset(x, y) and subset(y, x)) == (x == y)


@given(finsets, finsets)
def test_equal_sets_hash_equal(x, y):
    if x == y:
        assert hash(x) == hash(y)


@given(int_finsets)
def test_functor_identity(x):
    assert fmap(lambda v: v, x) == x


@given(int_finsets)
def test_functor_composition(x):
    f = lambda v: v * v
    g = lambda v: v % 3
    assert fmap(lambda v: g(f(v)), x) == fmap(g, fmap(f, x))


@given(int_finsets, st.dictionaries(small_ints, small_ints), small_ints)
def test_image_membership(x, table, b):
    f = lambda v: table.get(v, 0)
    image = fmap(f, x)
    for a in x:
        assert member(f(a), image)
    w = preimage_witness(f, x, b)
    if member(b, image):
        assert w is not None and member(w, x) and f(w) == b
    else:
        assert w is None
