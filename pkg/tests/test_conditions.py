import itertools

import pytest
from hypothesis import given, settings, strategies as st

from forcett.conditions import (
    Condition, EMPTY, KeyPresentError, NotAnExtensionError, Partition, compatible, extend,
    extends, find_partition_witness, is_partition, join, replay, restrict_partition,
)

from support import all_partitions, conditions

C = Condition.of


def test_extends_examples():
    assert extends(C({0: 0}), EMPTY)
    assert extends(C({0: 0, 1: 1}), C({0: 0}))
    assert not extends(C({0: 0}), C({0: 1}))


def test_join_examples():
    assert join(C({0: 0}), C({1: 1})) == C({0: 0, 1: 1})
    assert join(C({0: 0}), C({0: 1})) is None
    p = C({2: 1, 5: 0})
    assert join(p, p) == p


def test_extend_examples():
    assert extend(EMPTY, 0, 0) == C({0: 0})
    assert extend(C({1: 1}), 0, 1) == C({0: 1, 1: 1})
    with pytest.raises(KeyPresentError):
        extend(C({0: 0}), 0, 1)


def test_is_partition_examples():
    p = C({3: 1})
    assert is_partition(p, {p})
    assert is_partition(EMPTY, {C({0: 0}), C({0: 1})})
    assert not is_partition(EMPTY, {C({0: 0})})


def test_disjoint_cover_that_is_not_a_partition():
    # covers Cantor space with pairwise incompatible opens, yet no first split works
    leaves = {C({0: 0, 1: 0}), C({0: 1, 2: 0}), C({1: 1, 2: 1}),
              C({0: 0, 1: 1, 2: 0}), C({0: 1, 1: 0, 2: 1})}
    for bits in itertools.product((0, 1), repeat=3):
        point = C(dict(enumerate(bits)))
        assert sum(extends(point, s) for s in leaves) == 1
    assert not is_partition(EMPTY, leaves)


def test_restrict_partition_examples():
    part = Partition.split(EMPTY, 0)
    assert restrict_partition(C({0: 0}), part).leaves == (C({0: 0}),)
    assert restrict_partition(EMPTY, part) == part
    got = restrict_partition(C({1: 0}), part)
    assert set(got.leaves) == {C({0: 0, 1: 0}), C({0: 1, 1: 0})}
    with pytest.raises(NotAnExtensionError):
        restrict_partition(C({0: 0}), Partition.split(C({0: 1}), 2))


def test_condition_text_round_trip():
    assert Condition.parse("{0=1, 3=0}") == C({3: 0, 0: 1})
    assert str(C({3: 0, 0: 1})) == "{0=1,3=0}"
    assert Condition.parse("{}") == EMPTY
    for bad in ("0=1", "{0=2}", "{0=1,0=0}", "{x=1}"):
        with pytest.raises(ValueError):
            Condition.parse(bad)


@pytest.mark.parametrize("root", [EMPTY, C({1: 0})])
def test_is_partition_agrees_with_enumeration(root):
    universe = (0, 1, 2)
    derivable = all_partitions(root, universe)
    for leaves in derivable:
        assert is_partition(root, leaves)
    # every other set of extensions over the universe is rejected
    exts = [r for s in derivable for r in s]
    exts = sorted(set(exts))
    for k in range(1, 4):
        for combo in itertools.combinations(exts, k):
            assert is_partition(root, combo) == (frozenset(combo) in derivable), combo


@st.composite
def partitions(draw, root=None):
    root = draw(conditions(max_size=2)) if root is None else root
    part = Partition.trivial(root)
    for _ in range(draw(st.integers(0, 5))):
        leaf = draw(st.sampled_from(part.leaves))
        free = [n for n in range(6) if n not in leaf]
        if not free:
            break
        part = part.refine(leaf, draw(st.sampled_from(free)))
    return part


@settings(max_examples=200, deadline=None)
@given(partitions())
def test_constructed_partitions(part):
    assert part.is_valid()
    assert replay(part.witness, part.root)
    assert all(extends(s, part.root) for s in part.leaves)
    for a in part.leaves:
        for b in part.leaves:
            assert a == b or not compatible(a, b)
    assert is_partition(part.root, part.leaves)
    assert find_partition_witness(part.root, part.leaves) is not None
    assert part.all_ones_leaf() in part.leaves


@settings(max_examples=200, deadline=None)
@given(partitions(), conditions())
def test_restriction_is_a_partition(part, extra):
    s = join(part.root, extra)
    if s is None:
        return
    r = restrict_partition(s, part)
    assert r.root == s and r.is_valid()
    assert is_partition(s, r.leaves)
    joined = {join(s, q) for q in part.leaves if compatible(s, q)}
    assert set(r.leaves) == joined


@given(conditions(), conditions())
def test_join_is_least_upper_bound(p, q):
    j = join(p, q)
    assert (j is not None) == compatible(p, q)
    if j is not None:
        assert extends(j, p) and extends(j, q)
        assert j == join(q, p)
