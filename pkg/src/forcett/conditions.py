"""Forcing conditions and partitions.

A condition is a finite partial map from naturals to bits, i.e. a basic
open of Cantor space.  A partition of ``p`` is a finite cover obtained by
splitting repeatedly on indices outside the current domain; each
:class:`Partition` carries the split tree that derives it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Union


class KeyPresentError(ValueError):
    pass


class NotAnExtensionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Condition:
    """Graph of a finite partial function N -> {0, 1}, keys ascending."""

    items: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        keys = [k for k, _ in self.items]
        if keys != sorted(set(keys)):
            raise ValueError(f"condition keys must be unique and ascending: {self.items}")
        for k, b in self.items:
            if k < 0 or b not in (0, 1):
                raise ValueError(f"bad condition entry {k}={b}")

    @classmethod
    def of(cls, mapping: Union[Mapping[int, int], Iterable[tuple[int, int]]] = ()) -> "Condition":
        pairs = dict(mapping.items() if isinstance(mapping, Mapping) else mapping)
        return cls(tuple(sorted(pairs.items())))

    @classmethod
    def parse(cls, text: str) -> "Condition":
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"condition literal must be braced: {text!r}")
        body = body[1:-1].strip()
        if not body:
            return EMPTY
        pairs: dict[int, int] = {}
        for entry in body.split(","):
            m = re.fullmatch(r"\s*(\d+)\s*=\s*([01])\s*", entry)
            if m is None:
                raise ValueError(f"bad condition entry {entry!r}")
            k = int(m.group(1))
            if k in pairs:
                raise ValueError(f"duplicate key {k} in condition")
            pairs[k] = int(m.group(2))
        return cls.of(pairs)

    def __str__(self) -> str:
        return "{" + ",".join(f"{k}={b}" for k, b in self.items) + "}"

    def __repr__(self) -> str:
        return f"Condition({self})"

    def __contains__(self, n: object) -> bool:
        return any(k == n for k, _ in self.items)

    def __getitem__(self, n: int) -> int:
        for k, b in self.items:
            if k == n:
                return b
        raise KeyError(n)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[int]:
        return (k for k, _ in self.items)

    def get(self, n: int, default: Optional[int] = None) -> Optional[int]:
        for k, b in self.items:
            if k == n:
                return b
        return default

    @property
    def dom(self) -> frozenset[int]:
        return frozenset(k for k, _ in self.items)

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def extends(self, other: "Condition") -> bool:
        return extends(self, other)

    def extend(self, n: int, b: int) -> "Condition":
        return extend(self, n, b)


EMPTY = Condition()


def extends(q: Condition, p: Condition) -> bool:
    """True iff ``q`` extends ``p``, i.e. ``p`` is a subset of ``q``."""
    return set(p.items) <= set(q.items)


def compatible(p: Condition, q: Condition) -> bool:
    qd = q.as_dict()
    return all(qd.get(k, b) == b for k, b in p.items)


def join(p: Condition, q: Condition) -> Optional[Condition]:
    if not compatible(p, q):
        return None
    return Condition.of({**p.as_dict(), **q.as_dict()})


def extend(p: Condition, n: int, b: int) -> Condition:
    if n in p:
        raise KeyPresentError(f"{n} is already in the domain of {p}")
    return Condition.of({**p.as_dict(), n: b})


# -- partitions -------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    cond: Condition


@dataclass(frozen=True)
class Split:
    cond: Condition
    index: int
    zero: "SplitTree"
    one: "SplitTree"


SplitTree = Union[Leaf, Split]


def tree_leaves(tree: SplitTree) -> list[Condition]:
    if isinstance(tree, Leaf):
        return [tree.cond]
    return tree_leaves(tree.zero) + tree_leaves(tree.one)


def replay(tree: SplitTree, root: Condition) -> bool:
    """Check that ``tree`` is a derivation of ``root`` ◁ leaves."""
    if tree.cond != root:
        return False
    if isinstance(tree, Leaf):
        return True
    if tree.index in root:
        return False
    return (replay(tree.zero, extend(root, tree.index, 0))
            and replay(tree.one, extend(root, tree.index, 1)))


@dataclass(frozen=True)
class Partition:
    root: Condition
    leaves: tuple[Condition, ...]
    witness: SplitTree

    @classmethod
    def from_tree(cls, tree: SplitTree) -> "Partition":
        if not replay(tree, tree.cond):
            raise ValueError("split tree does not replay")
        return cls(tree.cond, tuple(sorted(tree_leaves(tree))), tree)

    @classmethod
    def trivial(cls, p: Condition) -> "Partition":
        return cls(p, (p,), Leaf(p))

    @classmethod
    def split(cls, p: Condition, n: int) -> "Partition":
        tree = Split(p, n, Leaf(extend(p, n, 0)), Leaf(extend(p, n, 1)))
        return cls.from_tree(tree)

    def refine(self, leaf: Condition, n: int) -> "Partition":
        """Split one leaf of this partition at ``n``."""

        def go(t: SplitTree) -> SplitTree:
            if isinstance(t, Leaf):
                if t.cond != leaf:
                    return t
                return Split(leaf, n, Leaf(extend(leaf, n, 0)), Leaf(extend(leaf, n, 1)))
            return Split(t.cond, t.index, go(t.zero), go(t.one))

        if leaf not in self.leaves:
            raise ValueError(f"{leaf} is not a leaf")
        return Partition.from_tree(go(self.witness))

    def all_ones_leaf(self) -> Condition:
        """Follow the 1-branch at every split."""
        t = self.witness
        while isinstance(t, Split):
            t = t.one
        return t.cond

    def is_valid(self) -> bool:
        return (replay(self.witness, self.root)
                and tuple(sorted(tree_leaves(self.witness))) == self.leaves)


def graft(tree: SplitTree, subtrees: Mapping[Condition, SplitTree]) -> SplitTree:
    """Replace leaves of ``tree`` by the split trees rooted at them."""
    if isinstance(tree, Leaf):
        return subtrees.get(tree.cond, tree)
    return Split(tree.cond, tree.index, graft(tree.zero, subtrees), graft(tree.one, subtrees))


def find_partition_witness(p: Condition, leaves: Iterable[Condition]) -> Optional[SplitTree]:
    """Search for a split tree deriving ``p`` ◁ ``leaves``.

    Split indices are drawn from keys occurring in the leaves but not in
    ``p``; every derivation can be reordered into that form.
    """
    return _search(p, frozenset(leaves))


@lru_cache(maxsize=4096)
def _search(p: Condition, leaves: frozenset[Condition]) -> Optional[SplitTree]:
    if not leaves:
        return None
    if leaves == {p}:
        return Leaf(p)
    if not all(extends(s, p) for s in leaves):
        return None
    shared = frozenset.intersection(*(s.dom for s in leaves)) - p.dom
    for n in sorted(shared):
        s0 = frozenset(s for s in leaves if s[n] == 0)
        s1 = leaves - s0
        t0 = _search(extend(p, n, 0), s0)
        if t0 is None:
            continue
        t1 = _search(extend(p, n, 1), s1)
        if t1 is not None:
            return Split(p, n, t0, t1)
    return None


def is_partition(p: Condition, leaves: Iterable[Condition]) -> bool:
    return find_partition_witness(p, leaves) is not None


def restrict_partition(s: Condition, part: Partition) -> Partition:
    """Partition of ``s`` by its joins with the compatible leaves of ``part``."""
    if not extends(s, part.root):
        raise NotAnExtensionError(f"{s} does not extend {part.root}")

    def go(t: SplitTree, c: Condition) -> SplitTree:
        if isinstance(t, Leaf):
            return Leaf(c)
        if t.index in c:
            return go(t.one if c[t.index] else t.zero, c)
        return Split(c, t.index, go(t.zero, extend(c, t.index, 0)),
                     go(t.one, extend(c, t.index, 1)))

    return Partition.from_tree(go(part.witness, s))
