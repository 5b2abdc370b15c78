"""Interval-supported toy expansion sets of linear and cyclic kind.

An element is a binary tree laid on consecutive unit cells starting at `start`.
It splits into its two subtrees; an adjacent ordered pair contracts uniquely.
With `modulus` set the cells live on a circle.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..expansion_core import ExpansionInstance, ExpansionPoset

LEAF = "."


def leaves(tree) -> int:
    return 1 if tree == LEAF else leaves(tree[0]) + leaves(tree[1])


def show(tree) -> str:
    return LEAF if tree == LEAF else f"({show(tree[0])}{show(tree[1])})"


@dataclass(frozen=True)
class Interval:
    start: int
    tree: object = LEAF

    @property
    def size(self) -> int:
        return leaves(self.tree)


class OrderedToy(ExpansionInstance):
    C0 = 2
    C1 = 2
    oracle_complete = True

    def __init__(self, kind: str = "linear", modulus: int | None = None):
        if kind not in ("linear", "cyclic"):
            raise ValueError(kind)
        if kind == "cyclic" and not modulus:
            raise ValueError("cyclic toy needs a modulus")
        self.kind = kind
        self.modulus = modulus if kind == "cyclic" else None
        self.name = f"toy-{kind}"

    def _pos(self, x: int) -> int:
        return x % self.modulus if self.modulus else x

    def support(self, b):
        return frozenset(self._pos(b.start + i) for i in range(b.size))

    def key(self, b):
        return f"{b.start:06d}:{show(b.tree)}"

    @lru_cache(maxsize=None)
    def expansions(self, b) -> ExpansionPoset:
        if b.tree == LEAF:
            return ExpansionPoset((frozenset([b]),), frozenset({(0, 0)}))
        left = Interval(b.start, b.tree[0])
        right = Interval(self._pos(b.start + left.size), b.tree[1])
        return ExpansionPoset((frozenset([b]), frozenset([left, right])),
                              frozenset({(0, 0), (1, 1), (0, 1)}))

    @lru_cache(maxsize=None)
    def contractions(self, subset) -> list:
        if len(subset) != 2:
            return []
        x, y = sorted(subset, key=self.key)
        out = []
        for p, q in ((x, y), (y, x)):
            if self._pos(p.start + p.size) == q.start:
                if self.modulus and p.size + q.size > self.modulus:
                    continue
                out.append(Interval(p.start, (p.tree, q.tree)))
        return out

    def act(self, shift: int, b):
        """Translation by `shift` cells (rotation in the cyclic case)."""
        return Interval(self._pos(b.start + shift), b.tree)

    def stabilizer(self, b):
        return {"order": 1, "type": "trivial", "elements": [0]}

    def element_to_json(self, b):
        return {"start": b.start, "tree": show(b.tree)}

    def element_from_json(self, obj):
        return Interval(obj["start"], parse_tree(obj["tree"]))


def parse_tree(s: str):
    def rec(i):
        if s[i] == LEAF:
            return LEAF, i + 1
        if s[i] != "(":
            raise ValueError(f"bad tree {s!r}")
        a, i = rec(i + 1)
        b, i = rec(i)
        if s[i] != ")":
            raise ValueError(f"bad tree {s!r}")
        return (a, b), i + 1
    t, end = rec(0)
    if end != len(s):
        raise ValueError(f"trailing text in {s!r}")
    return t


def unit_vertex(k: int) -> frozenset:
    """k consecutive unit cells 0..k-1 (a full circle when the modulus is k)."""
    return frozenset(Interval(i) for i in range(k))
