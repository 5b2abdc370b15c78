"""Prefix-replacement maps on the Cantor set X = {0,1}^N and on X^n.

Words are plain strings over "0"/"1"; the empty string is the root cone X.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

Word = str


class OverlapError(ValueError):
    def __init__(self, a, b, where="domain"):
        super().__init__(f"{where} cones {a!r} and {b!r} overlap")
        self.pair = (a, b)
        self.where = where


def check_word(w: str) -> str:
    if not isinstance(w, str) or w.strip("01"):
        raise ValueError(f"not a binary word: {w!r}")
    return w


def comparable(a: Word, b: Word) -> bool:
    return a.startswith(b) or b.startswith(a)


def cones_disjoint(a: Word, b: Word) -> bool:
    return not comparable(a, b)


def _first_overlap(words):
    ws = sorted(words)
    # in sorted order a prefix sits directly before some extension of it
    for x, y in zip(ws, ws[1:]):
        if y.startswith(x):
            return x, y
    return None


def normalize_cones(cones: Iterable[Word]) -> frozenset:
    """Maximal-cone form of a finite union of cones (drop nested cones, merge siblings)."""
    kept = []
    for c in sorted(set(cones)):
        # in sorted order a covering cone comes before everything it contains
        if kept and c.startswith(kept[-1]):
            continue
        kept.append(c)
    by_len = {}
    for c in kept:
        by_len.setdefault(len(c), set()).add(c)
    for n in range(max(by_len, default=0), 0, -1):
        level = by_len.get(n, set())
        for c in sorted(level):
            if c[-1] == "0" and c in level and c[:-1] + "1" in level:
                level.discard(c)
                level.discard(c[:-1] + "1")
                by_len.setdefault(n - 1, set()).add(c[:-1])
    return frozenset(c for level in by_len.values() for c in level)


# ---------------------------------------------------------------- TableMap

@dataclass(frozen=True)
class TableMap:
    """Finite disjoint union of prefix maps sigma_dom^img, kept reduced and sorted by dom."""
    rows: tuple

    def __post_init__(self):
        rows = tuple(sorted((check_word(d), check_word(i)) for d, i in self.rows))
        bad = _first_overlap(d for d, _ in rows)
        if bad:
            raise OverlapError(*bad, where="domain")
        bad = _first_overlap(i for _, i in rows)
        if bad:
            raise OverlapError(*bad, where="image")
        object.__setattr__(self, "rows", _reduce_rows(rows))

    @classmethod
    def of(cls, *rows) -> "TableMap":
        return cls(tuple(rows))

    @classmethod
    def _trusted(cls, rows) -> "TableMap":
        """Skip validation for rows produced from valid tables (composition, inversion)."""
        t = object.__new__(cls)
        object.__setattr__(t, "rows", _reduce_rows(sorted(rows)))
        return t

    @classmethod
    def identity(cls, cones: Iterable[Word] = ("",)) -> "TableMap":
        return cls(tuple((c, c) for c in cones))

    @property
    def is_zero(self) -> bool:
        return not self.rows

    def __call__(self, w: Word):
        """Image of a finite word whose prefix lies in some dom cone (None otherwise)."""
        for d, i in self.rows:
            if w.startswith(d):
                return i + w[len(d):]
        return None

    def __repr__(self):
        if not self.rows:
            return "TableMap(0)"
        body = ", ".join(f"{d or 'ε'}→{i or 'ε'}" for d, i in self.rows)
        return f"TableMap({body})"

    def to_json(self):
        return {"rows": [[d, i] for d, i in self.rows]}

    @classmethod
    def from_json(cls, obj) -> "TableMap":
        return cls(tuple((d, i) for d, i in obj["rows"]))

    def max_prefix_len(self) -> int:
        return max((max(len(d), len(i)) for d, i in self.rows), default=0)


def prefix_map(dom: Word, img: Word) -> TableMap:
    return TableMap(((dom, img),))


def _mergeable(table, d) -> bool:
    if not d or d[-1] != "0":
        return False
    i1 = table.get(d[:-1] + "1")
    i0 = table[d]
    return i1 is not None and i0 != "" and i0[-1] == "0" and i1 == i0[:-1] + "1"


def _reduce_rows(rows) -> tuple:
    """Merge sibling rows with sibling images until none are left; rows come sorted."""
    if len(rows) < 2:
        return tuple(rows)
    table = dict(rows)
    if not any(_mergeable(table, d) for d in table):
        return tuple(rows)
    changed = True
    while changed:
        changed = False
        for d in sorted(table, key=len, reverse=True):
            if d in table and _mergeable(table, d):
                i0 = table.pop(d)
                del table[d[:-1] + "1"]
                table[d[:-1]] = i0[:-1]
                changed = True
    return tuple(sorted(table.items()))


ZERO = TableMap(())


def reduce(t: TableMap) -> TableMap:
    # construction already reduces; kept as an explicit operation
    return TableMap(_reduce_rows(t.rows))


def compose(s1: TableMap, s2: TableMap) -> TableMap:
    """s1 ∘ s2 on the overlap img(s2) ∩ dom(s1)."""
    out = []
    for a2, b2 in s2.rows:
        for a1, b1 in s1.rows:
            if a1.startswith(b2):
                out.append((a2 + a1[len(b2):], b1))
            elif b2.startswith(a1):
                out.append((a2, b1 + b2[len(a1):]))
    return TableMap._trusted(out)


def inverse(s: TableMap) -> TableMap:
    return TableMap._trusted([(i, d) for d, i in s.rows])


def restrict(s: TableMap, cones: Iterable[Word]) -> TableMap:
    D = normalize_cones(cones)
    return compose(s, TableMap.identity(D))


def disjoint_union(parts: Sequence[TableMap]) -> TableMap:
    rows = []
    for p in parts:
        rows.extend(p.rows)
    for k, (d, i) in enumerate(rows):
        for d2, i2 in rows[k + 1:]:
            if comparable(d, d2):
                raise OverlapError(d, d2, where="domain")
            if comparable(i, i2):
                raise OverlapError(i, i2, where="image")
    return TableMap(tuple(rows))


def equal_extensional(t1: TableMap, t2: TableMap) -> bool:
    return reduce(t1).rows == reduce(t2).rows


def image_cones(t: TableMap) -> frozenset:
    return frozenset(i for _, i in t.rows)


def domain_cones(t: TableMap) -> frozenset:
    return frozenset(d for d, _ in t.rows)


def partitions_root(cones: Iterable[Word]) -> bool:
    return normalize_cones(cones) == frozenset({""})


def tiles_root(disjoint_cones) -> bool:
    """For pairwise disjoint cones: do they cover X? (total measure 1)"""
    cones = list(disjoint_cones)
    if not cones:
        return False
    top = max(len(c) for c in cones)
    return sum(1 << (top - len(c)) for c in cones) == 1 << top


def all_words(length: int):
    return ["".join(p) for p in product("01", repeat=length)]


def extensional(t: TableMap, depth: int = 6) -> dict:
    """Graph of t on all words of the given length; a test oracle independent of reduce."""
    if any(max(len(d), len(i)) > depth - 2 for d, i in t.rows):
        raise ValueError(f"row prefix longer than depth-2 = {depth - 2}")
    out = {}
    for w in all_words(depth):
        for d, i in t.rows:
            if w.startswith(d):
                out[w] = i + w[len(d):]
                break
    return out


# ---------------------------------------------------------------- BoxMap

def _box_comparable(a, b) -> bool:
    return all(comparable(x, y) for x, y in zip(a, b))


def _box_contains(big, small) -> bool:
    return all(s.startswith(b) for b, s in zip(big, small))


@dataclass(frozen=True)
class BoxMap:
    """Coordinate-wise prefix maps on X^n. rows: ((dom_1..dom_n), (img_1..img_n))."""
    n: int
    rows: tuple

    def __post_init__(self):
        rows = []
        for dom, img in self.rows:
            dom = tuple(check_word(x) for x in dom)
            img = tuple(check_word(x) for x in img)
            if len(dom) != self.n or len(img) != self.n:
                raise ValueError("box arity mismatch")
            rows.append((dom, img))
        rows.sort()
        for k, (d, i) in enumerate(rows):
            for d2, i2 in rows[k + 1:]:
                if _box_comparable(d, d2):
                    raise OverlapError(d, d2, where="domain")
                if _box_comparable(i, i2):
                    raise OverlapError(i, i2, where="image")
        object.__setattr__(self, "rows", tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "BoxMap":
        return cls(n, ((("",) * n, ("",) * n),))

    def __call__(self, ws):
        for d, i in self.rows:
            if all(w.startswith(x) for w, x in zip(ws, d)):
                return tuple(y + w[len(x):] for w, x, y in zip(ws, d, i))
        return None

    def to_json(self):
        return {"rows": [[[d[c], i[c]] for c in range(self.n)] for d, i in self.rows]}

    @classmethod
    def from_json(cls, obj) -> "BoxMap":
        rows = []
        for r in obj["rows"]:
            rows.append((tuple(p[0] for p in r), tuple(p[1] for p in r)))
        n = len(obj["rows"][0]) if obj["rows"] else obj.get("n", 2)
        return cls(n, tuple(rows))

    def __repr__(self):
        def box(b):
            return "×".join(x or "ε" for x in b)
        return "BoxMap(" + ", ".join(f"{box(d)}→{box(i)}" for d, i in self.rows) + ")"


def box_compose(s1: BoxMap, s2: BoxMap) -> BoxMap:
    out = []
    for a2, b2 in s2.rows:
        for a1, b1 in s1.rows:
            if not _box_comparable(a1, b2):
                continue
            dom, img = [], []
            for c in range(s1.n):
                if a1[c].startswith(b2[c]):
                    dom.append(a2[c] + a1[c][len(b2[c]):])
                    img.append(b1[c])
                else:
                    dom.append(a2[c])
                    img.append(b1[c] + b2[c][len(a1[c]):])
            out.append((tuple(dom), tuple(img)))
    return BoxMap(s1.n, tuple(out))


def box_inverse(s: BoxMap) -> BoxMap:
    return BoxMap(s.n, tuple((i, d) for d, i in s.rows))


def box_union(parts: Sequence[BoxMap]) -> BoxMap:
    rows = []
    for p in parts:
        rows.extend(p.rows)
    return BoxMap(parts[0].n, tuple(rows))


def box_restrict(s: BoxMap, boxes) -> BoxMap:
    return box_compose(s, BoxMap(s.n, tuple((b, b) for b in boxes)))


def _try_merge(r1, r2):
    (d1, i1), (d2, i2) = r1, r2
    diff = [c for c in range(len(d1)) if d1[c] != d2[c]]
    if len(diff) != 1:
        return None
    c = diff[0]
    if any(i1[x] != i2[x] for x in range(len(i1)) if x != c):
        return None
    a, b = d1[c], d2[c]
    p, q = i1[c], i2[c]
    if a and b and a[:-1] == b[:-1] and a[-1] != b[-1] and p and q and p[:-1] == q[:-1]:
        # sibling doms must go to sibling imgs in the same order
        if (a[-1] == p[-1]) and (b[-1] == q[-1]):
            dom = d1[:c] + (a[:-1],) + d1[c + 1:]
            img = i1[:c] + (p[:-1],) + i1[c + 1:]
            return dom, img
    return None


def box_reduce(s: BoxMap) -> BoxMap:
    """Greedy merge of 2x1 / 1x2 sibling blocks in a fixed scan order."""
    rows = list(s.rows)
    changed = True
    while changed:
        changed = False
        rows.sort()
        for x in range(len(rows)):
            for y in range(x + 1, len(rows)):
                m = _try_merge(rows[x], rows[y])
                if m:
                    rows = [r for k, r in enumerate(rows) if k not in (x, y)] + [m]
                    changed = True
                    break
            if changed:
                break
    return BoxMap(s.n, tuple(rows))


def kd_cells(box, n: int):
    """Tile a box by cells of the round-robin k-d subdivision (coordinate = level mod n)."""
    out = []

    def rec(node, level):
        if _box_contains(box, node):
            out.append(node)
            return
        if not _box_comparable(box, node):
            return
        c = level % n
        for bit in "01":
            rec(node[:c] + (node[c] + bit,) + node[c + 1:], level + 1)

    rec(("",) * n, 0)
    return out


def _kd_level(box) -> int:
    return sum(len(x) for x in box)


def box_canonical(s: BoxMap) -> BoxMap:
    """Unique normal form: maximal k-d cells on which s is a single coordinate-wise prefix map."""
    n = s.n
    table = {}
    for d, i in s.rows:
        for cell in kd_cells(d, n):
            table[cell] = tuple(i[c] + cell[c][len(d[c]):] for c in range(n))
    changed = True
    while changed:
        changed = False
        for cell in sorted(table, key=_kd_level, reverse=True):
            if cell not in table:
                continue
            lvl = _kd_level(cell)
            if lvl == 0:
                continue
            c = (lvl - 1) % n
            if cell[c][-1] != "0":
                continue
            sib = cell[:c] + (cell[c][:-1] + "1",) + cell[c + 1:]
            if sib not in table:
                continue
            i0, i1 = table[cell], table[sib]
            if any(i0[x] != i1[x] for x in range(n) if x != c):
                continue
            if i0[c] and i0[c][-1] == "0" and i1[c] == i0[c][:-1] + "1":
                del table[cell], table[sib]
                table[cell[:c] + (cell[c][:-1],) + cell[c + 1:]] = i0[:c] + (i0[c][:-1],) + i0[c + 1:]
                changed = True
    return BoxMap(n, tuple(table.items()))


def box_equal(s1: BoxMap, s2: BoxMap) -> bool:
    return box_canonical(s1).rows == box_canonical(s2).rows


def box_image(s: BoxMap) -> frozenset:
    return frozenset(i for _, i in s.rows)


def box_extensional(s: BoxMap, depth: int = 6) -> dict:
    if any(len(x) > depth - 2 for d, i in s.rows for x in d + i):
        raise ValueError(f"row prefix longer than depth-2 = {depth - 2}")
    out = {}
    words = all_words(depth)
    for ws in product(words, repeat=s.n):
        y = s(ws)
        if y is not None:
            out[ws] = y
    return out


# ---------------------------------------------------------------- regions

def _norm(t0, t1):
    if t0 is True and t1 is True:
        return True
    if t0 is False and t1 is False:
        return False
    return (t0, t1)


def _box_trie(box, n):
    def rec(node, level):
        if _box_contains(box, node):
            return True
        if not _box_comparable(box, node):
            return False
        c = level % n
        kids = [rec(node[:c] + (node[c] + bit,) + node[c + 1:], level + 1) for bit in "01"]
        return _norm(*kids)
    return rec(("",) * n, 0)


def _union(a, b):
    if a is True or b is True:
        return True
    if a is False:
        return b
    if b is False:
        return a
    return _norm(_union(a[0], b[0]), _union(a[1], b[1]))


def _inter(a, b):
    if a is False or b is False:
        return False
    if a is True:
        return b
    if b is True:
        return a
    return _norm(_inter(a[0], b[0]), _inter(a[1], b[1]))


def _subset(a, b) -> bool:
    if a is False or b is True:
        return True
    if b is False or a is True:
        return False
    return _subset(a[0], b[0]) and _subset(a[1], b[1])


def _disjoint(a, b) -> bool:
    if a is False or b is False:
        return True
    if a is True or b is True:
        return False
    return _disjoint(a[0], b[0]) and _disjoint(a[1], b[1])


def _neg(t):
    if t is True:
        return False
    if t is False:
        return True
    return (_neg(t[0]), _neg(t[1]))


def _leaves(t, node, level, n, out):
    if t is False:
        return
    if t is True:
        out.append(node)
        return
    c = level % n
    for bit, sub in zip("01", t):
        _leaves(sub, node[:c] + (node[c] + bit,) + node[c + 1:], level + 1, n, out)


@dataclass(frozen=True)
class Region:
    """Clopen subset of X^n stored as a normalized round-robin k-d trie (so == is set equality)."""
    n: int
    trie: object

    @classmethod
    def from_boxes(cls, boxes, n: int) -> "Region":
        t = False
        for b in boxes:
            t = _union(t, _box_trie(tuple(b), n))
        return cls(n, t)

    @classmethod
    def from_cones(cls, cones) -> "Region":
        return cls.from_boxes([(c,) for c in cones], 1)

    def __or__(self, other):
        return Region(self.n, _union(self.trie, other.trie))

    def __and__(self, other):
        return Region(self.n, _inter(self.trie, other.trie))

    def issubset(self, other) -> bool:
        return _subset(self.trie, other.trie)

    def isdisjoint(self, other) -> bool:
        return _disjoint(self.trie, other.trie)

    def is_empty(self) -> bool:
        return self.trie is False

    def is_full(self) -> bool:
        return self.trie is True

    def complement(self) -> "Region":
        return Region(self.n, _neg(self.trie))

    def cells(self):
        out = []
        _leaves(self.trie, ("",) * self.n, 0, self.n, out)
        return out

    def __repr__(self):
        cells = self.cells()
        if self.n == 1:
            return "Region{" + ",".join(c[0] or "ε" for c in cells) + "}"
        return "Region{" + ",".join("×".join(x or "ε" for x in c) for c in cells) + "}"


def union_regions(regions):
    regions = list(regions)
    out = regions[0]
    for r in regions[1:]:
        out = out | r
    return out
