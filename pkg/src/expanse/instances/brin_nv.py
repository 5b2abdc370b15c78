"""Brin–Thompson groups nV: elements [f, X^n] as canonical box tables whose domains tile X^n."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, permutations, product

from ..cantor_maps import (BoxMap, OverlapError, Region, box_canonical, box_compose, box_image,
                           box_inverse, box_union)
from ..expansion_core import ExpansionInstance, ExpansionPoset
from .thompson_v import NoWitness


def _split_first(boxes):
    b = min(boxes, key=lambda x: (sum(map(len, x)), x))
    c = min(range(len(b)), key=lambda i: (len(b[i]), i))
    halves = [b[:c] + (b[c] + bit,) + b[c + 1:] for bit in "01"]
    return sorted([x for x in boxes if x != b] + halves)


@dataclass(frozen=True)
class NVElement:
    table: BoxMap

    def __post_init__(self):
        t = box_canonical(self.table)
        if not Region.from_boxes([d for d, _ in t.rows], t.n).is_full():
            raise ValueError(f"domain of {t} does not tile X^{t.n}")
        object.__setattr__(self, "table", t)

    @classmethod
    def of(cls, n, *rows) -> "NVElement":
        return cls(BoxMap(n, tuple(rows)))

    @classmethod
    def onto(cls, box) -> "NVElement":
        """The single-row element X^n -> box."""
        box = tuple(box)
        return cls(BoxMap(len(box), ((("",) * len(box), box),)))

    @property
    def n(self) -> int:
        return self.table.n

    @cached_property
    def support(self) -> Region:
        return Region.from_boxes(box_image(self.table), self.n)

    @cached_property
    def key(self) -> str:
        def box(b):
            return ".".join(x or "e" for x in b)
        return ",".join(f"{box(d)}>{box(i)}" for d, i in self.table.rows)

    def __repr__(self):
        return f"{self.n}V[{self.key}]"

    def to_json(self):
        return {"n": self.n, **self.table.to_json()}

    @classmethod
    def from_json(cls, obj) -> "NVElement":
        return cls(BoxMap.from_json(obj))


def grid_blocks(n: int, A) -> list:
    """Boxes of the one-level grid cutting every coordinate in A."""
    choices = [("0", "1") if c in A else ("",) for c in range(n)]
    return [tuple(p) for p in product(*choices)]


def block_restriction(b: NVElement, block) -> NVElement:
    """b restricted to the box `block` and re-rooted at X^n."""
    return NVElement(box_compose(b.table, BoxMap(b.n, ((("",) * b.n, tuple(block)),))))


def glue(n: int, parts) -> NVElement:
    """Element whose restriction to the box `block` is e, for (block, e) in parts."""
    rows = []
    for block, e in parts:
        for d, i in e.table.rows:
            rows.append((tuple(p + x for p, x in zip(block, d)), i))
    return NVElement(BoxMap(n, tuple(rows)))


def axis_subsets(n: int) -> list:
    """Subsets of coordinates ordered by (size, lex)."""
    return [frozenset(A) for j in range(n + 1) for A in combinations(range(n), j)]


class BrinNV(ExpansionInstance):
    kind = "permutational"
    C1 = 2
    oracle_complete = True

    def __init__(self, n: int = 2):
        if n < 2:
            raise ValueError("nV needs n >= 2 (use ThompsonV for n = 1)")
        self.n = n
        self.name = f"{n}v"
        self.C0 = 2 ** n
        self.max_contraction = 2 ** n
        self._subsets = axis_subsets(n)

    def support(self, b):
        return b.support

    def key(self, b):
        return b.key

    def split(self, b, A) -> frozenset:
        return frozenset(block_restriction(b, blk) for blk in grid_blocks(self.n, A))

    @lru_cache(maxsize=None)
    def expansions(self, b) -> ExpansionPoset:
        subs = self._subsets
        nodes = tuple(self.split(b, A) for A in subs)
        order = frozenset((i, j) for i, A in enumerate(subs) for j, B in enumerate(subs) if A <= B)
        return ExpansionPoset(nodes, order)

    def _assemble(self, elems: frozenset, axes: tuple):
        """All elements whose grid split over `axes` is exactly `elems`."""
        if not axes:
            return [next(iter(elems))] if len(elems) == 1 else []
        c, rest = axes[0], axes[1:]
        half = len(elems) // 2
        ordered = sorted(elems, key=self.key)
        out = []
        first = ordered[0]
        others = ordered[1:]
        for pick in combinations(others, half - 1):
            s0 = frozenset((first,) + pick)
            s1 = elems - s0
            for x0 in self._assemble(s0, rest):
                for x1 in self._assemble(s1, rest):
                    for lo, hi in ((x0, x1), (x1, x0)):
                        lo_box = tuple("0" if k == c else "" for k in range(self.n))
                        hi_box = tuple("1" if k == c else "" for k in range(self.n))
                        try:
                            out.append(glue(self.n, [(lo_box, lo), (hi_box, hi)]))
                        except OverlapError:
                            return []
        return out

    @lru_cache(maxsize=None)
    def contractions(self, subset) -> list:
        m = len(subset)
        if m < 2 or m & (m - 1) or m > 2 ** self.n:
            return []
        j = m.bit_length() - 1
        found = {}
        for A in self._subsets:
            if len(A) != j:
                continue
            for c in self._assemble(frozenset(subset), tuple(sorted(A))):
                # validate by re-expansion
                if self.split(c, A) == subset:
                    found[c.key] = c
        return [found[k] for k in sorted(found)]

    def act(self, s: BoxMap, b: NVElement) -> NVElement:
        if not b.support.issubset(Region.from_boxes([d for d, _ in s.rows], self.n)):
            raise ValueError("map is not defined on the whole support")
        return NVElement(box_compose(s, b.table))

    def stabilizer(self, b):
        s = box_canonical(box_compose(b.table, box_inverse(b.table)))
        assert self.act(s, b) == b
        return {"order": 1, "type": "trivial", "elements": [s]}

    def element_to_json(self, b):
        return b.to_json()

    def element_from_json(self, obj):
        return NVElement.from_json(obj)

    def orbit_class(self, b) -> str:
        return "full" if b.support.is_full() else "proper"

    def orbit_witness(self, b1, b2) -> BoxMap:
        if self.orbit_class(b1) != self.orbit_class(b2):
            raise NoWitness("full and proper support lie in different orbits")
        core = self.translator(b1, b2)
        if b1.support.is_full():
            return core
        a = b1.support.complement().cells()
        c2 = b2.support.complement().cells()
        while len(a) != len(c2):
            if len(a) < len(c2):
                a = _split_first(a)
            else:
                c2 = _split_first(c2)
        return BoxMap(self.n, core.rows + tuple(zip(a, c2)))

    def translator(self, b1, b2) -> BoxMap:
        return box_canonical(box_compose(b2.table, box_inverse(b1.table)))

    def union_maps(self, maps) -> BoxMap:
        return box_union(list(maps))

    def map_region(self, s: BoxMap, region: Region) -> Region:
        part = box_compose(s, BoxMap(self.n, tuple((c, c) for c in region.cells())))
        return Region.from_boxes(box_image(part), self.n)

    def sample_element(self, rng, depth=2, target=None):
        return random_element(rng, self.n, target, max_depth=depth)

    def sample_full_vertex(self, rng, k, depth=2):
        return random_full_vertex(rng, self.n, k, max_depth=max(depth, (k - 1).bit_length()))

    def sample_group(self, rng, depth=2) -> BoxMap:
        return random_element(rng, self.n, max_depth=depth).table

    # directed set
    def pattern_step(self, b):
        if len(b.table.rows) == 1:
            return None
        A = frozenset(c for c in range(self.n) if any(d[c] for d, _ in b.table.rows))
        return self.split(b, A)

    def common_pattern(self, p1, p2):
        """Pairwise intersections of the two box partitions.

        Pattern vertices come from midpoint bisections, and the restriction of such a
        partition to a dyadic box is again a bisection partition, so each side expands
        to the meet."""
        boxes1 = [e.table.rows[0][1] for e in p1]
        boxes2 = [e.table.rows[0][1] for e in p2]
        meet = set()
        for x in boxes1:
            for y in boxes2:
                if all(a.startswith(b) or b.startswith(a) for a, b in zip(x, y)):
                    meet.add(tuple(max(a, b, key=len) for a, b in zip(x, y)))
        return frozenset(NVElement.onto(cell) for cell in meet)


# ------------------------------------------------------------------ sampling

def random_box_tiling(rng, n: int, leaves: int, max_depth: int = 3) -> list:
    """Random guillotine tiling of X^n by dyadic boxes."""
    boxes = [("",) * n]
    while len(boxes) < leaves:
        options = [(b, c) for b in boxes for c in range(n) if len(b[c]) < max_depth]
        if not options:
            break
        b, c = rng.choice(options)
        boxes.remove(b)
        boxes += [b[:c] + (b[c] + bit,) + b[c + 1:] for bit in "01"]
    return sorted(boxes)


def random_element(rng, n: int, target=None, leaves=None, max_depth=2) -> NVElement:
    """Random element mapping X^n onto the box `target` (default X^n)."""
    target = tuple(target or ("",) * n)
    leaves = leaves or rng.randint(1, 3)
    dom = random_box_tiling(rng, n, leaves, max_depth)
    img = random_box_tiling(rng, n, len(dom), max_depth)
    img = [tuple(t + x for t, x in zip(target, b)) for b in img]
    rng.shuffle(img)
    return NVElement(BoxMap(n, tuple(zip(dom, img))))


def random_full_vertex(rng, n: int, k: int, max_depth=2) -> frozenset:
    boxes = random_box_tiling(rng, n, k, max_depth)
    return frozenset(random_element(rng, n, b) for b in boxes)


def pattern_vertex(boxes) -> frozenset:
    return frozenset(NVElement.onto(b) for b in boxes)


def enumerate_elements(n: int, depth: int, max_rows: int = 2) -> list:
    """Canonical elements with at most max_rows rows whose dom/img boxes come from
    guillotine tilings with prefixes of length <= depth."""
    tilings = _tilings(n, depth)
    seen = set()
    for dom in tilings:
        if len(dom) > max_rows:
            continue
        for img in tilings:
            if len(img) != len(dom):
                continue
            for perm in permutations(img):
                seen.add(NVElement(BoxMap(n, tuple(zip(dom, perm)))))
    return sorted(seen, key=lambda b: b.key)


def _tilings(n, depth):
    @lru_cache(maxsize=None)
    def rec(box):
        out = {(box,)}
        for c in range(n):
            if len(box[c]) >= depth:
                continue
            lo = box[:c] + (box[c] + "0",) + box[c + 1:]
            hi = box[:c] + (box[c] + "1",) + box[c + 1:]
            for a in rec(lo):
                for b in rec(hi):
                    out.add(tuple(sorted(a + b)))
        return frozenset(out)
    return sorted(rec(("",) * n))
