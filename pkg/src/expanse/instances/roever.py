"""The Nekrashevych–Röver group: prefix maps decorated by Grigorchuk elements.

A row (dom, img, g) maps dom·w to img·g(w). Tables are kept with decorations in
K = {1, b, c, d} pushed to the coarsest cones, and elements are taken modulo
precomposition by K at the root.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations, product

from .. import grigorchuk as G
from ..cantor_maps import OverlapError, Region, comparable, partitions_root
from ..expansion_core import ExpansionInstance, ExpansionPoset
from .thompson_v import NoWitness, _split_first

KDEC = ("", "b", "c", "d")
_MAX_PUSH = 64


class RefinementOverflow(RuntimeError):
    pass


@lru_cache(maxsize=None)
def _k_of(word: str):
    k = G.in_K(word)
    if k is None:
        return None
    return "" if k == "1" else k


def _push(rows) -> list:
    """Split rows until every decoration lies in K."""
    out = []
    todo = [(d, i, G.reduce_word(g), 0) for d, i, g in rows]
    while todo:
        d, i, g, depth = todo.pop()
        k = _k_of(g)
        if k is not None:
            out.append((d, i, k))
            continue
        if depth > _MAX_PUSH:
            raise RefinementOverflow(f"decoration {g!r} did not settle in K")
        for bit in "01":
            img, sec = G.act_and_section(g, bit)
            todo.append((d + bit, i + img, G.reduce_word(sec), depth + 1))
    return out


def _merge(table: dict) -> dict:
    """Coarsen rows using 1=(1,1), d=(1,b), b=(a,c), c=(a,d)."""
    changed = True
    while changed:
        changed = False
        for d in sorted(table, key=len, reverse=True):
            if d not in table or not d:
                continue
            p = d[:-1]
            r0, r1 = table.get(p + "0"), table.get(p + "1")
            if r0 and r1:
                (m0, k0), (m1, k1) = r0, r1
                if m0 and m1 and m0[-1] == "0" and m1 == m0[:-1] + "1" and k0 == "":
                    new = {"": "", "b": "d"}.get(k1)
                    if new is not None:
                        del table[p + "0"], table[p + "1"]
                        table[p] = (m0[:-1], new)
                        changed = True
                        continue
            if len(d) >= 2:
                q = d[:-2]
                r00, r01, r1 = table.get(q + "00"), table.get(q + "01"), table.get(q + "1")
                if r00 and r01 and r1 and r00[1] == "" and r01[1] == "" and r1[1] in ("c", "d"):
                    mu = r1[0][:-1]
                    if r1[0] and r1[0][-1] == "1" and r00[0] == mu + "01" and r01[0] == mu + "00":
                        del table[q + "00"], table[q + "01"], table[q + "1"]
                        table[q] = (mu, "b" if r1[1] == "c" else "c")
                        changed = True
    return table


def _check_overlaps(rows):
    for what, pos in (("domain", 0), ("image", 1)):
        ws = sorted(r[pos] for r in rows)
        for x, y in zip(ws, ws[1:]):
            if comparable(x, y):
                raise OverlapError(x, y, where=what)


@dataclass(frozen=True)
class RoverMap:
    """Finite disjoint union of decorated prefix maps, in coarsest K-form."""
    rows: tuple

    def __post_init__(self):
        rows = []
        for d, i, g in self.rows:
            G.parse(g)
            rows.append((d, i, g))
        leaf = _push(rows)
        _check_overlaps(leaf)
        table = _merge({d: (i, k) for d, i, k in leaf})
        object.__setattr__(self, "rows", tuple(sorted((d, i, k) for d, (i, k) in table.items())))

    @classmethod
    def of(cls, *rows) -> "RoverMap":
        return cls(tuple(r if len(r) == 3 else (r[0], r[1], "") for r in rows))

    @cached_property
    def key(self) -> str:
        return ",".join(f"{d}>{i}" + (f":{k}" if k else "") for d, i, k in self.rows)

    def __call__(self, w: str):
        """Image of a finite word below some dom cone (None otherwise)."""
        for d, i, k in self.rows:
            if w.startswith(d):
                return i + G.act(k, w[len(d):])
        return None

    def __repr__(self):
        return f"RoverMap({self.key or '0'})"

    def to_json(self):
        return {"rows": [{"dom": d, "img": i, "decoration": G.to_str(k)} for d, i, k in self.rows]}

    @classmethod
    def from_json(cls, obj) -> "RoverMap":
        return cls(tuple((r["dom"], r["img"], G.parse(r.get("decoration", "1"))) for r in obj["rows"]))


def rover_compose(t2: RoverMap, t1: RoverMap) -> RoverMap:
    """t2 ∘ t1 on the overlap img(t1) ∩ dom(t2)."""
    out = []
    for g1, m1, k1 in t1.rows:
        for g2, m2, k2 in t2.rows:
            if g2.startswith(m1):
                delta = g2[len(m1):]
                pre = G.act(G.inverse(k1), delta)
                out.append((g1 + pre, m2, k2 + G.section(k1, pre)))
            elif m1.startswith(g2):
                delta = m1[len(g2):]
                img, sec = G.act_and_section(k2, delta)
                out.append((g1, m2 + img, sec + k1))
    return RoverMap(tuple(out))


def rover_inverse(t: RoverMap) -> RoverMap:
    return RoverMap(tuple((i, d, G.inverse(k)) for d, i, k in t.rows))


def root_twist(g: str) -> RoverMap:
    return RoverMap((("", "", g),))


@dataclass(frozen=True)
class RoverElement:
    """Class of [f, X] modulo f ~ f∘k, k in K; stores the least K-translate."""
    table: RoverMap

    def __post_init__(self):
        if not partitions_root(d for d, _, _ in self.table.rows):
            raise ValueError(f"domain of {self.table} does not tile X")
        best = min((rover_compose(self.table, root_twist(k)) for k in KDEC),
                   key=lambda t: (len(t.rows), t.key))
        object.__setattr__(self, "table", best)

    @classmethod
    def of(cls, *rows) -> "RoverElement":
        return cls(RoverMap.of(*rows))

    @cached_property
    def support(self) -> Region:
        return Region.from_cones(i for _, i, _ in self.table.rows)

    @property
    def key(self) -> str:
        return self.table.key

    @property
    def full(self) -> bool:
        return self.support.is_full()

    def __hash__(self):
        return hash(self.table.key)

    def __eq__(self, other):
        return isinstance(other, RoverElement) and self.table.key == other.table.key

    def __repr__(self):
        return f"R[{self.key or 'ε'}]"

    def to_json(self):
        return self.table.to_json()

    @classmethod
    def from_json(cls, obj) -> "RoverElement":
        return cls(RoverMap.from_json(obj))


IDENTITY = RoverElement.of(("", "", ""))


def precompose(b: RoverElement, s: RoverMap) -> RoverElement:
    return RoverElement(rover_compose(b.table, s))


def half(b: RoverElement, x: str, twist: str = "") -> RoverElement:
    """b restricted to X_x, re-rooted, then precomposed with `twist`."""
    return precompose(b, RoverMap(((("", x, twist)),)))


def glue(parts) -> RoverElement:
    """Element acting as the map t on X_w, for (w, t) in parts (t a RoverMap or element)."""
    rows = []
    for w, t in parts:
        t = getattr(t, "table", t)
        rows.extend((w + d, i, k) for d, i, k in t.rows)
    return RoverElement(RoverMap(tuple(rows)))


def twisted(b: RoverElement, k: str) -> RoverMap:
    return rover_compose(b.table, root_twist(k))


_SQUARE = frozenset({(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (0, 2), (0, 3), (1, 3), (2, 3)})


class Rover(ExpansionInstance):
    name = "rover"
    kind = "permutational"
    C0 = 3
    C1 = 2
    oracle_complete = True

    def support(self, b):
        return b.support

    def key(self, b):
        return b.key

    @lru_cache(maxsize=None)
    def square(self, b) -> dict:
        """The four vertices: untwisted halves, a-twisted left half, three-fold split."""
        t0, t1 = half(b, "0"), half(b, "1")
        plain = frozenset([t0, t1])
        twisted = frozenset([half(b, "0", "a"), t1])
        top = frozenset([half(b, "00"), half(b, "01"), t1])
        return {"bottom": frozenset([b]), "plain": plain, "twisted": twisted, "top": top}

    @lru_cache(maxsize=None)
    def expansions(self, b) -> ExpansionPoset:
        sq = self.square(b)
        mid = sorted([sq["plain"], sq["twisted"]], key=lambda v: sorted(self.key(e) for e in v))
        return ExpansionPoset((sq["bottom"], mid[0], mid[1], sq["top"]), _SQUARE)

    @lru_cache(maxsize=None)
    def contractions(self, subset) -> list:
        subset = frozenset(subset)
        elems = sorted(subset, key=self.key)
        found = {}
        try:
            if len(elems) == 2:
                for x, y in permutations(elems):
                    for k1, k2 in product(KDEC + ("a",), KDEC):
                        c = glue([("0", twisted(x, k1)), ("1", twisted(y, k2))])
                        found.setdefault(c.key, c)
            elif len(elems) == 3:
                for z in elems:
                    x, y = [e for e in elems if e != z]
                    for k1, k2, k3 in product(KDEC, repeat=3):
                        c = glue([("00", twisted(x, k1)), ("01", twisted(y, k2)), ("1", twisted(z, k3))])
                        found.setdefault(c.key, c)
            else:
                return []
        except OverlapError:
            return []
        # validate by re-expansion
        return [found[k] for k in sorted(found) if subset in self.expansions(found[k]).nodes[1:]]

    def act(self, s: RoverMap, b: RoverElement) -> RoverElement:
        if not b.support.issubset(Region.from_cones(d for d, _, _ in s.rows)):
            raise ValueError("map is not defined on the whole support")
        return RoverElement(rover_compose(s, b.table))

    def stabilizer(self, b):
        """f k f^-1 for k in K, with the group table checked."""
        inv = rover_inverse(b.table)
        elems = {k or "1": rover_compose(rover_compose(b.table, root_twist(k)), inv) for k in KDEC}
        for s in elems.values():
            assert self.act(s, b) == b
        keys = {s.key for s in elems.values()}
        table = {}
        for x, sx in elems.items():
            for y, sy in elems.items():
                prod_key = rover_compose(sx, sy).key
                z = G.k_mul(x, y)
                table[(x, y)] = z
                assert prod_key == elems[z].key, (x, y)
        return {"order": len(keys), "type": "klein four" if len(keys) == 4 else "?",
                "elements": list(elems.values()), "table": table}

    def element_to_json(self, b):
        return b.to_json()

    def element_from_json(self, obj):
        return RoverElement.from_json(obj)

    def orbit_class(self, b) -> str:
        return "full" if b.full else "proper"

    def orbit_witness(self, b1, b2) -> RoverMap:
        if self.orbit_class(b1) != self.orbit_class(b2):
            raise NoWitness("full and proper support lie in different orbits")
        core = rover_compose(b2.table, rover_inverse(b1.table))
        if b1.full:
            return core
        a = [c[0] for c in b1.support.complement().cells()]
        c2 = [c[0] for c in b2.support.complement().cells()]
        while len(a) != len(c2):
            if len(a) < len(c2):
                a = _split_first(a)
            else:
                c2 = _split_first(c2)
        return RoverMap(core.rows + tuple((x, y, "") for x, y in zip(a, c2)))

    def translator(self, b1, b2) -> RoverMap:
        return rover_compose(b2.table, rover_inverse(b1.table))

    def union_maps(self, maps) -> RoverMap:
        return RoverMap(tuple(r for m in maps for r in m.rows))

    def map_region(self, s: RoverMap, region: Region) -> Region:
        part = rover_compose(s, RoverMap(tuple((c[0], c[0], "") for c in region.cells())))
        return Region.from_cones(i for _, i, _ in part.rows)

    def sample_element(self, rng, depth=2, cone=""):
        return random_element(rng, cone)

    def sample_full_vertex(self, rng, k, depth=2):
        return random_full_vertex(rng, k)

    def sample_group(self, rng, depth=2) -> RoverMap:
        return random_element(rng).table

    def pattern_step(self, b):
        if len(b.table.rows) > 1:
            return self.square(b)["plain"]
        return None

    def common_pattern(self, p1, p2):
        cones1 = [b.table.rows[0][1] for b in p1]
        cones2 = [b.table.rows[0][1] for b in p2]
        meet = set()
        for x in cones1:
            for y in cones2:
                if x.startswith(y):
                    meet.add(x)
                elif y.startswith(x):
                    meet.add(y)
        return frozenset(RoverElement.of(("", m, "")) for m in meet)


# ------------------------------------------------------------------ sampling

def random_element(rng, support_cone="", leaves=None, word_len=3) -> RoverElement:
    from .thompson_v import random_tree
    leaves = leaves or rng.randint(1, 3)
    dom = random_tree(rng, leaves, 2)
    img = [support_cone + w for w in random_tree(rng, len(dom), 2)]
    rng.shuffle(img)
    rows = [(d, i, "".join(rng.choice("abcd") for _ in range(rng.randint(0, word_len))))
            for d, i in zip(dom, img)]
    return RoverElement(RoverMap(tuple(rows)))


def random_full_vertex(rng, k: int) -> frozenset:
    from .thompson_v import random_tree
    return frozenset(random_element(rng, c) for c in random_tree(rng, k, max(3, (k - 1).bit_length())))


def pattern_vertex(cones) -> frozenset:
    return frozenset(RoverElement.of(("", c, "")) for c in cones)


def enumerate_elements(depth: int = 1) -> list:
    """Classes with dom and img prefixes of length <= depth and K decorations."""
    from .thompson_v import enumerate_elements as v_elems
    seen = {}
    for e in v_elems(depth, depth):
        rows = e.table.rows
        for decs in product(KDEC, repeat=len(rows)):
            r = RoverElement(RoverMap(tuple((d, i, k) for (d, i), k in zip(rows, decs))))
            seen.setdefault(r.key, r)
    return [seen[k] for k in sorted(seen)]
