"""Thompson's group V: elements [f, X] stored as reduced tables whose domains tile X."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations

from ..cantor_maps import (Region, TableMap, compose, disjoint_union, image_cones,
                           inverse, tiles_root)
from ..expansion_core import ExpansionInstance, ExpansionPoset


class NoWitness(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class VElement:
    table: TableMap

    def __eq__(self, other):
        return isinstance(other, VElement) and self.table.rows == other.table.rows

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash(self.table.rows)

    def __post_init__(self):
        if not tiles_root(d for d, _ in self.table.rows):
            raise ValueError(f"domain of {self.table} does not tile X")

    @classmethod
    def of(cls, *rows) -> "VElement":
        return cls(TableMap(tuple(rows)))

    @classmethod
    def _trusted(cls, table: TableMap) -> "VElement":
        e = object.__new__(cls)
        object.__setattr__(e, "table", table)
        return e

    @cached_property
    def support(self) -> Region:
        return Region.from_cones(image_cones(self.table))

    @cached_property
    def key(self) -> str:
        return ",".join(f"{d}>{i}" for d, i in self.table.rows)

    @property
    def full(self) -> bool:
        return self.support.is_full()

    def __repr__(self):
        return f"V[{self.key.replace('>', '→') or 'ε'}]"

    def to_json(self):
        return self.table.to_json()

    @classmethod
    def from_json(cls, obj) -> "VElement":
        return cls(TableMap.from_json(obj))


IDENTITY = VElement.of(("", ""))


def half(b: VElement, x: str) -> VElement:
    """b restricted to the cone X_x and re-rooted."""
    rows = []
    for d, i in b.table.rows:
        if d.startswith(x):
            rows.append((d[len(x):], i))
        elif x.startswith(d):
            rows.append(("", i + x[len(d):]))
    # a restriction of a tiling re-rooted at x still tiles X
    return VElement._trusted(TableMap._trusted(rows))


def glue(parts, disjoint=False) -> VElement:
    """Element whose restriction to X_w is parts[w] (w ranging over a tiling of X).

    With disjoint=True the caller vouches for disjoint supports and a tiling."""
    rows = []
    for w, e in parts:
        rows.extend((w + d, i) for d, i in e.table.rows)
    if disjoint:
        return VElement._trusted(TableMap._trusted(rows))
    return VElement(TableMap(tuple(rows)))


class ThompsonV(ExpansionInstance):
    name = "v"
    kind = "permutational"
    C0 = 2
    C1 = 2
    oracle_complete = True

    def support(self, b):
        return b.support

    def key(self, b):
        return b.key

    @lru_cache(maxsize=None)
    def expansions(self, b) -> ExpansionPoset:
        top = frozenset([half(b, "0"), half(b, "1")])
        return ExpansionPoset((frozenset([b]), top), frozenset({(0, 0), (1, 1), (0, 1)}))

    def contractions(self, subset) -> list:
        if len(subset) != 2:
            return []
        x, y = subset
        if not x.support.isdisjoint(y.support):
            return []
        out = []
        for p, q in ((x, y), (y, x)):
            c = glue([("0", p), ("1", q)], disjoint=True)
            # validate by re-expansion
            if frozenset([half(c, "0"), half(c, "1")]) == subset:
                out.append(c)
        return sorted(out, key=self.key)

    def act(self, s: TableMap, b: VElement) -> VElement:
        if not b.support.issubset(Region.from_cones(d for d, _ in s.rows)):
            raise ValueError("map is not defined on the whole support")
        return VElement(compose(s, b.table))

    def stabilizer(self, b):
        """Maps s with dom = img = supp(b) and s.b = b; s∘f = f forces s = id on supp(b)."""
        s = compose(b.table, inverse(b.table))
        assert self.act(s, b) == b
        return {"order": 1, "type": "trivial", "elements": [s]}

    def equal(self, b1, b2):
        return b1 == b2

    def element_to_json(self, b):
        return b.to_json()

    def element_from_json(self, obj):
        return VElement.from_json(obj)

    # orbits
    def orbit_class(self, b) -> str:
        return "full" if b.full else "proper"

    def orbit_witness(self, b1, b2) -> TableMap:
        if self.orbit_class(b1) != self.orbit_class(b2):
            raise NoWitness("full and proper support lie in different orbits")
        core = compose(b2.table, inverse(b1.table))
        if b1.full:
            return core
        a = [c[0] for c in b1.support.complement().cells()]
        c2 = [c[0] for c in b2.support.complement().cells()]
        while len(a) != len(c2):
            if len(a) < len(c2):
                a = _split_first(a)
            else:
                c2 = _split_first(c2)
        return disjoint_union([core, TableMap(tuple(zip(a, c2)))])

    # maps
    def translator(self, b1, b2) -> TableMap:
        """The map supp(b1) -> supp(b2) carrying b1 to b2."""
        return compose(b2.table, inverse(b1.table))

    def union_maps(self, maps) -> TableMap:
        return disjoint_union(list(maps))

    def map_region(self, s: TableMap, region: Region) -> Region:
        part = compose(s, TableMap.identity(c[0] for c in region.cells()))
        return Region.from_cones(image_cones(part))

    # sampling
    def sample_element(self, rng, depth=3, cone=""):
        return random_element(rng, cone, depth)

    def sample_full_vertex(self, rng, k, depth=3):
        return random_full_vertex(rng, k, dom_depth=2, max_depth=max(depth, (k - 1).bit_length()))

    def sample_group(self, rng, depth=3) -> TableMap:
        return random_element(rng, "", depth).table

    # directed set
    def pattern_step(self, b):
        if len(b.table.rows) > 1:
            return self.expansions(b).nodes[1]
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
        return frozenset(VElement.of(("", m)) for m in meet)


def _split_first(cones):
    c = min(cones, key=lambda x: (len(x), x))
    out = [x for x in cones if x != c] + [c + "0", c + "1"]
    return sorted(out)


# ------------------------------------------------------------------ enumeration

def prefix_codes(depth: int):
    """Complete prefix codes (leaf sets of full binary trees) of depth <= depth."""
    if depth == 0:
        return [[""]]
    sub = prefix_codes(depth - 1)
    out = [[""]]
    for L in sub:
        for R in sub:
            out.append(["0" + x for x in L] + ["1" + x for x in R])
    return out


def antichains(cones, size):
    cones = sorted(cones)

    def rec(start, chosen):
        if len(chosen) == size:
            yield list(chosen)
            return
        for i in range(start, len(cones)):
            c = cones[i]
            if all(not (c.startswith(x) or x.startswith(c)) for x in chosen):
                yield from rec(i + 1, chosen + [c])

    yield from rec(0, [])


def enumerate_elements(dom_depth: int, img_depth: int, max_rows=None) -> list:
    """All canonical elements having some representative with dom prefixes of
    length <= dom_depth and image prefixes of length <= img_depth."""
    cones = [w for n in range(img_depth + 1) for w in _words(n)]
    seen = set()
    for code in prefix_codes(dom_depth):
        m = len(code)
        if max_rows is not None and m > max_rows:
            continue
        for imgs in antichains(cones, m):
            for perm in permutations(imgs):
                seen.add(VElement(TableMap(tuple(zip(code, perm)))))
    return sorted(seen, key=lambda b: b.key)


def _words(n):
    if n == 0:
        return [""]
    return [w + c for w in _words(n - 1) for c in "01"]


def random_element(rng, support_cone="", dom_depth=3, leaves=None) -> VElement:
    """Random element mapping X onto the cone X_support_cone."""
    leaves = leaves or rng.randint(1, 4)
    dom = random_tree(rng, leaves, dom_depth)
    img = random_tree(rng, len(dom), dom_depth)
    img = [support_cone + w for w in img]
    rng.shuffle(img)
    return VElement(TableMap(tuple(zip(dom, img))))


def random_tree(rng, leaves: int, max_depth: int = 99) -> list:
    """Leaves of a random full binary tree (as a prefix code)."""
    code = [""]
    while len(code) < leaves:
        options = [c for c in code if len(c) < max_depth]
        if not options:
            break
        c = rng.choice(options)
        code.remove(c)
        code += [c + "0", c + "1"]
    return sorted(code)


def random_full_vertex(rng, k: int, dom_depth=2, max_depth=99) -> frozenset:
    """Random height-k vertex whose supports tile X."""
    cones = random_tree(rng, k, max_depth)
    return frozenset(random_element(rng, c, dom_depth) for c in cones)


def pattern_vertex(cones) -> frozenset:
    return frozenset(VElement.of(("", c)) for c in cones)


# ------------------------------------------------------------------ drawing

def tree_pair_dot(b: VElement, name="treepair") -> str:
    """Domain and range trees with leaves numbered by row order."""
    rows = b.table.rows
    label = {d: str(n + 1) for n, (d, _) in enumerate(rows)}
    img_label = {i: str(n + 1) for n, (_, i) in enumerate(rows)}

    def tree_lines(prefix, leaves, labels):
        nodes = set()
        for w in leaves:
            for n in range(len(w) + 1):
                nodes.add(w[:n])
        # children missing from the image tree are drawn dashed
        extra = set()
        for w in list(nodes):
            if w not in leaves:
                for bit in "01":
                    if w + bit not in nodes:
                        extra.add(w + bit)
        lines = []
        for w in sorted(nodes | extra, key=lambda x: (len(x), x)):
            nid = f"{prefix}_{w or 'r'}"
            if w in labels:
                lines.append(f'  {nid} [label="{labels[w]}", shape=plaintext];')
            elif w in extra:
                lines.append(f'  {nid} [label="", shape=point, style=dashed];')
            else:
                lines.append(f'  {nid} [label="", shape=point];')
        for w in sorted((nodes | extra) - {""}, key=lambda x: (len(x), x)):
            style = " [style=dashed]" if w in extra else ""
            lines.append(f"  {prefix}_{w[:-1] or 'r'} -> {prefix}_{w}{style};")
        return lines

    out = [f"digraph {name} {{", "  subgraph cluster_domain {", '  label="domain";']
    out += tree_lines("d", set(label), label)
    out += ["  }", "  subgraph cluster_range {", '  label="range";']
    out += tree_lines("r", set(img_label), img_label)
    out += ["  }", "}"]
    return "\n".join(out) + "\n"
