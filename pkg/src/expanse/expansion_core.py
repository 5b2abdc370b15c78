"""Expansion sets: vertices, the simplex predicate, stars, links, partitions and covers.

An instance supplies supports (objects with issubset/isdisjoint/|), the finite
posets E(b), and a contraction oracle. Vertices are frozensets of elements.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from .topology import BudgetExceeded, Complex, join_many, order_complex, simplex_budget


class NotAChainError(ValueError):
    pass


class InfinitePosetError(ValueError):
    pass


class OracleIncomplete(RuntimeError):
    pass


class NotAPartition(ValueError):
    pass


class DifferentGround(ValueError):
    pass


class TooSmall(ValueError):
    pass


class NotComparable(ValueError):
    pass


class VertexError(ValueError):
    pass


# ------------------------------------------------------------------ posets

@dataclass(frozen=True)
class ExpansionPoset:
    nodes: tuple          # vertices (frozensets); nodes[0] is {b}
    order: frozenset      # pairs (i, j) with nodes[i] <= nodes[j], reflexive

    def index(self, v):
        try:
            return self.nodes.index(v)
        except ValueError:
            return None

    def __contains__(self, v):
        return v in self.nodes

    def leq(self, v, w) -> bool:
        i, j = self.index(v), self.index(w)
        return i is not None and j is not None and (i, j) in self.order

    @property
    def bottom(self):
        return self.nodes[0]

    def heights(self):
        return [len(x) for x in self.nodes]

    def upper(self):
        return [x for x in self.nodes[1:]]

    def order_complex(self, drop_bottom=False) -> Complex:
        idx = list(range(1 if drop_bottom else 0, len(self.nodes)))
        return order_complex([self.nodes[i] for i in idx], self.leq)


def poset_from_covers(nodes, covers) -> ExpansionPoset:
    """Reflexive-transitive closure of covering pairs (index pairs)."""
    n = len(nodes)
    rel = {(i, i) for i in range(n)} | set(covers)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for (c, d) in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return ExpansionPoset(tuple(nodes), frozenset(rel))


# ------------------------------------------------------------------ instance

class ExpansionInstance:
    """Contract for concrete expansion sets. Subclasses override the hooks."""
    name = "abstract"
    kind = "permutational"          # or "linear" / "cyclic"
    C0 = None
    C1 = None
    oracle_complete = True
    max_contraction = None          # largest production size worth trying (defaults to C0)

    def support(self, b):
        raise NotImplementedError

    def expansions(self, b) -> ExpansionPoset:
        raise NotImplementedError

    def contractions(self, subset: frozenset) -> list:
        raise NotImplementedError

    def act(self, s, b):
        raise NotImplementedError

    def stabilizer(self, b):
        raise NotImplementedError

    def equal(self, b1, b2) -> bool:
        return b1 == b2

    def key(self, b):
        return repr(b)

    def element_to_json(self, b):
        raise NotImplementedError

    def element_from_json(self, obj):
        raise NotImplementedError

    # optional hooks used by the directed-set check
    def pattern_step(self, b):
        """A non-bottom node of E(b) moving b toward pattern form, or None."""
        return None

    def common_pattern(self, p1, p2):
        return None


def sort_elements(inst, elems) -> tuple:
    return tuple(sorted(elems, key=inst.key))


def make_vertex(inst, elems) -> frozenset:
    elems = list(elems)
    if not elems:
        raise VertexError("a vertex is nonempty")
    sups = [inst.support(b) for b in elems]
    for i, j in combinations(range(len(elems)), 2):
        if not sups[i].isdisjoint(sups[j]):
            raise VertexError(f"elements {i} and {j} have overlapping supports")
    v = frozenset(elems)
    if len(v) != len(elems):
        raise VertexError("repeated element")
    return v


def vertex_support(inst, v):
    sups = [inst.support(b) for b in v]
    out = sups[0]
    for s in sups[1:]:
        out = out | s
    return out


def height(v) -> int:
    return len(v)


def restriction(inst, b, v) -> frozenset:
    sb = inst.support(b)
    return frozenset(c for c in v if inst.support(c).issubset(sb))


def induced_partition(inst, v) -> frozenset:
    return frozenset(inst.support(b) for b in v)


def refines(inst, w, v) -> bool:
    """P(w) refines P(v) (same total support, each block of w inside a block of v)."""
    sv = [inst.support(b) for b in v]
    for c in w:
        sc = inst.support(c)
        if not any(sc.issubset(s) for s in sv):
            return False
    return vertex_support(inst, w) == vertex_support(inst, v)


def canonical_order(inst, S) -> list:
    S = list(S)
    S.sort(key=lambda v: (len(v), sorted(inst.key(b) for b in v)))
    for a, b in zip(S, S[1:]):
        if len(a) == len(b):
            raise NotAChainError("two distinct vertices of equal height")
        if not refines(inst, b, a):
            raise NotAChainError("consecutive vertices are not nested refinements")
    return S


def is_simplex(inst, S) -> bool:
    S = list(S)
    if not S:
        return False
    try:
        chain = canonical_order(inst, S)
    except NotAChainError:
        return False
    for b in chain[0]:
        E = inst.expansions(b)
        prev = None
        for v in chain:
            r = restriction(inst, b, v)
            if r not in E:
                return False
            if prev is not None and not E.leq(prev, r):
                return False
            prev = r
    return True


def below(inst, u, w) -> bool:
    """u < w as an edge of the complex (u lower)."""
    return len(u) < len(w) and is_simplex(inst, [u, w])


# ------------------------------------------------------------------ axioms

def check_axioms(inst, b) -> list:
    """Violations of the expansion-set axioms at b (empty list = all hold)."""
    bad = []
    E = inst.expansions(b)
    sb = inst.support(b)
    if E.bottom != frozenset([b]):
        bad.append("bottom is not {b}")
    for i, x in enumerate(E.nodes):
        if (0, i) not in E.order:
            bad.append(f"node {i} not above bottom")
        try:
            make_vertex(inst, x)
        except VertexError as e:
            bad.append(f"node {i}: {e}")
        if vertex_support(inst, x) != sb:
            bad.append(f"node {i} does not partition supp(b)")
    for (i, j) in E.order:
        if i == j:
            continue
        x, y = E.nodes[i], E.nodes[j]
        if not (refines(inst, y, x) and len(y) > len(x)):
            bad.append(f"{i}<{j} without proper refinement")
    for i, x in enumerate(E.nodes):
        for j, y in enumerate(E.nodes):
            lhs = (i, j) in E.order
            rhs = refines(inst, y, x) and all(restriction(inst, c, y) in inst.expansions(c) for c in x)
            if lhs != rhs:
                bad.append(f"restriction criterion fails for ({i},{j})")
    return bad


# ------------------------------------------------------------------ ascending side

@dataclass
class AscendingStar:
    base: tuple               # ordered elements b_1..b_k
    posets: tuple             # E(b_i)
    vertices: list            # frozensets
    coords: list              # per vertex: tuple of node indices into posets
    complex: Complex          # chains of the product order

    def p(self, w):
        return self.coords[self.vertices.index(w)]

    def link(self) -> Complex:
        bottom = self.vertices.index(frozenset(self.base))
        return self.complex.subcomplex(lambda s: bottom not in s)

    def factor_join(self) -> Complex:
        return join_many([E.order_complex(drop_bottom=True) for E in self.posets])


def _product_leq(posets, c1, c2) -> bool:
    return all((a, b) in E.order for E, a, b in zip(posets, c1, c2))


def ascending_star(inst, v, budget=None) -> AscendingStar:
    base = sort_elements(inst, v)
    posets = []
    for b in base:
        E = inst.expansions(b)
        if E is None:
            raise InfinitePosetError(f"E({b!r}) is not finite")
        posets.append(E)
    coords = list(product(*[range(len(E.nodes)) for E in posets]))
    if len(coords) > simplex_budget(budget):
        raise BudgetExceeded("ascending star over budget")
    verts = []
    for c in coords:
        w = frozenset().union(*[E.nodes[i] for E, i in zip(posets, c)])
        verts.append(w)
    n = len(verts)
    out = set()

    def extend(chain):
        out.add(tuple(sorted(chain)))
        last = coords[chain[-1]]
        for j in range(n):
            if coords[j] != last and _product_leq(posets, last, coords[j]):
                extend(chain + [j])

    for i in range(n):
        extend([i])
    K = Complex(tuple(verts), frozenset(out))
    return AscendingStar(base, tuple(posets), verts, coords, K)


def ascending_link(inst, v, budget=None):
    st = ascending_star(inst, v, budget)
    return st.link(), st


def _elem_path(inst, b, target, memo, counter, budget):
    key = (b, target)
    if key in memo:
        return memo[key]
    counter[0] += 1
    if counter[0] > budget:
        raise BudgetExceeded("expansion search over budget")
    if target == frozenset([b]):
        memo[key] = []
        return []
    E = inst.expansions(b)
    result = None
    for x in E.nodes[1:]:
        if not refines(inst, target, x):
            continue
        moves = [(b, x)]
        ok = True
        for c in sort_elements(inst, x):
            sub = _elem_path(inst, c, restriction(inst, c, target), memo, counter, budget)
            if sub is None:
                ok = False
                break
            moves.extend(sub)
        if ok:
            result = moves
            break
    memo[key] = result
    return result


def expansion_leq(inst, v1, v2, budget=10_000):
    """Vertices w_1..w_n after v1 with each w_{i+1} a one-step expansion of w_i
    and w_n = v2; [] when v1 == v2; None when v1 does not expand to v2."""
    v1, v2 = frozenset(v1), frozenset(v2)
    if v1 == v2:
        return []
    if not refines(inst, v2, v1):
        return None
    memo, counter = {}, [0]
    moves = []
    for b in sort_elements(inst, v1):
        sub = _elem_path(inst, b, restriction(inst, b, v2), memo, counter, budget)
        if sub is None:
            return None
        moves.extend(sub)
    seq = []
    cur = set(v1)
    for old, new in moves:
        cur.discard(old)
        cur |= new
        seq.append(frozenset(cur))
    return seq


def replay_sequence(inst, v1, seq) -> bool:
    prev = v1
    for w in seq:
        if not (len(w) > len(prev) and is_simplex(inst, [prev, w])):
            return False
        prev = w
    return True


def split_sequence(inst, seq) -> dict:
    """Piecewise split of a full sequence [w_0, ..., w_n] along the elements of w_0."""
    out = {}
    for b in seq[0]:
        parts = []
        for w in seq:
            r = restriction(inst, b, w)
            if not parts or parts[-1] != r:
                parts.append(r)
        out[b] = parts
    return out


def merge_sequences(parts: dict) -> list:
    """Inverse of split_sequence: run the per-element sequences one after another."""
    cur = {b: seqs[0] for b, seqs in parts.items()}
    out = [frozenset().union(*cur.values())]
    for b in sorted(parts, key=repr):
        for r in parts[b][1:]:
            cur[b] = r
            out.append(frozenset().union(*cur.values()))
    return out


@dataclass
class RelativeStar:
    star: AscendingStar
    keep: list        # indices of star vertices u with u expanding to the target
    factors: list     # per b_i: node indices of E(b_i) in the interval
    complex: Complex

    def link(self) -> Complex:
        bottom = self.star.vertices.index(frozenset(self.star.base))
        return self.complex.subcomplex(lambda s: bottom not in s)

    def factor_join(self) -> Complex:
        comps = []
        for E, idx in zip(self.star.posets, self.factors):
            sub = [E.nodes[i] for i in idx if i != 0]
            comps.append(order_complex(sub, E.leq))
        return join_many(comps)


def relative_ascending_star(inst, v, v2, budget=10_000) -> RelativeStar:
    if expansion_leq(inst, v, v2, budget) is None:
        raise NotComparable("v does not expand to v'")
    st = ascending_star(inst, v)
    keep = [i for i, u in enumerate(st.vertices) if expansion_leq(inst, u, v2, budget) is not None]
    keepset = set(keep)
    K = st.complex.subcomplex(lambda s: all(i in keepset for i in s))
    factors = []
    for b, E in zip(st.base, st.posets):
        target = restriction(inst, b, v2)
        factors.append([i for i, x in enumerate(E.nodes) if expansion_leq(inst, x, target, budget) is not None])
    return RelativeStar(st, keep, factors, K)


def relative_ascending_link(inst, v, v2, budget=10_000) -> Complex:
    return relative_ascending_star(inst, v, v2, budget).link()


# ------------------------------------------------------------------ descending side

@dataclass
class DownLink:
    base: tuple               # ordered elements of v
    vertices: list            # frozensets u below v
    productions: list         # per vertex: frozenset of (block, element) with |block| >= 2
    complex: Complex

    def vertex_ids_in(self, P: "Partition") -> list:
        owner = P.owner()
        ids = []
        for i, prods in enumerate(self.productions):
            if all(len({owner[j] for j in block}) == 1 for block, _ in prods):
                ids.append(i)
        return ids


def _production_options(inst, base, max_size):
    """Nontrivial productions: (block of indices, contracted element)."""
    opts = {}
    k = len(base)
    for size in range(2, min(max_size, k) + 1):
        for block in combinations(range(k), size):
            subset = frozenset(base[i] for i in block)
            found = inst.contractions(subset)
            if found:
                opts[frozenset(block)] = list(found)
    return opts


def descending_link(inst, v, budget=None, require_complete=True) -> DownLink:
    if require_complete and not inst.oracle_complete:
        raise OracleIncomplete(f"{inst.name} declares a partial contraction oracle")
    base = sort_elements(inst, v)
    k = len(base)
    cap = simplex_budget(budget)
    max_size = inst.max_contraction or inst.C0 or k
    opts = _production_options(inst, base, max_size)
    by_first = {}
    for block in opts:
        by_first.setdefault(min(block), []).append(block)

    verts, prods = [], []

    def rec(i, used, chosen):
        while i < k and i in used:
            i += 1
        if i == k:
            if chosen:
                elems = set(base[j] for j in range(k) if not any(j in bl for bl, _ in chosen))
                elems |= {c for _, c in chosen}
                verts.append(frozenset(elems))
                prods.append(frozenset(chosen))
                if len(verts) > cap:
                    raise BudgetExceeded("descending link over budget")
            return
        rec(i + 1, used, chosen)
        for block in by_first.get(i, []):
            if used & block:
                continue
            for c in opts[block]:
                rec(i + 1, used | block, chosen + [(block, c)])

    rec(0, frozenset(), [])
    index = {u: n for n, u in enumerate(verts)}
    vfull = frozenset(base)
    ups = {}
    for n, (u, pr) in enumerate(zip(verts, prods)):
        kept = u - {c for _, c in pr}
        choices = [inst.expansions(c).nodes for _, c in pr]
        succ = []
        for pick in product(*choices):
            w = frozenset(kept).union(*pick)
            if w == u or w == vfull:
                continue
            m = index.get(w)
            if m is not None:
                succ.append(m)
        ups[n] = succ
    out = set()

    def extend(chain):
        out.add(tuple(sorted(chain)))
        if len(out) > cap:
            raise BudgetExceeded("descending link over budget")
        for m in ups[chain[-1]]:
            extend(chain + [m])

    for n in range(len(verts)):
        extend([n])
    K = Complex(tuple(verts), frozenset(out))
    return DownLink(base, verts, prods, K)


@dataclass(frozen=True)
class Partition:
    """Partition of the index set {0..k-1} of an ordered vertex."""
    blocks: frozenset
    principal: tuple = field(default=(), compare=False)
    initial: int = field(default=0, compare=False)

    @classmethod
    def of(cls, blocks, principal=(), initial=0) -> "Partition":
        bl = frozenset(frozenset(b) for b in blocks if len(b))
        return cls(bl, tuple(principal), initial)

    @property
    def ground(self) -> frozenset:
        return frozenset().union(*self.blocks) if self.blocks else frozenset()

    def validate(self, k):
        seen = set()
        for b in self.blocks:
            if seen & b:
                raise NotAPartition("blocks overlap")
            seen |= b
        if seen != set(range(k)):
            raise NotAPartition(f"blocks do not cover 0..{k - 1}")

    def owner(self) -> dict:
        return {j: n for n, b in enumerate(sorted(self.blocks, key=sorted)) for j in b}

    def to_json(self):
        return {"blocks": [sorted(b) for b in sorted(self.blocks, key=sorted)]}

    @classmethod
    def from_json(cls, obj) -> "Partition":
        return cls.of(obj["blocks"])

    def __repr__(self):
        return "|".join("".join(str(i + 1) for i in sorted(b)) for b in sorted(self.blocks, key=sorted))


def partition_meet(P1: Partition, P2: Partition) -> Partition:
    if P1.ground != P2.ground:
        raise DifferentGround("partitions of different sets")
    return Partition.of([a & b for a in P1.blocks for b in P2.blocks if a & b])


def meet_all(parts: Sequence[Partition]) -> Partition:
    out = parts[0]
    for P in parts[1:]:
        out = partition_meet(out, P)
    return out


def partitioned_descending_link(inst, v, P: Partition, link: DownLink | None = None) -> Complex:
    link = link or descending_link(inst, v)
    P.validate(len(link.base))
    return link.complex.full_subcomplex(link.vertex_ids_in(P))


def standard_cover(k: int, C0: int, C1: int, kind: str) -> list:
    """Standard covers on indices 0..k-1; principal sets/intervals reported 1-based."""
    if k <= C0:
        raise TooSmall(f"need k > C0 (k={k}, C0={C0})")
    full = frozenset(range(k))
    out = []
    if kind == "permutational":
        for size in range(1, C0 + 1):
            for T in combinations(range(k), size):
                T = frozenset(T)
                out.append(Partition.of([T, full - T], principal=tuple(sorted(t + 1 for t in T))))
        return out
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if i == j:
                continue
            if i < j:
                interval = list(range(i, j + 1))
            else:
                if kind == "linear":
                    continue
                interval = list(range(i, k + 1)) + list(range(1, j + 1))
            length = len(interval)
            if length > C0:
                continue
            if kind == "linear":
                if i > C1:
                    continue
            elif kind == "cyclic":
                if not (1 in interval or i <= C1):
                    continue
            else:
                raise ValueError(f"unknown kind {kind!r}")
            T = frozenset(x - 1 for x in interval)
            out.append(Partition.of([T, full - T], principal=(i, j), initial=i))
    return out


def cover_violations(link: DownLink, cover: Sequence[Partition]) -> list:
    """Vertices of the link lying in no partitioned link of the cover."""
    covered = set()
    for P in cover:
        covered.update(link.vertex_ids_in(P))
    return [i for i in range(len(link.vertices)) if i not in covered]


# ------------------------------------------------------------------ filtration

def up_neighbours(inst, v):
    st = ascending_star(inst, v)
    return [w for w in st.vertices if w != frozenset(v)]


def down_neighbours(inst, v):
    return descending_link(inst, v).vertices


@dataclass
class Slice:
    n: int
    radius: int
    vertices: list
    complex: Complex


def filtration_slice(inst, seeds, n, radius=2, budget=None) -> Slice:
    """Vertices of height <= n reachable from the seeds in <= radius moves, with their chains."""
    cap = simplex_budget(budget)
    seen = {frozenset(s) for s in seeds if len(s) <= n}
    frontier = list(seen)
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in up_neighbours(inst, v) + down_neighbours(inst, v):
                if len(w) <= n and w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if len(seen) > cap:
                        raise BudgetExceeded("slice over budget")
        frontier = nxt
    verts = sorted(seen, key=lambda v: (len(v), sorted(inst.key(b) for b in v)))
    up = {i: [j for j in range(len(verts)) if below(inst, verts[i], verts[j])] for i in range(len(verts))}
    out = set()

    # the edge relation is not transitive, so every chain is validated whole
    def extend(chain):
        out.add(tuple(chain))
        if len(out) > cap:
            raise BudgetExceeded("slice over budget")
        for j in up[chain[-1]]:
            if all(j in up[i] for i in chain) and is_simplex(inst, [verts[i] for i in chain + [j]]):
                extend(chain + [j])

    for i in range(len(verts)):
        extend([i])
    return Slice(n, radius, verts, Complex(tuple(verts), frozenset(out)))
