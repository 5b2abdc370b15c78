"""Finite abstract simplicial complexes: reduced homology over GF(2) and Q,
components, greedy collapses, joins, order complexes and nerves."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import Callable, Hashable, Iterable, Sequence

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    pass


def simplex_budget(override=None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get("EXPANSE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True, eq=False)
class Complex:
    vertices: tuple
    simplices: frozenset  # sorted tuples of vertex indices, face-closed, no empty simplex

    def __eq__(self, other):
        return isinstance(other, Complex) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def canonical(self):
        """Label-level form, independent of vertex indexing."""
        labs = self.vertices
        return frozenset(frozenset(labs[i] for i in s) for s in self.simplices)

    @classmethod
    def from_simplices(cls, vertices, simplices, check=True, budget=None) -> "Complex":
        simps = frozenset(tuple(sorted(s)) for s in simplices if len(s))
        if len(simps) > simplex_budget(budget):
            raise BudgetExceeded(f"{len(simps)} simplices over budget")
        K = cls(tuple(vertices), simps)
        if check:
            K.check()
        return K

    @classmethod
    def from_maximal(cls, vertices, maximal, budget=None) -> "Complex":
        cap = simplex_budget(budget)
        out = set()
        for m in maximal:
            m = tuple(sorted(set(m)))
            if m in out:
                continue
            for r in range(1, len(m) + 1):
                for f in combinations(m, r):
                    out.add(f)
            if len(out) > cap:
                raise BudgetExceeded(f"more than {cap} simplices")
        return cls(tuple(vertices), frozenset(out))

    @classmethod
    def from_labelled(cls, simplices: Iterable[Iterable[Hashable]], vertices=None, budget=None):
        """Build from simplices given by vertex labels (faces added)."""
        simplices = [tuple(s) for s in simplices]
        if vertices is None:
            seen = {}
            for s in simplices:
                for x in s:
                    seen.setdefault(x, None)
            vertices = sorted(seen, key=_sort_key)
        index = {v: i for i, v in enumerate(vertices)}
        return cls.from_maximal(vertices, [[index[x] for x in s] for s in simplices], budget)

    def check(self):
        for s in self.simplices:
            if any(not (0 <= i < len(self.vertices)) for i in s):
                raise ValueError(f"simplex {s} uses unknown vertex")
            if len(s) > 1:
                for f in combinations(s, len(s) - 1):
                    if f not in self.simplices:
                        raise ValueError(f"not face-closed: {s} lacks {f}")

    @cached_property
    def by_dim(self) -> dict:
        out = {}
        for s in self.simplices:
            out.setdefault(len(s) - 1, []).append(s)
        for d in out:
            out[d].sort()
        return out

    @property
    def dim(self) -> int:
        return max(self.by_dim, default=-1)

    def count(self, d: int) -> int:
        return len(self.by_dim.get(d, ()))

    def f_vector(self):
        return [self.count(d) for d in range(self.dim + 1)]

    def is_empty(self) -> bool:
        return not self.simplices

    def used_vertices(self):
        return sorted(s[0] for s in self.by_dim.get(0, ()))

    def maximal_simplices(self):
        simps = self.simplices
        out = []
        for s in simps:
            ss = set(s)
            if not any(len(t) == len(s) + 1 and ss.issubset(t) for t in self._cofacets(s)):
                out.append(s)
        return sorted(out, key=lambda s: (-len(s), s))

    def _cofacets(self, s):
        return self._up.get(s, ())

    @cached_property
    def _up(self) -> dict:
        up = {}
        for t in self.simplices:
            if len(t) > 1:
                for f in combinations(t, len(t) - 1):
                    up.setdefault(f, []).append(t)
        return up

    def euler(self) -> int:
        return sum((-1) ** d * len(v) for d, v in self.by_dim.items())

    def subcomplex(self, keep: Callable[[tuple], bool]) -> "Complex":
        return Complex(self.vertices, frozenset(s for s in self.simplices if keep(s)))

    def full_subcomplex(self, vertex_ids) -> "Complex":
        vs = set(vertex_ids)
        return self.subcomplex(lambda s: all(i in vs for i in s))

    def label_simplices(self):
        return {frozenset(self.vertices[i] for i in s) for s in self.simplices}

    # ---------------------------------------------------------- io
    def to_json(self, label=None):
        label = label or _json_label
        return {
            "vertices": [label(v) for v in self.vertices],
            "maximal_simplices": [list(s) for s in sorted(self.maximal_simplices())],
        }

    @classmethod
    def from_json(cls, obj) -> "Complex":
        verts = [_unjson_label(v) for v in obj["vertices"]]
        return cls.from_maximal(verts, obj["maximal_simplices"])

    def to_dot(self, name="K", label=None) -> str:
        label = label or (lambda v: str(v))
        lines = [f"graph {name} {{"]
        for i in self.used_vertices():
            text = label(self.vertices[i]).replace('"', '\\"')
            lines.append(f'  n{i} [label="{text}"];')
        for e in self.by_dim.get(1, []):
            lines.append(f"  n{e[0]} -- n{e[1]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _sort_key(x):
    return (type(x).__name__, repr(x))


def _json_label(v):
    if isinstance(v, (str, int)):
        return v
    if isinstance(v, tuple):
        return [_json_label(x) for x in v]
    if isinstance(v, frozenset):
        return sorted((_json_label(x) for x in v), key=repr)
    return str(v)


def _unjson_label(v):
    if isinstance(v, list):
        return tuple(_unjson_label(x) for x in v)
    return v


EMPTY = Complex((), frozenset())


def simplex(n_vertices: int, labels=None) -> Complex:
    labels = labels or tuple(range(n_vertices))
    return Complex.from_maximal(labels, [range(n_vertices)])


def sphere_boundary(d: int, labels=None) -> Complex:
    """Boundary of the (d+1)-simplex, a d-sphere."""
    n = d + 2
    labels = labels or tuple(range(n))
    return Complex.from_maximal(labels, list(combinations(range(n), n - 1)))


# ------------------------------------------------------------------ ranks

def rank_gf2(rows: Sequence[Sequence[int]]) -> int:
    """Rank over GF(2); each row lists its nonzero column indices."""
    basis = {}
    rank = 0
    for cols in rows:
        r = 0
        for c in cols:
            r ^= 1 << c
        while r:
            p = r.bit_length() - 1
            b = basis.get(p)
            if b is None:
                basis[p] = r
                rank += 1
                break
            r ^= b
    return rank


def rank_q(rows: Sequence[dict]) -> int:
    """Rank over Q by fraction-free row elimination on sparse integer rows.

    Each new row is cleared against existing pivots with integer cross
    multiplication, then divided by its content to keep entries small."""
    pivots = {}
    rank = 0
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        while r:
            c = max(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                rank += 1
                break
            a, b = p[c], r[c]
            new = {}
            for k, v in r.items():
                new[k] = a * v
            for k, v in p.items():
                w = new.get(k, 0) - b * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            g = 0
            for v in new.values():
                g = gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                new = {k: v // g for k, v in new.items()}
            r = new
    return rank


def boundary_rows(K: Complex, d: int):
    """Boundary of the d-simplices as rows indexed into the (d-1)-simplices."""
    faces = K.by_dim.get(d - 1, [])
    index = {f: i for i, f in enumerate(faces)}
    gf2, q = [], []
    for s in K.by_dim.get(d, []):
        cols = {}
        for j in range(len(s)):
            f = s[:j] + s[j + 1:]
            cols[index[f]] = -1 if j % 2 else 1
        gf2.append(list(cols))
        q.append(cols)
    return gf2, q


@dataclass
class HomologyReport:
    degree: int
    betti_gf2: list            # reduced betti numbers in degrees 0..degree
    betti_q: list
    empty: bool                # reduced H_{-1} = 1 exactly when the complex is empty
    components: int
    dim: int
    f_vector: list
    euler_consistent: object = None   # None when degree < dim
    fields_agree: bool = True
    collapse: object = None           # "collapsible" / "inconclusive" / None
    collapse_steps: list = field(default_factory=list)

    def is_n_connected(self, n: int) -> bool:
        """Homological n-connectivity (connected plus vanishing reduced H_i, i<=n, over both fields)."""
        if n <= -2:
            return True
        if self.empty:
            return False
        if n > self.degree:
            raise ValueError(f"homology only computed through degree {self.degree}")
        return all(self.betti_gf2[i] == 0 and self.betti_q[i] == 0 for i in range(n + 1))

    def connectivity(self) -> int:
        """Largest computed n with is_n_connected(n); -2 for the empty complex."""
        if self.empty:
            return -2
        n = -1
        for i in range(self.degree + 1):
            if self.betti_gf2[i] == 0 and self.betti_q[i] == 0:
                n = i
            else:
                break
        return n

    @property
    def acyclic(self) -> bool:
        return (not self.empty) and self.degree >= self.dim and self.connectivity() == self.degree

    def to_json(self):
        return {
            "degree": self.degree,
            "betti_gf2": self.betti_gf2,
            "betti_q": self.betti_q,
            "empty": self.empty,
            "components": self.components,
            "dim": self.dim,
            "f_vector": self.f_vector,
            "euler_consistent": self.euler_consistent,
            "fields_agree": self.fields_agree,
            "collapse": self.collapse,
        }


def components(K: Complex) -> int:
    verts = K.used_vertices()
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in K.by_dim.get(1, []):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in verts})


def reduced_homology(K: Complex, deg: int | None = None, collapse: bool = False) -> HomologyReport:
    """Reduced betti numbers in degrees 0..deg (default: through dim K)."""
    dim = K.dim
    if deg is None:
        deg = max(dim, 0)
    rk2 = {0: 1 if K.count(0) else 0}
    rkq = dict(rk2)
    for d in range(1, deg + 2):
        if d > dim:
            rk2[d] = rkq[d] = 0
            continue
        g, q = boundary_rows(K, d)
        rk2[d] = rank_gf2(g)
        rkq[d] = rank_q(q)
    b2 = [K.count(i) - rk2[i] - rk2[i + 1] for i in range(deg + 1)]
    bq = [K.count(i) - rkq[i] - rkq[i + 1] for i in range(deg + 1)]
    empty = K.is_empty()
    rep = HomologyReport(
        degree=deg, betti_gf2=b2, betti_q=bq, empty=empty,
        components=components(K), dim=dim, f_vector=K.f_vector(),
        fields_agree=(b2 == bq),
    )
    if deg >= dim:
        red_euler = K.euler() - 1
        alt2 = sum((-1) ** i * b for i, b in enumerate(b2)) - (1 if empty else 0)
        altq = sum((-1) ** i * b for i, b in enumerate(bq)) - (1 if empty else 0)
        rep.euler_consistent = (alt2 == red_euler == altq)
    if collapse:
        verdict, steps = greedy_collapse(K)
        rep.collapse, rep.collapse_steps = verdict, steps
    return rep


def is_homologically_n_connected(K: Complex, n: int) -> bool:
    if n <= -2:
        return True
    return reduced_homology(K, max(n, 0)).is_n_connected(n)


# ------------------------------------------------------------------ collapse

def greedy_collapse(K: Complex):
    """Elementary collapses through free faces until stuck.

    Returns ("collapsible", steps) when a single vertex remains, else
    ("inconclusive", steps). Never claims non-contractibility."""
    alive = set(K.simplices)
    if not alive:
        return "inconclusive", []
    up = {s: set() for s in alive}
    for t in alive:
        if len(t) > 1:
            for f in combinations(t, len(t) - 1):
                up[f].add(t)
    steps = []
    stack = sorted(alive, key=lambda s: (-len(s), s))
    while stack:
        s = stack.pop()
        if s not in alive or len(up[s]) != 1:
            continue
        (t,) = up[s]
        if up[t]:
            continue
        alive.discard(s)
        alive.discard(t)
        steps.append((s, t))
        for simp in (t, s):
            if len(simp) > 1:
                for f in combinations(simp, len(simp) - 1):
                    if f in alive:
                        up[f].discard(simp)
                        stack.append(f)
        del up[s], up[t]
    if len(alive) == 1:
        return "collapsible", steps
    return "inconclusive", steps


def replay_collapse(K: Complex, steps) -> bool:
    """Check a collapse certificate step by step."""
    alive = set(K.simplices)
    for s, t in steps:
        s, t = tuple(s), tuple(t)
        if s not in alive or t not in alive or len(t) != len(s) + 1 or not set(s) < set(t):
            return False
        cof = [u for u in alive if len(u) > len(s) and set(s) < set(u)]
        if cof != [t]:
            return False
        alive.discard(s)
        alive.discard(t)
    return len(alive) == 1


# ------------------------------------------------------------------ constructions

def join(K1: Complex, K2: Complex, budget=None) -> Complex:
    """Abstract join; vertex labels of the factors must not collide."""
    if set(K1.vertices) & set(K2.vertices):
        raise ValueError("join needs disjoint vertex labels")
    off = len(K1.vertices)
    s1 = [()] + sorted(K1.simplices)
    s2 = [()] + [tuple(i + off for i in s) for s in sorted(K2.simplices)]
    cap = simplex_budget(budget)
    if len(s1) * len(s2) - 1 > cap:
        raise BudgetExceeded("join over simplex budget")
    out = frozenset(a + b for a in s1 for b in s2 if a or b)
    return Complex(K1.vertices + K2.vertices, out)


def tag(K: Complex, t) -> Complex:
    return Complex(tuple((t, v) for v in K.vertices), K.simplices)


def join_many(Ks: Sequence[Complex], budget=None) -> Complex:
    out = EMPTY
    for i, K in enumerate(Ks):
        out = join(out, tag(K, i), budget) if i else tag(K, 0)
    return out


def order_complex(elements: Sequence, leq: Callable, budget=None) -> Complex:
    """Chains of a finite poset (strictly ascending, nonempty)."""
    elements = list(elements)
    n = len(elements)
    less = {i: [j for j in range(n) if j != i and leq(elements[i], elements[j])] for i in range(n)}
    cap = simplex_budget(budget)
    out = set()

    def extend(chain):
        out.add(tuple(sorted(chain)))
        if len(out) > cap:
            raise BudgetExceeded("order complex over budget")
        for j in less[chain[-1]]:
            extend(chain + [j])

    for i in range(n):
        extend([i])
    return Complex(tuple(elements), frozenset(out))


def nerve(cover: Sequence[Complex], budget=None) -> Complex:
    """Nerve of subcomplexes of a common complex; empty members are dropped.

    Subcomplexes meet iff they share a vertex, so the maximal nerve simplices
    are the sets {i : x in cover[i]} over vertex labels x."""
    members = [i for i, C in enumerate(cover) if not C.is_empty()]
    holders = {}
    for i in members:
        C = cover[i]
        for v in C.used_vertices():
            holders.setdefault(C.vertices[v], set()).add(i)
    maxi = {frozenset(h) for h in holders.values()}
    index = {m: k for k, m in enumerate(members)}
    return Complex.from_maximal(tuple(members), [[index[i] for i in m] for m in maxi], budget)


def random_complex(rng, n_vertices: int, n_max: int, max_dim: int, labels=None) -> Complex:
    labels = labels or tuple(range(n_vertices))
    maxi = []
    for _ in range(n_max):
        size = rng.randint(1, min(max_dim + 1, n_vertices))
        maxi.append(rng.sample(range(n_vertices), size))
    return Complex.from_maximal(labels, maxi)
