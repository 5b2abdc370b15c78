"""Executable checks: template hypotheses, descending-link bounds, covers, joins, actions.

Each check returns a CheckReport whose witness can be replayed through the public API.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations, product

from .expansion_core import (OracleIncomplete, ascending_star, cover_violations, descending_link,
                             expansion_leq, is_simplex, meet_all, relative_ascending_star,
                             replay_sequence, standard_cover, vertex_support)
from .topology import (BudgetExceeded, Complex, greedy_collapse, join, nerve, order_complex,
                       random_complex, reduced_homology, replay_collapse, tag)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class CheckReport:
    check: str
    instance: str
    params: dict = field(default_factory=dict)
    verdict: str = PASS
    witness: dict = field(default_factory=dict)
    ms: int = 0

    def to_json(self):
        return {"check": self.check, "instance": self.instance, "params": self.params,
                "verdict": self.verdict, "witness": self.witness, "ms": self.ms}

    @property
    def ok(self) -> bool:
        return self.verdict == PASS


class _timer:
    def __enter__(self):
        self.t = time.perf_counter()
        self.end = None
        return self

    def __exit__(self, *exc):
        self.end = time.perf_counter()

    @property
    def ms(self) -> int:
        # readable inside the block too, for early returns
        return int(1000 * ((self.end or time.perf_counter()) - self.t))


def combine(verdicts) -> str:
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts:
        return INCONCLUSIVE
    return PASS


def _keys(inst, v):
    return sorted(inst.key(b) for b in v)


# ------------------------------------------------------------------ directed set

def to_pattern(inst, v):
    """Expand v step by step until every element is in pattern form."""
    seq = []
    cur = set(v)
    todo = sorted(cur, key=inst.key)
    while todo:
        b = todo.pop()
        step = inst.pattern_step(b)
        if step is None:
            continue
        cur.discard(b)
        cur |= step
        seq.append(frozenset(cur))
        todo.extend(sorted(step, key=inst.key))
    return frozenset(cur), seq


def common_upper_bound(inst, v1, v2, budget=10_000):
    """(w, seq1, seq2) with seq_i a chain of one-step expansions from v_i ending at w."""
    v1, v2 = frozenset(v1), frozenset(v2)
    if v1 == v2:
        return v1, [], []
    for a, b, flip in ((v1, v2, False), (v2, v1, True)):
        seq = expansion_leq(inst, a, b, budget)
        if seq is not None:
            return (b, [], seq) if flip else (b, seq, [])
    p1, s1 = to_pattern(inst, v1)
    p2, s2 = to_pattern(inst, v2)
    w = inst.common_pattern(p1, p2)
    if w is None:
        raise ValueError(f"{inst.name} has no common pattern hook")
    t1 = expansion_leq(inst, p1, w, budget)
    t2 = expansion_leq(inst, p2, w, budget)
    if t1 is None or t2 is None:
        raise ValueError("pattern vertices do not expand to the common pattern")
    return w, s1 + t1, s2 + t2


def certify_upper_bound(inst, v1, v2, w, seq1, seq2) -> bool:
    for v, seq in ((v1, seq1), (v2, seq2)):
        end = seq[-1] if seq else frozenset(v)
        if end != w or not replay_sequence(inst, frozenset(v), seq):
            return False
    return True


def check_directed(inst, samples=20, seed=0, heights=(1, 2, 3, 4), depth=3) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("directed", inst.name, {"samples": samples, "seed": seed, "depth": depth})
    with _timer() as t:
        lengths = []
        for _ in range(samples):
            v1 = inst.sample_full_vertex(rng, rng.choice(heights), depth)
            v2 = inst.sample_full_vertex(rng, rng.choice(heights), depth)
            try:
                w, s1, s2 = common_upper_bound(inst, v1, v2)
            except BudgetExceeded as e:
                rep.verdict = INCONCLUSIVE
                rep.witness["budget"] = str(e)
                continue
            if not certify_upper_bound(inst, v1, v2, w, s1, s2):
                rep.verdict = FAIL
                rep.witness["counterexample"] = {"v1": _keys(inst, v1), "v2": _keys(inst, v2)}
                break
            lengths.append((len(s1), len(s2), len(w)))
        rep.witness["certified"] = len(lengths)
        rep.witness["sequence_lengths"] = lengths
    rep.ms = t.ms
    return rep


# ------------------------------------------------------------------ relative links

def random_expansion(inst, v, rng, steps=2):
    """A random vertex above v: a few one-step expansions of random elements."""
    cur = set(v)
    for _ in range(steps):
        b = rng.choice(sorted(cur, key=inst.key))
        nodes = inst.expansions(b).nodes[1:]
        if not nodes:
            continue
        cur.discard(b)
        cur |= rng.choice(nodes)
    return frozenset(cur)


def check_relative_links(inst, samples=20, seed=0, depth=3) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("relative_links", inst.name, {"samples": samples, "seed": seed, "depth": depth})
    with _timer() as t:
        shapes = {}
        verdicts = []
        for _ in range(samples):
            b = rng.choice(sorted(inst.sample_full_vertex(rng, rng.randint(1, 3), depth), key=inst.key))
            target = random_expansion(inst, {b}, rng, rng.randint(1, 2))
            if target == frozenset([b]):
                continue
            rel = relative_ascending_star(inst, frozenset([b]), target)
            L = rel.link()
            verdict, steps = greedy_collapse(L)
            ok = verdict == "collapsible" and replay_collapse(L, steps)
            shape = tuple(L.f_vector())
            shapes[str(shape)] = shapes.get(str(shape), 0) + 1
            if not ok:
                verdicts.append(INCONCLUSIVE if reduced_homology(L).acyclic else FAIL)
                rep.witness.setdefault("not_collapsed", []).append(
                    {"b": inst.key(b), "target": _keys(inst, target), "f_vector": list(shape)})
            else:
                verdicts.append(PASS)
        rep.verdict = combine(verdicts)
        rep.witness["f_vectors"] = shapes
        rep.witness["collapsed"] = verdicts.count(PASS)
    rep.ms = t.ms
    return rep


# ------------------------------------------------------------------ stabilizers

def check_stabilizers(inst, samples=10, seed=0, depth=3) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("stabilizers", inst.name, {"samples": samples, "seed": seed})
    with _timer() as t:
        orders, sizes = set(), set()
        ok = True
        for _ in range(samples):
            v = inst.sample_full_vertex(rng, rng.randint(1, 3), depth)
            for b in v:
                st = inst.stabilizer(b)
                fixes = all(inst.act(s, b) == b for s in st["elements"])
                ok &= fixes and st["order"] == len(st["elements"])
                orders.add((st["order"], st["type"]))
                sizes.add(len(inst.expansions(b).nodes))
        rep.verdict = PASS if ok and len(orders) == 1 else FAIL
        rep.witness = {"orders": sorted(o for o, _ in orders), "types": sorted(t_ for _, t_ in orders),
                       "expansion_sizes": sorted(sizes)}
    rep.ms = t.ms
    return rep


# ------------------------------------------------------------------ orbits

def check_orbits(inst, samples=12, seed=0, depth=3) -> CheckReport:
    from .instances.thompson_v import NoWitness
    rng = random.Random(seed)
    rep = CheckReport("orbits", inst.name, {"samples": samples, "seed": seed})
    with _timer() as t:
        elems = []
        for _ in range(samples):
            elems.append(inst.sample_element(rng, depth))
            elems.append(rng.choice(sorted(inst.sample_full_vertex(rng, rng.randint(2, 4), depth), key=inst.key)))
        classes = {}
        replays, ok = 0, True
        for b1, b2 in combinations(elems, 2):
            same = inst.orbit_class(b1) == inst.orbit_class(b2)
            try:
                s = inst.orbit_witness(b1, b2)
            except NoWitness:
                ok &= not same
                continue
            ok &= same and inst.act(s, b1) == b2
            replays += 1
        for b in elems:
            classes.setdefault(inst.orbit_class(b), inst.key(b))
        rep.verdict = PASS if ok else FAIL
        rep.witness = {"orbits": len(classes), "representatives": classes, "replayed": replays}
    rep.ms = t.ms
    return rep


# ------------------------------------------------------------------ constants

def check_constants(inst, samples=10, seed=0, depth=3) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("constants", inst.name, {"samples": samples, "seed": seed})
    with _timer() as t:
        c0 = 0
        witnesses = []
        ok = True
        for _ in range(samples):
            v = inst.sample_full_vertex(rng, rng.randint(inst.C1, inst.C1 + 2), depth)
            for b in v:
                c0 = max(c0, max(len(x) for x in inst.expansions(b).nodes))
            # rich in contractions: some C1-subset contracts, validated by re-expansion
            found = None
            for pair in combinations(sorted(v, key=inst.key), inst.C1):
                cs = inst.contractions(frozenset(pair))
                if cs:
                    c = cs[0]
                    if frozenset(pair) not in inst.expansions(c).nodes:
                        ok = False
                    found = {"pair": [inst.key(x) for x in pair], "contraction": inst.key(c),
                             "count": len(cs)}
                    break
            if found is None:
                ok = False
            witnesses.append(found)
        ok &= c0 <= inst.C0
        rep.verdict = PASS if ok else FAIL
        rep.witness = {"C0": inst.C0, "max_expansion_height": c0, "C1": inst.C1,
                       "contractions": witnesses[:3]}
    rep.ms = t.ms
    return rep


def check_template(inst, depth=3, samples=10, seed=0) -> list:
    """The five template hypotheses, in order."""
    if not inst.oracle_complete:
        raise OracleIncomplete(inst.name)
    return [
        check_directed(inst, samples, seed, depth=depth),
        check_relative_links(inst, samples, seed, depth=depth),
        check_stabilizers(inst, samples, seed, depth=depth),
        check_orbits(inst, samples, seed, depth=depth),
        check_constants(inst, samples, seed, depth=depth),
    ]


# ------------------------------------------------------------------ descending links

def threshold(kind: str, n: int, C0: int, C1: int) -> int:
    """Height from which the descending link is n-connected."""
    if kind == "permutational":
        return (2 * n + 2) * C0 + C1
    if kind == "linear":
        return (n + 2) * C1 + (n + 1) * C0 - (n + 1)
    if kind == "cyclic":
        return (n + 2) * C1 + (n + 2) * C0 - (n + 2)
    raise ValueError(kind)


def check_descending_bound(inst, k, n, seed=0, vertex=None, budget=None) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("bound", inst.name, {"k": k, "n": n, "seed": seed})
    with _timer() as t:
        v = vertex if vertex is not None else inst.sample_full_vertex(rng, k)
        try:
            link = descending_link(inst, v, budget)
        except BudgetExceeded as e:
            rep.verdict = INCONCLUSIVE
            rep.witness = {"budget": str(e)}
            rep.ms = t.ms
            return rep
        th = threshold(inst.kind, n, inst.C0, inst.C1)
        H = reduced_homology(link.complex, max(n, 0))
        claims = {}
        if k >= inst.C1:
            claims["nonempty"] = not H.empty
        if k >= th:
            claims[f"{n}-connected"] = H.is_n_connected(n)
        rep.verdict = PASS if all(claims.values()) else FAIL
        rep.witness = {"threshold": th, "asserted": claims, "connectivity": H.connectivity(),
                       "homology": H.to_json(), "vertex": _keys(inst, v)}
    rep.ms = t.ms
    return rep


# ------------------------------------------------------------------ covers and nerves

def check_cover_and_nerve(inst, k, seed=0, families=50, vertex=None, link=None) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("cover", inst.name, {"k": k, "seed": seed, "families": families})
    with _timer() as t:
        v = vertex if vertex is not None else inst.sample_full_vertex(rng, k)
        link = link or descending_link(inst, v)
        cover = standard_cover(k, inst.C0, inst.C1, inst.kind)
        missing = cover_violations(link, cover)
        members = [frozenset(link.vertex_ids_in(P)) for P in cover]
        bad_meets = []
        for _ in range(families):
            fam = rng.sample(range(len(cover)), rng.randint(2, min(4, len(cover))))
            inter = frozenset.intersection(*[members[i] for i in fam])
            meet = frozenset(link.vertex_ids_in(meet_all([cover[i] for i in fam])))
            if inter != meet:
                bad_meets.append([repr(cover[i]) for i in fam])
        subs = [link.complex.full_subcomplex(m) for m in members]
        N = nerve(subs)
        H = reduced_homology(N)
        rep.verdict = PASS if not missing and not bad_meets else FAIL
        rep.witness = {"cover_size": len(cover), "uncovered": missing[:5], "bad_meets": bad_meets[:5],
                       "nerve_f_vector": N.f_vector(), "nerve_connectivity": H.connectivity(),
                       "nerve_betti": H.betti_q}
    rep.ms = t.ms
    return rep


# ------------------------------------------------------------------ joins

def join_bound(conns) -> int:
    return sum(conns) + 2 * len(conns) - 2


def check_join_lemma(trials=100, seed=0, max_vertices=10) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("join", "-", {"trials": trials, "seed": seed})
    with _timer() as t:
        bad = []
        hist = {}
        for i in range(trials):
            Ks = []
            for _ in range(2):
                nv = rng.randint(1, max_vertices // 2)
                Ks.append(random_complex(rng, nv, rng.randint(1, 4), rng.randint(0, 2)))
            conns = [reduced_homology(K).connectivity() for K in Ks]
            J = join(tag(Ks[0], 0), tag(Ks[1], 1))
            bound = join_bound(conns)
            H = reduced_homology(J)
            got = H.connectivity()
            hist[str((conns, got))] = hist.get(str((conns, got)), 0) + 1
            # acyclic through the top dimension means no upper limit on connectivity
            if not (H.acyclic or got >= bound):
                bad.append({"trial": i, "conns": conns, "join": got, "bound": bound})
        rep.verdict = PASS if not bad else FAIL
        rep.witness = {"failures": bad[:5], "histogram": hist}
    rep.ms = t.ms
    return rep


# ------------------------------------------------------------------ ascending factorizations

def star_is_product(inst, st) -> dict:
    """Compare the simplex relation on st_↑(v) with the product order of the E(b_i)."""
    n = len(st.vertices)
    expected = 1
    for E in st.posets:
        expected *= len(E.nodes)
    distinct = len(set(st.vertices)) == n == expected
    mismatches = 0
    for i, j in product(range(n), repeat=2):
        if i == j:
            continue
        prod_le = all((a, b) in E.order for E, a, b in zip(st.posets, st.coords[i], st.coords[j]))
        vi, vj = st.vertices[i], st.vertices[j]
        rel = len(vi) < len(vj) and is_simplex(inst, [vi, vj])
        if prod_le != rel:
            mismatches += 1
    return {"vertices": n, "expected": expected, "bijective": distinct, "order_mismatches": mismatches}


def _pad(a, b) -> bool:
    m = max(len(a), len(b))
    return list(a) + [0] * (m - len(a)) == list(b) + [0] * (m - len(b))


def link_matches_join(st) -> dict:
    """lk_↑(v) against the abstract product poset minus its bottom, and against the join."""
    L = st.link()
    coords = [c for c in st.coords if any(c)]
    abstract = order_complex(coords, lambda a, b: all((x, y) in E.order for E, x, y in zip(st.posets, a, b)))
    relabel = Complex(tuple(st.coords[i] for i in range(len(st.vertices))), L.simplices)
    exact = relabel == abstract
    J = st.factor_join()
    HL, HJ = reduced_homology(L), reduced_homology(J)
    same_h = HL.empty == HJ.empty and _pad(HL.betti_q, HJ.betti_q) and _pad(HL.betti_gf2, HJ.betti_gf2)
    return {"product_poset_exact": exact, "homology_match": same_h,
            "euler_match": L.euler() == J.euler(), "link_f_vector": L.f_vector(), "join_f_vector": J.f_vector()}


def check_ascending_factorizations(inst, samples=25, seed=0, heights=(1, 2, 3, 4), depth=3) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("ascending", inst.name, {"samples": samples, "seed": seed, "heights": list(heights)})
    with _timer() as t:
        bad = []
        sizes = []
        for _ in range(samples):
            v = inst.sample_full_vertex(rng, rng.choice(heights), depth)
            st = ascending_star(inst, v)
            a = star_is_product(inst, st)
            b = link_matches_join(st)
            # relative star: the interval below a random expansion is the product of intervals
            target = random_expansion(inst, v, rng, 2)
            rel = relative_ascending_star(inst, v, target)
            keep_coords = {st.coords[i] for i in rel.keep}
            prod_coords = set(product(*rel.factors))
            ok = (a["bijective"] and not a["order_mismatches"] and b["product_poset_exact"]
                  and b["homology_match"] and b["euler_match"] and keep_coords == prod_coords)
            sizes.append(a["vertices"])
            if not ok:
                bad.append({"vertex": _keys(inst, v), **a, **b, "relative_ok": keep_coords == prod_coords})
        rep.verdict = PASS if not bad else FAIL
        rep.witness = {"star_sizes": sizes, "failures": bad[:3]}
    rep.ms = t.ms
    return rep


# ------------------------------------------------------------------ action

def type_vector_translator(inst, v1, v2):
    """γ with γ·v1 = v2 for vertices with matching orbit types, glued from per-element translators."""
    classes1 = sorted(v1, key=lambda b: (inst.orbit_class(b), inst.key(b)))
    classes2 = sorted(v2, key=lambda b: (inst.orbit_class(b), inst.key(b)))
    if [inst.orbit_class(b) for b in classes1] != [inst.orbit_class(b) for b in classes2]:
        return None
    return inst.union_maps([inst.translator(a, b) for a, b in zip(classes1, classes2)])


def translate_vertex(inst, s, v):
    return frozenset(inst.act(s, b) for b in v)


def check_action(inst, samples=10, seed=0, depth=3) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("action", inst.name, {"samples": samples, "seed": seed})
    with _timer() as t:
        counts = {"simplices": 0, "supports": 0, "type_vectors": 0}
        bad = []
        for _ in range(samples):
            s = inst.sample_group(rng, depth)
            v = inst.sample_full_vertex(rng, rng.randint(1, 3), depth)
            w = random_expansion(inst, v, rng, 1)
            sv, sw = translate_vertex(inst, s, v), translate_vertex(inst, s, w)
            if len(sv) != len(v) or len(sw) != len(w):
                bad.append("height")
            if w != v and not is_simplex(inst, [sv, sw]):
                bad.append("simplex")
            counts["simplices"] += 1
            for b in v:
                if inst.support(inst.act(s, b)) != inst.map_region(s, inst.support(b)):
                    bad.append("support")
                counts["supports"] += 1
            if not vertex_support(inst, sv).is_full():
                bad.append("full support")
            # equal type vectors -> one group element moves v to v2
            v2 = inst.sample_full_vertex(rng, len(v), depth)
            if len(v2) == len(v):
                g = type_vector_translator(inst, v, v2)
                if g is not None:
                    counts["type_vectors"] += 1
                    if translate_vertex(inst, g, v) != v2:
                        bad.append("type vector")
        rep.verdict = PASS if not bad else FAIL
        rep.witness = {**counts, "failures": bad[:5]}
    rep.ms = t.ms
    return rep


# ------------------------------------------------------------------ exhaustive constants for V

def v_pair_contractions(max_dom_depth=3, max_img_depth=3, max_rows=3) -> dict:
    """Every disjoint-support pair of canonical V elements has exactly two contractions."""
    from .instances.thompson_v import ThompsonV, enumerate_elements
    V = ThompsonV()
    elems = [e for e in enumerate_elements(max_dom_depth, max_img_depth, max_rows) if not e.full]
    by_support = {}
    for e in elems:
        by_support.setdefault(e.support, []).append(e)
    groups = list(by_support.items())
    pairs = 0
    bad = []
    candidates = []
    for (r1, g1), (r2, g2) in combinations(groups, 2):
        if r1.isdisjoint(r2):
            candidates.extend(product(g1, g2))
    for x, y in candidates:
        pairs += 1
        cs = V.contractions(frozenset([x, y]))
        # contractions() re-expands every candidate; here only count and distinctness
        ok = len(cs) == 2 and cs[0] != cs[1]
        if not ok:
            bad.append((x.key, y.key))
    return {"elements": len(elems), "pairs": pairs, "failures": bad[:5]}
