"""Command-line front end.

Exit codes: 0 all verdicts pass, 1 some check failed, 2 usage or input error,
3 only budget overruns / inconclusive verdicts.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import verify
from .expansion_core import (ExpansionInstance, Partition, VertexError, ascending_star, descending_link,
                             make_vertex, partitioned_descending_link, relative_ascending_star)
from .instances import get_instance
from .topology import BudgetExceeded, Complex, _json_label, reduced_homology

INSTANCES = ("v", "2v", "3v", "rover")


class InputError(Exception):
    pass


def _dump(obj, out=None):
    out = out or sys.stdout
    out.write(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def _load_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: malformed JSON ({e.msg})")


def load_elements(inst: ExpansionInstance, path) -> list:
    obj = _load_json(path)
    items = obj.get("elements") if isinstance(obj, dict) else obj
    if not isinstance(items, list):
        raise InputError(f"{path}: expected a list of elements or {{\"elements\": [...]}}")
    out = []
    for i, item in enumerate(items):
        try:
            out.append(inst.element_from_json(item))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"{path}: element {i}: {e}")
    return out


def load_vertex(inst, path) -> frozenset:
    elems = load_elements(inst, path)
    try:
        return make_vertex(inst, elems)
    except VertexError as e:
        raise InputError(f"{path}: {e}")


def _plain_label(v) -> str:
    return v if isinstance(v, str) else json.dumps(_json_label(v), sort_keys=True)


def vertex_label(inst):
    return lambda v: sorted(inst.key(b) for b in v)


def _instance(args):
    name = getattr(args, "instance_pos", None) or args.instance
    if name is None:
        raise InputError("an instance is required (--instance {v,2v,3v,rover})")
    return get_instance(name)


def _exit_code(verdicts) -> int:
    verdicts = list(verdicts)
    if verify.FAIL in verdicts:
        return 1
    if verdicts and all(v == verify.PASS for v in verdicts):
        return 0
    return 3


# ------------------------------------------------------------------ subcommands

def cmd_link(args) -> int:
    inst = _instance(args)
    v = load_vertex(inst, args.vertex)
    if args.up:
        L = ascending_star(inst, v, args.budget).link()
    else:
        link = descending_link(inst, v, args.budget)
        if args.partition:
            P = Partition.from_json(_load_json(args.partition))
            L = partitioned_descending_link(inst, v, P, link)
        else:
            L = link.complex
    if args.format == "dot":
        sys.stdout.write(L.to_dot("link", label=lambda w: " ".join(vertex_label(inst)(w))))
        return 0
    _dump({"complex": L.to_json(vertex_label(inst)), "homology": reduced_homology(L).to_json()})
    return 0


def cmd_star(args) -> int:
    inst = _instance(args)
    v = load_vertex(inst, args.vertex)
    if args.target:
        rel = relative_ascending_star(inst, v, load_vertex(inst, args.target))
        K = rel.complex
        extra = {"factors": rel.factors}
    else:
        st = ascending_star(inst, v, args.budget)
        K = st.complex
        extra = {"product_check": verify.star_is_product(inst, st)}
    if args.format == "dot":
        sys.stdout.write(K.to_dot("star", label=lambda w: " ".join(vertex_label(inst)(w))))
        return 0
    _dump({"complex": K.to_json(vertex_label(inst)), **extra})
    return 0


CHECKS = ("template", "bound", "cover", "join", "ascending", "action", "pairs")


def run_check(name, args) -> list:
    if name == "join":
        return [verify.check_join_lemma(args.samples or 100, args.seed)]
    if name == "pairs":
        w = verify.v_pair_contractions(args.depth or 3, args.depth or 3, 3)
        rep = verify.CheckReport("pairs", "v", {"depth": args.depth or 3},
                                 verify.PASS if not w["failures"] else verify.FAIL, w)
        return [rep]
    inst = _instance(args)
    depth = args.depth or (3 if inst.name == "v" else 2)
    samples = args.samples or 10
    if name == "template":
        return verify.check_template(inst, depth, samples, args.seed)
    if name == "bound":
        if args.k is None or args.n is None:
            raise InputError("bound needs --k and --n")
        return [verify.check_descending_bound(inst, args.k, args.n, args.seed, budget=args.budget)]
    if name == "cover":
        if args.k is None:
            raise InputError("cover needs --k")
        return [verify.check_cover_and_nerve(inst, args.k, args.seed)]
    if name == "ascending":
        return [verify.check_ascending_factorizations(inst, samples, args.seed, depth=depth)]
    if name == "action":
        return [verify.check_action(inst, samples, args.seed, depth)]
    raise InputError(f"unknown check {name!r}")


def cmd_check(args) -> int:
    names = CHECKS if args.check == "all" else (args.check,)
    reports = []
    for name in names:
        if args.check == "all" and name in ("bound", "cover") and args.k is None:
            continue
        reports.extend(run_check(name, args))
    _dump([r.to_json() for r in reports])
    return _exit_code(r.verdict for r in reports)


def cmd_orbits(args) -> int:
    inst = _instance(args)
    elems = load_elements(inst, args.elements)
    classes = [inst.orbit_class(b) for b in elems]
    reps = {}
    witnesses = []
    for i, b in enumerate(elems):
        j = reps.setdefault(classes[i], i)
        if j != i:
            s = inst.orbit_witness(elems[j], b)
            witnesses.append({"from": j, "to": i, "verified": inst.act(s, elems[j]) == b})
    _dump({"classes": classes, "orbits": len(reps), "representatives": reps, "witnesses": witnesses})
    return 0 if all(w["verified"] for w in witnesses) else 1


def poset_dot(inst, b, name="poset") -> str:
    E = inst.expansions(b)
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i, node in enumerate(E.nodes):
        text = "\\n".join(sorted(inst.key(x) or "ε" for x in node))
        lines.append(f'  p{i} [label="{text}"];')
    for i, j in sorted(E.order):
        if i == j:
            continue
        # Hasse edges only
        if any((i, k) in E.order and (k, j) in E.order for k in range(len(E.nodes)) if k not in (i, j)):
            continue
        lines.append(f"  p{i} -> p{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export(args) -> int:
    if args.kind == "complex":
        obj = _load_json(args.input)
        try:
            K = Complex.from_json(obj.get("complex", obj))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"{args.input}: {e}")
        sys.stdout.write(K.to_dot("K", label=_plain_label))
        return 0
    inst = _instance(args)
    elems = load_elements(inst, args.input)
    if not elems:
        raise InputError(f"{args.input}: no elements")
    if args.kind == "tree-pair":
        if inst.name != "v":
            raise InputError("tree-pair export is for instance v")
        from .instances.thompson_v import tree_pair_dot
        sys.stdout.write("".join(tree_pair_dot(b, f"treepair{i}") for i, b in enumerate(elems)))
        return 0
    sys.stdout.write("".join(poset_dot(inst, b, f"poset{i}") for i, b in enumerate(elems)))
    return 0


def cmd_homology(args) -> int:
    obj = _load_json(args.input)
    try:
        K = Complex.from_json(obj.get("complex", obj))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"{args.input}: {e}")
    rep = reduced_homology(K, collapse=args.collapse)
    _dump(rep.to_json())
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="expanse", description="Expansion-set complexes for Thompson-like groups.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", choices=INSTANCES)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="simplex budget (default EXPANSE_BUDGET)")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("link", parents=[common], help="ascending or descending link of a vertex")
    d = s.add_mutually_exclusive_group(required=True)
    d.add_argument("--down", action="store_true")
    d.add_argument("--up", action="store_true")
    s.add_argument("--vertex", required=True)
    s.add_argument("--partition")
    s.set_defaults(func=cmd_link)

    s = sub.add_parser("star", parents=[common], help="ascending star (optionally relative to a target)")
    s.add_argument("--vertex", required=True)
    s.add_argument("--target")
    s.set_defaults(func=cmd_star)

    s = sub.add_parser("check", parents=[common], help="run verification checks")
    s.add_argument("instance_pos", nargs="?", choices=INSTANCES, metavar="INSTANCE")
    s.add_argument("check", choices=CHECKS + ("all",))
    s.add_argument("--depth", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--samples", type=int)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("orbits", parents=[common], help="classify elements into orbits")
    s.add_argument("--elements", required=True)
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("export", parents=[common], help="DOT export")
    s.add_argument("kind", choices=("tree-pair", "poset", "complex"))
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("homology", parents=[common], help="reduced homology of a complex JSON")
    s.add_argument("--input", required=True)
    s.add_argument("--collapse", action="store_true")
    s.set_defaults(func=cmd_homology)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # `check --all` is accepted as a spelling of `check all`
    argv = ["all" if a == "--all" else a for a in argv]
    args = parser.parse_args(argv)
    saved = os.environ.get("EXPANSE_BUDGET")
    if args.budget is not None:
        os.environ["EXPANSE_BUDGET"] = str(args.budget)
    try:
        return args.func(args)
    except InputError as e:
        print(f"expanse: error: {e}", file=sys.stderr)
        return 2
    except BudgetExceeded as e:
        print(f"expanse: budget exceeded: {e}", file=sys.stderr)
        return 3
    finally:
        # main() is also called in-process, so the override must not outlive the call
        if saved is None:
            os.environ.pop("EXPANSE_BUDGET", None)
        else:
            os.environ["EXPANSE_BUDGET"] = saved


if __name__ == "__main__":
    sys.exit(main())
