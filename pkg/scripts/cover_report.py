"""Standard covers of descending links and their nerves, for V and the ordered toys."""
import argparse
from dataclasses import dataclass

from expanse.expansion_core import descending_link
from expanse.instances import get_instance
from expanse.instances.ordered_toy import OrderedToy, unit_vertex
from expanse.verify import check_cover_and_nerve


@dataclass
class Config:
    k_min: int = 3
    k_max: int = 6
    families: int = 50
    seed: int = 0


def report(name, inst, k, cfg, vertex=None):
    link = descending_link(inst, vertex) if vertex is not None else None
    rep = check_cover_and_nerve(inst, k, seed=cfg.seed, families=cfg.families, vertex=vertex, link=link)
    w = rep.witness
    print(f"{name:<12} k={k}  {rep.verdict:<5} cover={w['cover_size']:<3} nerve f={w['nerve_f_vector'][:4]} "
          f"conn={w['nerve_connectivity']} ({rep.ms} ms)")


def run(cfg: Config):
    V = get_instance("v")
    for k in range(max(cfg.k_min, V.C0 + 1), cfg.k_max + 1):
        report("v", V, k, cfg)
    for kind in ("linear", "cyclic"):
        for k in range(cfg.k_min, cfg.k_max + 2):
            toy = OrderedToy(kind, k if kind == "cyclic" else None)
            report(f"toy-{kind}", toy, k, cfg, unit_vertex(k))


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--k-min", dest="k_min", type=int, default=3)
    p.add_argument("--k-max", dest="k_max", type=int, default=6)
    p.add_argument("--families", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    run(Config(**vars(p.parse_args())))
