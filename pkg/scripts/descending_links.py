"""Connectivity of sampled descending links by height, against the permutational threshold.

    python scripts/descending_links.py --instance v --heights 2 3 4 5 6 7 --samples 3
"""
import argparse
import random
import time
from dataclasses import dataclass, field

from expanse.expansion_core import descending_link
from expanse.instances import get_instance
from expanse.topology import BudgetExceeded, reduced_homology
from expanse.verify import threshold


@dataclass
class Config:
    instance: str = "v"
    heights: list = field(default_factory=lambda: [2, 3, 4, 5, 6, 7])
    samples: int = 3
    seed: int = 0
    budget: int | None = None


def run(cfg: Config):
    inst = get_instance(cfg.instance)
    rng = random.Random(cfg.seed)
    th = {n: threshold(inst.kind, n, inst.C0, inst.C1) for n in (-1, 0, 1)}
    print(f"{inst.name}: C0={inst.C0} C1={inst.C1} thresholds {th}")
    print(f"{'k':>3} {'vertices':>9} {'conn':>5} {'betti_q':<20} {'secs':>6}")
    for k in cfg.heights:
        for _ in range(cfg.samples):
            v = inst.sample_full_vertex(rng, k)
            t = time.perf_counter()
            try:
                L = descending_link(inst, v, cfg.budget).complex
            except BudgetExceeded as e:
                print(f"{k:>3} over budget: {e}")
                continue
            H = reduced_homology(L, 2)
            print(f"{k:>3} {L.f_vector()[0] if L.simplices else 0:>9} {H.connectivity():>5} "
                  f"{str(H.betti_q):<20} {time.perf_counter() - t:6.2f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--instance", default="v")
    p.add_argument("--heights", type=int, nargs="+", default=Config().heights)
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int)
    run(Config(**vars(p.parse_args())))
