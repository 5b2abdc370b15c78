"""Run the template checks for every shipped instance and print a one-line summary per check."""
import argparse
import json
from dataclasses import dataclass

from expanse.instances import get_instance
from expanse.verify import check_template


@dataclass
class Config:
    samples: int = 10
    seed: int = 0
    json_out: str | None = None


DEPTHS = {"v": 3, "2v": 2, "3v": 2, "rover": 2}


def run(cfg: Config):
    out = []
    for name, depth in DEPTHS.items():
        for rep in check_template(get_instance(name), depth=depth, samples=cfg.samples, seed=cfg.seed):
            keep = {k: v for k, v in rep.witness.items() if k not in ("sequence_lengths", "contractions", "representatives")}
            print(f"{name:<6} {rep.check:<15} {rep.verdict:<5} {rep.ms:>6} ms  {keep}")
            out.append(rep.to_json())
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump(out, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json-out", dest="json_out")
    run(Config(**vars(p.parse_args())))
