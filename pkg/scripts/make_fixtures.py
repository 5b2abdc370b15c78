"""Regenerate the JSON fixtures under tests/fixtures."""
import json
from pathlib import Path

from expanse.cantor_maps import BoxMap
from expanse.expansion_core import Partition
from expanse.instances.brin_nv import NVElement
from expanse.instances.roever import IDENTITY as ROVER_ID, RoverElement
from expanse.instances.thompson_v import VElement, pattern_vertex
from expanse.topology import EMPTY, sphere_boundary

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

G = VElement.of(("0", "101"), ("10", "00"), ("11", "100"))
F5 = NVElement(BoxMap(2, ((("0", ""), ("01", "0")), (("1", "1"), ("11", "")), (("1", "0"), ("0", "1")))))


def elements(xs):
    return {"elements": [x.to_json() for x in xs]}


FIXTURES = {
    "v_g.json": elements([G]),
    "v_vertex2.json": elements(sorted(pattern_vertex(["0", "1"]), key=lambda b: b.key)),
    "v_vertex3.json": elements(sorted(pattern_vertex(["0", "10", "11"]), key=lambda b: b.key)),
    "v_orbits.json": elements([G, VElement.of(("", "")), VElement.of(("", "01")), VElement.of(("0", "1"), ("1", "0"))]),
    "2v_f5.json": elements([F5]),
    "rover_elements.json": elements([ROVER_ID, RoverElement.of(("0", "1", "ab"), ("1", "00", "d"))]),
    "tablemap_g.json": G.table.to_json(),
    "boxmap_f5.json": F5.table.to_json(),
    "partition.json": Partition.of([{0, 2}, {1}]).to_json(),
    "complex_circle.json": sphere_boundary(1).to_json(),
    "complex_empty.json": EMPTY.to_json(),
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, obj in FIXTURES.items():
        (OUT / name).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        print(name)


if __name__ == "__main__":
    main()
