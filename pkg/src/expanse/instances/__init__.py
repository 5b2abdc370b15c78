"""Concrete expansion sets."""


def get_instance(name: str):
    from .brin_nv import BrinNV
    from .roever import Rover
    from .thompson_v import ThompsonV

    if name == "v":
        return ThompsonV()
    if name in ("2v", "3v"):
        return BrinNV(int(name[0]))
    if name == "rover":
        return Rover()
    raise ValueError(f"unknown instance {name!r}")
