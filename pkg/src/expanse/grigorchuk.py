"""The Grigorchuk group G0 = <a,b,c,d> acting on binary words.

A word "xy" means x∘y: the rightmost letter acts first.
a flips the first symbol; b = (a,c), c = (a,d), d = (1,b).
"""
from __future__ import annotations

from functools import lru_cache

LETTERS = "abcd"
K = ("1", "b", "c", "d")

# (section on 0-subtree, section on 1-subtree) for the level-1 stabilising generators
_SECTIONS = {"b": ("a", "c"), "c": ("a", "d"), "d": ("", "b")}


def parse(s: str) -> str:
    if any(ch not in "abcd1" for ch in s):
        raise ValueError(f"not a Grigorchuk word: {s!r}")
    return s.replace("1", "")


def to_str(w: str) -> str:
    return w if w else "1"


def k_mul(x: str, y: str) -> str:
    """Klein four-group product on {1,b,c,d}."""
    if x not in K or y not in K:
        raise ValueError("K elements are 1, b, c, d")
    if x == "1":
        return y
    if y == "1":
        return x
    if x == y:
        return "1"
    return ({"b", "c", "d"} - {x, y}).pop()


def reduce_word(w: str) -> str:
    """Free reduction using a^2 = 1 and the Klein table on b, c, d."""
    out = []
    for ch in parse(w):
        if out and ch == "a" and out[-1] == "a":
            out.pop()
        elif out and ch != "a" and out[-1] != "a":
            k = k_mul(out.pop(), ch)
            if k != "1":
                out.append(k)
        else:
            out.append(ch)
    return "".join(out)


def _letter(letter: str, u: str):
    """(image of u, section at u) for one generator."""
    if not u:
        return u, letter
    state = letter
    out = []
    for i, s in enumerate(u):
        if state == "":
            return "".join(out) + u[i:], ""
        if state == "a":
            out.append("1" if s == "0" else "0")
            state = ""
        else:
            out.append(s)
            state = _SECTIONS[state][int(s)]
    return "".join(out), state


def act(w: str, u: str) -> str:
    for letter in reversed(parse(w)):
        u, _ = _letter(letter, u)
    return u


def section(w: str, u: str) -> str:
    """w restricted below u: w(u x) = w(u) section(w,u)(x)."""
    parts = []
    for letter in reversed(parse(w)):
        u, sec = _letter(letter, u)
        parts.append(sec)
    return "".join(reversed(parts))


def act_and_section(w: str, u: str):
    parts = []
    for letter in reversed(parse(w)):
        u, sec = _letter(letter, u)
        parts.append(sec)
    return u, "".join(reversed(parts))


@lru_cache(maxsize=None)
def _trivial(r: str) -> bool:
    if r == "":
        return True
    if r.count("a") % 2 or len(r) == 1:
        return False
    s0 = reduce_word(section(r, "0"))
    s1 = reduce_word(section(r, "1"))
    # sections of reduced words of length >= 2 are strictly shorter
    assert len(s0) < len(r) and len(s1) < len(r), r
    return _trivial(s0) and _trivial(s1)


def is_identity(w: str) -> bool:
    return _trivial(reduce_word(w))


def inverse(w: str) -> str:
    return parse(w)[::-1]


def equal(w1: str, w2: str) -> bool:
    return is_identity(parse(w1) + inverse(w2))


def in_K(w: str):
    """The K element equal to w, or None."""
    for k in K:
        if equal(w, "" if k == "1" else k):
            return k
    return None
