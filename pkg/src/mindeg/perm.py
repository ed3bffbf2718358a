"""Permutations of a fixed finite domain.

Points are 0-based internally; cycle notation uses 1-based points.
Composition is left-to-right: (a * b) means "apply a, then b".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from math import lcm

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    """An element of Sym(n), stored as an image table."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if n < 1:
            raise ValueError("degree must be at least 1")
        if sorted(self.images) != list(range(n)):
            raise ValueError("images must be a bijection of {0,...,n-1}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __invert__(self) -> "Permutation":
        return inverse(self)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 0-based, each starting at its smallest point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in cycs)

    def __repr__(self) -> str:
        return f"Permutation({self!s}, degree={self.degree})"


def identity(degree: int) -> Permutation:
    return Permutation(tuple(range(degree)))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Left-to-right product: apply a first, then b."""
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")
    bi = b.images
    return Permutation(tuple(bi[x] for x in a.images))


def inverse(a: Permutation) -> Permutation:
    inv = [0] * a.degree
    for i, x in enumerate(a.images):
        inv[x] = i
    return Permutation(tuple(inv))


def conjugate(s: Permutation, g: Permutation) -> Permutation:
    """The conjugate g^{-1} s g (as a function: g after s after g^{-1})."""
    return compose(compose(inverse(g), s), g)


def element_order(a: Permutation) -> int:
    return reduce(lcm, (len(c) for c in a.cycles()), 1)


def parse_permutation(text: str, degree: int) -> Permutation:
    """Parse disjoint-cycle notation with 1-based points; "()" is the identity."""
    text = text.strip()
    if degree < 1:
        raise ValueError("degree must be at least 1")
    stripped = _CYCLE_RE.sub("", text)
    if stripped.strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    images = list(range(degree))
    used: set[int] = set()
    for body in _CYCLE_RE.findall(text):
        pts = [tok for tok in re.split(r"[,\s]+", body.strip()) if tok]
        if not pts:
            continue  # "()" — empty cycle, identity contribution
        cyc = []
        for tok in pts:
            if not tok.isdigit():
                raise ValueError(f"malformed point {tok!r} in {text!r}")
            p = int(tok) - 1
            if not 0 <= p < degree:
                raise ValueError(f"point {tok} out of range 1..{degree}")
            if p in used:
                raise ValueError(f"repeated point {tok} in {text!r}")
            used.add(p)
            cyc.append(p)
        for i, p in enumerate(cyc):
            images[p] = cyc[(i + 1) % len(cyc)]
    return Permutation(tuple(images))
