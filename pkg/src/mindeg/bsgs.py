"""Stabilizer-chain engine for permutation groups.

Provides order, membership with word witness, orbits, pointwise
stabilizers, normal closure, centralizer of a normal subgroup,
intersection with a normal subgroup, induced actions and kernels.

The chain is built by a deterministic Schreier-Sims procedure: base
points are the smallest non-fixed points (optionally preceded by a
forced prefix, used for pointwise stabilizers and kernels), orbits are
explored breadth-first in generator order.
"""

from __future__ import annotations

import random
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .errors import ResourceBudgetError
from .perm import Permutation, compose, conjugate, identity, inverse

DEFAULT_NODE_BUDGET = 5_000_000

# ---------------------------------------------------------------------------
# Words over signed generator indices.
#
# Witnesses are built as products of sifted transversal elements; to keep
# chain construction cheap they are stored as shared expression DAGs and
# flattened to signed 1-based generator indices only on demand.

W_EMPTY = ("1",)


def _wmul(a, b):
    if a is W_EMPTY:
        return b
    if b is W_EMPTY:
        return a
    return ("*", a, b)


def _winv(a):
    if a is W_EMPTY:
        return a
    return ("~", a)


def flatten_word(w) -> list[int]:
    """Expand a word DAG to a flat list of signed 1-based generator indices."""
    out: list[int] = []
    stack = [(w, False)]
    while stack:
        node, inv = stack.pop()
        if isinstance(node, int):
            out.append(-node if inv else node)
        elif node[0] == "1":
            pass
        elif node[0] == "~":
            stack.append((node[1], not inv))
        else:  # ("*", a, b): a then b; inverted: b^-1 then a^-1
            if inv:
                stack.append((node[1], True))
                stack.append((node[2], True))
            else:
                stack.append((node[2], False))
                stack.append((node[1], False))
    return out


def evaluate_word(word: Sequence[int], gens: Sequence[Permutation], degree: int) -> Permutation:
    """Evaluate a flat signed-index word left to right."""
    g = identity(degree)
    for idx in word:
        h = gens[abs(idx) - 1]
        g = compose(g, h if idx > 0 else inverse(h))
    return g


def _recompute_orbit(lvl: "_Level", ident: Permutation) -> None:
    lvl.transversal = {lvl.base: (ident, W_EMPTY)}
    queue = [lvl.base]
    while queue:
        x = queue.pop(0)
        ux, wx = lvl.transversal[x]
        for h, wh in zip(lvl.gens, lvl.words):
            y = h.images[x]
            if y not in lvl.transversal:
                lvl.transversal[y] = (compose(ux, h), _wmul(wx, wh))
                queue.append(y)


class _Level:
    __slots__ = ("base", "gens", "words", "transversal")

    def __init__(self, base: int):
        self.base = base
        self.gens: list[Permutation] = []
        self.words: list = []
        # point -> (u, word) with u in the level group and u(base) = point
        self.transversal: dict[int, tuple[Permutation, object]] = {}


class PermGroup:
    """A permutation group with a lazily built stabilizer chain."""

    def __init__(self, degree: int, generators: Iterable[Permutation] = (),
                 forced_base: Sequence[int] = ()):
        self.degree = degree
        self.generators = [g for g in generators if not g.is_identity()]
        for g in self.generators:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
        self._forced_base = list(forced_base)
        self._levels: Optional[list[_Level]] = None
        self._order: Optional[int] = None

    # -- chain construction -------------------------------------------------

    def _chain(self) -> list[_Level]:
        if self._levels is None:
            self._build_chain()
        return self._levels

    def _new_level(self, levels: list[_Level], mover: Permutation) -> None:
        used = {lvl.base for lvl in levels}
        for b in self._forced_base:
            if b not in used:
                levels.append(_Level(b))
                return
        for b in range(self.degree):
            if b not in used and mover.images[b] != b:
                levels.append(_Level(b))
                return
        raise AssertionError("no base point available for a non-identity residue")

    def _sift(self, levels, g, w, start=0):
        """Sift g (with word w) through levels[start:].

        Returns (residue, word, level-index). The index is the first level
        whose transversal cannot absorb the residue, or len(levels).
        """
        for i in range(start, len(levels)):
            lvl = levels[i]
            x = g.images[lvl.base]
            if x == lvl.base:
                continue
            entry = lvl.transversal.get(x)
            if entry is None:
                return g, w, i
            u, uw = entry
            g = compose(g, inverse(u))
            w = _wmul(w, _winv(uw))
        return g, w, len(levels)

    def _build_chain(self) -> None:
        levels: list[_Level] = []
        ident = identity(self.degree)
        # Force-create levels for the requested base prefix up front so that
        # pointwise stabilizers can be read off even when points are fixed.
        for b in self._forced_base:
            lvl = _Level(b)
            lvl.transversal = {b: (ident, W_EMPTY)}
            levels.append(lvl)

        def insert(g, w, start):
            """Sift and install a residue as a strong generator."""
            while True:
                g, w, i = self._sift(levels, g, w, start)
                if g.is_identity():
                    return None
                if i < len(levels):
                    self._add_strong_gen(levels, i, g, w)
                    return i
                self._new_level(levels, g)
                lvl = levels[-1]
                lvl.transversal = {lvl.base: (ident, W_EMPTY)}
                start = i  # re-sift from the new level

        for k, g in enumerate(self.generators):
            insert(g, k + 1, 0)

        # Verify Schreier generators bottom-up; re-verify from any level that
        # receives a new strong generator.
        i = len(levels) - 1
        while i >= 0:
            lvl = levels[i]
            _recompute_orbit(lvl, ident)
            failed_at = None
            for x in sorted(lvl.transversal):
                ux, wx = lvl.transversal[x]
                for g, wg in zip(lvl.gens, lvl.words):
                    y = g.images[x]
                    uy, wy = lvl.transversal[y]
                    s = compose(compose(ux, g), inverse(uy))
                    if s.is_identity():
                        continue
                    sw = _wmul(_wmul(wx, wg), _winv(wy))
                    j = insert(s, sw, i + 1)
                    if j is not None:
                        failed_at = j if failed_at is None else min(failed_at, j)
                if failed_at is not None:
                    break
            i = failed_at if failed_at is not None else i - 1

        order = 1
        for lvl in levels:
            order *= len(lvl.transversal)
        self._levels = levels
        self._order = order

    def _add_strong_gen(self, levels, i, g, w) -> None:
        """Register g as a strong generator at levels 0..i and refresh orbits."""
        ident = identity(self.degree)
        for j in range(i + 1):
            lvl = levels[j]
            if g.images[lvl.base] != lvl.base and j < i:
                raise AssertionError("strong generator must fix shallower base points")
        for j in range(i + 1):
            lvl = levels[j]
            lvl.gens.append(g)
            lvl.words.append(w)
        # orbits at shallower levels cannot grow (g is already a member there),
        # but level i's orbit must be recomputed
        _recompute_orbit(levels[i], ident)

    # -- queries -------------------------------------------------------------

    def order(self) -> int:
        self._chain()
        return self._order

    def base(self) -> list[int]:
        return [lvl.base for lvl in self._chain()]

    def member(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            raise ValueError("degree mismatch")
        res, _, i = self._sift(self._chain(), g, W_EMPTY)
        return res.is_identity()

    def contains(self, g: Permutation):
        """Return (bool, word) with the word over signed 1-based generator indices."""
        if g.degree != self.degree:
            raise ValueError("degree mismatch")
        res, w, _ = self._sift(self._chain(), g, W_EMPTY)
        if not res.is_identity():
            return False, None
        # g * prod(inverses) = id, so g = (that product) inverted
        return True, flatten_word(_winv(w))

    def orbit(self, point: int) -> set[int]:
        if not 0 <= point < self.degree:
            raise ValueError("point out of range")
        orb = {point}
        queue = [point]
        while queue:
            x = queue.pop(0)
            for g in self.generators:
                y = g.images[x]
                if y not in orb:
                    orb.add(y)
                    queue.append(y)
        return orb

    def elements(self, limit: Optional[int] = None) -> Iterator[Permutation]:
        """Iterate over all group elements via the chain."""
        levels = self._chain()
        if limit is not None and self.order() > limit:
            raise ResourceBudgetError(f"group order {self.order()} exceeds limit {limit}")
        # an element is u_{k-1} * ... * u_0 (deepest transversal applied first)
        yield from _enumerate(levels, identity(self.degree), len(levels) - 1)

    def random_element(self, rng: random.Random) -> Permutation:
        levels = self._chain()
        g = identity(self.degree)
        for lvl in levels:
            pts = sorted(lvl.transversal)
            u, _ = lvl.transversal[rng.choice(pts)]
            g = compose(u, g)
        return g

    def pointwise_stabilizer(self, points: Iterable[int]) -> "PermGroup":
        pts = sorted(set(points))
        for p in pts:
            if not 0 <= p < self.degree:
                raise ValueError("point out of range")
        rebased = PermGroup(self.degree, self.generators, forced_base=pts)
        levels = rebased._chain()
        gens = []
        seen = set()
        for lvl in levels[len(pts):]:
            for g in lvl.gens:
                if g.images not in seen and all(g.images[p] == p for p in pts):
                    seen.add(g.images)
                    gens.append(g)
        return PermGroup(self.degree, gens)

    def is_trivial(self) -> bool:
        return self.order() == 1

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"


def _enumerate(levels, start, top):
    """Yield all products start * u_{top} * ... * u_0 (deepest applied first)."""
    stack = [(top, start)]
    while stack:
        i, prefix = stack.pop()
        if i < 0:
            yield prefix
            continue
        for x in sorted(levels[i].transversal, reverse=True):
            u, _ = levels[i].transversal[x]
            stack.append((i - 1, compose(prefix, u)))


# ---------------------------------------------------------------------------
# Module-level operations


def build_group(degree: int, generators: Iterable[Permutation]) -> PermGroup:
    G = PermGroup(degree, generators)
    G._chain()
    return G


def group_order(G: PermGroup) -> int:
    return G.order()


def contains(G: PermGroup, g: Permutation):
    return G.contains(g)


def orbit(G: PermGroup, point: int) -> set[int]:
    return G.orbit(point)


def pointwise_stabilizer(G: PermGroup, points: Iterable[int]) -> PermGroup:
    return G.pointwise_stabilizer(points)


def random_element(G: PermGroup, rng: random.Random) -> Permutation:
    return G.random_element(rng)


def normal_closure(G: PermGroup, seeds: Sequence[Permutation]) -> PermGroup:
    """Smallest subgroup containing the seeds and normalized by G."""
    for s in seeds:
        if not G.member(s):
            raise ValueError("seed element not in G")
    gens = [s for s in seeds if not s.is_identity()]
    N = PermGroup(G.degree, gens)
    changed = True
    while changed:
        changed = False
        for g in G.generators:
            for s in list(gens):
                c = conjugate(s, g)
                if not N.member(c):
                    gens.append(c)
                    N = PermGroup(G.degree, gens)
                    changed = True
    return N


def _check_normalizes(G: PermGroup, H: PermGroup) -> None:
    for g in G.generators:
        for h in H.generators:
            if not H.member(conjugate(h, g)):
                raise ValueError("precondition failed: G does not normalize H")


def centralizer_of_normal(G: PermGroup, H: PermGroup,
                          budget: int = DEFAULT_NODE_BUDGET) -> PermGroup:
    """C_G(H) for H normalized by G, by pruned backtrack over G's chain."""
    _check_normalizes(G, H)
    hgens = H.generators
    if not hgens:
        return G
    levels = G._chain()
    base = [lvl.base for lvl in levels]
    base_pos = {b: j for j, b in enumerate(base)}
    found: list[Permutation] = []
    K = PermGroup(G.degree)
    nodes = 0

    def prune(i, prefix):
        # images of base[0..i] are fixed to prefix(base[j]); check every
        # commutation constraint whose both sides are already determined
        for h in hgens:
            him = h.images
            for j in range(i + 1):
                bj = base[j]
                y = him[bj]
                pos = base_pos.get(y)
                if pos is not None and pos <= i:
                    if prefix.images[y] != him[prefix.images[bj]]:
                        return False
        return True

    def leaf_ok(g):
        gi = g.images
        return all(tuple(him[x] for x in gi) == tuple(gi[x] for x in him)
                   for him in (h.images for h in hgens))

    stack = [(0, identity(G.degree))]
    while stack:
        i, prefix = stack.pop()
        nodes += 1
        if nodes > budget:
            raise ResourceBudgetError("centralizer search budget exceeded")
        if i == len(levels):
            if not prefix.is_identity() and leaf_ok(prefix) and not K.member(prefix):
                found.append(prefix)
                K = PermGroup(G.degree, found)
            continue
        for x in sorted(levels[i].transversal, reverse=True):
            u, _ = levels[i].transversal[x]
            cand = compose(u, prefix)
            if prune(i, cand):
                stack.append((i + 1, cand))
    return K


def intersect_with_normal(G: PermGroup, H: PermGroup,
                          budget: int = DEFAULT_NODE_BUDGET) -> PermGroup:
    """G ∩ H for H normalized by G, by pruned backtrack over G's chain."""
    _check_normalizes(G, H)
    if all(H.member(g) for g in G.generators):
        return G
    levels = G._chain()
    base = [lvl.base for lvl in levels]
    # H rebased so its chain can absorb target base-point images level by level
    Hb = PermGroup(H.degree, H.generators, forced_base=base)
    hlevels = Hb._chain()
    found: list[Permutation] = []
    K = PermGroup(G.degree)
    nodes = 0

    # state: (level i, prefix in G, partial t in H with t(base[j]) = prefix(base[j]) for j < i)
    stack = [(0, identity(G.degree), identity(G.degree))]
    while stack:
        i, prefix, t = stack.pop()
        nodes += 1
        if nodes > budget:
            raise ResourceBudgetError("intersection search budget exceeded")
        if i == len(levels):
            if not prefix.is_identity() and Hb.member(prefix) and not K.member(prefix):
                found.append(prefix)
                K = PermGroup(G.degree, found)
            continue
        hl = hlevels[i]
        tinv = inverse(t)
        for x in sorted(levels[i].transversal, reverse=True):
            u, _ = levels[i].transversal[x]
            cand = compose(u, prefix)
            target = cand.images[base[i]]
            z = tinv.images[target]
            entry = hl.transversal.get(z)
            if entry is None:
                continue  # no element of H matches these base images
            stack.append((i + 1, cand, compose(entry[0], t)))
    return K


# ---------------------------------------------------------------------------
# Induced actions


class Homomorphism:
    """A homomorphism given by generator images."""

    def __init__(self, source: PermGroup, target: PermGroup,
                 gen_images: Sequence[Permutation]):
        if len(gen_images) != len(source.generators):
            raise ValueError("one image per source generator required")
        self.source = source
        self.target = target
        self.gen_images = list(gen_images)

    def apply(self, g: Permutation) -> Permutation:
        ok, word = self.source.contains(g)
        if not ok:
            raise ValueError("element not in the source group")
        return evaluate_word(word, self.gen_images, self.target.degree)


def induced_action(G: PermGroup, objects: Sequence, act: Callable):
    """Action of G on a list of objects; act(g, obj) -> obj.

    Returns (image group G*, homomorphism G -> G*).
    """
    index = {obj: i for i, obj in enumerate(objects)}
    m = len(objects)
    images = []
    for g in G.generators:
        im = [index[act(g, obj)] for obj in objects]
        if sorted(im) != list(range(m)):
            raise ValueError("action rule is not a bijection of the objects")
        images.append(Permutation(tuple(im)))
    Gstar = build_group(max(m, 1), images)
    return Gstar, Homomorphism(G, Gstar, images)


def _extended_group(G: PermGroup, phi: Homomorphism) -> PermGroup:
    """G acting on its own domain extended by phi's target domain."""
    n, m = G.degree, phi.target.degree
    ext = []
    for g, im in zip(G.generators, phi.gen_images):
        ext.append(Permutation(tuple(g.images) + tuple(n + y for y in im.images)))
    return PermGroup(n + m, ext)


def _restrict(gens: Iterable[Permutation], degree: int) -> list[Permutation]:
    return [Permutation(g.images[:degree]) for g in gens]


def kernel_of_action(G: PermGroup, phi: Homomorphism) -> PermGroup:
    n, m = G.degree, phi.target.degree
    E = _extended_group(G, phi)
    stab = E.pointwise_stabilizer(range(n, n + m))
    return PermGroup(n, _restrict(stab.generators, n))


def preimage_of_stabilizer(G: PermGroup, phi: Homomorphism, point: int) -> PermGroup:
    """{g in G : phi(g) fixes the given target point}."""
    n = G.degree
    E = _extended_group(G, phi)
    stab = E.pointwise_stabilizer([n + point])
    return PermGroup(n, _restrict(stab.generators, n))
