"""Socle machinery for Fitting-free permutation groups.

Computes the socle by the centralizer recursion Soc(G) = M × Soc(C_G(M)),
splits it into non-abelian simple factors, groups the factors into minimal
normal subgroups (conjugation orbits), and computes factor normalizers as
point stabilizers of the induced action on factors.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .bsgs import (
    PermGroup, build_group, centralizer_of_normal, induced_action,
    normal_closure, preimage_of_stabilizer,
)
from .errors import NotFittingFree
from .perm import Permutation, compose, conjugate, inverse

EXHAUSTIVE_MINIMALITY_BOUND = 10 ** 4
DESCENT_SEED_BUDGET = 64
RANDOM_MINIMALITY_SAMPLES = 256
DEFAULT_SEED = 0x50C1E


@dataclass
class SocleDecomposition:
    """The socle of a Fitting-free group, split into simple factors."""

    socle: PermGroup
    factors: list[PermGroup]
    minimal_normals: list[list[int]]
    fitting_free_certificate: bool
    probabilistic_minimality: bool = field(default=False)


def _smallest_moved_point(p: Permutation) -> int:
    for i, x in enumerate(p.images):
        if x != i:
            return i
    return p.degree


def _descent_seeds(C: PermGroup, rng: random.Random):
    """Deterministic seed sweep: generators, generator-pair products, random.

    Seeds within each stage are ordered by smallest moved point so that the
    choice among several minimal normal subgroups is reproducible.
    """
    emitted = 0
    gens = [g for g in C.generators if not g.is_identity()]
    for g in sorted(gens, key=lambda p: (_smallest_moved_point(p), p.images)):
        yield g
        emitted += 1
    pair_products = []
    for a in C.generators:
        for b in C.generators:
            p = compose(a, b)
            if not p.is_identity():
                pair_products.append(p)
    for p in sorted(set(pair_products),
                    key=lambda p: (_smallest_moved_point(p), p.images)):
        yield p
        emitted += 1
    while emitted < DESCENT_SEED_BUDGET:
        x = C.random_element(rng)
        if not x.is_identity():
            yield x
            emitted += 1


def _class_representatives(G: PermGroup, N: PermGroup):
    """One representative per G-conjugacy class of elements of N.

    Conjugate elements share their normal closure, so the minimality sweep
    only needs class representatives.
    """
    covered: set[tuple] = set()
    for y in N.elements(EXHAUSTIVE_MINIMALITY_BOUND):
        if y.images in covered:
            continue
        yield y
        orbit = {y.images}
        frontier = [y]
        while frontier:
            x = frontier.pop()
            for g in G.generators:
                c = conjugate(x, g)
                if c.images not in orbit:
                    orbit.add(c.images)
                    frontier.append(c)
        covered |= orbit


def minimal_normal_under(G: PermGroup, C: PermGroup,
                         seed: int = DEFAULT_SEED) -> PermGroup:
    """A minimal normal subgroup of G contained in the normal subgroup C.

    Starts from the normal closure of a seed element of C and descends:
    whenever the closure of some element of the candidate is a proper
    nontrivial normal subgroup, it replaces the candidate.  Minimality is
    certified exhaustively for candidates of order at most 10^4, otherwise
    by random sampling; the result carries ``minimality_probabilistic``.
    """
    if C.is_trivial():
        raise ValueError("C must be nontrivial")
    rng = random.Random(seed)
    start = next(iter(_descent_seeds(C, rng)))
    N = normal_closure(G, [start])
    probabilistic = False

    while True:
        improved = False
        if N.order() <= EXHAUSTIVE_MINIMALITY_BOUND:
            sweep = _class_representatives(G, N)
            probabilistic = False
        else:
            sweep = (N.random_element(rng)
                     for _ in range(RANDOM_MINIMALITY_SAMPLES))
            probabilistic = True
        for y in sweep:
            if y.is_identity():
                continue
            M = normal_closure(G, [y])
            if 1 < M.order() < N.order():
                N = M
                improved = True
                break
        if not improved:
            break

    N.minimality_probabilistic = probabilistic
    return N


def _is_abelian(H: PermGroup) -> bool:
    gens = H.generators
    return all(compose(a, b) == compose(b, a) for a in gens for b in gens)


def socle_fitting_free(G: PermGroup,
                       seed: int = DEFAULT_SEED) -> SocleDecomposition:
    """Socle decomposition of G, certifying that G is Fitting-free.

    Applies the recursion Soc(G) = M × Soc(C_G(M)): adjoin a minimal normal
    subgroup inside the shrinking centralizer until it is trivial.  Any
    abelian minimal normal subgroup proves G is not Fitting-free.
    """
    if G.is_trivial():
        raise ValueError("G must be nontrivial")
    probabilistic = False
    M = minimal_normal_under(G, G, seed)
    if _is_abelian(M):
        raise NotFittingFree("abelian minimal normal subgroup found")
    probabilistic |= M.minimality_probabilistic
    C = centralizer_of_normal(G, M)
    while not C.is_trivial():
        N = minimal_normal_under(G, C, seed)
        if _is_abelian(N):
            raise NotFittingFree("abelian minimal normal subgroup found")
        probabilistic |= N.minimality_probabilistic
        M = build_group(G.degree, list(M.generators) + list(N.generators))
        C = centralizer_of_normal(G, M)

    factors = simple_factors(M)
    blocks = minimal_normal_subgroups(G, factors)
    return SocleDecomposition(
        socle=M, factors=factors, minimal_normals=blocks,
        fitting_free_certificate=True,
        probabilistic_minimality=probabilistic)


def simple_factors(soc: PermGroup) -> list[PermGroup]:
    """The simple factors of a direct product of non-abelian simple groups."""
    factors: list[PermGroup] = []
    S = minimal_normal_under(soc, soc)
    factors.append(S)
    M = S
    C = centralizer_of_normal(soc, M)
    while not C.is_trivial():
        S = minimal_normal_under(soc, C)
        factors.append(S)
        M = build_group(soc.degree, list(M.generators) + list(S.generators))
        C = centralizer_of_normal(soc, M)
    return factors


def _factor_image(g: Permutation, i: int, factors: list[PermGroup]) -> int:
    """Index j with factors[i]^g = factors[j], by membership both ways."""
    Si = factors[i]
    conj_gens = [conjugate(s, g) for s in Si.generators]
    ginv = inverse(g)
    for j, Sj in enumerate(factors):
        if Sj.order() != Si.order():
            continue
        if not all(Sj.member(c) for c in conj_gens):
            continue
        if all(Si.member(conjugate(s, ginv)) for s in Sj.generators):
            return j
    raise AssertionError("conjugate of a socle factor matches no factor")


def minimal_normal_subgroups(G: PermGroup,
                             factors: list[PermGroup]) -> list[list[int]]:
    """Orbits of G's conjugation action on the socle factors.

    Each orbit of factor indices spans one minimal normal subgroup of G.
    """
    k = len(factors)
    images = {g: [_factor_image(g, i, factors) for i in range(k)]
              for g in G.generators}
    seen = [False] * k
    orbits: list[list[int]] = []
    for i in range(k):
        if seen[i]:
            continue
        orbit = [i]
        seen[i] = True
        queue = [i]
        while queue:
            x = queue.pop()
            for g in G.generators:
                y = images[g][x]
                if not seen[y]:
                    seen[y] = True
                    orbit.append(y)
                    queue.append(y)
        orbits.append(sorted(orbit))
    return orbits


def normalizer_of_factor(G: PermGroup, S1: PermGroup,
                         factors: list[PermGroup]) -> PermGroup:
    """N_G(S1): point stabilizer in the induced action of G on the factors."""
    target = next((i for i, S in enumerate(factors)
                   if S.order() == S1.order()
                   and all(S.member(s) for s in S1.generators)), None)
    if target is None:
        raise ValueError("S1 is not one of the factors")
    _, phi = induced_action(
        G, list(range(len(factors))),
        lambda g, i: _factor_image(g, i, factors))
    return preimage_of_stabilizer(G, phi, target)
