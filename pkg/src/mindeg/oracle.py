"""Ground-truth minimal faithful permutation degree for small groups.

μ(G) is the least n with G embeddable in Sym(n).  It equals the minimum of
Σ [G:Hᵢ] over collections of subgroups whose cores intersect trivially (the
collection induces a faithful action on the disjoint union of coset spaces).
The oracle searches the normal-subgroup lattice with Dijkstra: states are
normal subgroups N, the start is G, the goal is {1}, and each subgroup
conjugacy class H contributes an edge N → N ∩ core(H) of cost [G:H].
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import LimitExceededError
from .smallgroup import (
    CayleyGroup, _hom_from_gen_images, all_subgroups, from_direct_factors,
)

ORACLE_LIMIT = 2000


@dataclass
class OracleWitness:
    """A μ-attaining collection of subgroups."""

    subgroups: list[list[int]]
    total_degree: int
    core_intersection: list[int]


def _mask_of_list(members) -> int:
    mask = 0
    for x in members:
        mask |= 1 << int(x)
    return mask


def _list_of_mask(mask: int) -> list[int]:
    out = []
    x = 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return out


def _check_subgroup(C: CayleyGroup, members: list[int]):
    s = set(int(x) for x in members)
    if 0 not in s:
        raise ValueError("subgroup must contain the identity")
    t = C.table
    for a in s:
        for b in s:
            if int(t[a, b]) not in s:
                raise ValueError("element set is not closed under the product")


def _conjugate_mask(C: CayleyGroup, members: np.ndarray, g: int) -> tuple[int, np.ndarray]:
    conj = C.table[C.table[C.inverse[g], members], g]
    return _mask_of_list(conj.tolist()), conj


def core(C: CayleyGroup, H) -> list[int]:
    """The largest normal subgroup of C inside the subgroup H."""
    members = sorted(int(x) for x in H)
    _check_subgroup(C, members)
    return _list_of_mask(_core_mask(C, np.array(members, dtype=np.int64),
                                    C.generating_set()))


def _core_mask(C: CayleyGroup, members: np.ndarray, gens: list[int]) -> int:
    start = _mask_of_list(members.tolist())
    seen = {start: members}
    frontier = [members]
    result = start
    while frontier:
        new = []
        for arr in frontier:
            for g in gens:
                m, conj = _conjugate_mask(C, arr, g)
                if m not in seen:
                    seen[m] = conj
                    new.append(conj)
                    result &= m
        frontier = new
    return result


def is_faithful_collection(C: CayleyGroup, Hs) -> bool:
    """True iff the cores of the given subgroups intersect trivially."""
    gens = C.generating_set()
    meet = (1 << C.order) - 1
    for H in Hs:
        members = sorted(int(x) for x in H)
        _check_subgroup(C, members)
        meet &= _core_mask(C, np.array(members, dtype=np.int64), gens)
    return meet == 1


def _abelian_candidates(C: CayleyGroup) -> list[tuple[int, int, list[int]]]:
    """Candidate (cost, core mask, subgroup) triples for an abelian group.

    For abelian G every subgroup is normal, and any H is an intersection of
    subgroups with cyclic quotient whose indices sum to at most [G:H]
    (split G/H into cyclic factors).  So only kernels of homomorphisms
    G → Z_exp(G) need to be considered.
    """
    gens = C.generating_set()
    orders = C.element_orders()
    exponent = 1
    for k in orders.tolist():
        exponent = math.lcm(exponent, k)
    Z = from_direct_factors([exponent])
    zorders = Z.element_orders()
    cands = [[x for x in range(exponent) if orders[g] % zorders[x] == 0]
             for g in gens]
    out: dict[int, tuple[int, list[int]]] = {}
    for images in product(*cands):
        phi = _hom_from_gen_images(C, Z, gens, images)
        if phi is None:
            continue
        kernel = np.nonzero(phi == 0)[0]
        if len(kernel) == C.order:
            continue
        mask = _mask_of_list(kernel.tolist())
        cost = C.order // len(kernel)
        if mask not in out or out[mask][0] > cost:
            out[mask] = (cost, kernel.tolist())
    return [(cost, mask, sub) for mask, (cost, sub) in out.items()]


def _general_candidates(C: CayleyGroup, limit: int) -> list[tuple[int, int, list[int]]]:
    """One (cost, core mask, representative subgroup) per conjugacy class."""
    gens = C.generating_set()
    out: dict[int, tuple[int, list[int]]] = {}
    visited: set[int] = set()
    for sub in all_subgroups(C, limit):
        mask = _mask_of_list(sub)
        if mask in visited or len(sub) == C.order:
            continue
        arr = np.array(sub, dtype=np.int64)
        # close the conjugacy class of this subgroup; its core is the meet
        seen = {mask: arr}
        frontier = [arr]
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    m, conj = _conjugate_mask(C, a, g)
                    if m not in seen:
                        seen[m] = conj
                        new.append(conj)
            frontier = new
        visited |= seen.keys()
        coremask = (1 << C.order) - 1
        for m in seen:
            coremask &= m
        cost = C.order // len(sub)
        if coremask not in out or out[coremask][0] > cost:
            out[coremask] = (cost, sub)
    return [(cost, mask, sub) for mask, (cost, sub) in out.items()]


def _prune_dominated(cands: list[tuple[int, int, list[int]]]):
    """Drop a candidate when another has a smaller core at no larger cost."""
    cands = sorted(cands, key=lambda c: (c[0], c[1].bit_count()))
    kept: list[tuple[int, int, list[int]]] = []
    for cost, mask, sub in cands:
        if any(k_cost <= cost and k_mask & mask == k_mask
               for k_cost, k_mask, _ in kept):
            continue
        kept.append((cost, mask, sub))
    return kept


def mu_oracle(C: CayleyGroup, limit: int = ORACLE_LIMIT) -> tuple[int, OracleWitness]:
    """Exact μ(C) with a witnessing subgroup collection."""
    if C.order > limit:
        raise LimitExceededError(f"order {C.order} exceeds oracle limit {limit}")
    if C.order == 1:
        return 0, OracleWitness(subgroups=[], total_degree=0, core_intersection=[0])

    if (C.table == C.table.T).all():
        cands = _abelian_candidates(C)
    else:
        cands = _general_candidates(C, limit)
    cands = _prune_dominated(cands)

    full = (1 << C.order) - 1
    dist: dict[int, int] = {full: 0}
    parent: dict[int, tuple[int, int]] = {}
    heap = [(0, full)]
    while heap:
        d, state = heapq.heappop(heap)
        if d > dist.get(state, d):
            continue
        if state == 1:
            break
        for idx, (cost, cmask, _) in enumerate(cands):
            nxt = state & cmask
            if nxt == state:
                continue
            nd = d + cost
            if nd < dist.get(nxt, nd + 1):
                dist[nxt] = nd
                parent[nxt] = (state, idx)
                heapq.heappush(heap, (nd, nxt))
    assert 1 in dist, "no faithful collection found"
    mu = dist[1]

    witness_subs = []
    node = 1
    while node != full:
        prev, idx = parent[node]
        witness_subs.append(sorted(cands[idx][2]))
        node = prev
    witness_subs.reverse()

    assert len(witness_subs) <= max(1, int(math.log2(C.order)) + 1)
    assert sum(C.order // len(s) for s in witness_subs) == mu
    assert is_faithful_collection(C, witness_subs)
    return mu, OracleWitness(subgroups=witness_subs, total_degree=mu,
                             core_intersection=[0])
