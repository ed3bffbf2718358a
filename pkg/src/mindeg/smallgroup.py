"""Small groups materialized as Cayley tables.

Covers element listing for permutation groups and small quotients G/K,
brute-force subgroup enumeration, automorphism groups, and isomorphism
search by generator-image enumeration.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .bsgs import PermGroup
from .errors import LimitExceededError
from .perm import Permutation, compose, conjugate, inverse

SUBGROUP_LIMIT = 2000
AUTOMORPHISM_LIMIT = 5000


class CayleyGroup:
    """A group of order m given by its multiplication table.

    Element 0 is the identity; ``table[i, j]`` is the product "i then j"
    (matching the left-to-right convention for permutations).
    """

    def __init__(self, table: np.ndarray, elements: Optional[list] = None,
                 labels: Optional[list[str]] = None):
        table = np.asarray(table, dtype=np.int32)
        m = table.shape[0]
        if table.shape != (m, m):
            raise ValueError("table must be square")
        self.order = m
        self.table = table
        self.elements = elements
        self.labels = labels
        self._validate()
        # 0 is the unique minimum of each row, located at the inverse
        self.inverse = np.argmin(self.table, axis=1).astype(np.int32)
        self._orders: Optional[np.ndarray] = None
        self._class_data = None

    def _validate(self):
        m = self.order
        t = self.table
        rng_row = np.arange(m, dtype=np.int32)
        if not (np.sort(t, axis=1) == rng_row).all() or not (np.sort(t, axis=0) == rng_row[:, None]).all():
            raise ValueError("table rows/columns are not permutations")
        if not (t[0] == rng_row).all() or not (t[:, 0] == rng_row).all():
            raise ValueError("element 0 is not the identity")
        if m <= 256:
            left = t[t]            # [i,j,k] -> t[t[i,j], k]
            right = t[:, t]        # [i,j,k] -> t[i, t[j,k]]
            if not (left == right).all():
                raise ValueError("table is not associative")
        else:
            rng = random.Random(0xC0FFEE)
            for _ in range(2000):
                i, j, k = (rng.randrange(m) for _ in range(3))
                if t[t[i, j], k] != t[i, t[j, k]]:
                    raise ValueError("table is not associative")

    # -- cached element statistics -----------------------------------------

    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            m = self.order
            orders = np.empty(m, dtype=np.int64)
            t = self.table
            for x in range(m):
                k, y = 1, x
                while y != 0:
                    y = t[y, x]
                    k += 1
                orders[x] = k
            self._orders = orders
        return self._orders

    def conjugacy_data(self):
        """(class id per element = min class member, class size per element)."""
        if self._class_data is None:
            m, t, inv = self.order, self.table, self.inverse
            all_g = np.arange(m)
            class_id = np.full(m, -1, dtype=np.int64)
            class_size = np.zeros(m, dtype=np.int64)
            for x in range(m):
                if class_id[x] >= 0:
                    continue
                cls = np.unique(t[t[inv[all_g], x], all_g])
                class_id[cls] = cls.min()
                class_size[cls] = len(cls)
            self._class_data = (class_id, class_size)
        return self._class_data

    def generating_set(self) -> list[int]:
        """Greedy generating set of at most ceil(log2 m) elements."""
        gens: list[int] = []
        current = np.zeros(self.order, dtype=bool)
        current[0] = True
        for x in range(1, self.order):
            if not current[x]:
                gens.append(x)
                members = self._close(np.nonzero(current)[0], gens)
                current[:] = False
                current[members] = True
                if current.all():
                    break
        return gens

    def _close(self, seed: np.ndarray, gens: Sequence[int]) -> np.ndarray:
        """Closure of a subgroup's element set under extra generators."""
        t = self.table
        seen = np.zeros(self.order, dtype=bool)
        seen[seed] = True
        frontier = seed
        while len(frontier):
            new = []
            for g in gens:
                prods = t[frontier, g]
                fresh = prods[~seen[prods]]
                if len(fresh):
                    seen[fresh] = True
                    new.append(np.unique(fresh))
            frontier = np.unique(np.concatenate(new)) if new else np.empty(0, dtype=np.int64)
        return np.nonzero(seen)[0]


# ---------------------------------------------------------------------------
# Construction


@dataclass
class QuotientGroup:
    """A quotient G/K with K normal in G (verified at construction)."""

    G: PermGroup
    K: PermGroup

    def __post_init__(self):
        for k in self.K.generators:
            if not self.G.member(k):
                raise ValueError("K is not a subgroup of G")
        for g in self.G.generators:
            for k in self.K.generators:
                if not self.K.member(conjugate(k, g)):
                    raise ValueError("K is not normalized by G")
        if self.G.order() % self.K.order() != 0:
            raise AssertionError("Lagrange violation")

    def index(self) -> int:
        return self.G.order() // self.K.order()


def _double_bytes(gen_bytes: list[bytes], bound: int) -> list[bytes]:
    """Wolf doubling: T_{i+1} = T_i ∪ {xy : x, y in T_i}, via byte tables."""
    n = len(gen_bytes[0]) if gen_bytes else 1
    ident = bytes(range(n))
    current: dict[bytes, None] = {ident: None}
    for g in gen_bytes:
        current[g] = None
    while True:
        items = list(current)
        pad = {x: x + bytes(range(len(x), 256)) for x in items}
        new = dict(current)
        for x in items:
            for y in items:
                p = x.translate(pad[y])
                if p not in new:
                    new[p] = None
                    if len(new) > bound:
                        raise LimitExceededError(
                            f"element count exceeds bound {bound}")
        if len(new) == len(current):
            return sorted(current)
        current = new


def list_elements(X, bound: int, coset_key: Optional[Callable] = None) -> CayleyGroup:
    """Materialize a PermGroup or small QuotientGroup as a CayleyGroup."""
    if isinstance(X, PermGroup):
        return _list_perm_group(X, bound)
    if isinstance(X, QuotientGroup):
        return _list_quotient(X, bound, coset_key)
    raise TypeError("expected PermGroup or QuotientGroup")


def _list_perm_group(G: PermGroup, bound: int) -> CayleyGroup:
    if G.order() > bound:
        raise LimitExceededError(f"group order {G.order()} exceeds bound {bound}")
    if G.degree > 256:
        raise LimitExceededError("degree above 256 not supported for listing")
    gen_bytes = [bytes(g.images) for g in G.generators]
    els = _double_bytes(gen_bytes, bound)
    assert len(els) == G.order()
    # identity must sit at index 0
    ident = bytes(range(G.degree))
    els.remove(ident)
    els.insert(0, ident)
    index = {b: i for i, b in enumerate(els)}
    m = len(els)
    table = np.empty((m, m), dtype=np.int32)
    pads = [y + bytes(range(len(y), 256)) for y in els]
    for i, x in enumerate(els):
        table[i] = [index[x.translate(p)] for p in pads]
    perms = [Permutation(tuple(b)) for b in els]
    return CayleyGroup(table, elements=perms)


def _list_quotient(Q: QuotientGroup, bound: int,
                   coset_key: Optional[Callable]) -> CayleyGroup:
    if Q.index() > bound:
        raise LimitExceededError(f"quotient order {Q.index()} exceeds bound {bound}")
    if Q.K.is_trivial():
        return _list_perm_group(Q.G, bound)
    K = Q.K

    if coset_key is None:
        # coset identity by membership: xK = yK iff x^{-1} y in K
        def same_coset(x, y):
            return K.member(compose(inverse(x), y))

        reps: list[Permutation] = [Permutation(tuple(range(Q.G.degree)))]

        def rep_index(x):
            for i, r in enumerate(reps):
                if same_coset(r, x):
                    return i
            return None
    else:
        reps = [Permutation(tuple(range(Q.G.degree)))]
        key_index = {coset_key(reps[0]): 0}

        def rep_index(x):
            return key_index.get(coset_key(x))

    def add(x):
        reps.append(x)
        if coset_key is not None:
            key_index[coset_key(x)] = len(reps) - 1

    for g in Q.G.generators:
        if rep_index(g) is None:
            add(g)
    changed = True
    while changed:
        changed = False
        snapshot = list(reps)
        for x in snapshot:
            for y in snapshot:
                p = compose(x, y)
                if rep_index(p) is None:
                    add(p)
                    if len(reps) > Q.index():
                        raise AssertionError("more cosets than the quotient order")
                    changed = True
    assert len(reps) == Q.index()
    m = len(reps)
    table = np.empty((m, m), dtype=np.int32)
    for i in range(m):
        for j in range(m):
            idx = rep_index(compose(reps[i], reps[j]))
            assert idx is not None
            table[i, j] = idx
    return CayleyGroup(table, elements=reps)


def from_direct_factors(moduli: Sequence[int]) -> CayleyGroup:
    """Direct product of cyclic groups Z_{n1} x ... x Z_{nk}."""
    moduli = [int(n) for n in moduli]
    if not moduli or any(n < 1 for n in moduli):
        raise ValueError("moduli must be positive")
    m = int(np.prod(moduli))
    idx = np.arange(m)
    digits = []
    rest = idx.copy()
    for n in reversed(moduli):
        digits.append(rest % n)
        rest //= n
    digits.reverse()  # digits[c] = component c of each element index
    table = np.zeros((m, m), dtype=np.int64)
    weight = 1
    for c in range(len(moduli) - 1, -1, -1):
        comp = (digits[c][:, None] + digits[c][None, :]) % moduli[c]
        table += comp * weight
        weight *= moduli[c]
    labels = ["(" + ",".join(str(d[i]) for d in digits) + ")" for i in range(m)]
    return CayleyGroup(table.astype(np.int32), labels=labels)


# ---------------------------------------------------------------------------
# Subgroup enumeration


def _mask_of(members: np.ndarray) -> int:
    mask = 0
    for x in members.tolist():
        mask |= 1 << x
    return mask


def _is_prime_power(n: int) -> bool:
    p = next(d for d in range(2, n + 1) if n % d == 0)
    while n % p == 0:
        n //= p
    return n == 1


def _cyclic_subgroups(C: CayleyGroup) -> tuple[list[int], list[int]]:
    """Cyclic subgroups of prime-power order as (masks, generators).

    Ordered by (size, mask).  These suffice as join seeds: every subgroup
    is the join of the prime-power cyclic subgroups of its elements.
    """
    t = C.table
    cyclic: dict[int, tuple[int, int]] = {}
    for g in range(1, C.order):
        members = [0]
        y = g
        while y != 0:
            members.append(y)
            y = t[y, g]
        if not _is_prime_power(len(members)):
            continue
        mask = 0
        for x in members:
            mask |= 1 << int(x)
        if mask not in cyclic:
            cyclic[mask] = (len(members), g)
    order = sorted(cyclic.items(), key=lambda kv: (kv[1][0], kv[0]))
    return [mask for mask, _ in order], [gen for _, (_, gen) in order]


def all_subgroups(C: CayleyGroup, limit: int = SUBGROUP_LIMIT) -> list[list[int]]:
    """Every subgroup of C, each as a sorted element-index list.

    Seeds with the cyclic subgroups and closes under joins <H, c> with
    cyclic subgroups c, restricted to ascending chains: each record keeps
    the smallest cyclic index r that finished some chain reaching it, and
    only joins with index above r are attempted.  Building any subgroup K
    by adjoining its cyclic subgroups in index order shows each of its
    chain prefixes is reached with a small enough r, so the enumeration
    is complete; the ascending rule prunes permuted join orders.
    """
    if C.order > limit:
        raise LimitExceededError(f"order {C.order} exceeds subgroup limit {limit}")
    t = C.table
    m = C.order
    cyc_masks, cyc_gens = _cyclic_subgroups(C)
    cyc_sizes = [bin(mask).count("1") for mask in cyc_masks]
    divisors = [d for d in range(1, m + 1) if m % d == 0]
    full_mask = (1 << m) - 1
    full_arr = np.arange(m, dtype=np.int64)

    def forced_full(h_size: int, lower: int) -> bool:
        """True when no proper subgroup order fits: multiple of h_size, >= lower."""
        return not any(d >= lower and d % h_size == 0 for d in divisors[:-1])

    trivial_mask = 1
    # record: mask -> (elements array, generator list, resume index)
    found: dict[int, tuple[np.ndarray, list[int], int]] = {
        trivial_mask: (np.zeros(1, dtype=np.int64), [], -1)}
    # joins with index >= done_from[mask] have already been attempted
    done_from: dict[int, int] = {}
    work: list[int] = [trivial_mask]
    for ci, mask in enumerate(cyc_masks):
        arr = np.nonzero([(mask >> x) & 1 for x in range(m)])[0]
        found[mask] = (arr, [cyc_gens[ci]], ci)
        work.append(mask)

    ncyc = len(cyc_masks)
    while work:
        mask = work.pop()
        if mask == full_mask:
            continue
        arr, gens, resume = found[mask]
        stop = done_from.get(mask, ncyc)
        if resume + 1 >= stop:
            continue
        done_from[mask] = resume + 1
        h = len(arr)
        for ci in range(resume + 1, stop):
            cm = cyc_masks[ci]
            if cm & mask == cm:
                continue
            lcm = h * cyc_sizes[ci] // math.gcd(h, cyc_sizes[ci])
            lower = h * cyc_sizes[ci] // bin(cm & mask).count("1")
            if forced_full(lcm, lower):
                jarr, jmask = full_arr, full_mask
            else:
                jarr = _join(t, arr, gens + [cyc_gens[ci]], divisors)
                jmask = full_mask if len(jarr) == m else _mask_of(jarr)
            prev = found.get(jmask)
            if prev is None:
                found[jmask] = (jarr, gens + [cyc_gens[ci]], ci)
                work.append(jmask)
            elif prev[2] > ci:
                # reached by a chain ending earlier: more joins now allowed
                found[jmask] = (prev[0], prev[1], ci)
                work.append(jmask)

    subs = sorted(found.values(), key=lambda v: (len(v[0]), v[0].tolist()))
    return [arr.tolist() for arr, _, _ in subs]


def _join(t: np.ndarray, subgroup: np.ndarray, gens: list[int],
          divisors: Optional[list[int]] = None) -> np.ndarray:
    """Elements of <subgroup, gens> (gens must include generators of subgroup).

    Right-multiplication closure of the subgroup's element set.  With the
    group-order divisor list supplied, stops early once the element count
    rules out every proper subgroup order (the join must be the whole group).
    """
    m = t.shape[0]
    h = len(subgroup)
    cutoff = m + 1
    if divisors is not None:
        proper = [d for d in divisors if d < m and d % h == 0]
        cutoff = max(proper, default=h)
    seen = np.zeros(m, dtype=bool)
    seen[subgroup] = True
    count = h
    frontier = subgroup
    while len(frontier):
        new = []
        for g in gens:
            # table columns are permutations and seen filters across
            # generators, so fresh entries are distinct without sorting
            prods = t[frontier, g]
            fresh = prods[~seen[prods]]
            if len(fresh):
                seen[fresh] = True
                count += len(fresh)
                new.append(fresh)
        if not new:
            break
        if count > cutoff:
            return np.arange(m, dtype=np.int64)
        frontier = np.concatenate(new) if len(new) > 1 else new[0]
    return np.nonzero(seen)[0]


# ---------------------------------------------------------------------------
# Automorphisms and isomorphisms


def _hom_from_gen_images(Csrc: CayleyGroup, Cdst: CayleyGroup,
                         gens: Sequence[int], images: Sequence[int]):
    """Extend gen -> image to a full map by closure; None if inconsistent.

    Checks phi(x * g) = phi(x) * phi(g) for every reached x and every g, which
    verifies the homomorphism property on the whole group.
    """
    ts, td = Csrc.table, Cdst.table
    phi = np.full(Csrc.order, -1, dtype=np.int64)
    phi[0] = 0
    queue = [0]
    while queue:
        x = queue.pop()
        fx = phi[x]
        for g, fg in zip(gens, images):
            y = int(ts[x, g])
            fy = int(td[fx, fg])
            if phi[y] < 0:
                phi[y] = fy
                queue.append(y)
            elif phi[y] != fy:
                return None
    if (phi < 0).any():
        return None  # gens do not generate the source
    return phi


def _candidate_images(Csrc: CayleyGroup, Cdst: CayleyGroup, g: int) -> list[int]:
    os_, od = Csrc.element_orders(), Cdst.element_orders()
    _, cs = Csrc.conjugacy_data()
    _, cd = Cdst.conjugacy_data()
    return [x for x in range(Cdst.order)
            if od[x] == os_[g] and cd[x] == cs[g]]


def _search_isos(Csrc: CayleyGroup, Cdst: CayleyGroup, find_all: bool):
    if Csrc.order != Cdst.order:
        return []
    if sorted(Csrc.element_orders().tolist()) != sorted(Cdst.element_orders().tolist()):
        return []
    gens = Csrc.generating_set()
    if not gens:  # trivial group
        return [np.zeros(1, dtype=np.int64)]
    cands = [_candidate_images(Csrc, Cdst, g) for g in gens]
    out = []

    def rec(i, chosen):
        if i == len(gens):
            phi = _hom_from_gen_images(Csrc, Cdst, gens, chosen)
            if phi is not None and len(np.unique(phi)) == Csrc.order:
                out.append(phi)
                return not find_all
            return False
        for x in cands[i]:
            if rec(i + 1, chosen + [x]):
                return True
        return False

    rec(0, [])
    return out


def automorphism_group(C: CayleyGroup, limit: int = AUTOMORPHISM_LIMIT) -> list[list[int]]:
    """All automorphisms of C, each as an element-index image list."""
    if C.order > limit:
        raise LimitExceededError(f"order {C.order} exceeds automorphism limit {limit}")
    return [phi.tolist() for phi in _search_isos(C, C, find_all=True)]


def isomorphism_search(C1: CayleyGroup, C2: CayleyGroup,
                       limit: int = AUTOMORPHISM_LIMIT) -> Optional[list[int]]:
    """An explicit isomorphism C1 -> C2, or None."""
    if max(C1.order, C2.order) > limit:
        raise LimitExceededError(f"order exceeds isomorphism limit {limit}")
    isos = _search_isos(C1, C2, find_all=False)
    return isos[0].tolist() if isos else None
