"""Naming non-abelian simple groups and their minimal faithful degrees.

A simple group is named by looking its order up in a generated table of
simple-group orders.  Among groups of order at most 10^12 the order
determines the group except for two classical coincidences: Alt(8) vs
PSL(3,4) at order 20160 (settled by scanning for an element of order 6,
which only Alt(8) has), and PSp(2m,q) vs the odd-dimensional orthogonal
groups for odd q, m >= 3 (reported as unsupported).

μ values ship in data/mu_table.json so the entries can be diffed against
the literature; every row carries a formula id and a provenance tag.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .bsgs import PermGroup, normal_closure
from .errors import UnsupportedCase
from .smallgroup import CayleyGroup

MAX_TABLE_ORDER = 10 ** 12

# canonical aliases: the Alt form wins; PSL(2,7) wins over PSL(3,2);
# PSp(4,3) wins over PSU(4,2)
_ALIASED_OUT = {
    ("PSL", (2, 4)), ("PSL", (2, 5)), ("PSL", (2, 9)),
    ("PSL", (3, 2)), ("PSL", (4, 2)), ("PSU", (4, 2)),
}


@dataclass(frozen=True)
class SimpleName:
    """Canonical name of a non-abelian simple group."""

    family: str
    params: tuple

    def __str__(self):
        if self.family == "Sporadic":
            return self.params[0]
        if self.family == "ExcLie":
            return f"{self.params[0]}({self.params[1]})"
        return f"{self.family}({','.join(str(x) for x in self.params)})"


def _prime_powers():
    q = 2
    while True:
        t = q
        p = next(d for d in range(2, q + 1) if q % d == 0)
        while t % p == 0:
            t //= p
        if t == 1:
            yield q, p
        q += 1


def simple_order(name: SimpleName) -> int:
    """The order of the named simple group."""
    f, par = name.family, name.params
    if f == "Alt":
        return math.factorial(par[0]) // 2
    if f == "PSL":
        d, q = par
        o = q ** (d * (d - 1) // 2)
        for i in range(2, d + 1):
            o *= q ** i - 1
        return o // math.gcd(d, q - 1)
    if f == "PSp":
        n, q = par
        m = n // 2
        o = q ** (m * m)
        for i in range(1, m + 1):
            o *= q ** (2 * i) - 1
        return o // math.gcd(2, q - 1)
    if f in ("POmegaPlus", "POmegaMinus"):
        n, q = par
        d = n // 2
        sign = 1 if f == "POmegaPlus" else -1
        o = q ** (d * (d - 1)) * (q ** d - sign)
        for i in range(1, d):
            o *= q ** (2 * i) - 1
        return o // math.gcd(4, q ** d - sign)
    if f == "PSU":
        d, q = par
        o = q ** (d * (d - 1) // 2)
        for i in range(2, d + 1):
            o *= q ** i - (-1) ** i
        return o // math.gcd(d, q + 1)
    if f == "Sporadic":
        return {"M12": 95040, "ON": 460815505920}[par[0]]
    if f == "ExcLie":
        typ, q = par
        if typ == "G2":
            return q ** 6 * (q ** 6 - 1) * (q ** 2 - 1)
        if typ == "F4":
            return (q ** 24 * (q ** 12 - 1) * (q ** 8 - 1)
                    * (q ** 6 - 1) * (q ** 2 - 1))
        if typ == "E6":
            o = q ** 36
            for i in (12, 9, 8, 6, 5, 2):
                o *= q ** i - 1
            return o // math.gcd(3, q - 1)
    raise ValueError(f"unknown family {f!r}")


def _emit(table, name: SimpleName, ambiguous: bool = False):
    if (name.family, name.params) in _ALIASED_OUT:
        return False
    o = simple_order(name)
    if o > MAX_TABLE_ORDER:
        return False
    table.setdefault(o, []).append((name, ambiguous))
    return True


@lru_cache(maxsize=1)
def _order_table() -> dict[int, list[tuple[SimpleName, bool]]]:
    table: dict[int, list[tuple[SimpleName, bool]]] = {}
    n = 5
    while _emit(table, SimpleName("Alt", (n,))):
        n += 1

    def sweep(make, q_start=2, skip=()):
        any_fit = False
        for q, p in _prime_powers():
            if q < q_start:
                continue
            name, ambiguous = make(q, p)
            if name.params in skip:
                continue
            if simple_order(name) > MAX_TABLE_ORDER:
                break
            _emit(table, name, ambiguous)
            any_fit = True
        return any_fit

    d = 2
    while sweep(lambda q, p, d=d: (SimpleName("PSL", (d, q)), False),
                q_start=4 if d == 2 else 2):
        d += 1
    m = 2
    while sweep(lambda q, p, m=m: (SimpleName("PSp", (2 * m, q)),
                                   q % 2 == 1 and m >= 3),
                skip={(4, 2)}):
        m += 1
    for fam in ("POmegaPlus", "POmegaMinus"):
        d = 4
        while sweep(lambda q, p, d=d, fam=fam: (SimpleName(fam, (2 * d, q)), False)):
            d += 1
    d = 3
    while sweep(lambda q, p, d=d: (SimpleName("PSU", (d, q)), False),
                skip={(3, 2)}):
        d += 1
    sweep(lambda q, p: (SimpleName("ExcLie", ("G2", q)), False), q_start=3)
    sweep(lambda q, p: (SimpleName("ExcLie", ("F4", q)), False))
    sweep(lambda q, p: (SimpleName("ExcLie", ("E6", q)), False))
    for tag in ("M12", "ON"):
        _emit(table, SimpleName("Sporadic", (tag,)))

    _self_check(table)
    return table


def _self_check(table):
    """Order lookup must be injective apart from the known 20160 pair."""
    for o, entries in table.items():
        if len(entries) == 1:
            continue
        names = sorted(str(name) for name, _ in entries)
        assert o == 20160 and names == ["Alt(8)", "PSL(3,4)"], (
            f"unexpected order collision at {o}: {names}")


def _looks_simple_perm(G: PermGroup, samples: int = 16) -> bool:
    if G.order() == 1:
        return False
    rng = random.Random(0x5EED)
    seeds = list(G.generators)
    for _ in range(samples):
        seeds.append(G.random_element(rng))
    for x in seeds:
        if x.is_identity():
            continue
        if normal_closure(G, [x]).order() != G.order():
            return False
    return True


def _ncl_cayley(C: CayleyGroup, x: int) -> int:
    """Order of the normal closure of x in the Cayley-table group C."""
    import numpy as np

    t, inv = C.table, C.inverse
    gens = C.generating_set()
    members = np.array([0, x], dtype=np.int64)
    while True:
        conj = {int(t[t[inv[g], y], g]) for y in members.tolist() for g in gens}
        seed = sorted(conj | set(members.tolist()))
        closed = C._close(np.array([0], dtype=np.int64), seed)
        if len(closed) == len(members):
            return len(members)
        members = closed


def _looks_simple_cayley(C: CayleyGroup) -> bool:
    if C.order == 1:
        return False
    rng = random.Random(0x5EED)
    sample = set(C.generating_set())
    for _ in range(16):
        sample.add(rng.randrange(1, C.order))
    return all(_ncl_cayley(C, x) == C.order for x in sample if x != 0)


def _has_element_of_order(G, k: int) -> bool:
    if isinstance(G, CayleyGroup):
        return bool((G.element_orders() == k).any())
    rng = random.Random(0xD15A)
    from .perm import element_order
    for g in G.generators:
        if element_order(g) == k:
            return True
    for _ in range(512):
        if element_order(G.random_element(rng)) == k:
            return True
    return False


def name_simple(G) -> SimpleName:
    """Canonical name of a simple permutation or Cayley-table group."""
    if isinstance(G, CayleyGroup):
        order = G.order
        simple = _looks_simple_cayley(G)
    elif isinstance(G, PermGroup):
        order = G.order()
        simple = _looks_simple_perm(G)
    else:
        raise TypeError("expected PermGroup or CayleyGroup")
    if not simple:
        raise ValueError("input group is not simple")
    entries = _order_table().get(order)
    if entries is None:
        raise ValueError(f"order {order} not in the simple-group table")
    if any(amb for _, amb in entries):
        raise UnsupportedCase(
            f"order {order} coincides with an odd-dimensional orthogonal group")
    if len(entries) == 1:
        return entries[0][0]
    # order 20160: Alt(8) has elements of order 6, PSL(3,4) does not
    assert order == 20160
    alt8 = next(nm for nm, _ in entries if nm.family == "Alt")
    psl34 = next(nm for nm, _ in entries if nm.family == "PSL")
    return alt8 if _has_element_of_order(G, 6) else psl34


@lru_cache(maxsize=1)
def _mu_table() -> list[dict]:
    path = Path(__file__).parent / "data" / "mu_table.json"
    entries = json.loads(path.read_text())
    for entry in entries:
        assert entry["formula"] in ("n", "psl2_exceptional", "q_plus_1",
                                    "projective_points", "const",
                                    "omega_plus_q3", "omega8_large_q")
    return entries


def _entry_matches(entry: dict, name: SimpleName) -> bool:
    if entry["family"] != name.family:
        return False
    f, par = name.family, name.params
    if f == "Alt":
        n = par[0]
        return n >= entry.get("n_min", 5)
    if f == "PSL":
        d, q = par
        if "d" in entry and d != entry["d"]:
            return False
        if d < entry.get("d_min", 2):
            return False
        if "q_in" in entry and q not in entry["q_in"]:
            return False
        if q < entry.get("q_min", 2):
            return False
        return True
    if f == "PSp":
        n, q = par
        if n != entry.get("n", n):
            return False
        p = next(d for d in range(2, q + 1) if q % d == 0)
        if "p" in entry and p != entry["p"]:
            return False
        e = 0
        t = q
        while t % p == 0:
            t //= p
            e += 1
        return e >= entry.get("e_min", 1)
    if f == "POmegaPlus":
        n, q = par
        if "n" in entry and n != entry["n"]:
            return False
        if n < entry.get("n_min", 8):
            return False
        if "q" in entry and q != entry["q"]:
            return False
        return q >= entry.get("q_min", 2)
    if f == "PSU":
        d, q = par
        return d == entry.get("d") and q == entry.get("q")
    if f == "Sporadic":
        return par[0] == entry.get("tag")
    if f == "ExcLie":
        return par[0] == entry.get("type") and par[1] == entry.get("q")
    return False


def mu_simple(name: SimpleName) -> int:
    """μ(S): the minimal faithful permutation degree of the named group."""
    for entry in _mu_table():
        if not _entry_matches(entry, name):
            continue
        formula = entry["formula"]
        if formula == "n":
            return name.params[0]
        if formula == "psl2_exceptional":
            return entry["values"][str(name.params[1])]
        if formula == "q_plus_1":
            return name.params[1] + 1
        if formula == "projective_points":
            d, q = name.params
            return (q ** d - 1) // (q - 1)
        if formula == "omega_plus_q3":
            d = name.params[0] // 2
            return 3 ** (d - 1) * (3 ** d - 1) // 2
        if formula == "omega8_large_q":
            q = name.params[1]
            return (q ** 4 - 1) * (q ** 3 + 1) // (q - 1)
        if formula == "const":
            return entry["value"]
    raise UnsupportedCase(f"no verified minimal degree for {name}")
