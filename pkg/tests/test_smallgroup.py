import numpy as np
import pytest

from mindeg.bsgs import build_group
from mindeg.errors import LimitExceededError
from mindeg.perm import parse_permutation
from mindeg.smallgroup import (
    CayleyGroup, QuotientGroup, all_subgroups, automorphism_group,
    from_direct_factors, isomorphism_search, list_elements,
)


def P(text, n):
    return parse_permutation(text, n)


def sym3():
    return build_group(3, [P("(1 2)", 3), P("(1 2 3)", 3)])


def sym4():
    return build_group(4, [P("(1 2)", 4), P("(1 2 3 4)", 4)])


def klein_cayley():
    return from_direct_factors([2, 2])


def test_list_elements_sym3():
    C = list_elements(sym3(), bound=10)
    assert C.order == 6
    assert C.elements[0].is_identity()
    # table agrees with composition of the stored permutations
    from mindeg.perm import compose
    for i in range(6):
        for j in range(6):
            assert C.elements[C.table[i, j]] == compose(C.elements[i], C.elements[j])


def test_list_elements_bound_exceeded():
    with pytest.raises(LimitExceededError):
        list_elements(sym4(), bound=10)


def test_quotient_sym4_by_klein():
    G = sym4()
    K = build_group(4, [P("(1 2)(3 4)", 4), P("(1 3)(2 4)", 4)])
    Q = QuotientGroup(G, K)
    assert Q.index() == 6
    C = list_elements(Q, bound=10)
    assert C.order == 6
    S3 = list_elements(sym3(), bound=10)
    assert isomorphism_search(C, S3) is not None


def test_quotient_validates_normality():
    G = sym4()
    H = build_group(4, [P("(1 2)", 4)])
    with pytest.raises(ValueError):
        QuotientGroup(G, H)


def test_quotient_validates_subgroup():
    A4 = build_group(4, [P("(1 2 3)", 4), P("(2 3 4)", 4)])
    H = build_group(4, [P("(1 2)", 4)])
    with pytest.raises(ValueError):
        QuotientGroup(A4, H)


def test_quotient_with_coset_key():
    # Alt(5) wr Z2 acting on its two blocks; kernel is Alt(5) x Alt(5)
    gens = [P("(1 2 3)", 10), P("(3 4 5)", 10), P("(6 7 8)", 10), P("(8 9 10)", 10),
            P("(1 6)(2 7)(3 8)(4 9)(5 10)", 10)]
    G = build_group(10, gens)
    K = build_group(10, gens[:4])
    Q = QuotientGroup(G, K)

    def key(g):
        return g.images[0] < 5  # which block the first point lands in

    C = list_elements(Q, bound=10, coset_key=key)
    assert C.order == 2


def test_from_direct_factors():
    C = from_direct_factors([2, 3])
    assert C.order == 6
    assert sorted(C.element_orders().tolist()) == [1, 2, 3, 3, 6, 6]
    assert C.labels[0] == "(0,0)"


def test_subgroups_z6():
    C = from_direct_factors([6])
    subs = all_subgroups(C)
    assert sorted(len(s) for s in subs) == [1, 2, 3, 6]


def test_subgroups_sym3():
    C = list_elements(sym3(), bound=10)
    subs = all_subgroups(C)
    assert sorted(len(s) for s in subs) == [1, 2, 2, 2, 3, 6]


def test_subgroups_klein():
    subs = all_subgroups(klein_cayley())
    assert sorted(len(s) for s in subs) == [1, 2, 2, 2, 4]


def test_subgroups_cyclic_count_is_divisor_count():
    def ndiv(n):
        return sum(1 for d in range(1, n + 1) if n % d == 0)

    for n in (2, 12, 30, 64, 97, 100):
        C = from_direct_factors([n])
        assert len(all_subgroups(C)) == ndiv(n)


def brute_subgroups(C):
    """All subgroups by checking every closed subset reachable from seeds."""
    m, t = C.order, C.table
    found = set()
    work = [frozenset([0])]
    found.add(frozenset([0]))
    while work:
        H = work.pop()
        for g in range(1, m):
            if g in H:
                continue
            members = set(H) | {g}
            changed = True
            while changed:
                changed = False
                for a in list(members):
                    for b in list(members):
                        p = int(t[a, b])
                        if p not in members:
                            members.add(p)
                            changed = True
            fz = frozenset(members)
            if fz not in found:
                found.add(fz)
                work.append(fz)
    return {tuple(sorted(s)) for s in found}


@pytest.mark.parametrize("make", [
    lambda: list_elements(sym4(), bound=100),
    lambda: from_direct_factors([2, 2, 2]),
    lambda: from_direct_factors([4, 4]),
    lambda: list_elements(build_group(4, [P("(1 2 3 4)", 4), P("(1 3)", 4)]), bound=100),
    lambda: list_elements(build_group(8, [P("(1 2 3 8)(4 5 6 7)", 8),
                                          P("(1 7 3 5)(2 6 8 4)", 8)]), bound=100),
])
def test_subgroups_match_bruteforce(make):
    C = make()
    subs = {tuple(s) for s in all_subgroups(C)}
    assert subs == brute_subgroups(C)


def test_subgroups_are_closed_and_lagrange():
    C = list_elements(sym4(), bound=100)
    t = C.table
    for s in all_subgroups(C):
        assert C.order % len(s) == 0
        members = set(s)
        assert all(int(t[a, b]) in members for a in s for b in s)


def test_subgroup_limit():
    with pytest.raises(LimitExceededError):
        all_subgroups(from_direct_factors([3]), limit=2)


def test_automorphisms_z3():
    auts = automorphism_group(from_direct_factors([3]))
    assert len(auts) == 2


def test_automorphisms_sym3():
    auts = automorphism_group(list_elements(sym3(), bound=10))
    assert len(auts) == 6


def test_automorphisms_klein():
    auts = automorphism_group(klein_cayley())
    assert len(auts) == 6


def test_automorphisms_form_a_group():
    C = list_elements(sym3(), bound=10)
    auts = {tuple(a) for a in automorphism_group(C)}
    for a in list(auts):
        for b in list(auts):
            composed = tuple(b[x] for x in a)
            assert composed in auts


def test_automorphisms_q8():
    Q8 = list_elements(build_group(8, [P("(1 2 3 8)(4 5 6 7)", 8),
                                       P("(1 7 3 5)(2 6 8 4)", 8)]), bound=100)
    assert Q8.order == 8
    assert sorted(Q8.element_orders().tolist()) == [1, 2, 4, 4, 4, 4, 4, 4]
    assert len(automorphism_group(Q8)) == 24


def test_iso_search_negative():
    assert isomorphism_search(from_direct_factors([4]), klein_cayley()) is None
    assert isomorphism_search(from_direct_factors([2]), from_direct_factors([3])) is None


def test_iso_search_positive_and_symmetric():
    A = from_direct_factors([2, 3])
    B = from_direct_factors([6])
    phi = isomorphism_search(A, B)
    assert phi is not None
    for i in range(6):
        for j in range(6):
            assert phi[A.table[i, j]] == B.table[phi[i], phi[j]]
    assert isomorphism_search(B, A) is not None


def test_trivial_group_edge_cases():
    T = from_direct_factors([1])
    assert T.order == 1
    assert all_subgroups(T) == [[0]]
    assert automorphism_group(T) == [[0]]
    assert isomorphism_search(T, T) == [0]


def test_cayley_rejects_bad_tables():
    with pytest.raises(ValueError):
        CayleyGroup(np.array([[0, 1], [0, 1]]))
    with pytest.raises(ValueError):
        CayleyGroup(np.array([[1, 0], [0, 1]]))
