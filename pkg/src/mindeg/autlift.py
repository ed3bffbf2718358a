"""Lifting projective automorphisms to matrix covers and classifying them.

A projective automorphism (given by its action on the projections of the
standard generating set L) is lifted to the matrix cover by picking, in
each image coset VZ, the unique element whose order is the characteristic.
Classification then searches the field exponent t' and graph flag t'' for
the unique pair making the twisted map inner-or-diagonal, which is decided
by the matrix commutation solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .fflinalg import (
    FFMatrix, MatrixAut, form_matrix, frobenius, identity_matrix, invert,
    matrix, multiply, scalar_multiply, solve_commutation,
    standard_generators, transpose,
)

_EXCLUDED_PSL = {(3, 2), (4, 2)}


@dataclass(frozen=True)
class ProjectiveAut:
    """An automorphism of a projective group, by generator images.

    ``images[i]`` is any matrix representative of the image coset
    lambda(U_i Z) of the i-th standard generator of the matrix cover.
    """

    family: str  # matrix-cover family: "SL", "Sp", "OmegaPlus"
    d: int       # matrix dimension
    q: int
    images: tuple


@dataclass
class AutClassification:
    """Decomposition type of a matrix-cover automorphism.

    t_prime in [1, e] is the Frobenius exponent (t_prime = e means no
    field part); t_doubleprime is the graph flag.  in_gamma is true when
    the automorphism has no graph part.
    """

    t_prime: int
    t_doubleprime: int
    witness_F: Optional[FFMatrix]
    in_gamma: bool


def center_scalars(family: str, d: int, field) -> list[int]:
    """Scalars c with cI in the center of the matrix cover."""
    if family == "SL":
        return [c for c in field.elements()
                if c and field.pow(c, d) == 1]
    if family == "Sp":
        # Z(Sp(4, 2^e)) is trivial: c^2 = 1 forces c = 1 in characteristic 2
        return [c for c in field.elements() if c and field.mul(c, c) == 1]
    if family == "OmegaPlus":
        return [c for c in field.elements() if c and field.mul(c, c) == 1]
    raise ValueError(f"unknown family {family!r}")


def projective_equal(A: FFMatrix, B: FFMatrix, scalars: list[int]) -> bool:
    """AZ = BZ: the quotient-difference A B^{-1} must be a central scalar."""
    D = multiply(A, invert(B))
    n = D.nrows
    field = D.field
    return any(D == scalar_multiply(c, identity_matrix(field, n))
               for c in scalars)


def _has_order_p(W: FFMatrix, p: int) -> bool:
    I = identity_matrix(W.field, W.nrows)
    if W == I:
        return False
    P = W
    for _ in range(p - 1):
        P = multiply(P, W)
    return P == I


def _lift(lam: ProjectiveAut, L: list[FFMatrix], field) -> MatrixAut:
    if len(lam.images) != len(L):
        raise ValueError("one image per standard generator required")
    scalars = center_scalars(lam.family, lam.d, field)
    images = []
    for V in lam.images:
        order_p = [W for c in scalars
                   for W in [scalar_multiply(c, V)]
                   if _has_order_p(W, field.p)]
        if not order_p:
            raise ValueError(
                "image coset contains no element of order p; "
                "the input is not an automorphism")
        assert len(order_p) == 1, "coset uniqueness violated"
        images.append(order_p[0])
    return MatrixAut(lam.family, L, images)


def lift_psl_aut(lam: ProjectiveAut) -> MatrixAut:
    """Lift an automorphism of PSL(d,q), d >= 3, to SL(d,q).

    Each image coset VZ contains exactly one element of order p (the
    characteristic); that element is alpha(U).  Excluded: (d,q) in
    {(3,2), (4,2)} where the uniqueness fails.
    """
    if lam.family != "SL":
        raise ValueError("expected an SL-cover automorphism")
    if lam.d < 3:
        raise ValueError("lifting requires d >= 3")
    if (lam.d, lam.q) in _EXCLUDED_PSL:
        raise ValueError(f"(d,q) = ({lam.d},{lam.q}) is excluded")
    field, L = standard_generators("SL", lam.d, lam.q)
    return _lift(lam, L, field)


def lift_omega_aut(lam: ProjectiveAut) -> MatrixAut:
    """Lift an automorphism of POmega+(2d,3), 2d >= 8, to Omega+(2d,3).

    Z = {I, -I}, and each 2-element coset VZ contains exactly one element
    of order 3.
    """
    if lam.family != "OmegaPlus":
        raise ValueError("expected an OmegaPlus-cover automorphism")
    if lam.d < 8:
        raise ValueError("lifting requires matrix size 2d >= 8")
    field, L = standard_generators("OmegaPlus", lam.d, lam.q)
    return _lift(lam, L, field)


def is_inner_or_diagonal(alpha: MatrixAut):
    """(true, F) with F U F^{-1} = alpha(U) on L, or (false, None)."""
    F = solve_commutation(alpha.gens, alpha.images)
    return (F is not None, F)


def sp_graph_permutation(q: int) -> list[int]:
    """The graph automorphism of Sp(4, 2^e) as a permutation of L.

    Short root elements map to the dual long root elements with the same
    parameter; long root elements map to short ones with the parameter
    squared (so the square of the map is the Frobenius).  Index layout
    matches standard_generators("Sp", 4, q).
    """
    field, L = standard_generators("Sp", 4, q)

    def idx_short(off: int, beta: int) -> int:
        # off: 0 = x_{e1-e2}, 1 = x_{e2-e1}, 2 = x_{e1+e2}, 3 = x_{-e1-e2}
        return (beta - 1) * 4 + off

    def idx_long(i: int, neg: int, beta: int) -> int:
        # x_{2e_i} (neg = 0) or x_{-2e_i} (neg = 1)
        return 4 * (q - 1) + (i - 1) * 2 * (q - 1) + (beta - 1) * 2 + neg

    perm = [None] * len(L)
    for beta in range(1, q):
        sq = field.mul(beta, beta)
        perm[idx_short(0, beta)] = idx_long(2, 0, beta)
        perm[idx_short(1, beta)] = idx_long(2, 1, beta)
        perm[idx_short(2, beta)] = idx_long(1, 0, beta)
        perm[idx_short(3, beta)] = idx_long(1, 1, beta)
        perm[idx_long(2, 0, beta)] = idx_short(0, sq)
        perm[idx_long(2, 1, beta)] = idx_short(1, sq)
        perm[idx_long(1, 0, beta)] = idx_short(2, sq)
        perm[idx_long(1, 1, beta)] = idx_short(3, sq)
    assert sorted(perm) == list(range(len(L)))
    return perm


def _frobenius_matrix(U: FFMatrix, t: int) -> FFMatrix:
    field = U.field
    return matrix(field, [[frobenius(field, x, t) for x in row]
                          for row in U.rows])


def classify_aut(alpha: MatrixAut) -> AutClassification:
    """The unique (t', t'') with alpha o f^{-t'} o g^{-t''} inner-or-diagonal.

    For the OmegaPlus family the commutation system is always solvable and
    the graph question becomes the form test F X F^t = c X with c a square.
    """
    L = alpha.gens
    field = L[0].field
    e = field.e

    if alpha.family == "OmegaPlus":
        F = solve_commutation(L, alpha.images)
        assert F is not None, "OmegaPlus commutation system must be solvable"
        X = form_matrix("OmegaPlus", L[0].nrows, field.q)
        M = multiply(multiply(F, X), transpose(F))
        c = next(M.rows[r][k]
                 for r in range(X.nrows) for k in range(X.ncols)
                 if X.rows[r][k])
        if M != scalar_multiply(c, X):
            raise ValueError("F does not scale the form; not an automorphism")
        # c = 2 is a non-square in F_3, so no rescaling of F fixes the form
        in_gamma = (c == 1)
        return AutClassification(t_prime=e, t_doubleprime=0 if in_gamma else 1,
                                 witness_F=F, in_gamma=in_gamma)

    index = {U.rows: i for i, U in enumerate(L)}
    if alpha.family == "Sp":
        perm = sp_graph_permutation(field.q)
        graph_inv = [0] * len(L)
        for i, j in enumerate(perm):
            graph_inv[j] = i

        def graph_preimage(i: int) -> int:
            return graph_inv[i]
    elif alpha.family == "SL":
        def graph_preimage(i: int) -> int:
            # the transpose-inverse is an involution on L
            return index[transpose(invert(L[i])).rows]
    else:
        raise ValueError(f"unknown family {alpha.family!r}")

    passing = []
    for t2 in (0, 1):
        for t1 in range(1, e + 1):
            images = []
            for i in range(len(L)):
                j = graph_preimage(i) if t2 else i
                W = _frobenius_matrix(L[j], (e - t1) % e)
                images.append(alpha.images[index[W.rows]])
            F = solve_commutation(L, images)
            if F is not None:
                passing.append(AutClassification(
                    t_prime=t1, t_doubleprime=t2, witness_F=F,
                    in_gamma=(t2 == 0)))
    if not passing:
        raise ValueError("no (t', t'') pair passes; not an automorphism")
    assert len(passing) == 1, "classification must be unique"
    return passing[0]


def subgroup_in_gamma(generator_auts: list[MatrixAut]) -> bool:
    """True iff no generator automorphism carries a graph part."""
    return all(classify_aut(a).in_gamma for a in generator_auts)
