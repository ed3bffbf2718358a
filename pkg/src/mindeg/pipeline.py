"""Minimal faithful degree of Fitting-free permutation groups.

For each minimal normal subgroup N_i of G the almost-simple group
A = N_G(S1)/C_G(S1) (S1 a simple factor of N_i) decides mu(G, N_i) through
a dispatch table of exceptional cases; the answer is the weighted sum
mu(G) = sum l_i * mu(G, N_i) over the minimal normal subgroups.

Cases that hinge on recognizing a graph automorphism need an explicit
isomorphism between the factor and its standard matrix copy; those arrive
as recognition hints (JSON) and are transported to matrix automorphisms.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Optional

from .autlift import (
    MatrixAut, ProjectiveAut, classify_aut, lift_omega_aut, lift_psl_aut,
    subgroup_in_gamma,
)
from .bsgs import PermGroup, build_group, centralizer_of_normal
from .errors import HintRequired, LimitExceededError, UnsupportedCase
from .fflinalg import (
    FFMatrix, determinant, form_matrix, identity_matrix, matrix, multiply,
    preserves_form, standard_generators,
)
from .oracle import mu_oracle
from .perm import Permutation, compose, conjugate, inverse
from .simpleid import SimpleName, mu_simple, name_simple, simple_order
from .smallgroup import QuotientGroup, isomorphism_search, list_elements
from .socle import (
    DEFAULT_SEED, normalizer_of_factor, simple_factors, socle_fitting_free,
)

SMALL_GROUP_LIMIT = 2000
FIELD_CONVENTION = "lex-least-irreducible"


# ---------------------------------------------------------------------------
# Projective permutation actions of the standard matrix copies


def projective_points(fld, d: int) -> list[tuple]:
    """Projective-point representatives: first nonzero coordinate is 1."""
    pts = []
    for v in iproduct(fld.elements(), repeat=d):
        nz = next((x for x in v if x), None)
        if nz == 1:
            pts.append(v)
    return pts


def matrix_to_projective_perm(U: FFMatrix, pts: list[tuple],
                              index: dict) -> Permutation:
    """The permutation induced by U on normalized projective points."""
    fld = U.field
    images = []
    for v in pts:
        w = []
        for row in U.rows:
            acc = 0
            for x, y in zip(row, v):
                acc = fld.add(acc, fld.mul(x, y))
            w.append(acc)
        nz = next(x for x in w if x)
        iv = fld.inv(nz)
        images.append(index[tuple(fld.mul(iv, x) for x in w)])
    return Permutation(tuple(images))


def projective_action(family: str, d: int, q: int):
    """(field, L, projection pi of the standard copy onto permutations)."""
    fld, L = standard_generators(family, d, q)
    pts = projective_points(fld, d)
    index = {v: i for i, v in enumerate(pts)}

    def pi(U: FFMatrix) -> Permutation:
        return matrix_to_projective_perm(U, pts, index)

    return fld, L, pi


# ---------------------------------------------------------------------------
# Recognition hints


@dataclass
class RecognitionHint:
    """An isomorphism from a socle factor to its standard matrix copy.

    generators are permutations generating the factor; generator_images are
    matrix representatives (modulo the center) of their images.  When the
    generators field is absent from a hint file the images are matched
    positionally to the computed factor generators.
    """

    factor_index: int
    family: str  # matrix-cover family: "SL", "Sp", "OmegaPlus"
    d: int
    q: int
    generator_images: list[FFMatrix]
    generators: Optional[list[Permutation]] = None


def load_hint(data: dict) -> RecognitionHint:
    """Parse and statically validate a hint dictionary (see hint JSON docs)."""
    for key in ("factor_index", "family", "d", "q", "field_convention",
                "generator_images"):
        if key not in data:
            raise ValueError(f"hint is missing the {key!r} field")
    if data["field_convention"] != FIELD_CONVENTION:
        raise ValueError(
            f"unsupported field convention {data['field_convention']!r}")
    family, d, q = data["family"], int(data["d"]), int(data["q"])
    fld, _ = standard_generators(family, d, q)
    images = []
    for flat in data["generator_images"]:
        if len(flat) != d * d:
            raise ValueError("generator image has wrong length")
        rows = [list(flat[r * d:(r + 1) * d]) for r in range(d)]
        images.append(matrix(fld, rows))
    _check_membership(family, d, q, images)
    gens = None
    if "generators" in data:
        degree = int(data["degree"])
        gens = [Permutation(tuple(img)) for img in data["generators"]]
        if any(g.degree != degree for g in gens):
            raise ValueError("hint generator degree mismatch")
    return RecognitionHint(factor_index=int(data["factor_index"]),
                           family=family, d=d, q=q,
                           generator_images=images, generators=gens)


def load_hint_file(path: str) -> RecognitionHint:
    with open(path, "r", encoding="utf-8") as fh:
        return load_hint(json.load(fh))


def _check_membership(family: str, d: int, q: int,
                      images: list[FFMatrix]) -> None:
    if family in ("SL", "OmegaPlus"):
        for M in images:
            if determinant(M) != 1:
                raise ValueError("hint image is not in the standard copy "
                                 "(determinant is not 1)")
    if family in ("Sp", "OmegaPlus"):
        X = form_matrix(family, d, q)
        for M in images:
            if not preserves_form(M, X):
                raise ValueError("hint image does not preserve the form")


# ---------------------------------------------------------------------------
# The almost-simple group A = N_G(S1) / C_G(S1)


@dataclass
class InducedAutData:
    """A = N_G(S1)/C_G(S1) together with its generator automorphisms."""

    order: int
    order_S: int
    S1: PermGroup
    normalizer: PermGroup
    centralizer: PermGroup
    conjugators: list[Permutation]
    matrix_auts: Optional[list[MatrixAut]] = None  # present when hinted

    @property
    def outer_index(self) -> int:
        return self.order // self.order_S


def _word_eval_perm(word, gens: list[Permutation], degree: int) -> Permutation:
    g = Permutation(tuple(range(degree)))
    for s in word:
        h = gens[abs(s) - 1]
        g = compose(g, h if s > 0 else inverse(h))
    return g


def _word_eval_matrix(word, mats: list[FFMatrix]) -> FFMatrix:
    fld = mats[0].field
    g = identity_matrix(fld, mats[0].nrows)
    from .fflinalg import invert
    for s in word:
        h = mats[abs(s) - 1]
        g = multiply(g, h if s > 0 else invert(h))
    return g


def _spot_check_hint(S1: PermGroup, gens: list[Permutation],
                     mats: list[FFMatrix], pi, samples: int = 8) -> None:
    """Homomorphism spot-check: pi(matrix word) must match the perm word."""
    Gstd = build_group(pi(mats[0]).degree if mats else S1.degree,
                       [pi(M) for M in mats])
    if Gstd.order() != S1.order():
        raise ValueError("hint images do not generate the standard copy "
                         "(order mismatch)")
    rng = random.Random(0x41D7)
    for _ in range(samples):
        word = [rng.randrange(1, len(gens) + 1) for _ in range(6)]
        g = _word_eval_perm(word, gens, S1.degree)
        ok, word2 = PermGroup(S1.degree, gens).contains(g)
        if not ok:
            raise ValueError("hint generators do not generate the factor")
        lhs = _word_eval_perm(word, [pi(M) for M in mats], Gstd.degree)
        rhs = _word_eval_perm(word2, [pi(M) for M in mats], Gstd.degree)
        if lhs != rhs:
            raise ValueError("hint homomorphism spot-check failed")


def induced_aut_group(G: PermGroup, N: PermGroup, S1: PermGroup,
                      hint: Optional[RecognitionHint] = None) -> InducedAutData:
    """A = N_G(S1)/C_G(S1) with its generator conjugation automorphisms.

    With a hint, each conjugation automorphism C_g is transported to a
    matrix automorphism of the standard copy via Iso o C_g o Iso^{-1},
    evaluated through word decompositions.
    """
    factors = simple_factors(N)
    NG = normalizer_of_factor(G, S1, factors)
    CG = centralizer_of_normal(NG, S1)
    order_A = NG.order() // CG.order()
    data = InducedAutData(order=order_A, order_S=S1.order(), S1=S1,
                          normalizer=NG, centralizer=CG,
                          conjugators=list(NG.generators))
    if hint is None:
        return data

    hint_gens = hint.generators if hint.generators is not None \
        else list(S1.generators)
    if len(hint_gens) != len(hint.generator_images):
        raise ValueError("hint image count does not match generator count")
    for g in hint_gens:
        if not S1.member(g):
            raise ValueError("hint generator is not in the factor")
    if build_group(S1.degree, hint_gens).order() != S1.order():
        raise ValueError("hint generators do not generate the factor")

    fld, L, pi = projective_action(hint.family, hint.d, hint.q)
    mats = hint.generator_images
    _spot_check_hint(S1, hint_gens, mats, pi)

    # preimages of the standard generators: decompose pi(U) in the copy
    # generated by the hint images, replay the word over the hint perms
    pi_mats = [pi(M) for M in mats]
    Gstd = build_group(pi_mats[0].degree, pi_mats)
    hint_group = PermGroup(S1.degree, hint_gens)
    preimages = []
    for U in L:
        ok, word = Gstd.contains(pi(U))
        assert ok, "standard generator missing from the hinted copy"
        preimages.append(_word_eval_perm(word, hint_gens, S1.degree))

    matrix_auts = []
    for g in NG.generators:
        reps = []
        for s in preimages:
            c = conjugate(s, g)
            ok, word = hint_group.contains(c)
            assert ok, "conjugate left the factor"
            reps.append(_word_eval_matrix(word, mats))
        lam = ProjectiveAut(hint.family, hint.d, hint.q, tuple(reps))
        if hint.family == "SL":
            matrix_auts.append(lift_psl_aut(lam))
        elif hint.family == "OmegaPlus":
            matrix_auts.append(lift_omega_aut(lam))
        else:  # Sp(4, 2^e): trivial center, representatives are exact
            matrix_auts.append(MatrixAut("Sp", L, reps))
    data.matrix_auts = matrix_auts
    return data


# ---------------------------------------------------------------------------
# Dispatch table


def _materialize_quotient(data: InducedAutData):
    """A as a Cayley table, via cosets keyed by conjugation on the factor."""
    gens = list(data.S1.generators)

    def key(g):
        return tuple(conjugate(s, g).images for s in gens)

    Q = QuotientGroup(data.normalizer, data.centralizer)
    return list_elements(Q, bound=SMALL_GROUP_LIMIT, coset_key=key)


def _embeds_in_sym6(data: InducedAutData) -> bool:
    """Whether A embeds into Sym(6) (decides the Alt(6) table row).

    A contains a copy of Alt(6), so |A| is 360, 720 or 1440.  An order-720
    subgroup of Sym(6) is Sym(6) itself, so only the middle case needs an
    isomorphism search.
    """
    if data.order > 720:
        return False
    if data.order == 360:  # A is Alt(6) itself
        return True
    A = _materialize_quotient(data)
    s6_perm = build_group(6, [Permutation((1, 0, 2, 3, 4, 5)),
                              Permutation((1, 2, 3, 4, 5, 0))])
    S6 = list_elements(s6_perm, bound=SMALL_GROUP_LIMIT)
    return isomorphism_search(A, S6) is not None


def _graph_part_present(data: InducedAutData) -> bool:
    if data.matrix_auts is None:
        raise HintRequired(
            "deciding the graph-automorphism condition needs a recognition "
            "hint for this factor")
    return not subgroup_in_gamma(data.matrix_auts)


def _outside_plus_type_group(data: InducedAutData) -> bool:
    """Whether some generator fails the orthogonal form test (OmegaPlus)."""
    if data.matrix_auts is None:
        raise HintRequired(
            "deciding the orthogonal form condition needs a recognition "
            "hint for this factor")
    return any(not classify_aut(a).in_gamma for a in data.matrix_auts)


def dispatch_table(name: SimpleName, data: InducedAutData,
                   hint: Optional[RecognitionHint] = None):
    """(mu(G,N), rule tag) for the almost-simple group A over the factor S.

    Rows are tried in the table order; when no exceptional row applies the
    default mu(G,N) = mu(S) is returned.
    """
    idx = data.outer_index
    f, par = name.family, name.params

    if f == "Alt" and par[0] == 6:
        if not _embeds_in_sym6(data):
            return 10, "row 1"
        return mu_simple(name), "default (A embeds in Sym(6))"
    if f == "PSL" and par == (2, 7) and idx == 2:
        return 8, "row 2"
    if f == "Sporadic" and par[0] == "M12" and idx == 2:
        return 2 * mu_simple(name), "row 3"
    if f == "Sporadic" and par[0] == "ON" and idx == 2:
        return 2 * mu_simple(name), "row 4"
    if f == "PSU" and par == (3, 5) and idx % 3 == 0:
        # a diagonal outer automorphism puts A outside every conjugate of
        # the field-extension subgroup
        return 126, "row 5"
    if f == "POmegaPlus" and par == (8, 2) and idx % 3 == 0:
        return 3 * mu_simple(name), "row 6"
    if f == "POmegaPlus" and par == (8, 3):
        if idx % 12 == 0:
            return 3360, "row 8"
        if idx % 3 == 0:
            return 3 * mu_simple(name), "row 7"
        if idx > 1:
            raise UnsupportedCase(
                "POmegaPlus(8,3) with 3 not dividing |A/S| needs the "
                "triality conjugacy check in Aut(POmegaPlus(8,3)) "
                f"(|A/S| = {idx})")
    if f == "ExcLie" and par[0] == "G2" and par[1] == 3 and idx == 2:
        return 2 * mu_simple(name), "row 9"
    if f == "POmegaPlus" and par[0] == 8 and par[1] >= 4 and idx % 3 == 0:
        return 3 * mu_simple(name), "row 10"
    if (f == "PSL" and par[0] >= 3 and par not in ((3, 2), (4, 2))
            and idx > 1):
        if _graph_part_present(data):
            return 2 * mu_simple(name), "row 11"
        return mu_simple(name), "default (A inside PGammaL)"
    if f == "PSp" and par[0] == 4 and par[1] % 2 == 0 and idx > 1:
        if _graph_part_present(data):
            return 2 * mu_simple(name), "row 12"
        return mu_simple(name), "default (A inside PGammaSp)"
    if f == "POmegaPlus" and par[1] == 3 and par[0] > 8 and idx % 3 != 0 \
            and idx > 1:
        if _outside_plus_type_group(data):
            d = par[0] // 2
            return (3 ** d - 1) * (3 ** (d - 1) + 1) // 2, "row 13"
        return mu_simple(name), "default (A inside PO+)"
    if f == "ExcLie":
        typ, q = par
        if (typ == "G2" and q > 3) or typ in ("F4", "E6"):
            raise UnsupportedCase(
                f"automorphism analysis for {name} is out of scope "
                "(table rows 14-16)")
    return mu_simple(name), "default"


# ---------------------------------------------------------------------------
# Certificates and the top-level computation


@dataclass
class MinimalNormalRecord:
    length: int                 # number of factors in the orbit
    factor_name: Optional[str]
    order_A: Optional[int]
    outer_index: Optional[int]
    rule: Optional[str]
    mu: Optional[int]
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {"length": self.length, "factor_name": self.factor_name,
                "order_A": self.order_A, "outer_index": self.outer_index,
                "rule": self.rule, "mu": self.mu, "error": self.error}


@dataclass
class MuCertificate:
    group_order: int
    socle_order: int
    factor_orders: list[int]
    minimal_normal_blocks: list[list[int]]
    records: list[MinimalNormalRecord] = field(default_factory=list)
    total: Optional[int] = None
    flags: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "group_order": self.group_order,
            "socle_order": self.socle_order,
            "factor_orders": self.factor_orders,
            "minimal_normal_blocks": self.minimal_normal_blocks,
            "records": [r.to_dict() for r in self.records],
            "total": self.total,
            "flags": self.flags,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def mu_fitting_free(G: PermGroup,
                    hints: Optional[list[RecognitionHint]] = None,
                    seed: int = DEFAULT_SEED) -> MuCertificate:
    """mu(G) with a full certificate; G must be Fitting-free.

    Raises HintRequired/UnsupportedCase with the partial certificate
    attached (``error.certificate``) when some minimal normal subgroup
    cannot be dispatched.
    """
    hints = hints or []
    dec = socle_fitting_free(G, seed)
    cert = MuCertificate(
        group_order=G.order(),
        socle_order=dec.socle.order(),
        factor_orders=[F.order() for F in dec.factors],
        minimal_normal_blocks=dec.minimal_normals,
        flags={"probabilistic-minimality": dec.probabilistic_minimality,
               "hint-used": False, "unsupported-case": False},
    )
    failure: Optional[Exception] = None
    total = 0
    for orbit in dec.minimal_normals:
        hint = next((h for h in hints if h.factor_index in orbit), None)
        # the hinted factor serves as S1 (conjugation transports the hint
        # across the orbit)
        s1_index = hint.factor_index if hint is not None else orbit[0]
        S1 = dec.factors[s1_index]
        ngens = [g for i in orbit for g in dec.factors[i].generators]
        N = build_group(G.degree, ngens)
        record = MinimalNormalRecord(length=len(orbit), factor_name=None,
                                     order_A=None, outer_index=None,
                                     rule=None, mu=None)
        cert.records.append(record)
        try:
            name = name_simple(S1)
            record.factor_name = str(name)
            data = induced_aut_group(G, N, S1, hint)
            if hint is not None:
                cert.flags["hint-used"] = True
            record.order_A = data.order
            record.outer_index = data.outer_index
            mu, rule = dispatch_table(name, data, hint)
            record.mu = mu
            record.rule = rule
            total += len(orbit) * mu
        except (HintRequired, UnsupportedCase) as exc:
            record.error = str(exc)
            cert.flags["unsupported-case"] = True
            if failure is None:
                failure = exc
    if failure is not None:
        failure.certificate = cert
        raise failure
    cert.total = total
    return cert


def mu_small_quotient(Q: QuotientGroup, bound: int = SMALL_GROUP_LIMIT) -> int:
    """mu(G/K) by materializing the quotient and running the oracle."""
    if Q.index() > bound:
        raise LimitExceededError(
            f"quotient order {Q.index()} exceeds bound {bound}")
    C = list_elements(Q, bound=bound)
    mu, _ = mu_oracle(C, limit=bound)
    return mu
