import json
import os

import pytest

from mindeg.bsgs import build_group
from mindeg.errors import HintRequired, LimitExceededError, UnsupportedCase
from mindeg.oracle import mu_oracle
from mindeg.perm import Permutation
from mindeg.pipeline import (
    InducedAutData, dispatch_table, induced_aut_group, load_hint,
    load_hint_file, mu_fitting_free, mu_small_quotient,
)
from mindeg.simpleid import SimpleName, mu_simple
from mindeg.smallgroup import QuotientGroup, list_elements
from mindeg.socle import socle_fitting_free

from .groups import P, a5wrz2, a5xa6, alt, pgammal2, pgl2, psl2, sym

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir,
                        "src", "mindeg", "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def load_fixture(name):
    from mindeg.cli import parse_group_file
    return parse_group_file(fixture_path(name)).group


# --- end-to-end values ---------------------------------------------------------


@pytest.mark.parametrize("make,expected", [
    (lambda: alt(5), 5), (lambda: sym(5), 5), (lambda: sym(7), 7),
    (lambda: pgl2(7), 8), (lambda: psl2(8), 9), (lambda: pgammal2(8), 9),
    (a5wrz2, 10), (a5xa6, 11),
], ids=["A5", "S5", "S7", "PGL27", "PSL28", "PGammaL28", "A5wrZ2", "A5xA6"])
def test_mu_values(make, expected):
    assert mu_fitting_free(make()).total == expected


def test_mu_psl211_degree11_fixture():
    G = load_fixture("PSL211.grp")
    assert G.degree == 11 and G.order() == 660
    assert mu_fitting_free(G).total == 11


@pytest.mark.parametrize("make", [lambda: alt(5), lambda: sym(5),
                                  lambda: psl2(7), lambda: pgl2(7)],
                         ids=["A5", "S5", "PSL27", "PGL27"])
def test_mu_matches_oracle(make):
    G = make()
    cert = mu_fitting_free(G)
    C = list_elements(G, bound=2000)
    mu, _ = mu_oracle(C)
    assert cert.total == mu


def test_mu_never_exceeds_degree():
    for make in (alt, sym):
        for n in (5, 6, 7):
            G = make(n)
            assert mu_fitting_free(G).total <= G.degree


# --- certificates --------------------------------------------------------------


def test_certificate_arithmetic():
    cert = mu_fitting_free(a5wrz2())
    assert cert.total == sum(r.length * r.mu for r in cert.records)
    assert cert.records[0].length == 2
    covered = sorted(i for b in cert.minimal_normal_blocks for i in b)
    assert covered == list(range(len(cert.factor_orders)))


def test_certificate_json_round_trip():
    cert = mu_fitting_free(sym(5))
    text = cert.to_json()
    assert json.loads(text) == cert.to_dict()
    assert json.dumps(json.loads(text), indent=2, sort_keys=True) == text


def test_certificate_deterministic_for_fixed_seed():
    a = mu_fitting_free(a5xa6(), seed=7).to_json()
    b = mu_fitting_free(a5xa6(), seed=7).to_json()
    assert a == b


# --- hints ---------------------------------------------------------------------


def test_load_hint_rejects_malformed():
    base = {"factor_index": 0, "family": "SL", "d": 3, "q": 4,
            "field_convention": "lex-least-irreducible",
            "generator_images": []}
    for key in ("family", "field_convention", "generator_images"):
        bad = dict(base)
        del bad[key]
        with pytest.raises(ValueError):
            load_hint(bad)
    bad = dict(base)
    bad["field_convention"] = "other"
    with pytest.raises(ValueError):
        load_hint(bad)
    bad = dict(base)
    bad["generator_images"] = [[1, 2, 3]]  # wrong length
    with pytest.raises(ValueError):
        load_hint(bad)


def test_load_hint_rejects_non_member_image():
    # determinant 2 is not in SL(3,4)
    flat = [2, 0, 0, 0, 1, 0, 0, 0, 1]
    data = {"factor_index": 0, "family": "SL", "d": 3, "q": 4,
            "field_convention": "lex-least-irreducible",
            "generator_images": [flat]}
    with pytest.raises(ValueError):
        load_hint(data)


def test_hint_file_round_trip_and_redundant_hint_consistency():
    G = load_fixture("PSL34.grp")
    hint = load_hint_file(fixture_path("PSL34.hint.json"))
    plain = mu_fitting_free(G)
    hinted = mu_fitting_free(G, hints=[hint])
    assert plain.total == hinted.total == 21
    assert hinted.flags["hint-used"]
    assert not plain.flags["hint-used"]


def test_graph_extension_requires_hint_and_gives_double():
    G = load_fixture("PSL34_2.grp")
    with pytest.raises(HintRequired) as err:
        mu_fitting_free(G)
    partial = err.value.certificate
    assert partial.flags["unsupported-case"]
    assert partial.records[0].error is not None
    assert partial.total is None

    hint = load_hint_file(fixture_path("PSL34_2.hint.json"))
    cert = mu_fitting_free(G, hints=[hint])
    assert cert.total == 42
    assert cert.records[0].rule == "row 11"
    assert cert.records[0].outer_index == 2


# --- induced automorphism group ------------------------------------------------


def test_induced_aut_group_orders():
    for make, expected in ((lambda: alt(5), 60), (lambda: sym(5), 120),
                           (a5wrz2, 60)):
        G = make()
        dec = socle_fitting_free(G)
        orbit = dec.minimal_normals[0]
        N = build_group(G.degree, [g for i in orbit
                                   for g in dec.factors[i].generators])
        data = induced_aut_group(G, N, dec.factors[orbit[0]])
        assert data.order == expected
        assert data.order % data.order_S == 0


# --- dispatch table ------------------------------------------------------------


def _fake_data(order_A, order_S, matrix_auts=None):
    triv = build_group(1, [])
    return InducedAutData(order=order_A, order_S=order_S, S1=triv,
                          normalizer=triv, centralizer=triv,
                          conjugators=[], matrix_auts=matrix_auts)


@pytest.mark.parametrize("name,idx,expected,rule", [
    (SimpleName("Alt", (6,)), 4, 10, "row 1"),
    (SimpleName("Sporadic", ("M12",)), 2, 24, "row 3"),
    (SimpleName("Sporadic", ("ON",)), 2, 245520, "row 4"),
    (SimpleName("PSU", (3, 5)), 3, 126, "row 5"),
    (SimpleName("POmegaPlus", (8, 2)), 3, 360, "row 6"),
    (SimpleName("POmegaPlus", (8, 3)), 3, 3240, "row 7"),
    (SimpleName("POmegaPlus", (8, 3)), 12, 3360, "row 8"),
    (SimpleName("ExcLie", ("G2", 3)), 2, 702, "row 9"),
    (SimpleName("Sporadic", ("M12",)), 1, 12, "default"),
    (SimpleName("Alt", (7,)), 2, 7, "default"),
])
def test_dispatch_rows_by_index(name, idx, expected, rule):
    n = mu_simple(name) if name.family != "ExcLie" else None
    order_S = 1
    data = _fake_data(idx * order_S, order_S)
    mu, tag = dispatch_table(name, data)
    assert mu == expected
    assert tag == rule


def test_dispatch_omega_plus_8_4_scales_by_three():
    name = SimpleName("POmegaPlus", (8, 4))
    mu, tag = dispatch_table(name, _fake_data(3, 1))
    assert mu == 3 * mu_simple(name)
    assert tag == "row 10"


def test_dispatch_triality_case_unsupported():
    with pytest.raises(UnsupportedCase):
        dispatch_table(SimpleName("POmegaPlus", (8, 3)), _fake_data(2, 1))


def test_dispatch_graph_rows_need_hints():
    with pytest.raises(HintRequired):
        dispatch_table(SimpleName("PSL", (3, 4)), _fake_data(2, 1))
    with pytest.raises(HintRequired):
        dispatch_table(SimpleName("PSp", (4, 4)), _fake_data(2, 1))
    with pytest.raises(HintRequired):
        dispatch_table(SimpleName("POmegaPlus", (10, 3)), _fake_data(2, 1))


def test_dispatch_row_13_value():
    # with a hinted graph-type generator the value is (3^d-1)(3^{d-1}+1)/2
    from mindeg.autlift import MatrixAut
    from mindeg.fflinalg import standard_generators, transpose, invert

    name = SimpleName("POmegaPlus", (10, 3))
    field, L = standard_generators("OmegaPlus", 10, 3)
    # a similitude that scales the form by the non-square 2 has a graph part
    from mindeg.fflinalg import form_matrix, matrix, multiply, preserves_form
    rows = [[0] * 10 for _ in range(10)]
    for i in range(10):
        rows[i][i] = 2 if i < 5 else 1
    g = matrix(field, rows)
    gi = invert(g)
    alpha = MatrixAut("OmegaPlus", L,
                      [multiply(multiply(g, U), gi) for U in L])
    mu, tag = dispatch_table(name, _fake_data(2, 1, matrix_auts=[alpha]))
    assert mu == (3 ** 5 - 1) * (3 ** 4 + 1) // 2
    assert tag == "row 13"


def test_dispatch_exceptional_lie_rows_unsupported():
    for name in (SimpleName("ExcLie", ("G2", 9)),
                 SimpleName("ExcLie", ("F4", 2)),
                 SimpleName("ExcLie", ("E6", 2))):
        with pytest.raises(UnsupportedCase):
            dispatch_table(name, _fake_data(2, 1))


# --- small quotients -----------------------------------------------------------


def test_mu_small_quotient_examples():
    S4 = sym(4)
    V4 = build_group(4, [P("(1 2)(3 4)", 4), P("(1 3)(2 4)", 4)])
    assert mu_small_quotient(QuotientGroup(S4, V4)) == 3
    assert mu_small_quotient(QuotientGroup(S4, S4)) == 0
    S5 = sym(5)
    triv = build_group(5, [])
    assert mu_small_quotient(QuotientGroup(S5, triv)) == 5


def test_mu_small_quotient_respects_bound():
    S5 = sym(5)
    triv = build_group(5, [])
    with pytest.raises(LimitExceededError):
        mu_small_quotient(QuotientGroup(S5, triv), bound=60)
