import pytest

from modgalrep.dirichlet import make_character, parse_character
from modgalrep.pipeline import (
    find_twist,
    InputForm,
    largest_subgroup_audit,
    PipelineError,
    realize,
    select_input_form,
    sl2_index_gamma1,
    sturm_bound,
    TABLE_ROWS,
    table_row_selector,
)

from helpers import psl2_index_gamma1


def test_sl2_index():
    assert sl2_index_gamma1(1) == 1
    assert sl2_index_gamma1(2) == 3
    for n in (3, 4, 5, 6, 11, 15, 78):
        expected = psl2_index_gamma1(n) * (2 if n > 2 else 1)
        assert sl2_index_gamma1(n) == expected


def test_sturm_bound_examples():
    assert sturm_bound(1, 11, 12, 2) == 11
    assert sturm_bound(1, 13, 12, 2) == 15
    assert sturm_bound(3, 11, 12, 2) == 88


def test_select_input_form_delta():
    form = select_input_form(1, 12, 11, {"ap": {2: -24}}, bound=50)
    assert form.system.a[2].coeffs == (9,)
    assert form.system.a[3].coeffs == (10,)


def test_select_input_form_unique_without_constraints():
    form = select_input_form(1, 12, 11, {}, bound=50)
    assert form.system.a[2].coeffs == (9,)


def test_select_input_form_ambiguous():
    # level 13 weight 2 mod 13 has two trivial-diamond... none; use (4, 12, 7)
    with pytest.raises(PipelineError):
        select_input_form(4, 12, 7, {}, bound=50)


def test_select_input_form_no_match():
    with pytest.raises(PipelineError):
        select_input_form(1, 12, 11, {"ap": {2: 1}}, bound=50)


def test_select_level5_quartic_rows():
    quad5 = make_character(5, [1], 2)
    for row in TABLE_ROWS:
        if row["N"] != 5:
            continue
        sel = table_row_selector(row)
        form = select_input_form(5, 12, row["ell"], sel, eps=quad5, bound=50)
        assert form.system.field.r == 2


def test_find_twist_delta_mod13_immediate():
    form = select_input_form(1, 12, 13, {"ap": {2: -24}}, bound=50)
    tw = find_twist(form, 13, truncate=50)
    assert (tw.i, tw.kprime, tw.level_m) == (0, 12, 1)


def test_find_twist_level3_mod5():
    form = select_input_form(3, 12, 5, {"ap": {2: 78}}, bound=50)
    tw = find_twist(form, 5, truncate=50)
    assert (tw.i, tw.kprime, tw.level_m) == (1, 6, 3)
    # the weight-6 companion has a_2 = -6 = 4 mod 5
    assert tw.system.a[2].coeffs == ((-6) % 5,)
    # weight congruence 12 = 6 + 2*1 mod 4
    assert (12 - 6 - 2 * 1) % 4 == 0


def test_find_twist_level6_mod7():
    form = select_input_form(6, 12, 7, {"ap": {2: -32, 3: -243}}, bound=50)
    tw = find_twist(form, 7, truncate=50)
    assert tw.i == 4 and tw.kprime == 4


def test_realize_delta_mod11():
    form = select_input_form(1, 12, 11, {"ap": {2: -24}}, bound=50)
    rep = realize(form, 11, truncate=50)
    assert rep.i == 0
    assert rep.is_gamma0 and rep.subgroup.level == 11
    assert (rep.d1, rep.dh) == (1, 1)
    assert rep.system.a[2].coeffs == (9,) and rep.system.a[3].coeffs == (10,)
    assert rep.det_check
    assert rep.index == 10 and rep.predicted_index == 10


def test_realize_level3_mod11():
    form = select_input_form(3, 12, 11, {"ap": {2: 78}}, bound=50)
    rep = realize(form, 11, truncate=50)
    assert rep.i == 0
    assert (rep.d1, rep.dh) == (21, 3)
    assert rep.is_gamma0  # (ell-1) | (k-2): 10 | 10
    # f2 = q + q^2 - q^3 mod 11
    assert rep.system.a[2].coeffs == (1,)
    assert rep.system.a[3].coeffs == (10,)


def test_realize_weight2_input():
    # a weight-2 input uses H = ker(eps-bar) at level N directly
    eps = make_character(13, [1], 6)
    form = select_input_form(13, 2, 5, {"index": 0}, eps=eps, bound=50)
    rep = realize(form, 5, truncate=50)
    assert rep.i == 0
    assert rep.subgroup.level == 13
    assert len(rep.subgroup) == 2  # kernel of the order-6 character
    assert rep.d1 == 2 and rep.dh == 2


def test_realize_index_coherence():
    for n, ell in [(3, 13), (4, 7)]:
        form = select_input_form(
            n, 12, ell,
            {"ap": {2: 78 if n == 3 else 0, 3: -243 if n == 3 else -516}},
            bound=50)
        rep = realize(form, ell, truncate=50)
        assert rep.index == len(rep.subgroup)
        assert rep.predicted_index == rep.index
        assert rep.dh <= rep.d1


def test_realization_report_document_shape():
    form = select_input_form(1, 12, 13, {"ap": {2: -24}}, bound=50)
    rep = realize(form, 13, truncate=50)
    doc = rep.to_dict()
    assert doc["d1"] == 2 and doc["dH"] == 2
    assert doc["determinant_check"] is True
    assert doc["caveats"]["irreducibility_assumed"] is True
    assert "minpoly_a2" in doc
    assert doc["match"]["verdict"] is True


def test_audit_delta_mod11():
    form = select_input_form(1, 12, 11, {"ap": {2: -24}}, bound=50)
    audit = largest_subgroup_audit(form, 11, 0, truncate=50)
    assert audit["consistent"]
    assert len(audit["rows"]) == 4
    assert all(r["match"] for r in audit["rows"])  # H is everything


def test_audit_trivial_subgroup_always_matches():
    form = select_input_form(1, 12, 13, {"ap": {2: -24}}, bound=50)
    audit = largest_subgroup_audit(form, 13, 0, truncate=50)
    assert audit["consistent"]
    triv = [r for r in audit["rows"] if r["order"] == 1][0]
    assert triv["match"]
