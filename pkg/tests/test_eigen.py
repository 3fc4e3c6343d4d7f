import pytest

from modgalrep.eigen import (
    decompose,
    gf_charpoly,
    gf_matrix_from_int,
    match_twist,
    minpoly_prime_field,
    reduce_space_mod,
    twist_eigensystem,
)
from modgalrep.exactalg import fq_field, poly_from_ints, unit_group
from modgalrep.exactalg.gf import poly_divmod
from modgalrep.modsym import build_space

PRIMES50 = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def plus_cuspidal(n, k):
    return build_space(n, k).cuspidal_subspace().star_plus_subspace()


def systems_of(n, k, ell, primes=PRIMES50):
    return decompose(reduce_space_mod(plus_cuspidal(n, k), ell, primes), primes)


def test_reduce_space_preserves_commutation():
    space = plus_cuspidal(13, 2)
    rs = reduce_space_mod(space, 5, [2, 3])
    a, b = rs.ops["T2"], rs.ops["T3"]
    n = len(a)
    ab = [[sum(a[i][t] * b[t][j] for t in range(n)) % 5 for j in range(n)]
          for i in range(n)]
    ba = [[sum(b[i][t] * a[t][j] for t in range(n)) % 5 for j in range(n)]
          for i in range(n)]
    assert ab == ba


def test_reduce_trace_example():
    rs = reduce_space_mod(plus_cuspidal(1, 12), 13, [2])
    assert rs.ops["T2"] == [[2]]  # -24 = 2 mod 13


def test_decompose_level11_mod11():
    systems = systems_of(11, 2, 11)
    assert len(systems) == 1
    s = systems[0]
    assert s.a[2].coeffs == (9,)   # -2 mod 11
    assert s.a[3].coeffs == (10,)  # -1 mod 11
    assert s.diamond_is_trivial()


def test_decompose_level1_weight12_mod13():
    systems = systems_of(1, 12, 13)
    assert len(systems) == 1
    assert systems[0].a[2].coeffs == (2,)
    assert systems[0].a[3].coeffs == (5,)  # 252 mod 13


def test_decompose_level13_root_splitting():
    systems = systems_of(13, 2, 13)
    assert sorted(s.a[2].encoding() for s in systems) == [2, 8]
    for s in systems:
        assert s.field.r == 1


def test_decompose_completeness_bookkeeping():
    for n, k, ell in [(13, 2, 5), (13, 2, 13), (15, 2, 5), (5, 12, 7),
                      (23, 2, 5)]:
        space = plus_cuspidal(n, k)
        systems = systems_of(n, k, ell)
        assert sum(s.multiplicity * s.field.r for s in systems) == space.dim


def test_galois_stability_of_orbit_expansion():
    for n, k, ell in [(23, 2, 5), (5, 12, 7)]:
        systems = systems_of(n, k, ell)
        expanded = {}
        for s in systems:
            for conj in s.frobenius_orbit():
                expanded[conj.value_tuple()] = conj
        for s in expanded.values():
            assert s.frobenius().value_tuple() in expanded
        # representatives are canonical: least value tuple in the orbit
        for s in systems:
            assert s.value_tuple() == min(c.value_tuple()
                                          for c in s.frobenius_orbit())


def test_diamond_values_multiplicative():
    for s in systems_of(13, 2, 5):
        group = unit_group(13)
        for x in group.elements():
            for y in (2, 5, 7):
                lhs = s.diamond_value(x * y % 13)
                rhs = s.diamond_value(x) * s.diamond_value(y)
                assert lhs == rhs


def test_minpoly_examples():
    F13 = fq_field(13, 1)
    assert minpoly_prime_field(F13.from_int(8)) == [5, 1]  # x - 8
    F49 = fq_field(7, 2)
    mp = minpoly_prime_field(F49.gen())
    assert len(mp) - 1 == 2 and mp[-1] == 1


def test_matched_minpoly_divides_table_polynomial():
    systems = systems_of(13, 2, 13)
    matched = [s for s in systems if s.a[2].encoding() == 2][0]
    F13 = fq_field(13, 1)
    target = poly_from_ints(F13, [3, 3, 1])
    mp = poly_from_ints(F13, minpoly_prime_field(matched.a[2]))
    _, rem = poly_divmod(target, mp)
    assert not rem


def test_twist_identity_and_fermat():
    s = systems_of(11, 2, 11)[0]
    t0 = twist_eigensystem(s, 0)
    assert all(t0.a[p] == s.a[p] for p in s.a)
    t10 = twist_eigensystem(s, 10)
    assert all(t10.a[p] == s.a[p] for p in s.a if p % 11)


def test_twist_level15_example():
    s = systems_of(15, 2, 5)[0]
    assert s.a[2].coeffs == (4,)  # a_2 = -1
    t = twist_eigensystem(s, 1)
    assert t.a[2].coeffs == (3,)  # 2 * 4 = 8 = 3 mod 5


def test_match_reflexive():
    for s in systems_of(13, 2, 5) + systems_of(5, 12, 7):
        assert match_twist(s, s, 0, 30).verdict


def test_match_equivariance():
    f = [s for s in systems_of(3, 12, 5) if s.a[2].encoding() == 3][0]
    g = systems_of(15, 2, 5)[0]
    assert match_twist(f, g, 1, 50).verdict
    for j in (1, 2, 3):
        tw = twist_eigensystem(f, j)
        assert match_twist(tw, g, 1 + j, 50).verdict


def test_match_delta_level11():
    delta = systems_of(1, 12, 11)[0]
    f2 = systems_of(11, 2, 11)[0]
    r1 = match_twist(delta, f2, 1, 50)
    assert not r1.verdict and r1.first_failing_prime == 2
    r0 = match_twist(delta, f2, 0, 50)
    assert r0.verdict and r0.det_check
    assert 11 in r0.primes_skipped


def test_match_weight_congruence_reported_same_level():
    systems = systems_of(13, 2, 13)
    a, b = systems[0], systems[1]
    rep = match_twist(a, b, 0, 20)
    # same level but different diamond characters: congruence not in scope
    assert rep.weight_congruence is None
    rep_self = match_twist(a, a, 0, 20)
    assert rep_self.weight_congruence is True


def test_match_det_check_spec_pair():
    f = [s for s in systems_of(3, 12, 5) if s.a[2].encoding() == 3][0]
    g = systems_of(15, 2, 5)[0]
    rep = match_twist(f, g, 1, 50)
    assert rep.verdict and rep.det_check
    assert all(p not in rep.primes_checked for p in (3, 5))


def test_bad_prime_values_flagged():
    systems = decompose(reduce_space_mod(plus_cuspidal(11, 2), 11,
                                         [2, 3, 11]), [2, 3, 11])
    s = systems[0]
    assert 11 in s.bad_primes
    assert 11 in s.a


def test_charpoly_sanity():
    F = fq_field(5, 1)
    mat = gf_matrix_from_int(F, [[1, 1], [0, 2]])
    cp = gf_charpoly(mat)
    # (x-1)(x-2) = x^2 - 3x + 2 = x^2 + 2x + 2 mod 5
    assert [c.coeffs[0] for c in cp] == [2, 2, 1]
