import pytest

from modgalrep.congruence import (
    coset_table,
    curve_invariants,
    full_subgroup,
    h_from_eigenform,
    SubgroupH,
    trivial_subgroup,
)
from modgalrep.dirichlet import trivial_character
from modgalrep.exactalg import kernel_int, mat_mul
from modgalrep.modsym import (
    build_space,
    clear_space_registry,
    merel_family,
    ModularSymbolSpace,
)

from helpers import dim_cusp_forms


def plus_cuspidal(n, k):
    return build_space(n, k).cuspidal_subspace().star_plus_subspace()


def test_merel_family_inequalities():
    for p in (2, 3, 5, 7, 11, 13):
        fam = merel_family(p)
        assert len(fam) == len(set(fam))
        for a, b, c, d in fam:
            assert a * d - b * c == p
            assert a > b >= 0 and d > c >= 0
        # oracle: exhaustive enumeration within the inequality box
        box = [(a, b, c, d)
               for a in range(1, p + 1) for b in range(a)
               for d in range(1, p + 1) for c in range(d)
               if a * d - b * c == p]
        assert sorted(fam) == sorted(box)


def test_merel_family_size_p2():
    assert len(merel_family(2)) == 4


def test_odd_weight_rejected():
    with pytest.raises(ValueError):
        build_space(3, 5)


def test_dimensions_match_curve_invariants():
    # independent oracle: textbook dimension formula from coset counting
    for n, k in [(1, 12), (2, 12), (3, 12), (4, 12), (5, 12), (6, 12),
                 (11, 2), (13, 2), (15, 2), (20, 2), (33, 2)]:
        inv = curve_invariants(coset_table(trivial_subgroup(n)))
        expected = dim_cusp_forms(inv.index, inv.nu2, inv.nu3, inv.cusps,
                                  inv.genus, k)
        space = plus_cuspidal(n, k)
        assert space.dim == expected, (n, k, space.dim, expected)
        cusp = build_space(n, k).cuspidal_subspace()
        assert cusp.dim == 2 * expected


def test_cuspidal_dim_examples():
    assert build_space(1, 12).cuspidal_subspace().dim == 2
    assert build_space(11, 2).cuspidal_subspace().dim == 2
    assert build_space(15, 2).cuspidal_subspace().dim == 2
    assert build_space(33, 2).cuspidal_subspace().dim == 42
    assert build_space(1, 2).cuspidal_subspace().dim == 0


def test_cuspidal_twice_rejected():
    cusp = build_space(11, 2).cuspidal_subspace()
    with pytest.raises(ValueError):
        cusp.cuspidal_subspace()


def test_hecke_eigenvalue_level1_weight12():
    plus = plus_cuspidal(1, 12)
    assert plus.dim == 1
    assert plus.hecke_matrix(2) == [[-24]]
    assert plus.hecke_matrix(3) == [[252]]
    cusp = build_space(1, 12).cuspidal_subspace()
    assert sum(cusp.hecke_matrix(2)[i][i] for i in range(2)) == -48


def test_hecke_eigenvalue_level11_weight2():
    plus = plus_cuspidal(11, 2)
    assert plus.dim == 1
    assert plus.hecke_matrix(2) == [[-2]]
    assert plus.hecke_matrix(3) == [[-1]]


def test_level4_weight12_has_a2_zero_system():
    # the level-4 form q - 516q^3 + ... has a_2 = 0 and a_3 = -516
    plus = plus_cuspidal(4, 12)
    t2 = plus.hecke_matrix(2)
    assert kernel_int(t2, plus.dim), "T_2 should be singular"
    t3 = [row[:] for row in plus.hecke_matrix(3)]
    for i in range(plus.dim):
        t3[i][i] += 516
    joint = t3 + t2  # a vector with T_3 = -516 and T_2 = 0 simultaneously
    assert kernel_int(joint, plus.dim)


def test_diamond_identity_and_multiplicativity():
    cusp = build_space(13, 2).cuspidal_subspace()
    n = cusp.dim
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    assert cusp.diamond_matrix(1) == ident
    d2, d3 = cusp.diamond_matrix(2), cusp.diamond_matrix(3)
    assert mat_mul(d2, d3) == cusp.diamond_matrix(6)


def test_diamond_trivial_on_level11_cuspidal():
    cusp = build_space(11, 2).cuspidal_subspace()
    n = cusp.dim
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for d in (2, 3, 7, 10):
        assert cusp.diamond_matrix(d) == ident


def test_diamond_order_on_level13_cuspidal():
    cusp = build_space(13, 2).cuspidal_subspace()
    d2 = cusp.diamond_matrix(2)
    power = d2
    for _ in range(5):
        power = mat_mul(power, d2)
    n = cusp.dim
    assert power == [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def test_star_involution_squares_to_identity():
    for n, k in [(11, 2), (13, 2), (3, 12)]:
        space = build_space(n, k)
        star = space.star_matrix()
        ident = [[1 if i == j else 0 for j in range(space.dim)]
                 for i in range(space.dim)]
        assert mat_mul(star, star) == ident


def test_star_commutes_with_hecke_and_diamond():
    for n, k in [(11, 2), (13, 2), (4, 12)]:
        space = build_space(n, k)
        star = space.star_matrix()
        for p in (2, 3, 5):
            t = space.hecke_matrix(p)
            assert mat_mul(star, t) == mat_mul(t, star)
        if n > 2:
            d = space.diamond_matrix(2 if n % 2 else 3)
            assert mat_mul(star, d) == mat_mul(d, star)


def test_hecke_commutation():
    for n, k in [(11, 2), (15, 2), (3, 12), (5, 12)]:
        space = build_space(n, k)
        mats = {p: space.hecke_matrix(p) for p in (2, 3, 5, 7)}
        for p in mats:
            for q in mats:
                assert mat_mul(mats[p], mats[q]) == mat_mul(mats[q], mats[p])


def test_hecke_diamond_commutation():
    space = build_space(13, 2)
    d = space.diamond_matrix(2)
    for p in (2, 3, 5, 13):
        t = space.hecke_matrix(p)
        assert mat_mul(d, t) == mat_mul(t, d)


def test_plus_subspace_dims():
    assert plus_cuspidal(11, 2).dim == 1
    assert plus_cuspidal(1, 12).dim == 1
    assert plus_cuspidal(1, 2).dim == 0


def test_h_invariant_whole_space_for_trivial_subgroup():
    cusp = build_space(13, 2).cuspidal_subspace()
    inv = cusp.h_invariant_subspace(trivial_subgroup(13))
    assert inv.dim == cusp.dim


def test_h_invariant_dim_33_full():
    cusp = build_space(33, 2).cuspidal_subspace()
    inv = cusp.h_invariant_subspace(full_subgroup(33))
    assert inv.star_plus_subspace().dim == 3


def test_h_invariant_dim_39_size4():
    h = h_from_eigenform(trivial_character(3), 12, 0, 13)
    assert h.level == 39 and len(h) == 4
    cusp = build_space(39, 2).cuspidal_subspace()
    inv = cusp.h_invariant_subspace(h)
    assert inv.star_plus_subspace().dim == 17


def test_h_invariant_plus_dim_equals_genus_spot():
    from modgalrep.congruence import genus_of_subgroup, intermediate_subgroups
    for n in (13, 20, 21):
        cusp = build_space(n, 2).cuspidal_subspace()
        for h in intermediate_subgroups(n):
            inv = cusp.h_invariant_subspace(h)
            assert inv.star_plus_subspace().dim == genus_of_subgroup(h)


def test_rebuild_is_deterministic():
    space = build_space(13, 2)
    t2 = space.hecke_matrix(2)
    star = space.star_matrix()
    clear_space_registry()
    space2 = build_space(13, 2)
    assert space2.hecke_matrix(2) == t2
    assert space2.star_matrix() == star


def test_bad_prime_hecke_well_defined():
    space = build_space(11, 2)
    u11 = space.hecke_matrix(11)
    t2 = space.hecke_matrix(2)
    assert mat_mul(u11, t2) == mat_mul(t2, u11)
