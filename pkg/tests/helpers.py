"""Shared independent oracles for the test suite.

Everything here is deliberately naive: exhaustive searches, textbook
formulas, brute-force enumeration.  The point is that none of it shares
code paths with the package internals it checks.
"""

from math import comb, gcd


def naive_is_irreducible(coeffs, p):
    """Exhaustive irreducibility test for a monic poly over F_p (deg <= 4)."""
    deg = len(coeffs) - 1
    if deg == 1:
        return True
    # root test rules out degrees 2 and 3
    has_root = any(
        sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p == 0
        for x in range(p))
    if deg <= 3:
        return not has_root
    if has_root:
        return False
    # degree 4: also rule out a product of two irreducible quadratics
    for b in range(p):
        for c in range(p):
            if not naive_is_irreducible([c, b, 1], p):
                continue
            # divide coeffs by x^2 + bx + c over F_p
            rem = list(coeffs)
            for i in range(deg, 1, -1):
                lead = rem[i] % p
                if lead:
                    rem[i - 1] = (rem[i - 1] - lead * b) % p
                    rem[i - 2] = (rem[i - 2] - lead * c) % p
                rem[i] = 0
            if rem[0] % p == 0 and rem[1] % p == 0:
                return False
    return True


def least_irreducible(p, r):
    """Lex-least monic irreducible of degree r over F_p, by brute force."""
    import itertools
    for tail in itertools.product(range(p), repeat=r):
        coeffs = list(tail) + [1]
        if naive_is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError


def naive_euler_phi(n):
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def psl2_index_gamma1(n):
    """#{(c,d) unimodular mod n} / #{+-1}, by enumeration."""
    pairs = sum(1 for c in range(n) for d in range(n)
                if gcd(gcd(c, d), n) == 1)
    return pairs // (1 if n <= 2 else 2)


def dim_cusp_forms(mu, nu2, nu3, cusps, genus, k):
    """dim S_k for even k >= 2 from the curve invariants (textbook formula)."""
    assert k % 2 == 0
    if k == 2:
        return genus
    return ((k - 1) * (genus - 1) + (k // 2 - 1) * cusps
            + nu2 * (k // 4) + nu3 * (k // 3))


def naive_genus(n, subgroup_elements):
    """Genus of Gamma_H by explicit orbit counting on unimodular pairs."""
    scal = set()
    for u in subgroup_elements:
        scal.add(u % n)
        scal.add((-u) % n)
    pairs = [(c, d) for c in range(n) for d in range(n)
             if gcd(gcd(c, d), n) == 1]
    canon = {}
    for c, d in pairs:
        orbit = min((u * c % n, u * d % n) for u in scal)
        canon[(c, d)] = orbit
    reps = sorted(set(canon.values()))
    index_of = {r: i for i, r in enumerate(reps)}
    mu = len(reps)
    s = [index_of[canon[(d % n, (-c) % n)]] for c, d in reps]
    t = [index_of[canon[(c % n, (c + d) % n)]] for c, d in reps]
    nu2 = sum(1 for i in range(mu) if s[i] == i)
    nu3 = sum(1 for i in range(mu) if t[s[i]] == i)
    seen = [False] * mu
    cusps = 0
    for i in range(mu):
        j = i
        if not seen[j]:
            cusps += 1
            while not seen[j]:
                seen[j] = True
                j = t[j]
    num = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps
    assert num % 12 == 0
    return num // 12, mu, nu2, nu3, cusps
