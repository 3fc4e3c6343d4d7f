"""Exact integer linear algebra: kernels, Smith form, lattice quotients.

Matrices are lists of rows of Python ints.  Hot paths mirror the data into
int64 numpy arrays when a conservative bound shows no overflow is possible,
and fall back to pure Python big integers otherwise, so results are always
exact.

Kernels are computed with a tracked unimodular row transform, which makes
the returned basis generate the full integer kernel lattice; in particular
every kernel here is saturated, which is what keeps reductions mod ell free
of spurious torsion artifacts.
"""

from math import gcd

import numpy as np

from sympy import factorint

_INT64_SAFE = 1 << 60


class SaturationError(Exception):
    """An exact solve failed: target vector not in the integral sublattice."""


def _max_abs(rows):
    m = 0
    for row in rows:
        for x in row:
            if x > m:
                m = x
            elif -x > m:
                m = -x
    return m


def _to_int64(rows, ncols):
    if not rows:
        return np.zeros((0, ncols), dtype=np.int64)
    try:
        arr = np.array(rows, dtype=np.int64)
    except OverflowError:
        return None
    if arr.size and int(np.abs(arr).max()) >= _INT64_SAFE:
        return None
    return arr


def mat_mul(a, b):
    """Exact product of two integer matrices (lists of rows)."""
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    n, k, m = len(a), len(b), len(b[0])
    bound = _max_abs(a) * _max_abs(b) * k
    if bound < _INT64_SAFE:
        an = np.array(a, dtype=np.int64)
        bn = np.array(b, dtype=np.int64)
        return (an @ bn).tolist()
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(row) for row in zip(*a)] if a else []


def is_zero_matrix(a):
    return all(all(x == 0 for x in row) for row in a)


class _Int64Overflow(Exception):
    pass


def _echelon_np(w, ncols_left):
    """Unimodular row echelon over the first ncols_left columns, in place."""
    nrows = w.shape[0]
    piv = 0
    for j in range(ncols_left):
        if piv >= nrows:
            break
        while True:
            col = w[piv:, j]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                break
            if nz.size == 1:
                r = piv + int(nz[0])
                if r != piv:
                    w[[piv, r]] = w[[r, piv]]
                piv += 1
                break
            sel = int(nz[int(np.argmin(np.abs(col[nz])))])
            r = piv + sel
            pv = int(w[r, j])
            others = nz[nz != sel] + piv
            qs = w[others, j] // pv
            qmax = int(np.abs(qs).max()) if qs.size else 0
            rowmax = int(np.abs(w[r]).max())
            curmax = int(np.abs(w[others]).max()) if others.size else 0
            if qmax * rowmax + curmax >= _INT64_SAFE:
                raise _Int64Overflow
            w[others] -= qs[:, None] * w[r][None, :]
    return piv


def _echelon_py(w, ncols_left):
    nrows = len(w)
    piv = 0
    for j in range(ncols_left):
        if piv >= nrows:
            break
        while True:
            nz = [i for i in range(piv, nrows) if w[i][j]]
            if not nz:
                break
            if len(nz) == 1:
                r = nz[0]
                if r != piv:
                    w[piv], w[r] = w[r], w[piv]
                piv += 1
                break
            r = min(nz, key=lambda i: abs(w[i][j]))
            pv = w[r][j]
            rr = w[r]
            for i in nz:
                if i == r:
                    continue
                q = w[i][j] // pv
                if q:
                    wi = w[i]
                    for t in range(len(wi)):
                        wi[t] -= q * rr[t]
    return piv


def kernel_int(a, ncols=None):
    """Basis of the integer kernel {x : A x = 0} as a list of vectors.

    The basis spans the full kernel lattice Z^ncols intersect ker_Q(A),
    i.e. it is saturated.  Deterministic for a fixed input.
    """
    if ncols is None:
        if not a:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(a[0])
    m = len(a)
    rows = []
    for i in range(ncols):
        row = [a[r][i] for r in range(m)]
        row.extend(1 if t == i else 0 for t in range(ncols))
        rows.append(row)
    w = _to_int64(rows, m + ncols)
    if w is not None:
        try:
            piv = _echelon_np(w, m)
            out_rows = w[piv:, m:].tolist()
        except _Int64Overflow:
            w = None
    if w is None:
        piv = _echelon_py(rows, m)
        out_rows = [row[m:] for row in rows[piv:]]
    basis = []
    for row in out_rows:
        vec = [int(x) for x in row]
        lead = next((x for x in vec if x), None)
        if lead is not None and lead < 0:
            vec = [-x for x in vec]
        basis.append(vec)
    return basis


def solve_int(b, y):
    """Solve B X = Y exactly over the integers.

    B is n x s of full column rank with columns spanning a saturated
    sublattice; Y is n x k with columns in that sublattice.  Raises
    SaturationError if a column of Y is not an integral combination.
    """
    n = len(b)
    s = len(b[0]) if b else 0
    k = len(y[0]) if y else 0
    if s == 0:
        if not is_zero_matrix(y):
            raise SaturationError("nonzero target in a zero-dimensional space")
        return [[0] * k for _ in range(0)]
    rows = [list(b[i]) + list(y[i]) for i in range(n)]
    w = _to_int64(rows, s + k)
    if w is not None:
        try:
            piv = _echelon_np(w, s)
            rows = w.tolist()
        except _Int64Overflow:
            rows = [list(b[i]) + list(y[i]) for i in range(n)]
            piv = _echelon_py(rows, s)
    else:
        piv = _echelon_py(rows, s)
    if piv != s:
        raise ValueError("basis matrix does not have full column rank")
    for i in range(s, n):
        if any(rows[i][t] for t in range(s, s + k)):
            raise SaturationError("target not in the span of the basis")
    x = [[0] * k for _ in range(s)]
    for i in range(s - 1, -1, -1):
        pv = rows[i][i]
        for col in range(k):
            acc = rows[i][s + col]
            for j in range(i + 1, s):
                acc -= rows[i][j] * x[j][col]
            q, r = divmod(acc, pv)
            if r:
                raise SaturationError("non-integral solve: lattice not saturated")
            x[i][col] = q
    return x


def _snf_with_row_transform(mat):
    """Diagonalize an integer matrix by unimodular row and column ops.

    Returns (diag, u, uinv) where u @ mat @ (col ops) is diagonal with the
    returned diagonal entries (not necessarily in divisibility order), and
    uinv is the inverse of the row transform u.  Elimination uses xgcd
    2x2 transforms rather than division/swap chains, which keeps the
    intermediate entries from exploding.
    """
    m = [list(row) for row in mat]
    t = len(m)
    s = len(m[0]) if m else 0
    u = identity_matrix(t)
    uinv = identity_matrix(t)

    def row_transform(i, j, x, y, a, b):
        # rows (i, j) <- (x*row_i + y*row_j, -b*row_i + a*row_j); det = 1
        for mats in (m, u):
            ri, rj = mats[i], mats[j]
            for c in range(len(ri)):
                vi, vj = ri[c], rj[c]
                ri[c] = x * vi + y * vj
                rj[c] = a * vj - b * vi
        # uinv columns (i, j) <- (a*col_i + b*col_j, -y*col_i + x*col_j)
        for r in range(t):
            vi, vj = uinv[r][i], uinv[r][j]
            uinv[r][i] = a * vi + b * vj
            uinv[r][j] = x * vj - y * vi

    def col_transform(i, j, x, y, a, b):
        for r in range(t):
            vi, vj = m[r][i], m[r][j]
            m[r][i] = x * vi + y * vj
            m[r][j] = a * vj - b * vi

    def row_swap(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]
        for r in range(t):
            uinv[r][i], uinv[r][j] = uinv[r][j], uinv[r][i]

    def col_swap(i, j):
        for r in range(t):
            m[r][i], m[r][j] = m[r][j], m[r][i]

    def xgcd(a, b):
        x0, x1, y0, y1 = 1, 0, 0, 1
        while b:
            q, r = divmod(a, b)
            a, b = b, r
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        return a, x0, y0

    diag = []
    k = 0
    while k < t and k < s:
        best = None
        for i in range(k, t):
            for j in range(k, s):
                v = abs(m[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != k:
            row_swap(k, bi)
        if bj != k:
            col_swap(k, bj)
        while True:
            for i in range(k + 1, t):
                if m[i][k]:
                    piv, other = m[k][k], m[i][k]
                    if other % piv == 0:
                        row_transform(k, i, 1, 0, 1, other // piv)
                    else:
                        g, x, y = xgcd(piv, other)
                        row_transform(k, i, x, y, piv // g, other // g)
            # column k is clear below the pivot; fix row k
            piv = m[k][k]
            if all(m[k][j] % piv == 0 for j in range(k + 1, s)):
                for j in range(k + 1, s):
                    q = m[k][j] // piv
                    if q:
                        col_transform(k, j, 1, 0, 1, q)
                break
            # a 2-column gcd step shrinks the pivot; redo the column after
            for j in range(k + 1, s):
                if m[k][j] % piv:
                    g, x, y = xgcd(piv, m[k][j])
                    col_transform(k, j, x, y, piv // g, m[k][j] // g)
                    break
        d = m[k][k]
        if d < 0:
            for c in range(s):
                m[k][c] = -m[k][c]
            for c in range(t):
                u[k][c] = -u[k][c]
            for r in range(t):
                uinv[r][k] = -uinv[r][k]
            d = -d
        diag.append(d)
        k += 1
    return diag, u, uinv


def elementary_divisors(diag):
    """Prime-power torsion invariants of a diagonalized quotient, sorted."""
    out = []
    for d in diag:
        d = abs(d)
        if d > 1:
            for p, e in factorint(d).items():
                out.append(p ** e)
    return sorted(out)


class QuotientMap:
    """Free quotient of Z^n by a set of integer relation rows.

    project maps a generator index (or an n-vector) to its class in Z^dim,
    after discarding torsion; lifts give one preimage per basis vector.
    """

    def __init__(self, n, dim, torsion, proj_rows, lifts):
        self.n = n
        self.dim = dim
        self.torsion = torsion
        self.proj_rows = proj_rows  # n rows, each of length dim
        self.lifts = lifts          # dim sparse vectors [(index, coeff), ...]

    def project_vector(self, vec):
        out = [0] * self.dim
        for i, c in vec:
            if c:
                row = self.proj_rows[i]
                for t in range(self.dim):
                    out[t] += c * row[t]
        return out


def quotient_by_relations(n, relation_rows):
    """Torsion-free quotient of Z^n by sparse relation rows.

    relation_rows is an iterable of dicts {generator index: coefficient}.
    Unit-coefficient pivots are eliminated sparsely first; whatever is left
    goes through a dense Smith normal form.  Torsion is reported as sorted
    prime-power elementary divisors and discarded from the projection.
    """
    solved = {}       # col -> dict of remaining cols (the substitution)
    solved_order = []
    leftovers = []

    def substitute(row):
        while True:
            hit = [c for c in row if c in solved]
            if not hit:
                return row
            for c in hit:
                if c not in row:
                    continue
                coeff = row.pop(c)
                if coeff:
                    for c2, v2 in solved[c].items():
                        nv = row.get(c2, 0) + coeff * v2
                        if nv:
                            row[c2] = nv
                        elif c2 in row:
                            del row[c2]

    for raw in relation_rows:
        row = {c: v for c, v in raw.items() if v}
        substitute(row)
        if not row:
            continue
        units = [c for c, v in row.items() if v in (1, -1)]
        if not units:
            leftovers.append(row)
            continue
        target = max(units)
        sign = row.pop(target)
        solved[target] = {c: -v * sign for c, v in row.items()}
        solved_order.append(target)

    # re-substitute leftovers until no new unit pivot appears
    pending = leftovers
    while True:
        progressed = False
        waiting = []
        for row in pending:
            substitute(row)
            if not row:
                continue
            units = [c for c, v in row.items() if v in (1, -1)]
            if units:
                target = max(units)
                sign = row.pop(target)
                solved[target] = {c: -v * sign for c, v in row.items()}
                solved_order.append(target)
                progressed = True
            else:
                waiting.append(row)
        pending = waiting
        if not progressed:
            break
    leftovers = pending

    # resolve substitution chains so every solved column maps to free columns
    for target in reversed(solved_order):
        sub = solved[target]
        resolved = {}
        for c, v in sub.items():
            if c in solved:
                for c2, v2 in solved[c].items():
                    resolved[c2] = resolved.get(c2, 0) + v * v2
            else:
                resolved[c] = resolved.get(c, 0) + v
        solved[target] = {c: v for c, v in resolved.items() if v}

    remaining = sorted(set(range(n)) - set(solved))
    pos = {c: i for i, c in enumerate(remaining)}
    t = len(remaining)

    if leftovers:
        dense = [[0] * len(leftovers) for _ in range(t)]
        for j, row in enumerate(leftovers):
            for c, v in row.items():
                dense[pos[c]][j] = v
        diag, u, uinv = _snf_with_row_transform(dense)
        free_idx = [i for i in range(t) if i >= len(diag) or diag[i] == 0]
        torsion = elementary_divisors(diag)
        dim = len(free_idx)
        proj_remaining = [[u[i][c] for i in free_idx] for c in range(t)]
        lifts = []
        for i in free_idx:
            lifts.append([(remaining[r], uinv[r][i]) for r in range(t) if uinv[r][i]])
    else:
        torsion = []
        dim = t
        proj_remaining = [[1 if i == j else 0 for j in range(dim)] for i in range(t)]
        lifts = [[(c, 1)] for c in remaining]

    proj_rows = [None] * n
    for c in remaining:
        proj_rows[c] = proj_remaining[pos[c]]
    for c, sub in solved.items():
        row = [0] * dim
        for c2, v in sub.items():
            prow = proj_remaining[pos[c2]]
            for tcol in range(dim):
                row[tcol] += v * prow[tcol]
        proj_rows[c] = row

    return QuotientMap(n, dim, torsion, proj_rows, lifts)


class IntegerLattice:
    """Quotient of a lattice by integer relations: rank, torsion, basis."""

    def __init__(self, generators, relations, rank, torsion, basis):
        self.generators = generators
        self.relations = relations
        self.rank = rank
        self.torsion = torsion
        self.basis = basis  # rank vectors in generator coordinates

    def __repr__(self):
        return "IntegerLattice(rank=%d, torsion=%r)" % (self.rank, self.torsion)


def lattice_quotient(generators, relations):
    """Quotient of the row span of `generators` by the rows of `relations`.

    Both arguments are integer matrices (lists of rows).  Relations must lie
    in the generator span.  The quotient basis spans the torsion-free part;
    torsion is reported as sorted prime-power elementary divisors.
    """
    ngen = len(generators)
    if ngen == 0:
        return IntegerLattice(generators, relations, 0, [], [])
    width = len(generators[0])
    ident = generators == identity_matrix(ngen)
    if ident:
        rel_coords = [list(r) for r in relations]
    else:
        gt = transpose(generators)
        yt = transpose(relations) if relations else [[] for _ in range(width)]
        sol = solve_int(gt, yt)
        rel_coords = transpose(sol) if relations else []
    rows = [{j: v for j, v in enumerate(r) if v} for r in rel_coords]
    qm = quotient_by_relations(ngen, rows)
    basis = []
    for lift in qm.lifts:
        vec = [0] * ngen
        for i, c in lift:
            vec[i] = c
        basis.append(vec)
    return IntegerLattice(generators, relations, qm.dim, qm.torsion, basis)
