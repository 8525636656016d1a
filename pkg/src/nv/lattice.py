"""Lattices with exact arithmetic.

A lattice is stored by an integer basis in *scaled* ambient coordinates: the
true coordinate vector is basis_row / denom.  The ambient Gram matrix refers
to the scaled coordinates, so the induced Gram matrix of the lattice is
(1/denom^2) * B * A * B^T and must come out integral (and even) for every
lattice in this project.

All lattices are kept in the positive definite model; the negative definite
lattices of the tables are handled by negating the discriminant form at
symbol time (sign flag 'neg').
"""

from fractions import Fraction
from math import ceil, floor, gcd

from .intmat import (
    copy,
    det_bareiss,
    identity,
    invert_rational,
    kernel_basis,
    hnf_row_style,
    mat_mul,
    smith_normal_form,
    snf_diagonal,
    transpose,
)


class LatticeError(Exception):
    pass


class Lattice:
    def __init__(self, ambient_gram, basis, denom=1, sign="pos"):
        self.ambient_gram = ambient_gram
        self.basis = [row[:] for row in basis]
        self.denom = denom
        if sign not in ("pos", "neg"):
            raise ValueError("sign must be 'pos' or 'neg'")
        self.sign = sign
        self.ambient_dim = len(ambient_gram)
        self._gram = None
        self._solver = None

    @property
    def rank(self):
        return len(self.basis)

    def gram(self):
        """Induced Gram matrix; raises if not integral."""
        if self._gram is None:
            if not self.basis:
                self._gram = []
            else:
                M = mat_mul(mat_mul(self.basis, self.ambient_gram),
                            transpose(self.basis))
                d2 = self.denom * self.denom
                G = []
                for row in M:
                    new = []
                    for x in row:
                        q, r = divmod(x, d2)
                        if r != 0:
                            raise LatticeError("induced Gram is not integral")
                        new.append(q)
                    G.append(new)
                self._gram = G
        return self._gram

    def is_even(self):
        return all(self.gram()[i][i] % 2 == 0 for i in range(self.rank))

    def det(self):
        return det_bareiss(self.gram())

    def disc_group_orders(self):
        """Invariant factors > 1 of the discriminant group L*/L."""
        return [d for d in snf_diagonal(self.gram()) if d != 1]

    def coords_of(self, vec):
        """Exact coordinates of a scaled-ambient vector w.r.t. the basis, as
        Fractions, or None if outside the Q-span."""
        if not self.basis:
            return [] if not any(vec) else None
        # solve x * basis = vec by least squares via Gram (basis rows are
        # independent): x * (B A B^T) = vec * A * B^T
        if self._solver is None:
            G = mat_mul(mat_mul(self.basis, self.ambient_gram), transpose(self.basis))
            AB = mat_mul(self.ambient_gram, transpose(self.basis))
            Ginv = invert_rational(G)
            den = 1
            for row in Ginv:
                for c in row:
                    den = den * c.denominator // gcd(den, c.denominator)
            N = [[int(c * den) for c in row] for row in Ginv]
            self._solver = (N, den, AB)
        N, den, AB = self._solver
        rhs = [sum(vec[i] * AB[i][k] for i in range(self.ambient_dim))
               for k in range(self.rank)]
        num = [sum(rhs[i] * N[i][j] for i in range(self.rank))
               for j in range(self.rank)]
        # confirm the solution actually reproduces vec (vec may be outside span)
        for j in range(self.ambient_dim):
            if sum(num[k] * self.basis[k][j] for k in range(self.rank)) != den * vec[j]:
                return None
        return [Fraction(num[j], den) for j in range(self.rank)]

    def contains(self, vec):
        x = self.coords_of(vec)
        return x is not None and all(c.denominator == 1 for c in x)

    def sublattice(self, coord_rows):
        """Lattice spanned by integer combinations of basis rows."""
        rows = [
            [sum(c[k] * self.basis[k][j] for k in range(self.rank))
             for j in range(self.ambient_dim)]
            for c in coord_rows
        ]
        return Lattice(self.ambient_gram, rows, self.denom, self.sign)

    def canonical_basis(self):
        """Replace the basis by its row-style HNF (no change of lattice)."""
        return Lattice(self.ambient_gram, hnf_row_style(self.basis),
                       self.denom, self.sign)


def saturate(coord_rows, host):
    """Smallest primitive sublattice of `host` containing the span of the
    given rows (integer coordinates w.r.t. host's basis)."""
    for row in coord_rows:
        if len(row) != host.rank:
            raise LatticeError("coordinate rows must match host rank")
    if not coord_rows:
        return host.sublattice([])
    D, U, V = smith_normal_form(coord_rows)
    r = len(snf_diagonal(coord_rows))
    Vinv = invert_rational(V)
    sat_coords = [[int(x) for x in Vinv[i]] for i in range(r)]
    return host.sublattice(sat_coords)


def orthogonal_complement(sub, host):
    """Primitive sublattice of host orthogonal to sub.

    `sub` may be a Lattice sharing host's ambient space, or a list of
    coordinate rows w.r.t. host's basis.
    """
    if isinstance(sub, Lattice):
        rows = []
        for b in sub.basis:
            x = host.coords_of(b)
            if x is None:
                raise LatticeError("sub is not inside host")
            rows.append(x)
    else:
        rows = sub
    if not rows:
        return Lattice(host.ambient_gram, copy(host.basis), host.denom, host.sign)
    Gh = mat_mul(mat_mul(host.basis, host.ambient_gram), transpose(host.basis))
    # integer matrix whose left kernel is wanted: Gh * rows^T (clear denominators)
    cols = []
    for row in rows:
        col = [sum(Fraction(Gh[i][k]) * Fraction(row[k]) for k in range(host.rank))
               for i in range(host.rank)]
        lcm = 1
        for c in col:
            lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
        cols.append([int(c * lcm) for c in col])
    M = [[cols[j][i] for j in range(len(cols))] for i in range(host.rank)]
    K = kernel_basis(M)
    return host.sublattice(K)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def fixed_lattice(N, isometries):
    """Sublattice of N fixed by every matrix in `isometries` (matrices act on
    scaled ambient row vectors, v -> v*g)."""
    for g in isometries:
        if not is_isometry(N, g):
            raise LatticeError("generator is not an isometry of the lattice")
    if not isometries:
        return Lattice(N.ambient_gram, copy(N.basis), N.denom, N.sign)
    # stack B*(g - 1) horizontally and take the saturated left kernel
    stacked = [[] for _ in range(N.rank)]
    for g in isometries:
        gm = [row[:] for row in g]
        for i in range(N.ambient_dim):
            gm[i][i] -= 1
        Bg = mat_mul(N.basis, gm)
        for i in range(N.rank):
            stacked[i].extend(Bg[i])
    K = kernel_basis(stacked)
    return N.sublattice(K)


def is_isometry(N, g):
    """Does the matrix g preserve the ambient Gram and map N into itself?"""
    A = N.ambient_gram
    if mat_mul(mat_mul(g, A), transpose(g)) != A:
        return False
    Bg = mat_mul(N.basis, g)
    return all(N.contains(row) for row in Bg)


def coinvariant_lattice(N, isometries):
    """Orthogonal complement of the fixed lattice; checks the classification
    constraints (definite with no norm-2 vectors, trivial action on the
    discriminant group, no fixed part)."""
    F = fixed_lattice(N, isometries)
    S = orthogonal_complement(F, N)
    if short_vectors(S, 2):
        raise LatticeError("coinvariant lattice contains a (-2)-root class")
    if isometries and fixed_lattice(S, isometries).rank != 0:
        raise LatticeError("coinvariant lattice has a fixed part")
    if not _acts_trivially_on_disc(S, isometries):
        raise LatticeError("group acts nontrivially on the discriminant group")
    return S


def _is_identity_on(L, g):
    return mat_mul(L.basis, g) == L.basis


def _acts_trivially_on_disc(L, isometries):
    """Check each isometry fixes L*/L pointwise: (dual basis)*(g-1) in L."""
    if L.rank == 0:
        return True
    G = L.gram()
    Ginv = invert_rational(G)
    # dual basis rows in scaled ambient coordinates, times a common denominator
    denom = 1
    for row in Ginv:
        for x in row:
            denom = denom * x.denominator // _gcd(denom, x.denominator)
    dual = [
        [int(sum(Ginv[i][k] * L.basis[k][j] for k in range(L.rank)) * denom)
         for j in range(L.ambient_dim)]
        for i in range(L.rank)
    ]
    for g in isometries:
        for row in dual:
            img = [sum(row[i] * g[i][j] for i in range(L.ambient_dim))
                   for j in range(L.ambient_dim)]
            diff = [a - b for a, b in zip(img, row)]
            # diff/denom must lie in L
            x = L.coords_of(diff)
            if x is None:
                return False
            if any((c / denom).denominator != 1 for c in x):
                return False
    return True


def short_vectors(L, max_norm, both_signs=False):
    """All vectors of L with 0 < norm <= max_norm, by Fincke-Pohst.

    The Cholesky decomposition and branch pruning run in floating point with
    a small safety slack, so no genuine vector is cut off; every surviving
    candidate is then checked exactly against the integer Gram matrix, so
    the result itself is exact.

    Returns coordinate rows w.r.t. L's basis, one per +-pair (first nonzero
    coordinate positive) unless both_signs is set.  Deterministic order.
    """
    n = L.rank
    if n == 0:
        return []
    G = L.gram()
    for i in range(n):
        if G[i][i] <= 0:
            raise LatticeError("short_vectors requires a definite lattice")
    # Q(x) = sum_i q[i] * (x_i + sum_{j>i} r[i][j] x_j)^2
    q = [0.0] * n
    r = [[0.0] * n for _ in range(n)]
    A = [[float(G[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        q[i] = A[i][i]
        if q[i] <= 0:
            raise LatticeError("short_vectors requires a definite lattice")
        for j in range(i + 1, n):
            r[i][j] = A[i][j] / q[i]
        for k in range(i + 1, n):
            for l in range(k, n):
                A[k][l] -= q[i] * r[i][k] * r[i][l]
                A[l][k] = A[k][l]
    slack = 1e-6 * max_norm + 1e-6
    out = []
    x = [0] * n

    def exact_norm(v):
        total = 0
        for i in range(n):
            vi = v[i]
            if vi:
                row = G[i]
                total += vi * sum(row[j] * v[j] for j in range(n) if v[j])
        return total

    def rec(i, remaining):
        if i < 0:
            if any(x) and 0 < exact_norm(x) <= max_norm:
                out.append(x[:])
            return
        center = sum(r[i][j] * x[j] for j in range(i + 1, n))
        # q[i]*(x_i + center)^2 <= remaining (+ slack)
        limit = (remaining + slack) / q[i]
        if limit < 0:
            return
        s = limit ** 0.5
        lo = ceil(-center - s)
        hi = floor(-center + s)
        for xi in range(lo, hi + 1):
            x[i] = xi
            used = q[i] * (xi + center) ** 2
            rec(i - 1, remaining - used)
        x[i] = 0

    rec(n - 1, float(max_norm))
    if not both_signs:
        canon = []
        for v in out:
            for c in v:
                if c != 0:
                    if c > 0:
                        canon.append(v)
                    break
        out = canon
    out.sort()
    return out


def _isqrt(n):
    if n < 0:
        raise ValueError("negative")
    x = int(n ** 0.5) + 2
    while x * x > n:
        x -= 1
    return x


def short_vectors_box(L, max_norm, both_signs=False):
    """Naive oracle: exhaustive box enumeration.  Only for small rank."""
    n = L.rank
    if n == 0:
        return []
    if n > 6:
        raise LatticeError("box oracle is for small rank only")
    G = L.gram()
    Ginv = invert_rational(G)
    bounds = []
    for i in range(n):
        b = _isqrt(int(max_norm * Ginv[i][i]) + 1) + 1
        bounds.append(b)
    out = []
    def rec(i, v):
        if i == n:
            if any(v):
                norm = sum(v[a] * G[a][b] * v[b] for a in range(n) for b in range(n))
                if 0 < norm <= max_norm:
                    out.append(v[:])
            return
        for xi in range(-bounds[i], bounds[i] + 1):
            v.append(xi)
            rec(i + 1, v)
            v.pop()
    rec(0, [])
    if not both_signs:
        canon = []
        for v in out:
            for c in v:
                if c != 0:
                    if c > 0:
                        canon.append(v)
                    break
        out = canon
    out.sort()
    return out


class DynkinError(Exception):
    pass


def dynkin_classify(roots, context):
    """Classify a set of norm-2 vectors forming a simple root basis into A/D
    components.  Returns a sorted list of (family, rank) pairs with
    multiplicity, e.g. [('A', 1), ('A', 1)] for 2A1.

    `roots` are coordinate rows w.r.t. `context` (a Lattice).
    """
    G = context.gram()
    n = len(roots)
    m = len(roots[0]) if roots else 0
    def ip(u, v):
        return sum(u[a] * G[a][b] * v[b] for a in range(m) for b in range(m))
    for v in roots:
        if ip(v, v) != 2:
            raise DynkinError("vector of norm != 2 in root basis")
    adj = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            p = ip(roots[i], roots[j])
            if p not in (-1, 0, 1):
                raise DynkinError("inner product outside {0,+-1}: not a simple basis")
            if p != 0:
                adj[i].append(j)
                adj[j].append(i)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        comp = []
        stack = [s]
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(comp)
    out = []
    for comp in comps:
        k = len(comp)
        degs = sorted(len(adj[v]) for v in comp)
        edge_count = sum(len(adj[v]) for v in comp) // 2
        if edge_count != k - 1:
            raise DynkinError("cycle in root diagram: not a simple basis")
        if k == 1:
            out.append(("A", 1))
            continue
        if degs[-1] <= 2:
            out.append(("A", k))
            continue
        if degs[-1] == 3 and degs.count(3) == 1:
            branch = next(v for v in comp if len(adj[v]) == 3)
            # branch arm lengths
            arms = []
            for w in adj[branch]:
                length = 1
                prev, cur = branch, w
                while len(adj[cur]) == 2:
                    nxt = next(u for u in adj[cur] if u != prev)
                    prev, cur = cur, nxt
                    length += 1
                if len(adj[cur]) > 2:
                    raise DynkinError("two branch nodes: not an A/D diagram")
                arms.append(length)
            arms.sort()
            if arms[0] == 1 and arms[1] == 1:
                out.append(("D", k))
            else:
                raise DynkinError("E-type component encountered")
        else:
            raise DynkinError("vertex of degree > 3: not a simple basis")
    out.sort()
    return out


def root_type_str(components):
    """Human form like '4A1' / '2A3+2A1' for a component multiset."""
    from collections import Counter
    c = Counter(components)
    parts = []
    for (fam, rank), mult in sorted(c.items()):
        parts.append(("%d%s%d" % (mult, fam, rank)) if mult > 1 else "%s%d" % (fam, rank))
    return "+".join(parts) if parts else "0"
