"""Finite quadratic forms and Conway-Sloane genus symbols.

A finite quadratic form lives on a finite abelian group presented by
generators of prime power order, carries q-values in Q/2Z and bilinear values
in Q/Z, stored as exact Fractions.

Genus symbols at p = 2 are unique only up to sign walking and oddity fusion,
so equality of symbols is always decided after `canonicalize`, never on raw
strings.  Canonicalization works by computing exact isomorphism invariants
(per-scale ranks and types, value histograms, and cyclotomic Gauss sums of
rescaled forms) and picking the lexicographically least symbol with those
invariants.
"""

from fractions import Fraction
from functools import lru_cache
import itertools
import re

from .intmat import smith_normal_form, snf_diagonal, invert_rational


class FormError(Exception):
    pass


def _mod2(x):
    return Fraction(x) % 2


def _mod1(x):
    return Fraction(x) % 1


def _valuation(n, p):
    if n == 0:
        return 10 ** 9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def jacobi(a, m):
    """Jacobi symbol (a/m) for odd m > 0."""
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


class FiniteQuadraticForm:
    """q on A = (+) Z/d_i with d_i prime powers."""

    def __init__(self, orders, bmat, qvec):
        self.orders = list(orders)
        n = len(self.orders)
        self.b = [[_mod1(bmat[i][j]) for j in range(n)] for i in range(n)]
        self.q = [_mod2(qvec[i]) for i in range(n)]
        for i in range(n):
            for j in range(n):
                if self.b[i][j] != self.b[j][i]:
                    raise FormError("bilinear matrix not symmetric")
            if _mod1(self.q[i]) != self.b[i][i]:
                raise FormError("q and b disagree on the diagonal")
            # values must be compatible with the generator orders
            if _mod2(self.q[i] * self.orders[i] * self.orders[i]) != 0:
                raise FormError("q value incompatible with generator order")

    @property
    def ngens(self):
        return len(self.orders)

    def order(self):
        n = 1
        for d in self.orders:
            n *= d
        return n

    def q_of(self, x):
        total = Fraction(0)
        n = self.ngens
        for i in range(n):
            if x[i]:
                total += x[i] * x[i] * self.q[i]
                for j in range(i + 1, n):
                    if x[j]:
                        total += 2 * x[i] * x[j] * self.b[i][j]
        return _mod2(total)

    def b_of(self, x, y):
        total = Fraction(0)
        n = self.ngens
        for i in range(n):
            if x[i]:
                for j in range(n):
                    if y[j]:
                        total += x[i] * y[j] * self.b[i][j]
        return _mod1(total)

    def elements(self):
        return itertools.product(*[range(d) for d in self.orders])

    def p_part(self, p):
        idx = [i for i, d in enumerate(self.orders) if d % p == 0]
        orders = [self.orders[i] for i in idx]
        b = [[self.b[i][j] for j in idx] for i in idx]
        q = [self.q[i] for i in idx]
        return FiniteQuadraticForm(orders, b, q)

    def primes(self):
        ps = set()
        for d in self.orders:
            for p in (2, 3, 5, 7, 11, 13, 17, 19, 23):
                if d % p == 0:
                    ps.add(p)
                    break
            else:
                raise FormError("unexpected large prime in group order")
        return sorted(ps)

    def value_histogram(self):
        from collections import Counter
        return Counter(self.q_of(x) for x in self.elements())


def trivial_form():
    return FiniteQuadraticForm([], [], [])


def direct_sum(f, g):
    n, m = f.ngens, g.ngens
    orders = f.orders + g.orders
    b = [[Fraction(0)] * (n + m) for _ in range(n + m)]
    q = [Fraction(0)] * (n + m)
    for i in range(n):
        q[i] = f.q[i]
        for j in range(n):
            b[i][j] = f.b[i][j]
    for i in range(m):
        q[n + i] = g.q[i]
        for j in range(m):
            b[n + i][n + j] = g.b[i][j]
    return FiniteQuadraticForm(orders, b, q)


def _prime_power_split(d):
    """Factor d into prime power parts."""
    parts = []
    n = d
    p = 2
    while n > 1:
        if n % p == 0:
            pk = 1
            while n % p == 0:
                pk *= p
                n //= p
            parts.append(pk)
        p += 1 if p == 2 else 2
    return parts


def discriminant_form(L):
    """Discriminant quadratic form of an even lattice; negated for lattices
    flagged as the negative definite model."""
    r = L.rank
    if r == 0:
        return trivial_form()
    G = L.gram()
    if not L.is_even():
        raise FormError("discriminant_form requires an even lattice")
    D, U, V = smith_normal_form(G)
    diag = [D[i][i] for i in range(r)]
    # generator i of L*/L is (1/d_i) * (row i of U) in L-basis coordinates
    gens = []
    for i in range(r):
        if diag[i] > 1:
            gens.append((diag[i], U[i]))
    # split each cyclic factor into prime power parts
    split = []
    for d, u in gens:
        for pk in _prime_power_split(d):
            split.append((pk, d // pk, d, u))  # generator (d/pk)*u/d of order pk
    sign = -1 if L.sign == "neg" else 1
    orders = [pk for pk, _, _, _ in split]
    n = len(split)
    b = [[Fraction(0)] * n for _ in range(n)]
    q = [Fraction(0)] * n

    def ip(u, v):
        return sum(u[i] * G[i][j] * v[j] for i in range(r) for j in range(r))

    for i, (pki, ci, di, ui) in enumerate(split):
        q[i] = _mod2(sign * Fraction(ci * ci * ip(ui, ui), di * di))
        for j, (pkj, cj, dj, uj) in enumerate(split):
            b[i][j] = _mod1(sign * Fraction(ci * cj * ip(ui, uj), di * dj))
    return FiniteQuadraticForm(orders, b, q)


# ---------------------------------------------------------------------------
# Jordan splitting of the p-primary parts


class _Work:
    """Mutable copy of a p-part used during block diagonalization."""

    def __init__(self, f, p):
        self.p = p
        self.exps = [_valuation(d, p) for d in f.orders]
        self.b = [row[:] for row in f.b]
        self.q = f.q[:]
        self.alive = list(range(f.ngens))

    def vb(self, i, j):
        x = self.b[i][j]
        return -_valuation(x.denominator, self.p) if x != 0 else 10 ** 9

    def vq(self, i):
        x = self.q[i]
        return -_valuation(x.denominator, self.p) if x != 0 else 10 ** 9

    def add_multiple(self, i, lam, j):
        """e_i := e_i + lam * e_j (then e_i's row/col of b and q updated)."""
        self.q[i] = _mod2(self.q[i] + lam * lam * self.q[j] + 2 * lam * self.b[i][j])
        for k in range(len(self.q)):
            if k != i:
                self.b[i][k] = _mod1(self.b[i][k] + lam * self.b[j][k])
                self.b[k][i] = self.b[i][k]
        self.b[i][i] = _mod1(self.q[i])


def _jordan_blocks(f, p):
    """Split the p-part of f into homogeneous pieces.

    Returns {scale_exponent: {"diag": [q values], "even_pairs": [(q1,q2,b12)]}}.
    """
    fp = f.p_part(p)
    if fp.ngens == 0:
        return {}
    w = _Work(fp, p)
    blocks = {}

    def record(a):
        return blocks.setdefault(a, {"diag": [], "even_pairs": []})

    while w.alive:
        a = max(w.exps[i] for i in w.alive)
        top = [i for i in w.alive if w.exps[i] == a]
        pa = p ** a
        if p != 2:
            pick = next((i for i in top if w.vb(i, i) == -a), None)
            if pick is None:
                i, j = next(
                    ((i, j) for i in top for j in top if i < j and w.vb(i, j) == -a)
                )
                w.add_multiple(i, 1, j)
                pick = i
            _split_single(w, pick, pa)
            record(a)["diag"].append(w.q[pick])
            w.alive.remove(pick)
        else:
            pick = next((i for i in top if w.vq(i) == -a), None)
            if pick is not None:
                _split_single(w, pick, pa)
                record(a)["diag"].append(w.q[pick])
                w.alive.remove(pick)
            else:
                pair = next(
                    ((i, j) for i in top for j in top if i < j and w.vb(i, j) == -a),
                    None,
                )
                if pair is None:
                    raise FormError("degenerate p-part: no top-scale pivot")
                i, j = pair
                _split_pair(w, i, j, pa)
                record(a)["even_pairs"].append((w.q[i], w.q[j], w.b[i][j]))
                w.alive.remove(i)
                w.alive.remove(j)
    return blocks


def _split_single(w, e, pa):
    u = int(w.b[e][e] * pa) % pa
    uinv = pow(u, -1, pa)
    for g in list(w.alive):
        if g == e:
            continue
        num = w.b[g][e] * pa
        assert num.denominator == 1
        lam = (int(num) * uinv) % pa
        if lam:
            w.add_multiple(g, -lam, e)
    assert all(w.b[g][e] == 0 for g in w.alive if g != e)


def _split_pair(w, e, f, pa):
    uee = int(w.b[e][e] * pa) % pa
    uff = int(w.b[f][f] * pa) % pa
    uef = int(w.b[e][f] * pa) % pa
    det = (uee * uff - uef * uef) % pa
    dinv = pow(det, -1, pa)
    for g in list(w.alive):
        if g in (e, f):
            continue
        ne = int(w.b[g][e] * pa) % pa
        nf = int(w.b[g][f] * pa) % pa
        lam = ((ne * uff - nf * uef) * dinv) % pa
        mu = ((uee * nf - uef * ne) * dinv) % pa
        if lam:
            w.add_multiple(g, -lam, e)
        if mu:
            w.add_multiple(g, -mu, f)
    assert all(w.b[g][e] == 0 and w.b[g][f] == 0 for g in w.alive if g not in (e, f))


# ---------------------------------------------------------------------------
# Genus symbols


class GenusSymbol:
    """Ordered list of blocks (p, scale_exp, rank, sign, oddity).

    oddity is None for odd p and for type II blocks; type II is encoded as
    oddity == "II".
    """

    def __init__(self, blocks):
        self.blocks = sorted(blocks, key=lambda b: (b[0], b[1]))
        for p, k, rank, sign, odd in self.blocks:
            if rank <= 0:
                raise FormError("zero-rank block in genus symbol")
            if sign not in (1, -1):
                raise FormError("bad sign in genus symbol")
            if p == 2:
                if odd != "II" and odd not in range(8):
                    raise FormError("bad oddity in genus symbol")
            else:
                if odd is not None:
                    raise FormError("odd-p block cannot carry an oddity")

    def __eq__(self, other):
        return isinstance(other, GenusSymbol) and self.blocks == other.blocks

    def __hash__(self):
        return hash(tuple(self.blocks))

    def __repr__(self):
        return "GenusSymbol(%s)" % render_symbol(self)


def render_symbol(sym):
    parts = []
    for p, k, rank, sign, odd in sym.blocks:
        scale = p ** k
        s = "+" if sign == 1 else "-"
        if p == 2:
            sub = "II" if odd == "II" else str(odd)
            parts.append("%d_%s^{%s%d}" % (scale, sub, s, rank))
        else:
            parts.append("%d^{%s%d}" % (scale, s, rank))
    return ",".join(parts) if parts else "1"


_BLOCK_RE = re.compile(
    r"^(?P<scale>\d+)(?:_(?P<sub>II|I|\d))?\^?\{?(?P<sign>[+-])(?P<rank>\d+)\}?$"
)


def parse_symbol(text):
    """Parse table notation like '2_II^{+6},8_1^{+1}' or '3^{+5}'."""
    cleaned = text.replace("$", "").replace(" ", "").replace("\t", "")
    cleaned = cleaned.replace("{", "").replace("}", "")
    if cleaned in ("", "1"):
        return GenusSymbol([])
    blocks = []
    for pos, chunk in enumerate(cleaned.split(",")):
        m = _BLOCK_RE.match(chunk)
        if not m:
            raise FormError("cannot parse symbol block %r (block %d)" % (chunk, pos))
        scale = int(m.group("scale"))
        parts = _prime_power_split(scale)
        if len(parts) != 1 or scale == 1:
            raise FormError("scale %d is not a prime power > 1 (block %d)" % (scale, pos))
        p = [q for q in (2, 3, 5, 7, 11, 13, 17, 19, 23) if scale % q == 0][0]
        k = _valuation(scale, p)
        sign = 1 if m.group("sign") == "+" else -1
        rank = int(m.group("rank"))
        if rank == 0:
            raise FormError("zero rank in block %d" % pos)
        sub = m.group("sub")
        if p == 2:
            if sub is None:
                raise FormError("2-adic block %r needs a subscript" % chunk)
            # a bare subscript "I" occurs once in the source tables; it is
            # read as oddity 1 and cross-checked downstream
            odd = "II" if sub == "II" else (1 if sub == "I" else int(sub))
        else:
            if sub is not None:
                raise FormError("odd-p block %r cannot have a subscript" % chunk)
            odd = None
        blocks.append((p, k, rank, sign, odd))
    return GenusSymbol(blocks)


def print_symbol(sym):
    """Canonical text of a symbol (canonicalizes first, so print-parse
    round-trips land on canonical text)."""
    return render_symbol(canonicalize(sym))


# --- realization of a symbol as an explicit form ---------------------------


def _even_unit(p, k, target_sign):
    """An even residue a mod 2p^k, coprime to p, with legendre(a,p) as asked."""
    m = 2 * p ** k
    for a in range(2, m, 2):
        if a % p and legendre(a, p) == target_sign:
            return a
    raise FormError("no unit found (impossible)")


def _odd_diag_multiset(rank, sign, oddity):
    """Smallest multiset of odd residues in {1,3,5,7} with the given total
    oddity and determinant class, or None."""
    for combo in itertools.combinations_with_replacement((1, 3, 5, 7), rank):
        total = sum(combo) % 8
        det = 1
        for c in combo:
            det = det * c % 8
        s = 1 if det in (1, 7) else -1
        if total == oddity % 8 and s == sign:
            return combo
    return None


def _block_form(p, k, rank, sign, odd):
    """Realize one genus-symbol block as a FiniteQuadraticForm."""
    scale = p ** k
    if p != 2:
        a_plus = _even_unit(p, k, 1)
        a_sign = _even_unit(p, k, sign)
        entries = [a_plus] * (rank - 1) + [a_sign]
        orders = [scale] * rank
        b = [[Fraction(0)] * rank for _ in range(rank)]
        q = []
        for i, a in enumerate(entries):
            q.append(_mod2(Fraction(a, scale)))
            b[i][i] = _mod1(Fraction(a, scale))
        return FiniteQuadraticForm(orders, b, q)
    if odd == "II":
        if rank % 2:
            raise FormError("type II block must have even rank")
        m = rank // 2
        kinds = ["u"] * m if sign == 1 else ["v"] + ["u"] * (m - 1)
        f = trivial_form()
        for kind in kinds:
            f = direct_sum(f, _even_pair_form(k, kind))
        return f
    combo = _odd_diag_multiset(rank, sign, odd)
    if combo is None:
        raise FormError(
            "unrealizable 2-adic block 2^%d rank %d sign %+d oddity %d"
            % (k, rank, sign, odd)
        )
    orders = [scale] * rank
    b = [[Fraction(0)] * rank for _ in range(rank)]
    q = []
    for i, a in enumerate(combo):
        q.append(_mod2(Fraction(a, scale)))
        b[i][i] = _mod1(Fraction(a, scale))
    return FiniteQuadraticForm(orders, b, q)


def _even_pair_form(k, kind):
    scale = 2 ** k
    if kind == "u":
        qv = [Fraction(0), Fraction(0)]
    else:
        qv = [_mod2(Fraction(2, scale)), _mod2(Fraction(2, scale))]
    b = [[_mod1(qv[0]), Fraction(1, scale)], [Fraction(1, scale), _mod1(qv[1])]]
    return FiniteQuadraticForm([scale, scale], b, qv)


def realize_symbol(sym):
    f = trivial_form()
    for block in sym.blocks:
        f = direct_sum(f, _block_form(*block))
    return f


# --- exact cyclotomic arithmetic for Gauss sum invariants -------------------


class CycVec:
    """Element of Z[x]/(x^N + 1) with x = exp(i*pi/N); N a power of two."""

    __slots__ = ("N", "c")

    def __init__(self, N, c=None):
        self.N = N
        self.c = list(c) if c is not None else [0] * N

    @classmethod
    def one(cls, N):
        v = cls(N)
        v.c[0] = 1
        return v

    @classmethod
    def phase(cls, N, t):
        """exp(i*pi*t) for t a Fraction with 2-power denominator dividing N."""
        t = Fraction(t) % 2
        if N % t.denominator:
            raise FormError("phase denominator %d exceeds ring size" % t.denominator)
        num = t.numerator * (N // t.denominator)
        v = cls(N)
        e = num % (2 * N)
        if e < N:
            v.c[e] = 1
        else:
            v.c[e - N] = -1
        return v

    def add(self, other):
        return CycVec(self.N, [a + b for a, b in zip(self.c, other.c)])

    def iadd_phase(self, t):
        t = Fraction(t) % 2
        if self.N % t.denominator:
            raise FormError("phase denominator %d exceeds ring size" % t.denominator)
        num = t.numerator * (self.N // t.denominator)
        e = num % (2 * self.N)
        if e < self.N:
            self.c[e] += 1
        else:
            self.c[e - self.N] -= 1

    def mul(self, other):
        N = self.N
        out = [0] * N
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    if b:
                        k = i + j
                        if k < N:
                            out[k] += a * b
                        else:
                            out[k - N] -= a * b
        return CycVec(N, out)

    def scaled(self, m):
        return CycVec(self.N, [a * m for a in self.c])

    def key(self):
        return tuple(self.c)

    def __eq__(self, other):
        return self.N == other.N and self.c == other.c


_CYC_N = 128  # hosts denominators up to 2^7 and contains sqrt(2)


def _gauss_data(f2, jmax=None):
    """Invariant data of a 2-group quadratic form: value histogram plus
    Gauss sums of the rescalings 2^j*q and of the restrictions to 2^j*A,
    for j = 0..jmax.

    Values are handled as integer phase units u = q * N mod 2N (N the
    cyclotomic ring size), which keeps the inner loops in plain int
    arithmetic; histograms are keyed by these units.
    """
    kmax = max((_valuation(d, 2) for d in f2.orders), default=0)
    if jmax is None:
        jmax = kmax + 1
    N = _CYC_N
    two_n = 2 * N
    n = f2.ngens
    U = []
    for qv in f2.q:
        t = Fraction(qv) * N
        if t.denominator != 1:
            raise FormError("phase denominator exceeds ring size")
        U.append(int(t) % two_n)
    W = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            t = 2 * Fraction(f2.b[i][j]) * N
            if t.denominator != 1:
                raise FormError("phase denominator exceeds ring size")
            W[i][j] = int(t) % two_n

    def units(x):
        s = 0
        for i in range(n):
            xi = x[i]
            if xi:
                s += xi * xi * U[i]
                row = W[i]
                for j in range(i + 1, n):
                    if x[j]:
                        s += xi * x[j] * row[j]
        return s % two_n

    hist = {}
    sums_scale = [CycVec(N) for _ in range(jmax + 1)]
    sums_sub = [CycVec(N) for _ in range(jmax + 1)]
    for x in f2.elements():
        u = units(x)
        hist[u] = hist.get(u, 0) + 1
        for j in range(jmax + 1):
            e = (u << j) % two_n
            c = sums_scale[j].c
            if e < N:
                c[e] += 1
            else:
                c[e - N] -= 1
    for j in range(jmax + 1):
        seen = {}
        for x in f2.elements():
            y = tuple((xi << j) % d for xi, d in zip(x, f2.orders))
            if y not in seen:
                seen[y] = units(y)
        for u in seen.values():
            c = sums_sub[j].c
            if u < N:
                c[u] += 1
            else:
                c[u - N] -= 1
    return kmax, hist, sums_scale, sums_sub


def _hist_key(hist):
    return tuple(sorted(hist.items()))


def _block_profile(f, p):
    """(scale_exp, rank, type) list for the p-part; type is 'I'/'II' at p=2
    and the Legendre sign at odd p."""
    blocks = _jordan_blocks(f, p)
    out = []
    for a in sorted(blocks):
        entry = blocks[a]
        rank = len(entry["diag"]) + 2 * len(entry["even_pairs"])
        if p == 2:
            out.append((a, rank, "I" if entry["diag"] else "II"))
        else:
            pa = p ** a
            det = 1
            for qv in entry["diag"]:
                num = int(qv * pa) % (2 * pa)
                det = det * num
            out.append((a, rank, legendre(det, p)))
    return out


@lru_cache(maxsize=None)
def _cached_block_invariants(p, k, rank, sign, odd):
    f = _block_form(p, k, rank, sign, odd)
    _, hist, ss, sb = _gauss_data(f, jmax=k + 1)
    return (k, f.order(), tuple(sorted(hist.items())),
            tuple(v.key() for v in ss), tuple(v.key() for v in sb))


def _block_sum_at(j, k, order, keys, scaled):
    """Gauss sum of a scale-2^k block at index j.  Past the cached range the
    rescaled form has all phases trivial and the subgroup 2^j*A is zero."""
    if j <= k + 1:
        return CycVec(_CYC_N, keys[j])
    return _const_cyc(order) if scaled else CycVec.one(_CYC_N)


def _combine_candidates(scale_specs, jmax, target_hist, target_ss, target_sb):
    """Search over per-scale (sign, oddity) choices for the 2-adic symbol
    matching the target invariants.  scale_specs: list of (k, rank, type).
    Returns all matching block tuples."""
    per_scale_options = []
    for k, rank, typ in scale_specs:
        opts = []
        if typ == "II":
            if rank % 2 == 0 and rank >= 2:
                opts = [(2, k, rank, 1, "II"), (2, k, rank, -1, "II")]
        else:
            for s in (1, -1):
                for t in range(8):
                    if _odd_diag_multiset(rank, s, t) is not None:
                        opts.append((2, k, rank, s, t))
        if not opts:
            raise FormError("no options for 2-adic scale 2^%d" % k)
        per_scale_options.append(opts)

    matches = []
    for choice in itertools.product(*per_scale_options):
        hist = {0: 1}
        ss = [CycVec.one(_CYC_N) for _ in range(jmax + 1)]
        sb = [CycVec.one(_CYC_N) for _ in range(jmax + 1)]
        for block in choice:
            bk, border, bhist, bss, bsb = _cached_block_invariants(*block)
            hist = _hist_convolve(hist, dict(bhist))
            for j in range(jmax + 1):
                ss[j] = ss[j].mul(_block_sum_at(j, bk, border, bss, True))
                sb[j] = sb[j].mul(_block_sum_at(j, bk, border, bsb, False))
        ok = _hist_key(hist) == _hist_key(target_hist)
        if ok:
            for j in range(jmax + 1):
                if ss[j].key() != target_ss[j] or sb[j].key() != target_sb[j]:
                    ok = False
                    break
        if ok:
            matches.append(choice)
    return matches


def _const_cyc(m):
    v = CycVec(_CYC_N)
    v.c[0] = m
    return v


def _hist_convolve(h1, h2):
    # histograms are keyed by integer phase units mod 2N
    out = {}
    for v1, c1 in h1.items():
        for v2, c2 in h2.items():
            v = (v1 + v2) % (2 * _CYC_N)
            out[v] = out.get(v, 0) + c1 * c2
    return out


def genus_symbol(f):
    """Canonical Conway-Sloane symbol of a finite quadratic form."""
    blocks = []
    for p in f.primes():
        if p == 2:
            blocks.extend(_two_adic_blocks(f))
        else:
            for a, rank, sign in _block_profile(f, p):
                blocks.append((p, a, rank, sign, None))
    return GenusSymbol(blocks)


def _two_adic_blocks(f):
    f2 = f.p_part(2)
    if f2.ngens == 0:
        return []
    if f2.order() > 1 << 16:
        raise FormError("2-part too large for symbol computation")
    specs = _block_profile(f, 2)
    kmax, hist, ss, sb = _gauss_data(f2)
    matches = _combine_candidates(
        specs, kmax + 1, hist, [v.key() for v in ss], [v.key() for v in sb]
    )
    if not matches:
        raise FormError("no 2-adic symbol matches the form invariants")
    matches.sort(key=lambda ch: [(k, 0 if odd == "II" else 1, -s,
                                  odd if odd != "II" else -1)
                                 for (_, k, _, s, odd) in ch])
    return list(matches[0])


def canonicalize(sym):
    """Deterministic canonical representative of a symbol's equivalence
    class (idempotent)."""
    return genus_symbol(realize_symbol(sym))


# ---------------------------------------------------------------------------
# Brute force isomorphism oracle


def forms_isomorphic(f, g, bound=4096):
    """True iff an isomorphism of groups preserving q exists.  Backtracking
    over generator images with order and q-value pruning."""
    if f.order() != g.order():
        return False
    if f.order() > bound:
        raise FormError("order %d exceeds oracle bound %d" % (f.order(), bound))
    if sorted(f.orders) != sorted(g.orders):
        return False
    for p in f.primes():
        if not _iso_p(f.p_part(p), g.p_part(p)):
            return False
    return True


def _iso_p(fp, gp):
    if fp.ngens == 0:
        return gp.ngens == 0
    if _hist_key(fp.value_histogram()) != _hist_key(gp.value_histogram()):
        return False
    # orthogonalize fp to cut the branching factor
    p = fp.primes()[0]
    basis, orders, qvals, bmat = _orthogonal_basis(fp, p)
    # precompute all elements of gp with their orders and q values
    elems = []
    for x in gp.elements():
        if not any(x):
            continue
        o = 1
        for xi, d in zip(x, gp.orders):
            if xi:
                oi = d // _gcd(xi, d)
                o = o * oi // _gcd(o, oi)
        elems.append((x, o, gp.q_of(x)))
    by_order_q = {}
    for x, o, qx in elems:
        by_order_q.setdefault((o, qx), []).append(x)

    n = len(orders)
    total = gp.order()
    chosen = []

    def span_size(images):
        seen = {tuple([0] * gp.ngens)}
        frontier = [tuple([0] * gp.ngens)]
        for img, d in images:
            new_seen = set(seen)
            for base in seen:
                acc = base
                for _ in range(d - 1):
                    acc = tuple((a + b) % m for a, b, m in zip(acc, img, gp.orders))
                    new_seen.add(acc)
            seen = new_seen
        return len(seen)

    def rec(i):
        if i == n:
            return span_size([(img, orders[j]) for j, img in enumerate(chosen)]) == total
        key = (orders[i], qvals[i])
        for cand in by_order_q.get(key, ()):
            ok = True
            for j, img in enumerate(chosen):
                if gp.b_of(img, cand) != bmat[j][i]:
                    ok = False
                    break
            if not ok:
                continue
            # candidate must have exact order (not a divisor)
            chosen.append(cand)
            if rec(i + 1):
                return True
            chosen.pop()
        return False

    return rec(0)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _orthogonal_basis(fp, p):
    """Decompose fp into orthogonal generators via the Jordan machinery;
    returns (basis placeholder, orders, q values, b matrix) where the b
    matrix is diagonal except inside even 2x2 pairs."""
    w = _Work(fp, p)
    order_list = []
    q_list = []
    pairs = []  # indices in the output that form even pairs
    out_idx = []
    alive = w.alive
    while alive:
        a = max(w.exps[i] for i in alive)
        top = [i for i in alive if w.exps[i] == a]
        pa = p ** a
        if p != 2:
            pick = next((i for i in top if w.vb(i, i) == -a), None)
            if pick is None:
                i, j = next(((i, j) for i in top for j in top
                             if i < j and w.vb(i, j) == -a))
                w.add_multiple(i, 1, j)
                pick = i
            _split_single(w, pick, pa)
            out_idx.append((pick,))
            alive.remove(pick)
        else:
            pick = next((i for i in top if w.vq(i) == -a), None)
            if pick is not None:
                _split_single(w, pick, pa)
                out_idx.append((pick,))
                alive.remove(pick)
            else:
                i, j = next(((i, j) for i in top for j in top
                             if i < j and w.vb(i, j) == -a))
                _split_pair(w, i, j, pa)
                out_idx.append((i, j))
                alive.remove(i)
                alive.remove(j)
    flat = [i for grp in out_idx for i in grp]
    orders = [p ** w.exps[i] for i in flat]
    qvals = [w.q[i] for i in flat]
    bmat = [[w.b[i][j] for j in flat] for i in flat]
    return out_idx, orders, qvals, bmat


# ---------------------------------------------------------------------------
# Milgram / Gauss sum signature


def signature_mod8(f):
    """sigma with Gauss sum of q equal to sqrt(|A|) * exp(2*pi*i*sigma/8)."""
    total = 0
    for p in f.primes():
        if p == 2:
            total += _sig2(f.p_part(2))
        else:
            total += _sig_odd(f, p)
    return total % 8


def _sig2(f2):
    if f2.ngens == 0:
        return 0
    s = CycVec(_CYC_N)
    count = 0
    for x in f2.elements():
        s.iadd_phase(f2.q_of(x))
        count += 1
    # compare with 2^(v/2) * exp(i*pi*sigma/4)
    v = _valuation(count, 2)
    for sigma in range(8):
        expect = CycVec.phase(_CYC_N, Fraction(sigma, 4))
        if v % 2 == 1:
            root2 = CycVec.phase(_CYC_N, Fraction(1, 4)).add(
                CycVec.phase(_CYC_N, Fraction(7, 4)))
            expect = expect.mul(root2)
        expect = expect.scaled(1 << (v // 2))
        if expect == s:
            return sigma
    raise FormError("2-adic Gauss sum is not of the expected shape")


def _sig_odd(f, p):
    """Signature contribution of the p-part via classical quadratic Gauss
    sums of the diagonalized blocks."""
    blocks = _jordan_blocks(f, p)
    total = 0
    for a, entry in blocks.items():
        pa = p ** a
        for qv in entry["diag"]:
            num = int(qv * pa) % (2 * pa)  # even unit
            aprime = (num // 2) % pa if num % 2 == 0 else None
            if aprime is None:
                raise FormError("odd numerator at odd prime (impossible)")
            if jacobi(aprime, pa) == -1:
                total += 4
            if pa % 4 == 3:
                total += 2
    return total % 8


def milgram_checks(f, signature):
    """Does the Milgram identity hold for the given lattice signature?"""
    return signature_mod8(f) == signature % 8
