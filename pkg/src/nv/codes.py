"""Self-dual glue codes: binary Golay, ternary Golay, octacode.

Constructions are pinned to unambiguous classical recipes:
  * binary Golay  = extended quadratic-residue code of length 24 (mod 23)
  * ternary Golay = extended quadratic-residue code of length 12 (mod 11)
  * octacode      = extended cyclic code of length 8 over Z/4 generated by
                    the Hensel lift of x^3 + x + 1

The package normally loads the codes from data/codes/*.json (hash-checked
against data/manifest.json); the builders here regenerate them and back the
load-time property verification.
"""

import hashlib
import itertools
import json


class CodeError(Exception):
    pass


class Code:
    """Linear code over Z/m given by generator rows (not necessarily a
    minimal basis for m = 4, where the code is a free module of rank
    len(generators))."""

    def __init__(self, name, alphabet, length, generators):
        self.name = name
        self.alphabet = alphabet
        self.length = length
        self.generators = [list(int(x) % alphabet for x in row) for row in generators]
        for row in self.generators:
            if len(row) != length:
                raise CodeError("generator length mismatch")

    def codewords(self):
        """All codewords, deterministically ordered by coefficient tuples."""
        m = self.alphabet
        for coeffs in itertools.product(range(m), repeat=len(self.generators)):
            yield tuple(
                sum(c * g[j] for c, g in zip(coeffs, self.generators)) % m
                for j in range(self.length)
            )

    def size(self):
        return sum(1 for _ in self.codewords())

    def contains(self, word):
        word = tuple(x % self.alphabet for x in word)
        return word in set(self.codewords())


def _gf2_rref(rows, length):
    """Reduced row echelon basis of bitmask rows over GF(2)."""
    basis = []
    for r in sorted(set(rows)):
        for b in basis:
            r = min(r, r ^ b)
        cur = r
        for b in basis:
            cur = min(cur, cur ^ b)
        if cur:
            basis.append(cur)
            basis.sort(reverse=True)
    # full reduction
    basis = sorted(basis, reverse=True)
    for i in range(len(basis)):
        for j in range(len(basis)):
            if i != j and basis[j] ^ basis[i] < basis[j]:
                basis[j] ^= basis[i]
    return sorted(basis, reverse=True)


def binary_golay():
    """Extended QR code of length 24: the [24,12,8] Golay code."""
    p = 23
    residues = {pow(i, 2, p) for i in range(1, p)}
    best = None
    for support in (residues, set(range(1, p)) - residues):
        theta = 0
        for r in support:
            theta |= 1 << r
        shifts = []
        for s in range(p):
            v = 0
            for i in range(p):
                if theta >> i & 1:
                    v |= 1 << ((i + s) % p)
            shifts.append(v)
        basis = _gf2_rref(shifts, p)
        if len(basis) == 12:
            best = basis
            break
    if best is None:
        raise CodeError("QR idempotent span has wrong dimension")
    gens = []
    for v in best:
        row = [(v >> i) & 1 for i in range(p)]
        row.append(sum(row) % 2)  # overall parity bit
        gens.append(row)
    return Code("binary_golay", 2, 24, gens)


def _gf3_polydiv(num, den):
    """Divide polynomials over GF(3), coefficients lowest-degree first.
    Returns (quotient, remainder)."""
    num = num[:]
    q = [0] * (len(num) - len(den) + 1)
    inv = {1: 1, 2: 2}  # inverses mod 3
    lead = den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = (num[i + len(den) - 1] * inv[lead]) % 3
        if c:
            q[i] = c
            for j, d in enumerate(den):
                num[i + j] = (num[i + j] - c * d) % 3
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


def ternary_golay():
    """Extended QR code of length 12: the [12,6,6] ternary Golay code."""
    p = 11
    # x^11 - 1 over GF(3), lowest degree first
    target = [2] + [0] * (p - 1) + [1]
    gen = None
    for coeffs in itertools.product(range(3), repeat=5):
        cand = list(coeffs) + [1]  # monic degree 5
        if cand[0] == 0:
            continue
        _, rem = _gf3_polydiv(target, cand)
        if rem == [0]:
            gen = cand
            break
    if gen is None:
        raise CodeError("no degree-5 divisor of x^11 - 1 over GF(3)")
    rows = []
    for s in range(6):
        row = [0] * p
        for i, c in enumerate(gen):
            row[(i + s) % p] = c
        ext = (-sum(row)) % 3
        rows.append(row + [ext])
    return Code("ternary_golay", 3, 12, rows)


def octacode():
    """Extended cyclic Z/4 code of length 8 from the Hensel lift of
    x^3 + x + 1 (lift: x^3 + 2x^2 + x + 3)."""
    p = 7
    gen = [3, 1, 2, 1]  # lowest degree first
    rows = []
    for s in range(4):
        row = [0] * p
        for i, c in enumerate(gen):
            row[(i + s) % p] = c
        ext = (-sum(row)) % 4
        rows.append(row + [ext])
    return Code("octacode", 4, 8, rows)


def euclidean_weight(word, m):
    """Sum of min(c, m-c)^2 per symbol (norm contribution in the glue)."""
    return sum(min(c, m - c) ** 2 for c in word)


def weight_distribution(code):
    from collections import Counter
    return Counter(sum(1 for c in w if c) for w in code.codewords())


def verify_code(code):
    """Assert the defining properties.  Raises CodeError on any failure."""
    m, n = code.alphabet, code.length
    words = list(code.codewords())
    size = len(words)
    if len(set(words)) != size:
        raise CodeError("%s: generators are not independent" % code.name)
    # self-dual: |C|^2 = m^n and C subset of its dual
    if size * size != m ** n:
        raise CodeError("%s: size %d is not self-dual size" % (code.name, size))
    for a in code.generators:
        for b in code.generators:
            if sum(x * y for x, y in zip(a, b)) % m:
                raise CodeError("%s: generators not self-orthogonal" % code.name)
    dist = weight_distribution(code)
    if code.name == "binary_golay":
        if dict(dist) != {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}:
            raise CodeError("binary Golay weight distribution is wrong")
        for w in words:
            if sum(w) % 4:
                raise CodeError("binary Golay is not doubly even")
    elif code.name == "ternary_golay":
        if dict(dist) != {0: 1, 6: 264, 9: 440, 12: 24}:
            raise CodeError("ternary Golay weight distribution is wrong")
    elif code.name == "octacode":
        if size != 256:
            raise CodeError("octacode size is wrong")
        for w in words:
            if euclidean_weight(w, 4) % 8:
                raise CodeError("octacode is not type II")
        if min(euclidean_weight(w, 4) for w in words if any(w)) != 8:
            raise CodeError("octacode minimum Euclidean weight is wrong")
        if min(sum(min(c, 4 - c) for c in w) for w in words if any(w)) != 6:
            # the Lee weight drives root exclusion in the A3 glue
            raise CodeError("octacode minimum Lee weight is wrong")
    else:
        raise CodeError("unknown code %s" % code.name)
    return True


# ---------------------------------------------------------------------------
# Serialization


def code_to_json(code):
    return {
        "name": code.name,
        "alphabet": code.alphabet,
        "length": code.length,
        "generators": code.generators,
    }


def code_from_json(obj):
    return Code(obj["name"], obj["alphabet"], obj["length"], obj["generators"])


def canonical_bytes(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


def sha256_of(obj):
    return hashlib.sha256(canonical_bytes(obj)).hexdigest()


def write_code(code, path):
    obj = code_to_json(code)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return sha256_of(obj)


def load_code(path, expected_sha=None):
    with open(path) as fh:
        obj = json.load(fh)
    if expected_sha is not None and sha256_of(obj) != expected_sha:
        raise CodeError("%s: checksum mismatch" % path)
    code = code_from_json(obj)
    verify_code(code)
    return code
