"""The three Niemeier lattices with root systems A1^24, A2^12, A3^8.

Each is the even unimodular overlattice of its root lattice glued by a
self-dual code: binary Golay for A1^24, ternary Golay for A2^12, octacode
for A3^8.  Simple roots are labeled to match the permutation models of
permgroup: coordinate k of the code corresponds to component k, and within
a component the simple roots form the A_n chain in label order.
"""

from fractions import Fraction

from .codes import load_code, verify_code, CodeError
from .datadir import data_dir, load_manifest
from .intmat import hnf_row_style, identity, mat_mul, transpose
from .lattice import Lattice, LatticeError, short_vectors
from .permgroup import MODEL_SHAPE, label_index, model_labels


class BuildError(Exception):
    pass


class LiftError(Exception):
    pass


# per model: code file, expected root count
MODEL_CODE = {
    "N23": "binary_golay.json",
    "N22": "ternary_golay.json",
    "N21": "octacode.json",
}

ROOT_COUNTS = {"N23": 48, "N22": 72, "N21": 96}


def _an_gram(n):
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)]
            for i in range(n)]


def _glue_row(n):
    """Scaled coordinates of the fundamental glue vector [1] of A_n:
    (n*e1 + (n-1)*e2 + ... + 1*en) over denominator n+1."""
    return [n - i for i in range(n)]


class NiemeierModel:
    def __init__(self, model_id, code, lattice, components):
        self.id = model_id
        self.code = code
        self.lattice = lattice
        self.components = components  # list of lists of coordinate indices
        comps, per = MODEL_SHAPE[model_id]
        self.denom = per + 1

    def root_vector(self, label):
        """Scaled ambient vector of a labeled simple root."""
        idx = label_index(label, self.id)
        v = [0] * 24
        v[idx] = self.denom
        return v

    def simple_root_vectors(self):
        return [self.root_vector(lab) for lab in model_labels(self.id)]


def _class_min_norms(n):
    """Minimum norm of each glue class of A_n* / A_n, computed by direct
    enumeration around the class representative."""
    G = _an_gram(n)
    glue = _glue_row(n)
    d = n + 1
    out = []
    for k in range(d):
        rep = [Fraction(k * g, d) for g in glue]
        best = None
        # search rep + x over a small box of lattice vectors x
        def norm(v):
            return sum(v[i] * G[i][j] * v[j] for i in range(n) for j in range(n))
        from itertools import product
        for x in product(range(-3, 4), repeat=n):
            v = [rep[i] + x[i] for i in range(n)]
            nv = norm(v)
            if best is None or nv < best:
                best = nv
        out.append(best)
    return out


def build_niemeier(model_id, base=None):
    """Construct the model; all structural invariants asserted."""
    if model_id not in MODEL_CODE:
        raise BuildError("unknown model %r" % model_id)
    base = base or data_dir()
    manifest = load_manifest(base)
    rel = "codes/" + MODEL_CODE[model_id]
    try:
        code = load_code(str(base / rel), manifest.get(rel))
    except (OSError, CodeError) as e:
        raise BuildError("cannot load glue code: %s" % e)

    comps, per = MODEL_SHAPE[model_id]
    d = per + 1
    # ambient gram: block diagonal A_per per component
    A = [[0] * 24 for _ in range(24)]
    blocks = []
    g = _an_gram(per)
    for c in range(comps):
        idxs = list(range(c * per, (c + 1) * per))
        blocks.append(idxs)
        for a in range(per):
            for b in range(per):
                A[idxs[a]][idxs[b]] = g[a][b]

    # basis: scaled root vectors plus glue rows from the code generators
    rows = [[d if i == j else 0 for j in range(24)] for i in range(24)]
    glue = _glue_row(per)
    for gen in code.generators:
        row = [0] * 24
        for c, sym in enumerate(gen):
            for a in range(per):
                row[c * per + a] = (sym % d) * glue[a]
        rows.append(row)
    basis = hnf_row_style(rows)
    if len(basis) != 24:
        raise BuildError("glued basis does not have full rank")
    L = Lattice(A, basis, denom=d)

    if not L.is_even():
        raise BuildError("glued lattice is not even")
    if L.det() != 1:
        raise BuildError("glued lattice is not unimodular")

    # root count: the glue cosets contribute no roots when every nonzero
    # codeword's class-norm sum exceeds 2
    mins = _class_min_norms(per)
    for w in code.codewords():
        if any(w):
            total = sum(mins[sym] for sym in w)
            if total <= 2:
                raise BuildError("glue coset of norm <= 2: code data bug")
    roots = comps * per * (per + 1)
    if roots != ROOT_COUNTS[model_id]:
        raise BuildError("unexpected root count")

    return NiemeierModel(model_id, code, L, blocks)


def permutation_matrix(p):
    """24x24 matrix of a label permutation acting on scaled ambient row
    vectors (e_i -> e_{p(i)})."""
    P = [[0] * 24 for _ in range(24)]
    for i, m in enumerate(p.mapping):
        P[i][m] = 1
    return P


def lift_permutation(model, p):
    """Induced isometry matrix of a label permutation, or raises.

    LiftError: the permutation breaks the component/chain structure (it is
    not even a root-system automorphism).
    AlignmentError: it is a root-system automorphism but does not stabilize
    the glue code, so it does not preserve the lattice.
    """
    if p.model != model.id:
        raise LiftError("permutation is for model %s, lattice is %s"
                        % (p.model, model.id))
    P = permutation_matrix(p)
    A = model.lattice.ambient_gram
    if mat_mul(mat_mul(P, A), transpose(P)) != A:
        raise LiftError("label permutation does not preserve the root diagram")
    B = model.lattice.basis
    for row in mat_mul(B, P):
        if not model.lattice.contains(row):
            raise AlignmentError(
                "permutation preserves the root system but not the glue code"
            )
    return P


class AlignmentError(Exception):
    pass


def preserves_code(model, p):
    """Cheap boolean form of lift_permutation."""
    try:
        lift_permutation(model, p)
        return True
    except AlignmentError:
        return False

# --- aligning a dataset labeling with the implemented glue code ------------
#
# The source groups act on roots labeled in a coordinate system we do not
# know; their permutations preserve *some* copy of the glue code, not
# necessarily the implemented one.  align_code searches for a relabeling
# sigma (a root-system automorphism: permute components, optionally flip
# each A2/A3 chain) such that sigma g sigma^-1 preserves the implemented
# code for every generator g.

from collections import deque
from itertools import combinations

from .permgroup import MODEL_SHAPE as _SHAPE, Permutation


def component_map(model_id, p):
    """Decompose a structure-preserving label permutation into a component
    permutation plus per-component chain flips.  Raises LiftError if the
    permutation breaks components or reorders a chain illegally."""
    ncomp, per = _SHAPE[model_id]
    comp = [None] * ncomp
    flip = [False] * ncomp
    for c in range(ncomp):
        images = [p.mapping[c * per + a] for a in range(per)]
        m, rem = divmod(images[0], per)
        if any(images[a] // per != m for a in range(per)):
            raise LiftError("permutation splits component %d" % c)
        pos = [images[a] % per for a in range(per)]
        if pos == list(range(per)):
            comp[c], flip[c] = m, False
        elif pos == list(range(per - 1, -1, -1)):
            comp[c], flip[c] = m, True
        else:
            raise LiftError("permutation scrambles the chain of component %d" % c)
    return tuple(comp), tuple(flip)


def _scm_permutation(model_id, comp, flip):
    """Label permutation induced by a signed component map."""
    ncomp, per = _SHAPE[model_id]
    mapping = [0] * 24
    for c in range(ncomp):
        for a in range(per):
            a2 = per - 1 - a if flip[c] else a
            mapping[c * per + a] = comp[c] * per + a2
    return Permutation(mapping, model_id)


_ALIGN_AUX = {}


def _align_aux(model):
    aux = _ALIGN_AUX.get(model.id)
    if aux is not None:
        return aux
    q = model.denom
    words = [tuple(w) for w in model.code.codewords()]
    word_set = set(words)
    supports = [(w, frozenset(i for i, x in enumerate(w) if x)) for w in words]
    aux = {"q": q, "word_set": word_set, "supports": supports}
    if model.id == "N23":
        octads = [s for w, s in supports if len(s) == 8]
        five = {}
        for o in octads:
            for s in combinations(sorted(o), 5):
                five[frozenset(s)] = o
        aux["octads"] = octads
        aux["five"] = five
    elif model.id == "N22":
        w6 = [(w, s) for w, s in supports if len(s) == 6]
        by_hexad = {}
        for w, s in w6:
            by_hexad.setdefault(s, []).append(w)
        partial5 = set()
        for w, s in w6:
            for sub in combinations(sorted(s), 5):
                partial5.add(frozenset((p, w[p]) for p in sub))
        aux["hexads"] = by_hexad
        aux["partial5"] = partial5
    _ALIGN_AUX[model.id] = aux
    return aux


def _check_partial(model, aux, pcon):
    """Can the partial coordinate map pcon (our coord -> (our coord, flip))
    extend to an automorphism of the implemented code?"""
    q = aux["q"]
    dom = pcon.keys()
    if model.id == "N23":
        for o in aux["octads"]:
            d = o & dom
            if len(d) < 5:
                continue
            imgs = {pcon[x][0] for x in d}
            target = aux["five"].get(frozenset(sorted(imgs)[:5]))
            if target is None or not imgs <= target:
                return False
        return True
    if model.id == "N22":
        for hexad, ws in aux["hexads"].items():
            d = hexad & dom
            if len(d) < 5:
                continue
            for w in ws:
                pairs = {(pcon[p][0], (q - w[p]) % q if pcon[p][1] else w[p])
                         for p in d}
                if len(d) == 6:
                    out = [0] * len(w)
                    for pos, val in pairs:
                        out[pos] = val
                    if tuple(out) not in aux["word_set"]:
                        return False
                elif frozenset(pairs) not in aux["partial5"]:
                    return False
        return True
    # N21: membership check for fully-mapped codewords
    for w, supp in aux["supports"]:
        if supp <= dom:
            out = [0] * len(w)
            for p in supp:
                m, f = pcon[p]
                out[m] = (q - w[p]) % q if f else w[p]
            if tuple(out) not in aux["word_set"]:
                return False
    return True


# relabelings already found; tried first so one global sigma per model (if
# the source labeling is consistent) makes later searches O(1)
_SIGMA_CACHE = {"N23": [], "N22": [], "N21": []}


def _sigma_works(model, gens, sigma):
    """Code-level check that every conjugate sigma g sigma^-1 stabilizes
    the glue code (cheap; the lattice-level lift is checked downstream)."""
    aux = _align_aux(model)
    q = aux["q"]
    inv = sigma.inverse()
    for g in gens:
        try:
            comp, flip = component_map(model.id, sigma * g * inv)
        except LiftError:
            return False
        for w in model.code.generators:
            out = [0] * len(w)
            for c, x in enumerate(w):
                out[comp[c]] = (q - x) % q if flip[c] else x
            if tuple(out) not in aux["word_set"]:
                return False
    return True


def align_code(model, G):
    """A relabeling sigma with sigma G sigma^-1 preserving the implemented
    code, or None after exhausting the search."""
    gens = [g for g in G.generators if g.mapping != tuple(range(24))]
    if not gens:
        return Permutation.identity(model.id)
    for sigma in [Permutation.identity(model.id)] + _SIGMA_CACHE[model.id]:
        if _sigma_works(model, gens, sigma):
            return sigma
    scms = [component_map(model.id, g) for g in gens]
    found = _align_search(model, scms)
    if found is None:
        return None
    sigma = _scm_permutation(model.id, *found)
    if not _sigma_works(model, gens, sigma):
        raise BuildError("alignment search returned a non-solution")
    _SIGMA_CACHE[model.id].append(sigma)
    return sigma


def _align_search(model, scms):
    ncomp, per = _SHAPE[model.id]
    aux = _align_aux(model)
    flips = (False,) if per == 1 else (False, True)
    # generator adjacency on components, both directions
    neigh = [set() for _ in range(ncomp)]
    for comp, _ in scms:
        for c in range(ncomp):
            neigh[c].add(comp[c])
            neigh[comp[c]].add(c)
    inv_comp = []
    for comp, flip in scms:
        inv = [0] * ncomp
        for c in range(ncomp):
            inv[comp[c]] = c
        inv_comp.append(tuple(inv))

    sig_c = [None] * ncomp
    sig_f = [None] * ncomp
    used = [False] * ncomp
    pcons = [dict() for _ in scms]

    def new_pairs(c):
        """Conjugate pairs that appear when sigma is set at component c."""
        out = []
        for k, (comp, flip) in enumerate(scms):
            c2 = comp[c]
            if sig_c[c2] is not None:
                out.append((k, sig_c[c], (sig_c[c2],
                                          sig_f[c] ^ flip[c] ^ sig_f[c2])))
            c0 = inv_comp[k][c]
            if c0 != c and sig_c[c0] is not None:
                out.append((k, sig_c[c0], (sig_c[c],
                                           sig_f[c0] ^ flip[c0] ^ sig_f[c])))
        return out

    def next_component():
        best, score = None, -1
        for c in range(ncomp):
            if sig_c[c] is not None:
                continue
            s = sum(1 for x in neigh[c] if sig_c[x] is not None)
            if s > score:
                best, score = c, s
        return best

    def rec():
        c = next_component()
        if c is None:
            return True
        for m in range(ncomp):
            if used[m]:
                continue
            for f in flips:
                sig_c[c], sig_f[c], used[m] = m, f, True
                added = new_pairs(c)
                ok = True
                for k, src, dst in added:
                    pcons[k][src] = dst
                for k in {k for k, _, _ in added}:
                    if not _check_partial(model, aux, pcons[k]):
                        ok = False
                        break
                if ok and rec():
                    return True
                for k, src, _ in added:
                    del pcons[k][src]
                sig_c[c], sig_f[c], used[m] = None, None, False
        return False

    if rec():
        return tuple(sig_c), tuple(sig_f)
    return None
