"""Permutations of the 24 labeled simple roots of a Niemeier model.

Labels come in two shapes: flat ("a7") for the model with 24 components of
rank 1, and pairs ("a2,11") for the models whose components have 2 or 3
simple roots each.  Internally everything is a dense tuple of length 24.
"""

import itertools

CLOSURE_BOUND = 4096

# label layout per model: (components, roots per component)
MODEL_SHAPE = {
    "N23": (24, 1),
    "N22": (12, 2),
    "N21": (8, 3),
}


class PermError(Exception):
    pass


def model_labels(model):
    """All labels of a model in index order."""
    if model not in MODEL_SHAPE:
        raise PermError("unknown label model %r" % model)
    comps, per = MODEL_SHAPE[model]
    if per == 1:
        return ["a%d" % (k + 1) for k in range(24)]
    return ["a%d,%d" % (i + 1, j + 1) for j in range(comps) for i in range(per)]


def label_index(label, model):
    comps, per = MODEL_SHAPE[model]
    if per == 1:
        if "," in label:
            raise PermError("pair label %r in flat model" % label)
        try:
            k = int(label[1:])
        except ValueError:
            raise PermError("malformed label %r" % label)
        if not 1 <= k <= 24:
            raise PermError("label %r out of range" % label)
        return k - 1
    if "," not in label:
        raise PermError("flat label %r in pair model %s" % (label, model))
    try:
        i, j = label[1:].split(",")
        i, j = int(i), int(j)
    except ValueError:
        raise PermError("malformed label %r" % label)
    if not (1 <= i <= per and 1 <= j <= comps):
        raise PermError("label %r out of range for %s" % (label, model))
    return (j - 1) * per + (i - 1)


def index_label(idx, model):
    return model_labels(model)[idx]


class Permutation:
    __slots__ = ("mapping", "model")

    def __init__(self, mapping, model):
        mapping = tuple(mapping)
        if sorted(mapping) != list(range(24)):
            raise PermError("mapping is not a bijection on 24 points")
        self.mapping = mapping
        self.model = model

    @classmethod
    def identity(cls, model):
        return cls(range(24), model)

    def __mul__(self, other):
        """self * other = apply other first, then self (left action on
        points: (self*other)(x) = self(other(x)))."""
        if self.model != other.model:
            raise PermError("label model mismatch")
        return Permutation(
            tuple(self.mapping[other.mapping[i]] for i in range(24)), self.model
        )

    def inverse(self):
        inv = [0] * 24
        for i, m in enumerate(self.mapping):
            inv[m] = i
        return Permutation(inv, self.model)

    def order(self):
        n = 1
        p = self
        ident = tuple(range(24))
        while p.mapping != ident:
            p = p * self
            n += 1
        return n

    def moved_points(self):
        return [i for i in range(24) if self.mapping[i] != i]

    def cycles(self):
        seen = [False] * 24
        out = []
        for s in range(24):
            if seen[s] or self.mapping[s] == s:
                seen[s] = True
                continue
            cyc = [s]
            seen[s] = True
            nxt = self.mapping[s]
            while nxt != s:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self.mapping[nxt]
            out.append(cyc)
        return out

    def __eq__(self, other):
        return (isinstance(other, Permutation) and self.mapping == other.mapping
                and self.model == other.model)

    def __hash__(self):
        return hash((self.mapping, self.model))

    def __repr__(self):
        cyc = self.cycles()
        if not cyc:
            return "Permutation(identity, %s)" % self.model
        text = "".join(
            "(%s)" % " ".join(index_label(i, self.model) for i in c) for c in cyc
        )
        return "Permutation(%s, %s)" % (text, self.model)


def parse_cycles(text, model):
    """Parse cycle notation over the model's labels.

    Accepts the dataset contract: cycles "(a b c)", labels "aK" or "aI,J",
    whitespace-insensitive, with the latex trimmings already transliterated
    ("α" -> "a").  Disjointness is enforced.
    """
    cleaned = (
        text.replace("\\alpha", "a").replace("α", "a").replace("_", "")
        .replace("{", "").replace("}", "").replace("$", "")
    )
    cleaned = "".join(cleaned.split())
    if cleaned in ("", "()"):
        return Permutation.identity(model)
    if cleaned.count("(") != cleaned.count(")"):
        raise PermError("unbalanced parentheses in %r" % text)
    mapping = list(range(24))
    used = set()
    pos = 0
    n = len(cleaned)
    while pos < n:
        if cleaned[pos] != "(":
            raise PermError("expected '(' at position %d in %r" % (pos, text))
        end = cleaned.find(")", pos)
        if end < 0:
            raise PermError("unbalanced parentheses at position %d in %r" % (pos, text))
        body = cleaned[pos + 1:end]
        pos = end + 1
        if not body:
            continue
        raw = [tok for tok in body.split("a") if tok]
        if "a" + "a".join(raw) != body:
            raise PermError("malformed cycle %r in %r" % (body, text))
        idxs = [label_index("a" + tok, model) for tok in raw]
        if len(idxs) < 2:
            continue
        for i in idxs:
            if i in used:
                raise PermError(
                    "label %s repeated in %r" % (index_label(i, model), text)
                )
            used.add(i)
        for a, b in zip(idxs, idxs[1:] + idxs[:1]):
            mapping[a] = b
    return Permutation(mapping, model)


class PermGroup:
    def __init__(self, generators, model=None):
        if model is None:
            if not generators:
                raise PermError("model required for a generator-free group")
            model = generators[0].model
        for g in generators:
            if g.model != model:
                raise PermError("label model mismatch among generators")
        self.generators = list(generators)
        self.model = model
        self._elements = None

    def elements(self):
        """Materialized closure, breadth-first, deterministic order."""
        if self._elements is None:
            ident = Permutation.identity(self.model)
            seen = {ident.mapping}
            out = [ident]
            frontier = [ident]
            while frontier:
                nxt = []
                for p in frontier:
                    for g in self.generators:
                        q = g * p
                        if q.mapping not in seen:
                            seen.add(q.mapping)
                            out.append(q)
                            nxt.append(q)
                            if len(out) > CLOSURE_BOUND:
                                raise PermError(
                                    "closure exceeds bound %d" % CLOSURE_BOUND
                                )
                frontier = nxt
            self._elements = out
        return self._elements

    def order(self):
        return len(self.elements())

    def __contains__(self, p):
        return any(p.mapping == e.mapping for e in self.elements())

    def element_set(self):
        return frozenset(e.mapping for e in self.elements())


def orbits(g):
    """Orbit partition of the 24 points; orbits sorted internally and by
    least element.  Includes fixed points as singletons."""
    parent = list(range(24))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in g.generators:
        for i, m in enumerate(p.mapping):
            a, b = find(i), find(m)
            if a != b:
                parent[max(a, b)] = min(a, b)
    buckets = {}
    for i in range(24):
        buckets.setdefault(find(i), []).append(i)
    return sorted(sorted(b) for b in buckets.values())


# ---------------------------------------------------------------------------
# Fingerprints and identification


def _mult_table_closure(mappings, gens):
    """Closure of a set of raw mappings under composition with gens."""
    seen = set(mappings)
    frontier = list(mappings)
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                q = tuple(g[m[i]] for i in range(24))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if len(seen) > CLOSURE_BOUND:
                        raise PermError("closure exceeds bound %d" % CLOSURE_BOUND)
        frontier = nxt
    return seen


def _mapping_order(m):
    ident = tuple(range(24))
    n = 1
    p = m
    while p != ident:
        p = tuple(m[p[i]] for i in range(24))
        n += 1
    return n


def fingerprint(g):
    """Isomorphism-invariant tuple: order, element-order multiset, center
    order, derived-subgroup order, abelianization order multiset, exponent."""
    elems = [e.mapping for e in g.elements()]
    order = len(elems)
    elem_orders = sorted(_mapping_order(m) for m in elems)
    exponent = 1
    for o in set(elem_orders):
        exponent = exponent * o // _gcd(exponent, o)
    # center: elements commuting with every generator commute with everything
    gens = [p.mapping for p in g.generators]
    center = 0
    for m in elems:
        if all(_compose(m, e) == _compose(e, m) for e in gens):
            center += 1
    # derived subgroup: closure of all commutators a^-1 b^-1 a b = (ba)^-1 (ab)
    ident = tuple(range(24))
    inv = {m: _inv_mapping(m) for m in elems}
    comms = {ident}
    for a in elems:
        for b in elems:
            comms.add(_compose(inv[_compose(b, a)], _compose(a, b)))
    derived = _mult_table_closure(comms, list(comms))
    # abelianization: order multiset of the quotient G/derived
    cosets = {}
    for m in elems:
        key = min(_compose(m, d) for d in derived)
        cosets.setdefault(key, key)
    reps = sorted(cosets)
    ab_orders = []
    for r in reps:
        p = r
        n = 1
        while min(_compose(p, d) for d in derived) != min(derived):
            p = _compose(r, p)
            n += 1
        ab_orders.append(n)
    return (
        order,
        tuple(elem_orders),
        center,
        len(derived),
        tuple(sorted(ab_orders)),
        exponent,
    )


def _compose(a, b):
    return tuple(map(a.__getitem__, b))


def _inv_mapping(m):
    inv = [0] * 24
    for i, x in enumerate(m):
        inv[x] = i
    return tuple(inv)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def identify_type(g, catalog):
    """Match a group's fingerprint against a catalog {name: fingerprint}.

    Returns the name, or "unrecognized"; raises on ambiguity (must not
    happen for catalog groups, test-enforced)."""
    fp = fingerprint(g)
    hits = [name for name, cfp in sorted(catalog.items()) if tuple(cfp) == fp]
    if len(hits) > 1:
        raise PermError("ambiguous fingerprint, candidates: %s" % ", ".join(hits))
    return hits[0] if hits else "unrecognized"


def contains_subgroup(g, h):
    if g.model != h.model:
        raise PermError("label model mismatch")
    gset = g.element_set()
    return all(e.mapping in gset for e in h.elements())


def find_isomorphic_subgroups(g, target_fingerprint, bound=64):
    """All subgroups of g with the given fingerprint, up to conjugacy in g.

    Full search; requires |g| <= bound (the closure enumeration is
    exponential in the worst case, so callers must opt in for bigger groups).
    """
    if g.order() > bound:
        raise PermError(
            "order %d exceeds the full-search bound %d; use contains_subgroup"
            % (g.order(), bound)
        )
    target_fingerprint = _normalize_fp(target_fingerprint)
    target_order = target_fingerprint[0]
    elems = [e.mapping for e in g.elements()]
    ident = tuple(range(24))

    # enumerate all subgroups: grow closures one element at a time
    all_subs = {frozenset([ident])}
    frontier = [frozenset([ident])]
    while frontier:
        nxt = []
        for H in frontier:
            if len(H) >= target_order:
                continue
            for x in elems:
                if x in H:
                    continue
                K = frozenset(_mult_table_closure(set(H) | {x}, [x] + list(H)))
                if len(K) <= target_order and K not in all_subs:
                    all_subs.add(K)
                    nxt.append(K)
        frontier = nxt

    # filter by fingerprint, dedupe by conjugacy
    inv = {m: _inv_mapping(m) for m in elems}
    classes = {}
    for H in all_subs:
        if len(H) != target_order:
            continue
        sub = PermGroup(
            [Permutation(m, g.model) for m in sorted(H)], g.model
        )
        if fingerprint(sub) != target_fingerprint:
            continue
        canon = min(
            tuple(sorted(_compose(_compose(c, m), inv[c]) for m in H))
            for c in elems
        )
        if canon not in classes:
            classes[canon] = sub
    return [classes[k] for k in sorted(classes)]


def _normalize_fp(fp):
    return tuple(tuple(x) if isinstance(x, list) else x for x in fp)
