import pytest
from hypothesis import given, settings, strategies as st

from nv.permgroup import (
    PermError,
    PermGroup,
    Permutation,
    contains_subgroup,
    find_isomorphic_subgroups,
    fingerprint,
    identify_type,
    label_index,
    model_labels,
    orbits,
    parse_cycles,
)


def perm_from_pairs(pairs, model="N23"):
    mapping = list(range(24))
    for a, b in pairs:
        mapping[a], mapping[b] = b, a
    return Permutation(mapping, model)


def cyc(text, model="N23"):
    return parse_cycles(text, model)


class TestParse:
    def test_identity(self):
        assert parse_cycles("", "N23") == Permutation.identity("N23")
        assert parse_cycles("()", "N23") == Permutation.identity("N23")

    def test_simple_transpositions(self):
        p = cyc("(a2a20)(a3a10)")
        assert p.mapping[1] == 19 and p.mapping[19] == 1
        assert p.mapping[2] == 9 and p.mapping[9] == 2
        assert p.order() == 2

    def test_three_cycle(self):
        p = cyc("(a1 a2 a3)")
        assert p.mapping[0] == 1 and p.mapping[1] == 2 and p.mapping[2] == 0
        assert p.order() == 3

    def test_latex_trimmings(self):
        a = parse_cycles(r"$(\alpha_{2}\alpha_{19})(\alpha_{3}\alpha_{5})$", "N23")
        b = cyc("(a2a19)(a3a5)")
        assert a == b

    def test_pair_labels(self):
        p = parse_cycles("(α_{1,3}α_{3,3})(α_{1,4}α_{3,5})", "N21")
        i13 = label_index("a1,3", "N21")
        i33 = label_index("a3,3", "N21")
        assert p.mapping[i13] == i33 and p.mapping[i33] == i13

    def test_repeated_label_rejected(self):
        with pytest.raises(PermError):
            cyc("(a1a2)(a2a3)")

    def test_unknown_label_rejected(self):
        with pytest.raises(PermError):
            cyc("(a12a28)")
        with pytest.raises(PermError):
            parse_cycles("(a4a1,9)", "N21")

    def test_unbalanced_parens(self):
        with pytest.raises(PermError):
            cyc("(a1a2")

    def test_stray_comma_rejected(self):
        with pytest.raises(PermError):
            cyc("(a2,a5)")

    def test_model_labels_count(self):
        for model in ("N23", "N22", "N21"):
            labels = model_labels(model)
            assert len(labels) == 24
            assert len(set(labels)) == 24
            for idx, lab in enumerate(labels):
                assert label_index(lab, model) == idx


class TestClosure:
    def test_empty(self):
        g = PermGroup([], "N23")
        assert g.order() == 1

    def test_klein_four(self):
        g = PermGroup([cyc("(a1a2)"), cyc("(a3a4)")])
        assert g.order() == 4
        assert fingerprint(g)[1] == (1, 2, 2, 2)

    def test_s3(self):
        g = PermGroup([cyc("(a1a2)"), cyc("(a1a2a3)")])
        assert g.order() == 6

    def test_deterministic(self):
        gens = [cyc("(a1a2a3a4)"), cyc("(a1a3)")]
        e1 = [p.mapping for p in PermGroup(gens).elements()]
        e2 = [p.mapping for p in PermGroup(gens).elements()]
        assert e1 == e2

    def test_bound(self):
        # S5 x C7 x ... too big is hard on 24 points; use a group of order
        # > 4096: S8 restricted to 8 points has order 40320
        gens = [cyc("(a1a2)"), cyc("(a1a2a3a4a5a6a7a8)")]
        with pytest.raises(PermError):
            PermGroup(gens).elements()


class TestOrbits:
    def test_identity_group(self):
        g = PermGroup([], "N23")
        assert orbits(g) == [[i] for i in range(24)]

    def test_two_orbits(self):
        g = PermGroup([cyc("(a1a2a3)"), cyc("(a5a6)")])
        parts = orbits(g)
        assert [0, 1, 2] in parts
        assert [4, 5] in parts
        assert [3] in parts

    def test_generator_order_invariance(self):
        a, b = cyc("(a1a2a3a4)"), cyc("(a9a10)")
        assert orbits(PermGroup([a, b])) == orbits(PermGroup([b, a]))

    def test_suborbit_refinement(self):
        big = PermGroup([cyc("(a1a2a3a4)")])
        small = PermGroup([cyc("(a1a3)(a2a4)")])
        big_parts = orbits(big)
        for part in orbits(small):
            assert any(set(part) <= set(bp) for bp in big_parts)


D8_GENS = ["(a1a2a3a4)", "(a1a3)"]
Q8_GENS = ["(a1a2a3a4)(a5a6a7a8)", "(a1a5a3a7)(a2a8a4a6)"]


class TestFingerprint:
    def test_d8_vs_q8(self):
        d8 = fingerprint(PermGroup([cyc(t) for t in D8_GENS]))
        q8 = fingerprint(PermGroup([cyc(t) for t in Q8_GENS]))
        assert d8[0] == q8[0] == 8
        # D8 has two elements of order 4, Q8 has six
        assert d8[1].count(4) == 2
        assert q8[1].count(4) == 6
        assert d8 != q8

    def test_abelianization_of_s3(self):
        g = PermGroup([cyc("(a1a2)"), cyc("(a1a2a3)")])
        fp = fingerprint(g)
        assert fp[3] == 3  # derived subgroup C3
        assert fp[4] == (1, 2)  # abelianization C2

    def test_elementary_abelian(self):
        g = PermGroup([cyc("(a1a2)"), cyc("(a3a4)"), cyc("(a5a6)")])
        fp = fingerprint(g)
        assert fp[0] == 8 and fp[5] == 2 and fp[2] == 8

    def test_identify(self):
        catalog = {
            "D8": fingerprint(PermGroup([cyc(t) for t in D8_GENS])),
            "Q8": fingerprint(PermGroup([cyc(t) for t in Q8_GENS])),
        }
        assert identify_type(PermGroup([cyc(t) for t in D8_GENS]), catalog) == "D8"
        assert identify_type(PermGroup([cyc("(a1a2)")]), catalog) == "unrecognized"

    def test_ambiguity_detected(self):
        fp = fingerprint(PermGroup([cyc("(a1a2)")]))
        with pytest.raises(PermError):
            identify_type(PermGroup([cyc("(a1a2)")]), {"X": fp, "Y": fp})


class TestSubgroups:
    def test_contains_self(self):
        g = PermGroup([cyc(t) for t in D8_GENS])
        assert contains_subgroup(g, g)

    def test_model_mismatch(self):
        g = PermGroup([cyc("(a1a2)")], "N23")
        h = PermGroup([parse_cycles("(a1,1a2,1)", "N22")], "N22")
        with pytest.raises(PermError):
            contains_subgroup(g, h)

    def test_trivial_target(self):
        g = PermGroup([cyc(t) for t in D8_GENS])
        trivial_fp = fingerprint(PermGroup([], "N23"))
        subs = find_isomorphic_subgroups(g, trivial_fp)
        assert len(subs) == 1

    def test_c2_in_klein(self):
        g = PermGroup([cyc("(a1a2)"), cyc("(a3a4)")])
        c2 = fingerprint(PermGroup([cyc("(a1a2)")]))
        subs = find_isomorphic_subgroups(g, c2)
        # abelian group: conjugation trivial, three C2 subgroups
        assert len(subs) == 3
        for s in subs:
            assert contains_subgroup(g, s)
            assert fingerprint(s) == c2

    def test_c2_in_d8_up_to_conjugacy(self):
        g = PermGroup([cyc(t) for t in D8_GENS])
        c2 = fingerprint(PermGroup([cyc("(a1a2)")]))
        subs = find_isomorphic_subgroups(g, c2)
        # D8: center Z2, plus two classes of reflections
        assert len(subs) == 3

    def test_order_bound(self):
        gens = [cyc("(a1a2)"), cyc("(a1a2a3a4a5)")]  # S5, order 120
        with pytest.raises(PermError):
            find_isomorphic_subgroups(PermGroup(gens), (2, (1, 2), 2, 1, (1, 2), 2))
