import pytest

from nv.cli import cli_main
from nv.permgroup import parse_cycles
from nv.verify import VerificationReport, Verifier, summarize, verify_degeneration


class TestVerificationReport:
    def test_all_pass(self):
        rep = VerificationReport("x")
        rep.check("a", 1, 1)
        rep.add("b", "y", "y", "PASS")
        assert rep.verdict() == "PASS"

    def test_fail_dominates(self):
        rep = VerificationReport("x")
        rep.check("a", 1, 1)
        rep.check("b", 1, 2)
        rep.add("c", "s", "s", "SKIP(oracle-bound)")
        assert rep.verdict() == "FAIL"

    def test_suspect_beats_skip(self):
        rep = VerificationReport("x")
        rep.add("a", "ok", "patched", "DATA-SUSPECT")
        rep.check("b", 1, 1)
        assert rep.verdict() == "DATA-SUSPECT"

    def test_all_skip(self):
        rep = VerificationReport("x")
        rep.add("a", "ok", "n/a", "SKIP(data-suspect)")
        assert rep.verdict() == "SKIP"

    def test_empty_report_passes(self):
        assert VerificationReport("x").verdict() == "PASS"

    def test_absorb_prefixes(self):
        inner = VerificationReport("i")
        inner.check("rk", 3, 3)
        outer = VerificationReport("o")
        outer.absorb(inner, "S: ")
        assert outer.checks[0][0] == "S: rk"

    def test_to_json_shape(self):
        rep = VerificationReport("x")
        rep.check("a", (1, 2), (1, 2))
        d = rep.to_json()
        assert d["verdict"] == "PASS"
        assert d["checks"][0]["expected"] == repr((1, 2))

    def test_summarize(self):
        a = VerificationReport("a")
        a.check("x", 1, 1)
        b = VerificationReport("b")
        b.check("x", 1, 2)
        assert summarize([a, b]) == {"PASS": 1, "FAIL": 1, "SKIP": 0,
                                     "DATA-SUSPECT": 0}


@pytest.fixture(scope="module")
def verifier():
    return Verifier()


def _aligned_case(verifier, case_no):
    """Generators and orbit labels of a case's first marking, relabeled
    into model coordinates via the stored alignment."""
    case = verifier.dataset.corrected_case(case_no)
    mk = case.markings[0]
    mid = mk["model"]
    big = [parse_cycles(t, mid) for t in mk["big"]["generators"]]
    small = [parse_cycles(t, mid) for t in mk["smalls"][0]["generators"]]
    sigma = verifier._sigma(case_no, mid, big + small)
    inv = sigma.inverse()
    conj = lambda g: sigma * g * inv
    orbs = verifier._transport(sigma, mk["orbits"], mid)
    suborbs = verifier._transport(sigma, mk["smalls"][0]["suborbits"], mid)
    return (verifier.model(mid), [conj(g) for g in big],
            [conj(g) for g in small], orbs, suborbs, case)


class TestVerifyDegeneration:
    def test_known_degeneration(self, verifier):
        model, big, _, orbs, _, case = _aligned_case(verifier, 1)
        rep = verify_degeneration(model, big, orbs, case.expected_big[0])
        assert rep.verdict() == "PASS"
        assert rep.computed["rk_SG"] == 15
        assert rep.computed["q_SG"] == "2_II^{+6},8_1^{+1}"
        assert rep.computed["rk_S"] == 16
        assert rep.computed["q_S"] == "2_II^{+4},4_II^{+2}"

    def test_subgroup_reaches_same_lattice(self, verifier):
        model, big, small, orbs, suborbs, case = _aligned_case(verifier, 1)
        rep = verify_degeneration(model, big, orbs, case.expected_big[0])
        rep1 = verify_degeneration(model, small, suborbs,
                                   case.expected_small[0][0])
        assert rep1.verdict() == "PASS"
        assert rep1.computed["rk_S"] == rep.computed["rk_S"] == 16
        assert rep1.computed["q_S"] == rep.computed["q_S"]

    def test_empty_orbit_list_collapses(self, verifier):
        model, big, _, _, _, case = _aligned_case(verifier, 1)
        rep = verify_degeneration(model, big, [], case.expected_big[0])
        assert rep.computed["rk_S"] == rep.computed["rk_SG"]
        assert rep.computed["q_S"] == rep.computed["q_SG"]


class TestVerifier:
    def test_case_pass(self, verifier):
        rep = verifier.verify_case(1)
        assert rep.verdict() == "PASS"
        names = [n for n, _, _, _ in rep.checks]
        assert "rk S1 = rk S" in names
        assert "q_S1 = q_S" in names
        assert "Dyn(Deg1) = Dyn(Deg)" in names

    def test_suspect_case_skips_without_corrections(self, verifier):
        rep = verifier.verify_case(19)
        assert rep.verdict() == "SKIP"
        assert "DATA-SUSPECT" in rep.checks[0][2]

    def test_suspect_case_runs_with_corrections(self):
        v = Verifier(apply_corrections=True)
        rep = v.verify_case(19)
        assert rep.verdict() == "DATA-SUSPECT"
        assert not any(v == "FAIL" for _, _, _, v in rep.checks)

    def test_table4_consistent(self, verifier):
        reports = verifier.verify_table(4)
        assert len(reports) == 35
        assert all(r.verdict() == "PASS" for r in reports)

    def test_subgroups_stated_mode(self, verifier):
        entry = next(e for e in verifier.dataset.subgroups if e.n == 21)
        rep = verifier.verify_subgroup_entry(entry)
        assert rep.verdict() in ("PASS", "SKIP")
        assert not any(v == "FAIL" for _, _, _, v in rep.checks)

    def test_subgroups_search_mode_small(self, verifier):
        entry = next(e for e in verifier.dataset.subgroups if e.n == 21)
        rep = verifier.verify_subgroup_entry(entry, search=True)
        assert rep.verdict() == "PASS"
        assert len(rep.checks) == len(entry.n1_list)


class TestCli:
    def test_verify_case_ok(self, capsys):
        assert cli_main(["verify", "case", "1"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out

    def test_build_model(self, capsys):
        assert cli_main(["build", "N23"]) == 0
        out = capsys.readouterr().out
        assert "48" in out

    def test_genus(self, tmp_path, capsys):
        p = tmp_path / "gram.json"
        p.write_text("[[2]]")
        assert cli_main(["genus", "--negative", str(p)]) == 0
        assert "2_7^{+1}" in capsys.readouterr().out

    def test_usage_error(self):
        assert cli_main(["verify", "case", "notanumber"]) == 2

    def test_unknown_model(self):
        assert cli_main(["build", "N99"]) in (2, 3)
