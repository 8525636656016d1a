import json

import pytest

from nv.dataset import (
    DatasetError,
    DegPattern,
    load_dataset,
    parse_deg,
    parse_type,
    type_rank,
)


class TestParseType:
    def test_plain_multiplicity(self):
        assert parse_type("4A1") == (("A", 1),) * 4

    def test_mixed_sum_sorted(self):
        assert parse_type("A3+2A1") == (("A", 1), ("A", 1), ("A", 3))

    def test_d_components(self):
        assert parse_type("D4+A1") == (("A", 1), ("D", 4))

    def test_rank(self):
        assert type_rank(parse_type("2A3+4A1")) == 10

    def test_rejects_garbage(self):
        with pytest.raises(DatasetError):
            parse_type("4B2")
        with pytest.raises(DatasetError):
            parse_type("")


class TestParseDeg:
    def test_plain_cell(self):
        deg = parse_deg(r"$4\aaa_1$")
        assert deg.n_orbits() == 1
        assert deg.orbit_components() == [(("A", 1),) * 4]
        assert deg.full_components() == (("A", 1),) * 4
        assert deg.tag is None

    def test_decorated_cell(self):
        deg = parse_deg(r"$(2\aaa_1)_{I}$")
        assert deg.orbit_types == [((("A", 1), ("A", 1)), "I")]

    def test_tuple_with_target(self):
        deg = parse_deg(r"$(4\aaa_1,4\aaa_1)\subset 8\aaa_1$")
        assert deg.n_orbits() == 2
        assert deg.full_components() == (("A", 1),) * 8
        assert deg.groups == []

    def test_overall_tag(self):
        deg = parse_deg(r"$((2\aaa_1,2\aaa_1)\subset 4\aaa_1)_{II}$")
        assert deg.tag == "II"
        assert deg.n_orbits() == 2

    def test_grouped_subtuple_flattens(self):
        deg = parse_deg(
            r"$(2\aaa_1,(4\aaa_1,4\aaa_1)_{II})\subset 10\aaa_1$")
        assert deg.n_orbits() == 3
        assert deg.groups == [(1, 2, "II")]

    def test_per_summand_tags_in_target(self):
        deg = parse_deg(r"$(2\aaa_2)\subset (8\aaa_1)_I\amalg 2\aaa_2$")
        comps, tags = deg.full_type
        assert comps == tuple(sorted((("A", 1),) * 8 + (("A", 2),) * 2))
        assert tags  # the tagged summand is recorded

    def test_matrix_form(self):
        deg = parse_deg(
            r"""$\left(\begin{array}{cc}
            2\aaa_1 & (4\aaa_1)_I \\
                    & 2\aaa_1
            \end{array}\right)\subset 4\aaa_1$""")
        assert deg.n_orbits() == 2
        assert deg.orbit_components() == [(("A", 1), ("A", 1))] * 2
        assert deg.pairwise is not None
        assert deg.pairwise[0][1] == ((("A", 1),) * 4, "I")

    def test_stray_close_paren_tolerated(self):
        # table cells occasionally print "6A1)_I" without the opening paren
        deg = parse_deg(r"$(2\aaa_1,4\aaa_1)\subset 6\aaa_1)_I$")
        assert deg.n_orbits() == 2

    def test_equality_includes_groups(self):
        a = parse_deg(r"$(4\aaa_1,4\aaa_1)\subset 8\aaa_1$")
        b = parse_deg(r"$((4\aaa_1,4\aaa_1)_{II})\subset 8\aaa_1$")
        assert isinstance(a, DegPattern)
        assert a != b


@pytest.fixture(scope="module")
def ds():
    return load_dataset()


class TestLoadDataset:
    def test_counts(self, ds):
        assert [len(ds.tables[t]) for t in (1, 2, 3, 4)] == [92, 138, 93, 35]
        assert sorted(ds.cases) == list(range(1, 83))
        assert len(ds.subgroups) == 27

    def test_group_table_lookup(self, ds):
        assert ds.table1_group(21) == ("C_2^4", 16)
        assert ds.table1_group(75)[1] == 192

    def test_rank_accounting_all_rows(self, ds):
        for rows in ds.tables.values():
            for row in rows:
                if row.rk_SG is not None:
                    assert row.rk_S == row.rk_SG + row.deg.n_orbits()

    def test_case_deg_matches_table_row(self, ds):
        case = ds.cases[1]
        assert case.expected_big
        for row in case.expected_big:
            assert row.deg == case.deg and row.n == case.n

    def test_reference_resolution_by_role(self, ds):
        # case 3 reuses case 1's groups under an inconsistent printed name;
        # the big reference must resolve to case 1's big, not its subgroup
        big3 = ds.cases[3].markings[0]["big"]["generators"]
        big1 = ds.cases[1].markings[0]["big"]["generators"]
        assert big3 == big1

    def test_suspect_cases_have_recorded_fixes(self, ds):
        suspect = {no for no, c in ds.cases.items() if c.status != "OK"}
        assert suspect == {19, 23, 27, 32, 33, 55, 61, 67, 75, 77}

    def test_corrected_case_differs_from_raw(self, ds):
        raw = ds.cases[19]
        fixed = ds.corrected_case(19)
        assert raw.markings != fixed.markings

    def test_corrected_case_is_a_copy(self, ds):
        before = json.dumps(ds.cases[19].markings, sort_keys=True)
        ds.corrected_case(19)
        assert json.dumps(ds.cases[19].markings, sort_keys=True) == before


class TestLoadDatasetErrors:
    def test_empty_dir_is_a_valid_empty_dataset(self, tmp_path):
        ds = load_dataset(tmp_path)
        assert ds.tables == {} and ds.cases == {} and ds.subgroups == []

    def test_bad_symbol_fails_loudly(self, tmp_path):
        (tmp_path / "tables").mkdir()
        row = {
            "table": 1, "n": 1, "group_order": 2, "gap_id": 1,
            "group_name": "C_2", "rk_SG": 8, "q_SG": "2_{II}^{+8}",
            "deg": r"$\aaa_1$", "rk_S": 9, "q_S": "2_7^{+9x}", "marks": [],
        }
        (tmp_path / "tables" / "table1.json").write_text(
            json.dumps({"rows": [row]}))
        with pytest.raises(DatasetError):
            load_dataset(tmp_path)

    def test_bad_rank_accounting_fails(self, tmp_path):
        (tmp_path / "tables").mkdir()
        row = {
            "table": 1, "n": 1, "group_order": 2, "gap_id": 1,
            "group_name": "C_2", "rk_SG": 8, "q_SG": "2_{II}^{+8}",
            "deg": r"$\aaa_1$", "rk_S": 10, "q_S": "2_7^{+9}", "marks": [],
        }
        (tmp_path / "tables" / "table1.json").write_text(
            json.dumps({"rows": [row]}))
        with pytest.raises(DatasetError):
            load_dataset(tmp_path)
