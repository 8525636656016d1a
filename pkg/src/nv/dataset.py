"""Loading and validation of the shipped dataset: the four degeneration
tables, the 82 proof cases, and the subgroup containment list.

Raw source strings are preserved next to parsed structures so every record
can be audited against its origin.  Known transcription problems travel as
"suspect" records on a case; `Dataset.corrected_case` applies them to a
copy, the shipped files always keep the printed data.
"""

import copy
import json
import re

from .datadir import data_dir
from .discform import parse_symbol


class DatasetError(Exception):
    pass


# --- root system types -----------------------------------------------------

_TERM = re.compile(r"^(\d*)([AD])(\d+)$")


def parse_type(text):
    """'4A1', 'A1+2A3' (normalized deg text) -> sorted component tuple
    like (('A', 1), ('A', 1), ...), the format dynkin_classify emits."""
    comps = []
    for term in text.split("+"):
        m = _TERM.match(term)
        if not m:
            raise DatasetError("bad root-type term %r in %r" % (term, text))
        mult = int(m.group(1)) if m.group(1) else 1
        comps.extend([(m.group(2), int(m.group(3)))] * mult)
    if not comps:
        raise DatasetError("empty root type %r" % text)
    return tuple(sorted(comps))


def type_rank(comps):
    return sum(k for _, k in comps)


class DegPattern:
    """A degeneration pattern: per-orbit types, the full type, and for the
    matrix form the upper-triangular pairwise-union types.  I/II decorations
    are carried as opaque tags and excluded from type comparisons."""

    def __init__(self, orbit_types, full_type, pairwise=None, tag=None,
                 groups=None):
        self.orbit_types = orbit_types  # list of (components, tag-or-None)
        self.full_type = full_type      # (components, tag-or-None)
        self.pairwise = pairwise        # matrix of (components, tag) or None
        self.tag = tag                  # decoration on the whole pattern
        # decorated sub-tuples like (4A1,4A1)_II flatten into consecutive
        # orbit entries; their spans and union tags are kept here
        self.groups = groups or []      # list of (first, last, tag)

    def n_orbits(self):
        return len(self.orbit_types)

    def orbit_components(self):
        return [c for c, _ in self.orbit_types]

    def full_components(self):
        return self.full_type[0]

    def __eq__(self, other):
        if not isinstance(other, DegPattern):
            return NotImplemented
        return (self.orbit_types == other.orbit_types
                and self.full_type == other.full_type
                and self.pairwise == other.pairwise
                and self.tag == other.tag
                and self.groups == other.groups)

    def __repr__(self):
        def t(ct):
            comps, tag = ct
            from collections import Counter
            parts = []
            for (fam, k), mult in sorted(Counter(comps).items()):
                parts.append("%s%s%d" % (str(mult) if mult > 1 else "", fam, k))
            s = "+".join(parts)
            return "(%s)_%s" % (s, tag) if tag else s
        if len(self.orbit_types) == 1 and self.pairwise is None and \
                self.orbit_types[0] == self.full_type:
            return "DegPattern(%s)" % t(self.full_type)
        body = ",".join(t(x) for x in self.orbit_types)
        s = "DegPattern((%s) in %s)" % (body, t(self.full_type))
        if self.tag:
            s += "_" + self.tag
        return s


_TAGGED = re.compile(r"^\(?([^()]*)\)_?(I{1,2})$")


def _norm_deg_text(text):
    s = text.replace("\\left", "").replace("\\right", "")
    s = s.replace("\\,", "").replace("\\!", "").replace("$", "")
    s = s.replace("\\aaa_", "A").replace("\\ddd_", "D")
    s = s.replace("\\amalg", "+")
    s = re.sub(r"_\{(I{1,2})\}", r"_\1", s)
    return s


def _parse_tagged_type(chunk):
    """Type with optional decorations: '4A1', '(2A1)_I', '(8A1)_I+2A2'.
    Decorations may sit on the whole chunk or on individual summands; they
    are collected as an opaque tag value.  A stray close-paren or comma
    from a source typo is tolerated."""
    m = _TAGGED.match(chunk)
    if m:
        return (parse_type(m.group(1)), m.group(2))
    # stray comma before '+' occurs once in the source
    chunk = chunk.replace(",+", "+")
    comps = []
    tags = []
    for i, term in enumerate(_split_top(chunk, "+")):
        tm = _TAGGED.match(term)
        if tm:
            comps.extend(parse_type(tm.group(1)))
            tags.append((i, tm.group(2)))
        else:
            comps.extend(parse_type(term))
    return (tuple(sorted(comps)), tuple(tags) if tags else None)


def _split_top(text, sep=","):
    parts, depth, buf = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    parts.append("".join(buf))
    return parts


def _match_paren(s, i):
    depth = 0
    for j in range(i, len(s)):
        if s[j] == "(":
            depth += 1
        elif s[j] == ")":
            depth -= 1
            if depth == 0:
                return j
    return -1


def parse_deg(text):
    """Parse a degeneration cell: a plain type, a tuple '(t1,...,tk) in T',
    or the upper-triangular matrix form with pairwise unions."""
    s = _norm_deg_text(text)
    if "\\begin{array}" in s:
        return _parse_matrix_deg(s)
    s = re.sub(r"\s+", "", s)
    if "\\subset" not in s:
        ct = _parse_tagged_type(s)
        return DegPattern([ct], ct)
    tag = None
    m = re.search(r"\)_(I{1,2})$", s)
    if m and s.startswith("(") and _match_paren(s, 0) == m.start():
        tag = m.group(1)
        s = s[1:m.start()]
    left, right = s.split("\\subset")
    full = _parse_tagged_type(right)
    if not (left.startswith("(") and _match_paren(left, 0) == len(left) - 1):
        raise DatasetError("cannot parse orbit tuple in %r" % text)
    orbit_types = []
    groups = []
    for chunk in _split_top(left[1:-1]):
        gm = re.match(r"^\((.*)\)_(I{1,2})$", chunk)
        if gm and "," in gm.group(1):
            members = _split_top(gm.group(1))
            first = len(orbit_types)
            orbit_types.extend(_parse_tagged_type(c) for c in members)
            groups.append((first, len(orbit_types) - 1, gm.group(2)))
        else:
            orbit_types.append(_parse_tagged_type(chunk))
    return DegPattern(orbit_types, full, tag=tag, groups=groups)


def _parse_matrix_deg(s):
    m = re.search(r"\\begin\{array\}\{[a-z]*\}(.*?)\\end\{array\}", s, re.S)
    if not m:
        raise DatasetError("unterminated array in %r" % s)
    body = m.group(1)
    after = re.sub(r"\s+", "", s[m.end():]).lstrip(")")
    if not after.startswith("\\subset"):
        raise DatasetError("matrix pattern without full type in %r" % s)
    full = _parse_tagged_type(after[len("\\subset"):])
    rows = [r for r in body.split("\\\\") if r.strip()]
    n = len(rows)
    pairwise = [[None] * n for _ in range(n)]
    orbit_types = []
    for i, row in enumerate(rows):
        cells = [re.sub(r"\s+", "", c) for c in row.split("&")]
        if len(cells) != n:
            raise DatasetError("matrix row %d has %d cells, expected %d"
                               % (i, len(cells), n))
        for j, cell in enumerate(cells):
            if j < i:
                if cell:
                    raise DatasetError("entry below the diagonal at (%d,%d)"
                                       % (i, j))
                continue
            if not cell:
                raise DatasetError("empty entry at (%d,%d)" % (i, j))
            pairwise[i][j] = _parse_tagged_type(cell)
        orbit_types.append(pairwise[i][i])
    return DegPattern(orbit_types, full, pairwise=pairwise)


# --- record types ----------------------------------------------------------

class TableRow:
    def __init__(self, rec, index):
        self.table = rec["table"]
        self.index = index
        self.n = rec["n"]
        self.group_order = rec.get("group_order")
        self.gap_id = rec.get("gap_id")
        self.group_name = rec["group_name"]
        self.rk_SG = rec.get("rk_SG")
        self.q_SG = rec.get("q_SG")
        self.deg_raw = rec["deg"]
        self.rk_S = rec["rk_S"]
        self.q_S = rec["q_S"]
        self.marks = rec["marks"]
        try:
            self.deg = parse_deg(self.deg_raw)
            self.q_S_symbol = parse_symbol(self.q_S)
            self.q_SG_symbol = parse_symbol(self.q_SG) if self.q_SG else None
        except Exception as exc:
            raise DatasetError("table %d row %d: %s"
                               % (self.table, index, exc))

    def __repr__(self):
        return "TableRow(t%d#%d n=%d %s)" % (
            self.table, self.index, self.n, self.deg_raw)


class SubgroupListEntry:
    def __init__(self, rec):
        self.n = rec["n"]
        self.n1_list = list(rec["n1_list"])


class ProofCase:
    _REQUIRED = ("case", "n1", "deg1_raw", "n", "deg_raw", "markings",
                 "suspects", "status", "expected_rows")

    def __init__(self, rec, path):
        for key in self._REQUIRED:
            if key not in rec:
                raise DatasetError("%s: missing field %r" % (path, key))
        self.case_no = rec["case"]
        self.n = rec["n"]
        self.n1 = rec["n1"]
        self.deg_raw = rec["deg_raw"]
        self.deg1_raw = rec["deg1_raw"]
        self.stated_G_type = rec.get("stated_G_type")
        self.stated_G1_type = rec.get("stated_G1_type")
        self.markings = rec["markings"]
        self.notes = rec.get("notes", [])
        self.suspects = rec["suspects"]
        self.status = rec["status"]
        self.expected_row_refs = rec["expected_rows"]
        try:
            self.deg = parse_deg(self.deg_raw)
            self.deg1 = [parse_deg(d) for d in self.deg1_raw]
        except DatasetError as exc:
            raise DatasetError("%s: %s" % (path, exc))
        if len(self.deg1) != len(self.expected_row_refs["small"]):
            raise DatasetError("%s: %d small patterns but %d row-reference "
                               "groups" % (path, len(self.deg1),
                                           len(self.expected_row_refs["small"])))
        # filled by Dataset cross-referencing
        self.expected_big = None     # list of TableRow
        self.expected_small = None   # list of list of TableRow

    def models(self):
        return [m["model"] for m in self.markings]

    def __repr__(self):
        return "ProofCase(%d: n=%d <= n1=%d, %s)" % (
            self.case_no, self.n, self.n1, self.status)


class Dataset:
    def __init__(self, tables, cases, subgroups):
        self.tables = tables        # {1..4: [TableRow]}
        self.cases = cases          # {1..82: ProofCase}
        self.subgroups = subgroups  # [SubgroupListEntry]

    def table_row(self, table, index):
        rows = self.tables.get(table, [])
        if not 0 <= index < len(rows):
            raise DatasetError("dangling reference: table %d row %d"
                               % (table, index))
        return rows[index]

    def table1_ids(self):
        return sorted({r.n for r in self.tables.get(1, [])})

    def table1_group(self, n):
        """(group_name, group_order) for a catalog id."""
        for r in self.tables.get(1, []):
            if r.n == n:
                return r.group_name, r.group_order
        raise DatasetError("id %d not in the group table" % n)

    def corrected_case(self, case_no):
        """A deep copy of the case with all suspect corrections applied.
        For a clean case this is just a copy."""
        case = self.cases[case_no]
        fixed = copy.deepcopy(case)
        _apply_suspects(fixed, case.suspects, self)
        return fixed


def _apply_suspects(case, suspects, dataset):
    for rec in suspects:
        kind = rec["kind"]
        if kind == "generator":
            _apply_generator_fix(case, rec["key"], rec["corrected_from"],
                                 rec["corrected_to"])
        elif kind == "inherited":
            source = dataset.cases[rec["source_case"]]
            for src in source.suspects:
                if src["kind"] == "generator" and \
                        src["key"].startswith(rec["group"] + "."):
                    _apply_generator_fix(case, src["key"],
                                         src["corrected_from"],
                                         src["corrected_to"],
                                         group=rec["group"])
        elif kind == "set":
            mk = case.markings[rec["marking"]]
            target = mk if rec["small"] is None else mk["smalls"][rec["small"]]
            target[rec["which"]][rec["index"]] = list(rec["corrected"])
        elif kind == "set-list":
            mk = case.markings[rec["marking"]]
            target = mk if rec["small"] is None else mk["smalls"][rec["small"]]
            target[rec["which"]] = [list(x) for x in rec["corrected"]]
        else:
            raise DatasetError("unknown suspect kind %r in case %d"
                               % (kind, case.case_no))


def _apply_generator_fix(case, key, old, new, group=None):
    """Substring replacement on the normalized generator text of the group
    named by `key` ('G.gen' or 'G1.gen')."""
    which = group or key.split(".")[0]
    hit = False
    for mk in case.markings:
        specs = [mk["big"]] if which == "G" else mk["smalls"]
        for spec in specs:
            gens = spec["generators"]
            for i, g in enumerate(gens):
                if old in g:
                    gens[i] = g.replace(old, new)
                    hit = True
    if not hit:
        raise DatasetError("correction %r -> %r does not apply in case %d"
                           % (old, new, case.case_no))


# --- loading ---------------------------------------------------------------

def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DatasetError("%s: %s" % (path, exc))


def load_dataset(path=None):
    """Load and cross-validate the dataset rooted at `path` (default: the
    packaged data directory, overridable via NV_DATA_DIR)."""
    base = data_dir() if path is None else __import__("pathlib").Path(path)
    tables = {}
    for t in (1, 2, 3, 4):
        fp = base / "tables" / ("table%d.json" % t)
        if not fp.exists():
            continue
        obj = _load_json(fp)
        rows = [TableRow(rec, i) for i, rec in enumerate(obj["rows"])]
        for row in rows:
            _check_row(row)
        tables[t] = rows

    cases = {}
    for fp in sorted((base / "cases").glob("case*.json")) \
            if (base / "cases").exists() else []:
        rec = _load_json(fp)
        case = ProofCase(rec, str(fp))
        _link_case(case, tables, str(fp))
        cases[case.case_no] = case

    subgroups = []
    sfp = base / "subgroups.json"
    if sfp.exists():
        ids = {r.n for r in tables.get(1, [])}
        for rec in _load_json(sfp)["entries"]:
            entry = SubgroupListEntry(rec)
            for m in [entry.n] + entry.n1_list:
                if ids and m not in ids:
                    raise DatasetError("subgroup list id %d not in the group "
                                       "table" % m)
            subgroups.append(entry)

    ds = Dataset(tables, cases, subgroups)
    for case in cases.values():
        _resolve_references(case, cases)
    for case in cases.values():
        _validate_generators(case)
        if case.status != "OK":
            ds.corrected_case(case.case_no)  # corrections must apply cleanly
    return ds


def _check_row(row):
    if row.rk_SG is not None:
        if row.rk_S != row.rk_SG + row.deg.n_orbits():
            raise DatasetError(
                "table %d row %d: rk %d != coinvariant rank %d + %d orbits"
                % (row.table, row.index, row.rk_S, row.rk_SG,
                   row.deg.n_orbits()))


def _link_case(case, tables, path):
    refs = case.expected_row_refs
    def rows_of(pairs):
        out = []
        for t, i in pairs:
            if t not in tables or not 0 <= i < len(tables[t]):
                raise DatasetError("%s: dangling table reference (%d,%d)"
                                   % (path, t, i))
            out.append(tables[t][i])
        return out
    case.expected_big = rows_of(refs["big"])
    case.expected_small = [rows_of(group) for group in refs["small"]]
    for row in case.expected_big:
        if row.n != case.n or row.deg != case.deg:
            raise DatasetError("%s: big row %r does not match the case header"
                               % (path, row))
    for deg1, group in zip(case.deg1, case.expected_small):
        for row in group:
            if row.n != case.n1 or row.deg != deg1:
                raise DatasetError("%s: small row %r does not match the case "
                                   "header" % (path, row))


def _resolve_references(case, cases):
    """Fill in generator lists for group specs given by reference to an
    earlier case ("H_{n,k} of Case M") instead of inline."""
    for mk in case.markings:
        for kind, spec in [("G", mk["big"])] + [("G1", s) for s in mk["smalls"]]:
            _resolve_spec(spec, mk["model"], kind, case.case_no, cases, set())


def _resolve_spec(spec, model, kind, case_no, cases, seen):
    if spec["generators"] is not None:
        return
    src_no = spec["from_case"]
    if src_no is None:
        raise DatasetError("case %d: group %s has neither generators nor a "
                           "source case" % (case_no, spec["hname"]))
    if (src_no, spec["hname"], model) in seen:
        raise DatasetError("case %d: circular reference for %s"
                           % (case_no, spec["hname"]))
    seen.add((src_no, spec["hname"], model))
    if src_no not in cases:
        raise DatasetError("case %d: reference to missing case %d"
                           % (case_no, src_no))
    src = cases[src_no]
    mk = next((m for m in src.markings if m["model"] == model), None)
    if mk is None:
        raise DatasetError("case %d: case %d has no marking for %s"
                           % (case_no, src_no, model))
    # a subgroup block is introduced under its parent's name ("G1 < G =
    # H_x"), so names never distinguish the two roles; resolve by the
    # structural role of the reference and use the name only to pick among
    # several subgroup blocks.  Cross-role name matches are ignored: the
    # source text occasionally misnames its own group.
    target = None
    if kind == "G":
        target = ("G", mk["big"])
    else:
        for s in mk["smalls"]:
            if s["hname"] == spec["hname"]:
                target = ("G1", s)
                break
        if target is None:
            target = ("G1", mk["smalls"][0])
    tkind, cand = target
    _resolve_spec(cand, model, tkind, src_no, cases, seen)
    spec["generators"] = list(cand["generators"])


def _validate_generators(case):
    from .permgroup import parse_cycles, PermError
    for mk in case.markings:
        model = mk["model"]
        specs = [("G", mk["big"])] + [("G1", s) for s in mk["smalls"]]
        for kind, spec in specs:
            for text in spec["generators"]:
                try:
                    parse_cycles(text, model)
                except PermError:
                    if case.status == "OK":
                        raise DatasetError(
                            "case %d: unparseable %s generator %r"
                            % (case.case_no, kind, text))
                    # suspect cases may carry the printed typo; the
                    # corrected copy is checked separately
