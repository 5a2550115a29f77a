from fractions import Fraction as Q

import pytest

from orthoforms import (
    build_dual_set,
    enumerate_candidates,
    full_table,
    ledger_arithmetic_checks,
    modified_coxeter_value,
    realize,
    resolve,
)
from orthoforms.classify import (
    GROUP_DK,
    GROUP_FULL,
    GROUP_O1,
    POOL,
    CandidateSystem,
    pool_modified_coxeter,
    report_to_json,
    report_to_text,
)

EXPECTED_26 = {
    ("A1", GROUP_FULL),
    ("2A1", GROUP_FULL),
    ("3A1", GROUP_FULL),
    ("4A1", GROUP_FULL),
    ("A2", GROUP_DK),
    ("A2", GROUP_FULL),
    ("A3", GROUP_DK),
    ("A3", GROUP_FULL),
    ("A4", GROUP_DK),
    ("A5", GROUP_DK),
    ("A6", GROUP_DK),
    ("A7", GROUP_DK),
    ("D4", GROUP_DK),
    ("D5", GROUP_DK),
    ("D6", GROUP_DK),
    ("D7", GROUP_DK),
    ("D8", GROUP_DK),
    ("D4", GROUP_FULL),
    ("D5", GROUP_FULL),
    ("D6", GROUP_FULL),
    ("D7", GROUP_FULL),
    ("D8", GROUP_FULL),
    ("D4", GROUP_O1),
    ("E6", GROUP_DK),
    ("E7", GROUP_FULL),
    ("E8", GROUP_FULL),
}


class TestPool:
    def test_regenerated_by_brute_force(self):
        """The admissible pool must match a scan over all table cases.

        A (family, d) pair is admissible when some rank <= 8 gives an
        integral modified Coxeter number of at least rank + 1, for at least
        one div/subcase branch.
        """
        families = {
            "A": range(1, 9),
            "B": range(2, 9),
            "C": range(3, 9),
            "D": range(4, 9),
            "E6": (6,),
            "E7": (7,),
            "E8": (8,),
            "G2": (2,),
            "F4": (4,),
        }
        regenerated = set()
        for family, ranks in families.items():
            for d in range(1, 13):
                for n in ranks:
                    branches = [("d", None)]
                    if family == "B" or (family == "A" and n == 1):
                        branches += [("2d", s) for s in ("i", "ii", "iii")]
                    for div_case, sub in branches:
                        h = modified_coxeter_value(family, n, d, div_case, sub)
                        if h.denominator == 1 and h >= n + 1:
                            regenerated.add((family, d))
        declared = {(family, d) for family, d, _ in POOL}
        assert regenerated == declared

    def test_pool_values_integral(self):
        for family, d, ranks in POOL:
            for n in ranks:
                h = pool_modified_coxeter(family, n, d)
                assert h >= 1


class TestEnumeration:
    def test_candidate_count_and_members(self):
        cands = enumerate_candidates()
        labels = {c.label for c in cands}
        assert len(cands) == 35
        assert "E8" in labels and "E8(3)" in labels and "2xF4(2)" in labels
        assert "A3+A3" not in labels  # h = 4 < 7
        multis = [c for c in cands if len(c.components) > 1]
        assert [c.label for c in multis] == ["2xF4(2)"]

    def test_filters(self):
        for c in enumerate_candidates():
            assert c.common_h.denominator == 1
            assert c.common_h >= c.total_rank + 1
            assert c.total_rank <= 8
            hs = {pool_modified_coxeter(f, n, d) for f, n, d in c.components}
            assert hs == {c.common_h}

    def test_monotone_in_rank_bound(self):
        prev: set = set()
        for bound in range(1, 9):
            current = {c.components for c in enumerate_candidates(bound)}
            assert prev <= current
            prev = current

    def test_e8_kept(self):
        cands = enumerate_candidates()
        assert any(c.components == (("E8", 8, 1),) for c in cands)


class TestResolve:
    def test_b4_maps_to_4a1(self):
        rec = resolve(CandidateSystem((("B", 4, 1),), 4, Q(5)))
        assert (rec.verdict, rec.lattice_label, rec.group_label) == (
            "accepted",
            "4A1",
            GROUP_FULL,
        )

    def test_e8_scale3_excluded_with_weight_check(self):
        rec = resolve(CandidateSystem((("E8", 8, 3),), 8, Q(10)))
        assert rec.verdict == "excluded"
        assert rec.reason == "weight-12-impossible"
        assert ("k", "12/1") in rec.checks

    def test_a8_excluded_by_citation(self):
        rec = resolve(CandidateSystem((("A", 8, 1),), 8, Q(9)))
        assert rec.verdict == "excluded"
        assert rec.checks == ()
        assert "complete 2-divisor" in rec.citation

    def test_c3_goes_to_a3(self):
        rec = resolve(CandidateSystem((("C", 3, 1),), 3, Q(5)))
        assert (rec.lattice_label, rec.group_label) == ("A3", GROUP_FULL)

    def test_c4_goes_to_o1(self):
        rec = resolve(CandidateSystem((("C", 4, 1),), 4, Q(7)))
        assert (rec.lattice_label, rec.group_label) == ("D4", GROUP_O1)


class TestFullTable:
    def test_exactly_26_accepted(self):
        report = full_table()
        assert len(report.accepted) == 26
        assert not report.unresolved

    def test_matches_expected_set(self):
        report = full_table()
        got = {(r.lattice_label, r.group_label) for r in report.accepted}
        assert got == EXPECTED_26

    def test_d4_o1_appears_once(self):
        report = full_table()
        rows = [r for r in report.accepted if (r.lattice_label, r.group_label) == ("D4", GROUP_O1)]
        assert len(rows) == 1

    def test_a2_has_two_groups(self):
        report = full_table()
        groups = {r.group_label for r in report.accepted if r.lattice_label == "A2"}
        assert groups == {GROUP_DK, GROUP_FULL}

    def test_partial_table_subset(self):
        partial = full_table(max_rank=4)
        full = full_table()
        partial_set = {(r.lattice_label, r.group_label) for r in partial.accepted}
        full_set = {(r.lattice_label, r.group_label) for r in full.accepted}
        assert partial_set <= full_set
        assert ("A4", GROUP_DK) in partial_set and ("A5", GROUP_DK) not in partial_set

    def test_deterministic_rendering(self):
        a = report_to_text(full_table())
        b = report_to_text(full_table())
        assert a == b
        ja = report_to_json(full_table())
        assert ja == report_to_json(full_table())

    def test_filter_soundness_against_realizations(self):
        """common_h recomputed from realized components via the sum rule."""
        from orthoforms import quadratic_weyl_constant, qzero_from_dual_sets
        import dataclasses

        for cand in enumerate_candidates():
            for family, n, d in set(cand.components):
                comp = realize(family, n, d)
                plain = dataclasses.replace(comp, short_div=comp.d, subcase=None)
                phi = qzero_from_dual_sets(comp.lattice, [build_dual_set(plain)])
                assert quadratic_weyl_constant(phi).c == cand.common_h


class TestLedgerChecks:
    def test_all_pass(self):
        checks = ledger_arithmetic_checks()
        assert len(checks) == 5
        assert all(c.passed for c in checks)

    def test_values_recorded(self):
        by_code = {c.code: c for c in ledger_arithmetic_checks()}
        assert dict(by_code["rank-bound-weight-deficit"].values) == {
            "lhs": "132",
            "rhs": "170",
        }
        assert ("k", "12/1") in by_code["e8-scale3-weight"].values
        assert ("weight", "56/1") in by_code["n8-bookkeeping"].values


class TestRendering:
    def test_json_schema(self):
        doc = report_to_json(full_table())
        assert {"lattice": "D4", "group": "O1+"} in doc["accepted"]
        excluded_names = {e["candidate"] for e in doc["excluded"]}
        assert "E8(3)" in excluded_names
        e83 = next(e for e in doc["excluded"] if e["candidate"] == "E8(3)")
        assert e83["check"]["k"] == "12/1"
        assert e83["reason"] == "weight-12-impossible"

    def test_text_contains_all_rows(self):
        text = report_to_text(full_table())
        assert text.count("(") >= 26
        assert "(D4, O1+)" in text
        assert "excluded candidates: 9" in text
