"""Clause matrices, satisfaction counting, the exhaustive oracle, DIMACS I/O."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from satrpm.cnf import (
    BRUTE_FORCE_MAX_VARS,
    ClauseMatrix,
    DimensionError,
    all_assignments,
    brute_force_maxsat,
    clause_satisfaction,
    from_dimacs,
    read_dimacs,
    to_dimacs,
    write_dimacs,
)

# The four-clause, two-variable formula (p1 v p2)(~p1 v p2)(p1 v ~p2)(~p1 v ~p2):
# unsatisfiable as a whole, best assignments satisfy three clauses out of four.
FOUR_CLAUSE = ClauseMatrix(np.array([
    [+1, +1],
    [-1, +1],
    [+1, -1],
    [-1, -1],
]))

# {(p1 v p2), (~p1 v p3), (~p2 v ~p3)}
THREE_CLAUSE = ClauseMatrix(np.array([
    [+1, +1, 0],
    [-1, 0, +1],
    [0, -1, -1],
]))


def count_by_literal_walk(S, p):
    """Independent satisfaction count: explicit loop over literals."""
    count = 0
    for row in S.entries:
        sat = False
        for j, v in enumerate(row):
            if v == 1 and p[j] == 1:
                sat = True
            if v == -1 and p[j] == -1:
                sat = True
        count += sat
    return count


class TestClauseMatrix:
    def test_rejects_empty_clause(self):
        with pytest.raises(DimensionError, match="empty clause"):
            ClauseMatrix(np.array([[1, 0], [0, 0]]))

    def test_rejects_out_of_domain_entries(self):
        with pytest.raises(DimensionError):
            ClauseMatrix(np.array([[2, 0], [1, 1]]))

    def test_rejects_degenerate_shapes(self):
        with pytest.raises(DimensionError):
            ClauseMatrix(np.zeros((0, 3), dtype=int))

    def test_from_clauses(self):
        S = ClauseMatrix.from_clauses([[1, 2], [-1, 3], [-2, -3]])
        assert (S.entries == THREE_CLAUSE.entries).all()
        assert S.m == 3 and S.n == 3

    def test_literal_counts(self):
        assert THREE_CLAUSE.literal_counts().tolist() == [2, 2, 2]


class TestClauseSatisfaction:
    def test_four_clause_formula_best_is_three(self):
        assert clause_satisfaction(FOUR_CLAUSE, np.array([1, 1])) == 3

    def test_single_unit_clause(self):
        S = ClauseMatrix(np.array([[1]]))
        assert clause_satisfaction(S, np.array([1])) == 1

    def test_three_clause_hand_enumeration(self):
        assert clause_satisfaction(THREE_CLAUSE, np.array([-1, 1, -1])) == 3

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            clause_satisfaction(THREE_CLAUSE, np.array([1, 1]))

    def test_rejects_non_sign_assignment(self):
        with pytest.raises(DimensionError):
            clause_satisfaction(THREE_CLAUSE, np.array([1, 0, 1]))

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_matches_literal_walk_oracle(self, data):
        n = data.draw(st.integers(1, 12))
        m = data.draw(st.integers(1, 8))
        rows = []
        for _ in range(m):
            row = data.draw(st.lists(st.sampled_from([-1, 0, 1]),
                                     min_size=n, max_size=n))
            if not any(row):
                row[data.draw(st.integers(0, n - 1))] = 1
            rows.append(row)
        S = ClauseMatrix(np.array(rows))
        p = np.array(data.draw(st.lists(st.sampled_from([-1, 1]),
                                        min_size=n, max_size=n)))
        assert clause_satisfaction(S, p) == count_by_literal_walk(S, p)


class TestBruteForce:
    def test_four_clause_optimum(self):
        opt, witness = brute_force_maxsat(FOUR_CLAUSE)
        assert opt == 3
        assert clause_satisfaction(FOUR_CLAUSE, witness) == 3

    def test_complementary_unit_clauses(self):
        S = ClauseMatrix(np.array([[1], [-1]]))
        opt, _ = brute_force_maxsat(S)
        assert opt == 1

    def test_three_clause_witness_tie_break(self):
        opt, witness = brute_force_maxsat(THREE_CLAUSE)
        assert opt == 3
        # (-1,+1,-1) and (+1,-1,+1) both satisfy 3; lexicographically
        # smaller (with -1 < +1) wins.
        assert witness.tolist() == [-1, 1, -1]

    def test_enumeration_guard(self):
        S = ClauseMatrix(np.eye(BRUTE_FORCE_MAX_VARS + 1, dtype=int))
        with pytest.raises(DimensionError, match="enumeration guard"):
            brute_force_maxsat(S)

    def test_assignment_order_is_lexicographic(self):
        seen = [p.tolist() for p in all_assignments(2)]
        assert seen == [[-1, -1], [-1, 1], [1, -1], [1, 1]]


class TestDimacs:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "f.cnf"
        write_dimacs(THREE_CLAUSE, path)
        back = read_dimacs(path)
        assert (back.entries == THREE_CLAUSE.entries).all()

    def test_header_format(self):
        text = to_dimacs(FOUR_CLAUSE)
        assert text.splitlines()[0] == "p cnf 2 4"
        assert text.splitlines()[1] == "1 2 0"

    def test_comments_skipped(self):
        text = "c a comment\np cnf 2 1\nc another\n1 -2 0\n"
        S = from_dimacs(text)
        assert S.entries.tolist() == [[1, -1]]

    def test_missing_header_rejected(self):
        with pytest.raises(DimensionError, match="header"):
            from_dimacs("1 2 0\n")

    def test_clause_count_mismatch_rejected(self):
        with pytest.raises(DimensionError, match="clauses"):
            from_dimacs("p cnf 2 2\n1 2 0\n")

    def test_trailing_unterminated_clause_rejected(self):
        with pytest.raises(DimensionError, match="terminator"):
            from_dimacs("p cnf 2 1\n1 2\n")

    def test_random_round_trips(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            n = int(rng.integers(1, 9))
            m = int(rng.integers(1, 12))
            entries = np.zeros((m, n), dtype=int)
            for i in range(m):
                nlit = int(rng.integers(1, n + 1))
                idx = rng.choice(n, size=nlit, replace=False)
                entries[i, idx] = rng.choice([-1, 1], size=nlit)
            S = ClauseMatrix(entries)
            assert (from_dimacs(to_dimacs(S)).entries == S.entries).all()
