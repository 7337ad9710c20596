"""CNF formulas as signed incidence matrices, with an exhaustive MAXSAT oracle.

A formula over n propositional variables with m clauses is stored as an
integer matrix S of shape (m, n) with entries in {-1, 0, +1}: +1 for a
positive literal, -1 for a negated literal, 0 when the variable does not
occur in the clause.  Assignments are length-n vectors over {-1, +1} with
+1 meaning true.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Exhaustive enumeration refuses formulas above this width.
BRUTE_FORCE_MAX_VARS = 22


class DimensionError(ValueError):
    """A formula/assignment contract was violated (shape or value domain)."""


@dataclass(frozen=True)
class ClauseMatrix:
    """Signed clause-variable incidence matrix of a CNF formula."""

    entries: np.ndarray = field()

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.int64)
        if entries.ndim != 2:
            raise DimensionError(f"clause matrix must be 2-D, got shape {entries.shape}")
        m, n = entries.shape
        if m < 1 or n < 1:
            raise DimensionError(f"need at least one clause and one variable, got {m}x{n}")
        if not np.isin(entries, (-1, 0, 1)).all():
            raise DimensionError("clause entries must lie in {-1, 0, +1}")
        empty = ~entries.astype(bool).any(axis=1)
        if empty.any():
            raise DimensionError(f"empty clause at row(s) {np.flatnonzero(empty).tolist()}")
        object.__setattr__(self, "entries", entries)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def literal_counts(self) -> np.ndarray:
        """Number of literals per clause, shape (m,)."""
        return np.abs(self.entries).sum(axis=1)

    @classmethod
    def from_clauses(cls, clauses, n: int | None = None) -> "ClauseMatrix":
        """Build from DIMACS-style literal lists, e.g. [[1, -2], [2, 3]]."""
        clauses = [list(c) for c in clauses]
        if not clauses:
            raise DimensionError("formula has no clauses")
        maxvar = max((abs(l) for c in clauses for l in c), default=0)
        if n is None:
            n = maxvar
        if maxvar > n:
            raise DimensionError(f"literal references variable {maxvar} > n = {n}")
        entries = np.zeros((len(clauses), n), dtype=np.int64)
        for i, clause in enumerate(clauses):
            for lit in clause:
                if lit == 0:
                    raise DimensionError("literal 0 is reserved as the clause terminator")
                entries[i, abs(lit) - 1] = 1 if lit > 0 else -1
        return cls(entries)


def check_assignment(S: ClauseMatrix, p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=np.int64).reshape(-1)
    if p.shape[0] != S.n:
        raise DimensionError(f"assignment length {p.shape[0]} != n = {S.n}")
    if not np.isin(p, (-1, 1)).all():
        raise DimensionError("assignment entries must lie in {-1, +1}")
    return p


def clause_satisfaction(S: ClauseMatrix, p: np.ndarray) -> int:
    """Number of clauses with at least one literal agreeing with p."""
    p = check_assignment(S, p)
    return int((S.entries * p > 0).any(axis=1).sum())


def all_assignments(n: int):
    """All 2^n assignments in lexicographic order with -1 < +1."""
    for code in range(1 << n):
        yield np.array([1 if (code >> (n - 1 - j)) & 1 else -1 for j in range(n)],
                       dtype=np.int64)


def brute_force_maxsat(S: ClauseMatrix) -> tuple[int, np.ndarray]:
    """Exhaustive MAXSAT: best satisfied-clause count and its witness.

    Ties are broken toward the lexicographically smallest assignment
    (with -1 ordered before +1) so results are deterministic.
    """
    if S.n > BRUTE_FORCE_MAX_VARS:
        raise DimensionError(
            f"n = {S.n} exceeds the enumeration guard ({BRUTE_FORCE_MAX_VARS} variables)")
    best = -1
    witness = None
    for p in all_assignments(S.n):
        count = int((S.entries * p > 0).any(axis=1).sum())
        if count > best:
            best, witness = count, p
            if best == S.m:
                break
    return best, witness


# ---------------------------------------------------------------------------
# DIMACS-style plain text CNF
# ---------------------------------------------------------------------------

def to_dimacs(S: ClauseMatrix) -> str:
    """Render as DIMACS CNF: `p cnf n m` header, one 0-terminated clause per line."""
    lines = [f"p cnf {S.n} {S.m}"]
    for row in S.entries:
        lits = [str(int(v) * (j + 1)) for j, v in enumerate(row) if v != 0]
        lines.append(" ".join(lits) + " 0")
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> ClauseMatrix:
    """Parse DIMACS CNF text. Comment lines (`c ...`) are skipped."""
    n = m = None
    tokens: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimensionError(f"malformed problem line: {line!r}")
            n, m = int(parts[2]), int(parts[3])
            continue
        tokens.extend(int(t) for t in line.split())
    if n is None:
        raise DimensionError("missing `p cnf` header")
    clauses: list[list[int]] = []
    current: list[int] = []
    for tok in tokens:
        if tok == 0:
            clauses.append(current)
            current = []
        else:
            current.append(tok)
    if current:
        raise DimensionError("trailing clause without 0 terminator")
    if len(clauses) != m:
        raise DimensionError(f"header declares {m} clauses, found {len(clauses)}")
    return ClauseMatrix.from_clauses(clauses, n=n)


def read_dimacs(path) -> ClauseMatrix:
    with open(path, "r", encoding="ascii") as fh:
        return from_dimacs(fh.read())


def write_dimacs(S: ClauseMatrix, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(to_dimacs(S))
