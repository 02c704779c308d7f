"""3-CNF formulas: DIMACS I/O, literal numbering, occurrence counts, brute force."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple


class CnfError(ValueError):
    pass


class Literal(NamedTuple):
    var: int
    positive: bool = True

    def __neg__(self) -> "Literal":
        return Literal(self.var, not self.positive)

    def __str__(self) -> str:
        return f"{'' if self.positive else '-'}{self.var}"

    @classmethod
    def from_int(cls, x: int) -> "Literal":
        if x == 0:
            raise CnfError("literal 0")
        return cls(abs(x), x > 0)

    def to_int(self) -> int:
        return self.var if self.positive else -self.var


Clause = tuple[Literal, Literal, Literal]
Assignment = tuple[bool, ...]  # index var - 1


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        clauses = tuple(tuple(c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.num_vars < 0:
            raise CnfError("negative variable count")
        for i, clause in enumerate(clauses, start=1):
            if len(clause) != 3:
                raise CnfError(f"clause {i}: clause width {len(clause)}")
            for lit in clause:
                if not 1 <= lit.var <= self.num_vars:
                    raise CnfError(f"clause {i}: variable {lit.var} out of range 1..{self.num_vars}")

    @classmethod
    def from_ints(cls, num_vars: int, clauses) -> "CnfFormula":
        return cls(num_vars, tuple(tuple(Literal.from_int(x) for x in c) for c in clauses))

    def satisfied_by(self, assignment: Assignment) -> bool:
        if len(assignment) != self.num_vars:
            raise CnfError(f"assignment covers {len(assignment)} of {self.num_vars} variables")
        return all(any(assignment[l.var - 1] == l.positive for l in c) for c in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    ints: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: bad problem line {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise CnfError(f"line {lineno}: bad problem line {line!r}") from None
            continue
        if header is None:
            raise CnfError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                ints.append(int(tok))
            except ValueError:
                raise CnfError(f"line {lineno}: bad literal {tok!r}") from None
    if header is None:
        raise CnfError("missing 'p cnf' header")
    num_vars, num_clauses = header
    clauses = []
    current: list[int] = []
    for x in ints:
        if x == 0:
            if len(current) != 3:
                raise CnfError(f"clause {len(clauses) + 1}: clause width {len(current)}")
            clauses.append(current)
            current = []
        else:
            if abs(x) > num_vars:
                raise CnfError(f"clause {len(clauses) + 1}: variable {abs(x)} out of range 1..{num_vars}")
            current.append(x)
    if current:
        raise CnfError(f"clause {len(clauses) + 1}: missing terminating 0")
    if len(clauses) != num_clauses:
        raise CnfError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula.from_ints(num_vars, clauses)


def format_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


def literal_index(lit: Literal) -> int:
    """v_i -> 2i-1, -v_i -> 2i."""
    if lit.var < 1:
        raise CnfError(f"variable index {lit.var} out of range")
    return 2 * lit.var - 1 if lit.positive else 2 * lit.var


def index_literal(k: int, num_vars: int | None = None) -> Literal:
    if k < 1 or (num_vars is not None and k > 2 * num_vars):
        raise CnfError(f"literal index {k} out of range")
    return Literal((k + 1) // 2, k % 2 == 1)


@dataclass(frozen=True)
class OccurrenceTable:
    """Occurrence counts per literal index, 1-based: ``occ[0]`` and ``cum[0]`` are 0.

    ``position[(i, j)] = (k, m)``: the j-th literal of clause i is the m-th
    occurrence of literal k, with occurrences numbered in (i, j) order.
    """

    occ: tuple[int, ...]
    cum: tuple[int, ...]
    position: dict

    def occurrences(self, k: int) -> list[tuple[int, int]]:
        """(i, j) pairs of literal k ordered by occurrence number."""
        return sorted((ij for ij, (kk, _) in self.position.items() if kk == k),
                      key=lambda ij: self.position[ij][1])


def occurrence_table(formula: CnfFormula) -> OccurrenceTable:
    num_lits = 2 * formula.num_vars
    occ = [0] * (num_lits + 1)
    position = {}
    for i, clause in enumerate(formula.clauses, start=1):
        for j, lit in enumerate(clause, start=1):
            k = literal_index(lit)
            occ[k] += 1
            position[(i, j)] = (k, occ[k])
    cum = list(itertools.accumulate(occ))
    return OccurrenceTable(tuple(occ), tuple(cum), position)


def brute_force_sat(formula: CnfFormula, var_cap: int = 24) -> Assignment | None:
    """First satisfying assignment in lexicographic order with True before False."""
    if formula.num_vars > var_cap:
        raise CnfError(f"{formula.num_vars} variables exceeds brute-force cap {var_cap}")
    for assignment in itertools.product((True, False), repeat=formula.num_vars):
        if formula.satisfied_by(assignment):
            return assignment
    return None


def format_assignment(assignment: Assignment) -> str:
    return " ".join(str(v + 1 if val else -(v + 1)) for v, val in enumerate(assignment))


def random_formula(rng, max_vars: int, max_clauses: int, min_vars: int = 1,
                   min_clauses: int = 1) -> CnfFormula:
    """Uniform random 3-CNF; ``rng`` is a ``random.Random``."""
    num_vars = rng.randint(min_vars, max_vars)
    num_clauses = rng.randint(min_clauses, max_clauses)
    clauses = [
        tuple(Literal(rng.randint(1, num_vars), rng.random() < 0.5) for _ in range(3))
        for _ in range(num_clauses)
    ]
    return CnfFormula(num_vars, tuple(clauses))
