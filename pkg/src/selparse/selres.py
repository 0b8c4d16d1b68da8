"""Post-parse checking of sortal constraints carried by a finished reading.

The checker collects the single-role relation instances whose relation name
is itself a sort of the hierarchy, treating each as a constraint on the
index variable filling its role.  Two constraints on one variable can be
replaced by a constraint for each of their sorts' maximal lower bounds; a
reading is acceptable exactly when every variable reduces to a single
constraint this way.
"""

from dataclasses import dataclass, field

__all__ = [
    "ConstraintAtom",
    "Satisfiable",
    "Violation",
    "check_reading",
    "extract_constraints",
    "merge_pair",
    "solve",
]


@dataclass(frozen=True)
class ConstraintAtom:
    """One single-role constraint: `sort(var)`.

    `source` records the surface word whose sign contributed the constraint;
    it is carried along for diagnostics and ignored by comparisons.
    """

    sort: str
    var: int
    source: str | None = field(default=None, compare=False)

    def __str__(self):
        return f"{self.sort}({self.var})"


@dataclass
class Satisfiable:
    """Success: exactly one sort per constrained variable."""

    assignment: dict


@dataclass
class Violation:
    """Failure on `var`: the conflicting sorts admit no common lower bound."""

    var: int
    conflicting: frozenset
    narrative: str


def extract_constraints(reading, hierarchy):
    """Constraint atoms read off a reading's sign.

    Scans the quantifier set, the restriction set, the nucleus, and the
    background set, keeping single-role instances whose relation name is a
    declared sort (which excludes relations like `naming`, and single-role
    verb nuclei without a same-named sort).  Requires a reading produced
    under the "bg" method to be informative, since "index" compilation
    carries restrictions on the indices instead.
    """
    sign = reading.sign
    numbers = sign.index_numbering(hierarchy)
    atoms = []

    def consider(node, source):
        if len(node.feats) != 1:
            return
        if not hierarchy.declared(node.sort):
            return
        (filler,) = node.feats.values()
        var = numbers.get(filler)
        if var is not None:
            atoms.append(ConstraintAtom(node.sort, var, source))

    for ref in sign.quants:
        consider(ref.node, ref.source)
    for ref in sign.restr:
        consider(ref.node, ref.source)
    nucleus = sign.nucleus
    if nucleus is not None:
        consider(nucleus, None)
    for ref in sign.bg:
        consider(ref.node, ref.source)
    return atoms


def merge_pair(c1, c2, hierarchy):
    """Candidate replacements for two same-variable constraints.

    One candidate per maximal lower bound of the two sorts; the empty set
    signals a conflict.  Constraints on different variables are a usage
    fault, not a conflict.
    """
    if c1.var != c2.var:
        raise ValueError(
            f"constraints on different variables: {c1.var} != {c2.var}")
    return frozenset(ConstraintAtom(sort, c1.var)
                     for sort in hierarchy.maximal_lower_bounds(c1.sort, c2.sort))


def _reduce_variable(var, group, hierarchy):
    """Fold a variable's constraints down to one, branching on merge ties.

    Returns (final sort, None) on success, or (None, conflict) where the
    conflict is the first irreplaceable pair met on the leftmost branch.
    """
    first_conflict = None

    def dfs(items):
        nonlocal first_conflict
        if len(items) == 1:
            return items[0][0]
        (s1, src1), (s2, src2) = items[0], items[1]
        rest = items[2:]
        candidates = merge_pair(ConstraintAtom(s1, var),
                                ConstraintAtom(s2, var), hierarchy)
        if not candidates:
            if first_conflict is None:
                first_conflict = ((s1, src1), (s2, src2))
            return None
        merged_sources = src1 + src2
        for candidate in sorted(c.sort for c in candidates):
            final = dfs([(candidate, merged_sources)] + rest)
            if final is not None:
                return final
        return None

    items = [(atom.sort, (atom.source,) if atom.source else ())
             for atom in group]
    final = dfs(items)
    return final, (None if final is not None else first_conflict)


def solve(atoms, hierarchy):
    """Reduce a constraint multiset to at most one constraint per variable.

    Variables are handled independently, lowest-numbered first.  Within a
    variable, constraints fold left to right in the order given, branching
    whenever a pair has several maximal lower bounds, so the outcome does
    not depend on hierarchies having unique meets.  Returns Satisfiable with
    the final sort per variable, or a Violation for the lowest variable
    whose constraints admit no common lower bound.
    """
    grouped = {}
    for atom in atoms:
        grouped.setdefault(atom.var, []).append(atom)
    assignment = {}
    for var in sorted(grouped):
        final, conflict = _reduce_variable(var, grouped[var], hierarchy)
        if final is None:
            (s1, sources1), (s2, sources2) = conflict
            words = [w for w in (*sources1, *sources2) if w]
            narrative = f"violation: var={var} sorts={s1},{s2}"
            if words:
                narrative += " from=" + ",".join(words)
            return Violation(var, frozenset({s1, s2}), narrative)
        assignment[var] = final
    return Satisfiable(assignment)


def check_reading(reading, hierarchy):
    """Extract a reading's constraints and solve them."""
    return solve(extract_constraints(reading, hierarchy), hierarchy)
