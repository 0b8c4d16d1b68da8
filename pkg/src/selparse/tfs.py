"""Typed feature structures: sorted, reentrant attribute-value graphs.

Nodes compare by identity; sharing one node between two feature paths is what
makes a structure reentrant.  Structures are treated as immutable once built,
and unification always returns fresh nodes, so lexical signs and chart edges
can be reused across analyses.

Only sorts declared in the semantic hierarchy have nontrivial meets.  Every
other node sort (structural sorts such as "sign" or "cat", and atoms such as
proper-name strings) belongs to a flat open inventory in which unification
demands equality.
"""

from dataclasses import dataclass, field

__all__ = [
    "CyclicStructureError",
    "FeatureStructure",
    "UnificationFailure",
    "check_acyclic",
    "isomorphic",
    "render",
    "subsumes_fs",
    "unify",
    "unify_map",
]


@dataclass(eq=False)
class FeatureStructure:
    """One node of an attribute-value graph: a sort plus named children."""

    sort: str
    feats: dict = field(default_factory=dict)

    def get(self, *path):
        """Follow a feature path; None when any step is missing."""
        node = self
        for feat in path:
            node = node.feats.get(feat)
            if node is None:
                return None
        return node

    def __repr__(self):
        inner = " " + ",".join(self.feats) if self.feats else ""
        return f"<fs {self.sort}{inner}>"


@dataclass(frozen=True)
class UnificationFailure:
    """Where and why a unification failed; falsy so callers can branch on it."""

    path: tuple
    sorts: tuple

    def __bool__(self):
        return False

    def __str__(self):
        where = "|".join(self.path) or "(root)"
        return f"sort conflict at {where}: {self.sorts[0]} ^ {self.sorts[1]}"


class CyclicStructureError(ValueError):
    """A feature path leads back to one of its own ancestors."""


def check_acyclic(root):
    """Reject structures whose feature paths cycle (sharing must stay DAG-shaped)."""
    on_path = set()
    done = set()

    def visit(node, path):
        if node in done:
            return
        if node in on_path:
            raise CyclicStructureError(
                "feature cycle at " + ("|".join(path) or "(root)"))
        on_path.add(node)
        for feat, child in node.feats.items():
            visit(child, path + (feat,))
        on_path.discard(node)
        done.add(node)

    visit(root, ())


def _meet(s1, s2, hierarchy):
    if s1 == s2:
        return s1
    if hierarchy.declared(s1) and hierarchy.declared(s2):
        return hierarchy.glb(s1, s2)
    return None


def unify_map(pairs, roots, hierarchy):
    """Merge node pairs inside one shared graph universe.

    Returns a mapping from every node reachable from `roots` or the paired
    nodes to its counterpart in a freshly built result graph, or a
    UnificationFailure.  Inputs are never mutated.  This is the workhorse
    behind `unify`; sign composition uses it directly because it needs the
    mapping to relocate the set-valued parts of a sign.
    """
    parent = {}

    def find(node):
        rep = node
        while rep in parent:
            rep = parent[rep]
        while node in parent:
            parent[node], node = rep, parent[node]
        return rep

    sort_of = {}
    feats_of = {}

    def activate(rep):
        if rep not in sort_of:
            sort_of[rep] = rep.sort
            feats_of[rep] = dict(rep.feats)

    agenda = [(a, b, ()) for a, b in pairs]
    while agenda:
        a, b, path = agenda.pop()
        ra, rb = find(a), find(b)
        if ra is rb:
            continue
        activate(ra)
        activate(rb)
        met = _meet(sort_of[ra], sort_of[rb], hierarchy)
        if met is None:
            return UnificationFailure(path, (sort_of[ra], sort_of[rb]))
        parent[rb] = ra
        sort_of[ra] = met
        merged = feats_of.pop(rb)
        del sort_of[rb]
        ours = feats_of[ra]
        for feat, child in merged.items():
            if feat in ours:
                agenda.append((ours[feat], child, path + (feat,)))
            else:
                ours[feat] = child

    built = {}

    def build(node):
        rep = find(node)
        if rep in built:
            return built[rep]
        activate(rep)
        fresh = FeatureStructure(sort_of[rep])
        built[rep] = fresh
        for feat, child in feats_of[rep].items():
            fresh.feats[feat] = build(child)
        return fresh

    mapping = {}
    stack = list(roots)
    for a, b in pairs:
        stack += [a, b]
    seen = set()
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        mapping[node] = build(node)
        stack.extend(node.feats.values())
    return mapping


def unify(a, b, hierarchy):
    """Unify two structures into the least structure subsumed by both.

    Node sorts meet in the semantic hierarchy (all other sorts must match
    exactly), feature sets merge, and reentrancies from both sides carry over
    into the fresh result.  A sort clash at any corresponding node pair
    returns a UnificationFailure naming the feature path and the two sorts.
    """
    got = unify_map([(a, b)], (a, b), hierarchy)
    if isinstance(got, UnificationFailure):
        return got
    return got[a]


def _sort_subsumes(s1, s2, hierarchy):
    if s1 == s2:
        return True
    return (hierarchy.declared(s1) and hierarchy.declared(s2)
            and hierarchy.subsumes(s1, s2))


def subsumes_fs(a, b, hierarchy):
    """True iff a describes b.

    Requires b to carry every feature path of a, a's sorts to subsume b's
    pointwise along those paths, and every reentrancy of a to be present
    in b.
    """
    image = {}

    def walk(x, y):
        if x in image:
            return image[x] is y
        if not _sort_subsumes(x.sort, y.sort, hierarchy):
            return False
        image[x] = y
        for feat, xc in x.feats.items():
            yc = y.feats.get(feat)
            if yc is None or not walk(xc, yc):
                return False
        return True

    return walk(a, b)


def isomorphic(a, b):
    """Equality up to node identity: same shapes, sorts, and sharing."""
    fwd = {}
    bwd = {}

    def walk(x, y):
        if x in fwd or y in bwd:
            return fwd.get(x) is y and bwd.get(y) is x
        if x.sort != y.sort or x.feats.keys() != y.feats.keys():
            return False
        fwd[x] = y
        bwd[y] = x
        return all(walk(x.feats[f], y.feats[f]) for f in x.feats)

    return walk(a, b)


def render(root):
    """Indented `feature: value` rendering; shared nodes are tagged #n."""
    counts = {}
    stack = [root]
    seen = set()
    while stack:
        node = stack.pop()
        counts[node] = counts.get(node, 0) + 1
        if node in seen:
            continue
        seen.add(node)
        stack.extend(node.feats.values())
    shared = {node for node, n in counts.items() if n > 1}

    tags = {}
    lines = []

    def visit(node, prefix, label):
        mark = ""
        if node in shared:
            if node in tags:
                lines.append(f"{prefix}{label}#{tags[node]}")
                return
            tags[node] = len(tags) + 1
            mark = f"#{tags[node]} "
        lines.append(f"{prefix}{label}{mark}{node.sort}")
        for feat, child in node.feats.items():
            visit(child, prefix + "  ", f"{feat}: ")

    visit(root, "", "")
    return "\n".join(lines)
