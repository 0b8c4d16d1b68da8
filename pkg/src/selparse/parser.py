"""Bottom-up chart parser over a small fixed schema set.

Binary schemas (head marked *):

    s    -> np *vp          head_subject
    vp/s -> *v np           head_complement
    np   -> det *nbar       det_nbar
    nbar -> adj *nbar       adj_nbar
    np   -> *np pp          np_pp
    np   -> *np relc        np_relc
    pp   -> *prep np        prep_np
    relc -> relpro *vp      relpro_vp

Verbal categories are derived from valence: a verb edge with pending
complements is v, with complements saturated but a pending subject vp, and
with nothing pending s.  Head-subject, head-complement and the relative
clause's subject satisfaction each unify a valence specification with the
dependent's whole sign, so sortal conflicts between indices surface here and,
under the "index" compilation method, prune analyses while parsing.  The
background set of every mother is the union of its daughters' sets; the
quantifier set grows by the noun's restriction when a determiner attaches.
"""

from dataclasses import dataclass

from .grammar import METHODS, PsoaRef, Sign, compile_entry
from .selres import Satisfiable, check_reading
from .tfs import UnificationFailure, unify_map

__all__ = [
    "Chart",
    "Edge",
    "Reading",
    "SCHEMAS",
    "UnknownTokenError",
    "combine",
    "count_parses",
    "derivation_string",
    "lexical_edges",
    "parse",
    "tokenize",
]

SCHEMAS = {
    ("np", "vp"): "head_subject",
    ("v", "np"): "head_complement",
    ("det", "nbar"): "det_nbar",
    ("adj", "nbar"): "adj_nbar",
    ("np", "pp"): "np_pp",
    ("np", "relc"): "np_relc",
    ("prep", "np"): "prep_np",
    ("relpro", "vp"): "relpro_vp",
}

_PHRASE_LABEL = {"s": "S", "np": "NP", "vp": "VP", "pp": "PP", "relc": "RelC"}

_PUNCTUATION = ".,!?;:"


class UnknownTokenError(ValueError):
    """One or more tokens have no lexical entry."""

    def __init__(self, tokens):
        self.tokens = tuple(tokens)
        super().__init__("unknown token(s): " + ", ".join(self.tokens))


def tokenize(text):
    """Lowercased whitespace tokens with edge punctuation stripped."""
    tokens = []
    for raw in text.lower().split():
        token = raw.strip(_PUNCTUATION)
        if token:
            tokens.append(token)
    return tokens


@dataclass(eq=False)
class Edge:
    """A chart edge: a sign over a token span plus its derivation record."""

    start: int
    end: int
    cat: str
    sign: Sign
    schema: str | None = None       # None marks a lexical edge
    children: tuple = ()
    entry: object = None            # LexicalEntry on lexical edges

    def leaves(self):
        if self.schema is None:
            return [self]
        out = []
        for child in self.children:
            out.extend(child.leaves())
        return out

    def __repr__(self):
        return f"<Edge {self.cat} {self.start}:{self.end} {' '.join(self.sign.phon)}>"


def derivation_string(edge):
    """Bracketed derivation like `(S (NP tom) (VP ate (NP a keyboard)))`."""
    if edge.children:
        inner = " ".join(derivation_string(child) for child in edge.children)
    else:
        inner = " ".join(edge.sign.phon)
    label = _PHRASE_LABEL.get(edge.cat)
    return f"({label} {inner})" if label else inner


@dataclass(eq=False)
class Reading:
    """One complete analysis: the sentence sign plus its derivation."""

    sign: Sign
    derivation: Edge
    method: str

    @property
    def derivation_string(self):
        return derivation_string(self.derivation)

    @property
    def sense_ids(self):
        return tuple(leaf.entry.sense_id for leaf in self.derivation.leaves())

    @property
    def identity(self):
        """Hashable identity: derivation shape plus lexical sense choices."""
        return (self.derivation_string, self.sense_ids)


def _lexical_cat(entry, sign):
    if entry.pos == "verb":
        if sign.comps:
            return "v"
        return "vp" if sign.subj else "s"
    return {
        "noun": "nbar",
        "proper-noun": "np",
        "determiner": "det",
        "preposition": "prep",
        "relative-pronoun": "relpro",
        "adjective": "adj",
    }[entry.pos]


def lexical_edges(tokens, lexicon, decls, hierarchy, method):
    """One edge per (token position, lexical sense), with fresh signs."""
    unknown = sorted({t for t in tokens if t not in lexicon})
    if unknown:
        raise UnknownTokenError(unknown)
    edges = []
    for i, token in enumerate(tokens):
        for entry in lexicon[token]:
            sign = compile_entry(entry, decls, method, hierarchy)
            edges.append(Edge(i, i + 1, _lexical_cat(entry, sign), sign,
                              entry=entry))
    return edges


def _remap(refs, mapping):
    return tuple(PsoaRef(mapping[ref.node], ref.source) for ref in refs)


def _union_bg(left, right):
    # background sets never hold two instances with identical role fillers
    out = []
    seen = set()
    for ref in (*left, *right):
        key = (ref.node.sort,
               tuple(sorted((f, id(v)) for f, v in ref.node.feats.items())))
        if key in seen:
            continue
        seen.add(key)
        out.append(ref)
    return tuple(out)


def _adjoin(head, left, right):
    # no valence involved: keep the head's core, pool the set-valued parts
    return Sign(
        phon=left.phon + right.phon,
        fs=head.fs,
        subj=head.subj,
        comps=head.comps,
        restr=left.restr + right.restr,
        quants=left.quants + right.quants,
        bg=_union_bg(left.bg, right.bg),
    )


def _determine(det, nbar):
    # the determiner turns the noun's restriction into its quantifier
    return Sign(
        phon=det.phon + nbar.phon,
        fs=nbar.fs,
        subj=nbar.subj,
        comps=nbar.comps,
        restr=(),
        quants=det.quants + nbar.quants + nbar.restr,
        bg=_union_bg(det.bg, nbar.bg),
    )


def _saturate(head, slot, dep, left, right, hierarchy):
    """Unify the head's next valence specification with the dependent's sign."""
    specs = getattr(head, slot)
    spec = specs[0]
    mapping = unify_map([(spec, dep.fs)],
                        head.graph_roots() + dep.graph_roots(), hierarchy)
    if isinstance(mapping, UnificationFailure):
        return None
    other = "comps" if slot == "subj" else "subj"
    valence = {
        slot: tuple(mapping[s] for s in specs[1:]),
        other: tuple(mapping[s] for s in getattr(head, other)),
    }
    return Sign(
        phon=left.phon + right.phon,
        fs=mapping[head.fs],
        restr=_remap(left.restr, mapping) + _remap(right.restr, mapping),
        quants=_remap(left.quants, mapping) + _remap(right.quants, mapping),
        bg=_union_bg(_remap(left.bg, mapping), _remap(right.bg, mapping)),
        **valence,
    )


def _attach_relative(np, relc, hierarchy):
    """Satisfy the relative clause's pending subject with the modified NP."""
    spec = relc.subj[0]
    mapping = unify_map([(spec, np.fs)],
                        np.graph_roots() + relc.graph_roots(), hierarchy)
    if isinstance(mapping, UnificationFailure):
        return None
    return Sign(
        phon=np.phon + relc.phon,
        fs=mapping[np.fs],
        restr=_remap(np.restr, mapping) + _remap(relc.restr, mapping),
        quants=_remap(np.quants, mapping) + _remap(relc.quants, mapping),
        bg=_union_bg(_remap(np.bg, mapping), _remap(relc.bg, mapping)),
    )


def combine(left, right, schema, hierarchy):
    """Apply one schema to two adjacent edges; None when unification blocks it."""
    lsign, rsign = left.sign, right.sign
    if schema == "head_subject":
        sign = _saturate(rsign, "subj", lsign, lsign, rsign, hierarchy)
        if sign is None:
            return None
        cat = "s"
    elif schema == "head_complement":
        sign = _saturate(lsign, "comps", rsign, lsign, rsign, hierarchy)
        if sign is None:
            return None
        cat = "v" if sign.comps else ("vp" if sign.subj else "s")
    elif schema == "np_relc":
        sign = _attach_relative(lsign, rsign, hierarchy)
        if sign is None:
            return None
        cat = "np"
    elif schema == "relpro_vp":
        sign = _adjoin(rsign, lsign, rsign)
        cat = "relc"
    elif schema == "det_nbar":
        sign = _determine(lsign, rsign)
        cat = "np"
    elif schema == "adj_nbar":
        sign = _adjoin(rsign, lsign, rsign)
        cat = "nbar"
    elif schema == "np_pp":
        sign = _adjoin(lsign, lsign, rsign)
        cat = "np"
    elif schema == "prep_np":
        sign = _adjoin(lsign, lsign, rsign)
        cat = "pp"
    else:
        raise ValueError(f"unknown schema {schema!r}")
    return Edge(left.start, right.end, cat, sign, schema, (left, right))


class Chart:
    """One parse's worth of edges, kept per span, plus size statistics.

    A chart is private to one parse; distinct sentences may be parsed
    concurrently against the same (immutable) lexicon and hierarchy.
    """

    def __init__(self, tokens, lexicon, decls, hierarchy, method="bg"):
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}")
        self.tokens = list(tokens)
        self.lexicon = lexicon
        self.decls = decls
        self.hierarchy = hierarchy
        self.method = method
        self.cells = {}
        self.edges_built = 0
        self._filled = False

    def _add(self, edge):
        self.cells.setdefault((edge.start, edge.end), []).append(edge)
        self.edges_built += 1

    def fill(self):
        if self._filled:
            return self
        for edge in lexical_edges(self.tokens, self.lexicon, self.decls,
                                  self.hierarchy, self.method):
            self._add(edge)
        n = len(self.tokens)
        for width in range(2, n + 1):
            for start in range(0, n - width + 1):
                end = start + width
                for split in range(start + 1, end):
                    for l_edge in self.cells.get((start, split), ()):
                        for r_edge in self.cells.get((split, end), ()):
                            schema = SCHEMAS.get((l_edge.cat, r_edge.cat))
                            if schema is None:
                                continue
                            edge = combine(l_edge, r_edge, schema, self.hierarchy)
                            if edge is not None:
                                self._add(edge)
        self._filled = True
        return self

    def readings(self):
        """Complete-sentence readings: saturated verbal edges spanning everything."""
        self.fill()
        full = self.cells.get((0, len(self.tokens)), ())
        return [Reading(edge.sign, edge, self.method)
                for edge in full if edge.cat == "s"]


def parse(tokens, lexicon, decls, hierarchy, method="bg"):
    """All complete-sentence readings of the token list under one method."""
    return Chart(tokens, lexicon, decls, hierarchy, method).readings()


def count_parses(tokens, lexicon, decls, hierarchy, method="bg"):
    """(pre_filter, post_filter) reading counts for one sentence.

    pre_filter counts readings with selectional checking disabled.  Nothing
    prunes during a "bg" parse (all indices stay at the root sort and the
    background set never blocks a unification), so the bg chart doubles as
    the unfiltered baseline.  post_filter counts survivors: solver-approved
    readings under "bg", the pruned chart's own readings under "index".
    """
    baseline = parse(tokens, lexicon, decls, hierarchy, "bg")
    if method == "bg":
        post = sum(1 for r in baseline
                   if isinstance(check_reading(r, hierarchy), Satisfiable))
    elif method == "index":
        post = len(parse(tokens, lexicon, decls, hierarchy, "index"))
    else:
        raise ValueError(f"unknown method {method!r}")
    return len(baseline), post
