import logging
from itertools import combinations
from django.core.exceptions import ValidationError




logger = logging.getLogger(__name__)




def faces_of(simplex):

    """ All nonempty faces of a sorted tuple, itself included. """

    for size in range(1, len(simplex) + 1):
        yield from combinations(simplex, size)




class SimplicialComplex:

    """
    Finite simplicial complex on vertices 0..n-1 (with display labels). Simplices are
    sorted vertex tuples; simplices(q) lists the q-simplices in a fixed lexicographic order.
    """

    def __init__(self, labels, facets):
        self.labels = tuple(labels)
        self.index = {label: i for i, label in enumerate(self.labels)}
        simplices = set()
        for facet in facets:
            simplices.update(faces_of(tuple(sorted(facet))))
        simplices.update((v,) for v in range(len(self.labels)))
        self.dimension = max((len(s) - 1 for s in simplices), default=-1)
        self._simplices = [sorted(s for s in simplices if len(s) == q + 1) for q in range(self.dimension + 1)]
        self._positions = [{s: k for k, s in enumerate(level)} for level in self._simplices]
        self.facets = tuple(sorted(s for s in simplices if not self._has_coface(s, simplices, len(self.labels))))
        self._stars = {}


    @staticmethod
    def _has_coface(simplex, simplices, n):
        return any(tuple(sorted(simplex + (v,))) in simplices for v in range(n) if v not in simplex)


    @property
    def n_vertices(self):
        return len(self.labels)


    def simplices(self, q):
        if 0 <= q <= self.dimension:
            return self._simplices[q]
        return []


    def count(self, q):
        return len(self.simplices(q))


    def position(self, simplex):
        return self._positions[len(simplex) - 1][simplex]


    def contains(self, simplex):
        q = len(simplex) - 1
        return 0 <= q <= self.dimension and simplex in self._positions[q]


    def all_simplices(self):
        for level in self._simplices:
            yield from level


    def euler_characteristic(self):
        return sum((-1) ** q * self.count(q) for q in range(self.dimension + 1))


    def label(self, simplex):
        return ''.join(str(self.labels[v]) for v in simplex) if all(len(str(l)) == 1 for l in self.labels) \
            else '-'.join(str(self.labels[v]) for v in simplex)


    def vertex_index(self, label):
        if label in self.index:
            return self.index[label]
        raise ValidationError(f"Unknown vertex {label!r}", code='unknown_vertex')


    def closed_star(self, core):
        core = tuple(sorted(set(core)))
        star = self._stars.get(core)
        if star is None:
            for v in core:
                if not 0 <= v < self.n_vertices:
                    raise ValidationError(f"Unknown vertex {v!r}", code='unknown_vertex')
            star = StarSubcomplex(self, core)
            self._stars[core] = star
        return star


    def __repr__(self):
        counts = [self.count(q) for q in range(self.dimension + 1)]
        return f"SimplicialComplex(vertices={self.n_vertices}, f-vector={counts})"




class StarSubcomplex:

    """
    St(S): all faces of the simplices containing the vertex set S. Empty exactly when S
    spans no simplex; the empty core gives the whole complex.
    """

    def __init__(self, base, core):
        self.base = base
        self.core = tuple(core)
        members = set()
        if not core or base.contains(self.core):
            for facet in base.facets:
                if set(self.core) <= set(facet):
                    members.update(faces_of(facet))
        self.dimension = max((len(s) - 1 for s in members), default=-1)
        self._simplices = [sorted(s for s in members if len(s) == q + 1) for q in range(self.dimension + 1)]
        self._positions = [{s: k for k, s in enumerate(level)} for level in self._simplices]


    @property
    def is_empty(self):
        return self.dimension < 0


    @property
    def n_vertices(self):
        return self.base.n_vertices


    def simplices(self, q):
        if 0 <= q <= self.dimension:
            return self._simplices[q]
        return []


    def count(self, q):
        return len(self.simplices(q))


    def position(self, simplex):
        return self._positions[len(simplex) - 1][simplex]


    def contains(self, simplex):
        q = len(simplex) - 1
        return 0 <= q <= self.dimension and simplex in self._positions[q]


    def all_simplices(self):
        for level in self._simplices:
            yield from level


    def __repr__(self):
        return f"StarSubcomplex(core={self.core}, simplices={sum(map(len, self._simplices))})"




def build_complex(facets, vertices=None):

    """
    Builds a complex from facets given as iterables of vertex labels.

    Args:
    facets (list): vertex-label collections; every face is added.
    vertices (list, optional): explicit vertex order; otherwise vertices are numbered in
        order of first appearance.

    Raises:
    ValidationError: code 'empty_facet' for an empty facet, 'unknown_vertex' when a facet
        names a vertex missing from `vertices`.
    """

    facets = [list(f) for f in facets]
    if not facets:
        raise ValidationError("A complex needs at least one facet", code='empty_facet')
    labels = list(vertices) if vertices is not None else []
    index = {label: i for i, label in enumerate(labels)}
    numbered = []
    for k, facet in enumerate(facets):
        if not facet:
            raise ValidationError(f"Facet {k} is empty", code='empty_facet')
        simplex = set()
        for label in facet:
            if label not in index:
                if vertices is not None:
                    raise ValidationError(f"Facet {k} names unknown vertex {label!r}", code='unknown_vertex')
                index[label] = len(labels)
                labels.append(label)
            simplex.add(index[label])
        numbered.append(tuple(sorted(simplex)))
    complex_ = SimplicialComplex(labels, numbered)
    logger.debug(f"Built {complex_}")
    return complex_




def closed_star(complex_, core):

    """ St(S) for a collection of vertex labels. """

    return complex_.closed_star(complex_.vertex_index(v) for v in core)
