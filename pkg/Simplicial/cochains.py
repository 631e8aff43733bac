import logging
from fractions import Fraction
from Algebra.modules import MixedModule
from Algebra.mixed import MixedSpace, MixedMap, MixedComplex
from Algebra.cohomology import kernel, cohomology_at
from Algebra.exceptions import StructuralError, PreconditionError
from Simplicial.complexes import SimplicialComplex




logger = logging.getLogger(__name__)

RINGS = ('Z', 'Q', 'T')




def permutation_sign(sequence):

    """ (+1 or -1, sorted tuple) for a sequence of distinct vertices. """

    items = list(sequence)
    sign = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign, tuple(sorted(items))




def boundary_faces(simplex):

    """ (sign, face) pairs of the alternating vertex-deletion formula. """

    return [((-1) ** i, simplex[:i] + simplex[i + 1:]) for i in range(len(simplex))]




class SimplicialCochain:

    """
    A q-cochain with Z or Q values on the q-simplices of `support`, which is either a
    SimplicialComplex or one of its StarSubcomplexes.
    """

    def __init__(self, degree, values=None, ring='Q', support=None):
        if ring not in ('Z', 'Q'):
            raise StructuralError(f"Cochains take values in Z or Q, not {ring}")
        self.degree = degree
        self.ring = ring
        self.support = support
        self.values = {}
        for simplex, value in (values or {}).items():
            simplex = tuple(simplex)
            if value == 0:
                continue
            if len(simplex) != degree + 1:
                raise StructuralError(f"Simplex {simplex} does not have degree {degree}")
            if support is not None and not support.contains(simplex):
                raise StructuralError(f"Simplex {simplex} is not in the support")
            value = Fraction(value)
            if ring == 'Z':
                if value.denominator != 1:
                    raise StructuralError(f"Non-integral value {value} on {simplex}")
                value = value.numerator
            self.values[simplex] = value


    @classmethod
    def from_oriented(cls, degree, oriented_values, ring='Q', support=None):

        """ Values given on ordered vertex tuples; reordering to sorted form applies the sign. """

        values = {}
        for simplex, value in oriented_values.items():
            sign, key = permutation_sign(simplex)
            values[key] = values.get(key, 0) + sign * Fraction(value)
        return cls(degree, values, ring, support)


    def value_on(self, simplex):
        sign, key = permutation_sign(simplex)
        return sign * self.values.get(key, 0)


    def coboundary(self):
        if self.support is None:
            raise StructuralError("Coboundary needs a cochain with a support")
        values = {}
        for simplex in self.support.simplices(self.degree + 1):
            total = sum(sign * self.values.get(face, 0) for sign, face in boundary_faces(simplex))
            if total:
                values[simplex] = total
        return SimplicialCochain(self.degree + 1, values, self.ring, self.support)


    def restrict(self, support):
        values = {s: v for s, v in self.values.items() if support.contains(s)}
        return SimplicialCochain(self.degree, values, self.ring, support)


    def __add__(self, other):
        if self.degree != other.degree:
            raise StructuralError("Cannot add cochains of different degrees")
        values = dict(self.values)
        for s, v in other.values.items():
            values[s] = values.get(s, 0) + v
        ring = 'Z' if self.ring == other.ring == 'Z' else 'Q'
        return SimplicialCochain(self.degree, values, ring, self.support or other.support)


    def __neg__(self):
        return SimplicialCochain(self.degree, {s: -v for s, v in self.values.items()}, self.ring, self.support)


    def __sub__(self, other):
        return self + (-other)


    def __mul__(self, scalar):
        ring = self.ring if Fraction(scalar).denominator == 1 else 'Q'
        return SimplicialCochain(self.degree, {s: v * scalar for s, v in self.values.items()}, ring, self.support)


    __rmul__ = __mul__


    def __eq__(self, other):
        return isinstance(other, SimplicialCochain) and self.degree == other.degree and self.values == other.values


    def is_zero(self):
        return not self.values


    def pairing(self, chain):

        """ ⟨c, Σ a_σ σ⟩ for a chain given as {simplex: coefficient}. """

        return sum((Fraction(a) * self.values.get(s, 0) for s, a in chain.items()), Fraction(0))


    def __repr__(self):
        return f"SimplicialCochain(degree={self.degree}, ring={self.ring}, values={self.values})"




def coboundary(cochain):
    return cochain.coboundary()




def coboundary_map(support, q, source_offset=0, target_offset=0, sign=1):

    """
    Columns of the simplicial coboundary C^q(support) → C^{q+1}(support), placed at the
    given coordinate offsets.
    """

    columns = {}
    position = {s: k for k, s in enumerate(support.simplices(q + 1))}
    for k, simplex in enumerate(support.simplices(q)):
        column = {}
        for v in range(support.n_vertices):
            if v in simplex:
                continue
            sign_v, coface = permutation_sign((v,) + simplex)
            if coface in position:
                column[target_offset + position[coface]] = sign * sign_v
        if column:
            columns[source_offset + k] = column
    return columns




def cochain_complex(complex_, ring):

    """
    The cochain complex of `complex_` with coefficients Z, Q, or T modelled as the cone of
    Z → Q: degree n is C^n(Z) ⊕ C^{n-1}(Q) with D(a, b) = (δa, a - δb), whose cohomology
    in degree n + 1 is H^n(X; Q/Z).
    """

    if ring not in RINGS:
        raise StructuralError(f"Unknown coefficient ring {ring}")
    top = complex_.dimension + 2
    spaces, differentials = {}, {}
    for n in range(0, top + 1):
        if ring == 'Z':
            spaces[n] = MixedSpace(complex_.count(n), 0)
        elif ring == 'Q':
            spaces[n] = MixedSpace(0, complex_.count(n))
        else:
            spaces[n] = MixedSpace(complex_.count(n), complex_.count(n - 1))
    for n in range(0, top):
        source, target = spaces[n], spaces[n + 1]
        columns = coboundary_map(complex_, n)
        if ring == 'T':
            for j, column in coboundary_map(complex_, n - 1, source.nZ, target.nZ, -1).items():
                columns.setdefault(j, {}).update(column)
            for k in range(complex_.count(n)):
                columns.setdefault(k, {})[target.nZ + k] = 1
        differentials[n] = MixedMap(source, target, columns)
    return MixedComplex(spaces, differentials)




def simplicial_cohomology(complex_, ring, n):

    """
    H^n(X; Z), H^n(X; Q) or H^n(X; T) in the rational model (T = Q/Z).
    """

    if n < 0:
        return MixedModule()
    shift = 1 if ring == 'T' else 0
    C = cochain_complex(complex_, ring)
    if n + shift > C.hi:
        return MixedModule()
    return cohomology_at(C, n + shift).module




def cycle_basis(complex_, q):

    """ Z-basis of the q-cycles, as chains {simplex: coefficient}. """

    source = MixedSpace(complex_.count(q), 0)
    target = MixedSpace(complex_.count(q - 1), 0)
    columns = {}
    faces = {s: k for k, s in enumerate(complex_.simplices(q - 1))}
    for k, simplex in enumerate(complex_.simplices(q)):
        if q > 0:
            columns[k] = {faces[face]: sign for sign, face in boundary_faces(simplex)}
    boundary = MixedMap(source, target, columns)
    simplices = complex_.simplices(q)
    return [{simplices[k]: v for k, v in g.items()} for g in kernel(boundary).z_gens]




def is_integral_closed(cochain, complex_=None):

    """
    Whether a closed rational cochain has integral periods: it pairs integrally with a
    Z-basis of the cycles (boundaries pair to zero, torsion classes to zero).

    Raises:
    PreconditionError: if the cochain is not closed.
    """

    complex_ = complex_ or cochain.support
    cochain = SimplicialCochain(cochain.degree, cochain.values, 'Q', complex_)
    if not cochain.coboundary().is_zero():
        raise PreconditionError("Cochain is not closed", code='not_closed')
    return all(cochain.pairing(cycle).denominator == 1 for cycle in cycle_basis(complex_, cochain.degree))




def star_as_complex(star):
    vertices = sorted({v for s in star.all_simplices() for v in s})
    relabel = {v: k for k, v in enumerate(vertices)}
    facets = [tuple(relabel[v] for v in s) for s in star.all_simplices()]
    return SimplicialComplex([star.base.labels[v] for v in vertices], facets)




def is_acyclic(star, ring='Z'):

    """ Whether a nonempty star has the cohomology of a point. """

    if star.is_empty:
        return False
    sub = star_as_complex(star)
    point = MixedModule(rank_z=1) if ring == 'Z' else MixedModule(rank_q=1)
    return all(
        simplicial_cohomology(sub, ring, n) == (point if n == 0 else MixedModule())
        for n in range(0, sub.dimension + 2)
    )
