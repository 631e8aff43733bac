import logging
from Algebra.mixed import MixedSpace, MixedMap, MixedComplex
from Algebra.modules import MixedModule
from Algebra.cohomology import cohomology_at
from Algebra.exceptions import PreconditionError
from Simplicial.cochains import cochain_complex, coboundary_map
from Deligne.group_cohomology import bar_double_complex




logger = logging.getLogger(__name__)




def simplicial_pullback(action, g, q, offset=0):

    """
    g^* on q-cochains: the indicator of s goes to ±(indicator of g⁻¹s), the sign being the
    orientation change of g on g⁻¹s.
    """

    X = action.space
    position = {s: k for k, s in enumerate(X.simplices(q))}
    inverse = action.group.inv(g)
    columns = {}
    for k, s in enumerate(X.simplices(q)):
        preimage = action.act(inverse, s)
        sign, _ = action.act_oriented(g, preimage)
        columns[offset + k] = {offset + position[preimage]: sign}
    return columns


def cochain_action(action, ring):

    """ Pullback maps on cochain_complex(M, ring), degree by degree. """

    complex_ = cochain_complex(action.space, ring)
    maps = {}
    for g in action.group.elements:
        maps[g] = {}
        for n in range(complex_.lo, complex_.hi + 1):
            space = complex_.space(n)
            columns = {}
            if ring == 'Z':
                columns.update(simplicial_pullback(action, g, n))
            elif ring == 'Q':
                columns.update(simplicial_pullback(action, g, n, space.nZ))
            else:
                columns.update(simplicial_pullback(action, g, n))
                if n >= 1:
                    columns.update(simplicial_pullback(action, g, n - 1, space.nZ))
            maps[g][n] = MixedMap(space, space, columns)
    return complex_, maps




def equivariant_integral_cohomology(action, m, coefficients='Z'):

    """
    H^m_G(M; Z), H^m_G(M; Q) or H^m_G(M; T) from the double complex of simplicial cochains
    on G^•×M. T is the cone of Z → Q, so its degree m sits in total degree m + 1.
    """

    if m < 0:
        return MixedModule()
    complex_, maps = cochain_action(action, coefficients)
    n = m + 1 if coefficients == 'T' else m
    total, _ = bar_double_complex(action.group, complex_, maps, max(n - 1, 0), n + 1)
    module = cohomology_at(total, n).module
    logger.info(f"H^{m}_{action.group.name}(M; {coefficients}) = {module}")
    return module




def invariant_cochain_basis(action, q):

    """ Orbit sums of q-simplices, as signed {simplex: ±1}; orbits that cancel are dropped. """

    basis, seen = [], set()
    for s in action.space.simplices(q):
        if s in seen:
            continue
        element = {}
        for g in action.group.elements:
            sign, image = action.act_oriented(g, s)
            element.setdefault(image, set()).add(sign)
            seen.add(image)
        if all(len(signs) == 1 for signs in element.values()):
            basis.append({image: signs.pop() for image, signs in element.items()})
    return basis


def quotient_cohomology(action, m):

    """
    Cohomology of the G-invariant integral cochains, which computes H^m(M/G; Z) = H^m_G(M; Z)
    for a free action.

    Raises:
    PreconditionError: if the action is not free.
    """

    if not action.is_free():
        raise PreconditionError("The quotient model needs a free action", code='not_free')
    X = action.space
    bases = {q: invariant_cochain_basis(action, q) for q in range(0, X.dimension + 2)}
    spaces = {q: MixedSpace(len(bases[q]), 0) for q in bases}
    differentials = {}
    for q in range(0, X.dimension + 1):
        coboundary = coboundary_map(X, q)
        position = {s: k for k, s in enumerate(X.simplices(q))}
        target_index = {}
        for k, element in enumerate(bases[q + 1]):
            for s, sign in element.items():
                target_index[s] = (k, sign)
        columns = {}
        for k, element in enumerate(bases[q]):
            image = {}
            for s, sign in element.items():
                for face_position, value in coboundary.get(position[s], {}).items():
                    image[face_position] = image.get(face_position, 0) + sign * value
            column = {}
            for face_position, value in image.items():
                if value:
                    t, orientation = target_index[X.simplices(q + 1)[face_position]]
                    column[t] = value * orientation
            columns[k] = column
        differentials[q] = MixedMap(spaces[q], spaces[q + 1], columns)
    complex_ = MixedComplex(spaces, differentials)
    if m > complex_.hi:
        return MixedModule()
    return cohomology_at(complex_, m).module
