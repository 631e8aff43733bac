import logging
from fractions import Fraction
from dataclasses import dataclass, field
from Algebra.mixed import MixedSpace, MixedMap
from Algebra.cohomology import kernel, is_coboundary, Witness
from Algebra.exceptions import StructuralError, PreconditionError
from Simplicial.cochains import SimplicialCochain, cycle_basis
from Deligne.assembly import ModelSpec, TripleCochain, Cell
from Deligne.borel import invariant_cochain_basis
from Deligne.engine import assemble




logger = logging.getLogger(__name__)




def pullback(action, g, cochain):

    """ (g^*c)(σ) = c(gσ) with the orientation sign. """

    values = {}
    for simplex in action.space.simplices(cochain.degree):
        sign, image = action.act_oriented(g, simplex)
        value = cochain.values.get(image, 0)
        if value:
            values[simplex] = sign * value
    return SimplicialCochain(cochain.degree, values, cochain.ring, action.space)


def average(action, cochain):

    """ The averaging projector (1/|G|) Σ_g g^* onto invariant cochains. """

    total = SimplicialCochain(cochain.degree, {}, 'Q', action.space)
    for g in action.group.elements:
        total = total + pullback(action, g, cochain)
    return total * Fraction(1, action.group.order)


def is_invariant(action, cochain):
    return all(pullback(action, g, cochain) == cochain for g in action.group.elements)




@dataclass
class InvariantForms:

    """
    A^q(M)^G in the rational model: an orbit basis, a basis of its closed part, the closed
    forms with zero periods, and a Z-basis of the closed forms with integral periods
    modulo those.
    """

    degree: int
    basis: list
    closed: list
    exact: list
    integral: list = field(default_factory=list)

    @property
    def dimension(self):
        return len(self.basis)




def _combine(action, q, basis, coefficients):
    values = {}
    for k, c in coefficients.items():
        for simplex, sign in basis[k].items():
            values[simplex] = values.get(simplex, 0) + sign * Fraction(c)
    return SimplicialCochain(q, values, 'Q', action.space)


def invariant_forms(action, q):
    X = action.space
    orbits = invariant_cochain_basis(action, q)
    basis = [SimplicialCochain(q, element, 'Q', X) for element in orbits]

    targets = {s: k for k, s in enumerate(X.simplices(q + 1))}
    source = MixedSpace(0, len(basis))
    columns = {}
    for k, form in enumerate(basis):
        columns[k] = {targets[s]: v for s, v in form.coboundary().values.items()}
    closed_generators = kernel(MixedMap(source, MixedSpace(0, len(targets)), columns)).q_gens
    closed = [_combine(action, q, orbits, g) for g in closed_generators]

    cycles = cycle_basis(X, q) if q <= X.dimension else []
    b, k = len(cycles), len(closed)
    periods = MixedSpace(0, b)
    columns = {i: {i: Fraction(-1)} for i in range(b)}
    for j, form in enumerate(closed):
        columns[b + j] = {i: form.pairing(cycle) for i, cycle in enumerate(cycles)}
    relations = kernel(MixedMap(MixedSpace(b, k), periods, columns))

    def form_part(vector):
        total = SimplicialCochain(q, {}, 'Q', X)
        for j in range(k):
            total = total + closed[j] * Fraction(vector.get(b + j, 0))
        return total

    exact = [form_part(g) for g in relations.q_gens]
    integral = [form for form in (form_part(g) for g in relations.z_gens) if not form.is_zero()]
    logger.debug(f"A^{q}(M)^G: dimension {len(basis)}, closed {len(closed)}, exact {len(exact)}")
    return InvariantForms(q, basis, closed, exact, integral)




def _representative(result_or_cochain):
    if isinstance(result_or_cochain, TripleCochain):
        return result_or_cochain
    if not result_or_cochain.representatives:
        raise PreconditionError("The cohomology group has no generators", code='degree')
    return result_or_cochain.representatives[0]


def curvature(action, N, cochain, cover=None):

    """
    The curvature F of a D-cocycle of total degree N + 1: F(σ) = δ(c_{A,N+1})(σ) for any
    level-0 patch A whose star contains σ. The local values glue, and F is closed,
    G-invariant and has integral periods.

    Raises:
    PreconditionError: if the cochain does not have total degree N + 1.
    """

    if cochain.degree != N + 1:
        raise PreconditionError(
            f"Curvature is defined on total degree {N + 1}, got {cochain.degree}", code='degree'
        )
    assembly = assemble(ModelSpec(action, N, (N, N), cover=cover))
    cover_ = assembly.cover
    X = action.space
    values = {}
    for sigma in X.simplices(N + 1):
        for atom in cover_.multi_indices(0, (), 0):
            patch = cover_.patch(0, (), atom)
            if not patch.star.contains(sigma):
                continue
            local = SimplicialCochain(N, cochain.patch_cochain(0, (), atom, N + 1), 'Q', patch.star)
            value = local.coboundary().values.get(sigma, 0)
            if value:
                values[sigma] = value
            break
    return SimplicialCochain(N + 1, values, 'Q', X)


def result_curvature(result):

    """ Curvature of the first generator of an H^N result. """

    action = result.assembly.action
    return curvature(action, result.N, _representative(result), result.assembly.spec.cover)




@dataclass
class EquivariantForm:

    """
    An element of the double complex (A^j(G^i×M), ∂, d) by its components {(i, j): cochain}.
    For a finite group only the (0, N + 1) component is ever nonzero.
    """

    degree: int
    components: dict

    def component(self, i, j):
        return self.components.get((i, j))




def equivariant_deRham_map(action, N, cochain, cover=None):

    """
    The class of (F, 0, ..., 0) in equivariant de Rham cohomology. ∂F = 0 is invariance and
    dF = 0 closedness.

    Raises:
    StructuralError: if either identity fails, which only a broken model can cause.
    """

    form = curvature(action, N, cochain, cover)
    if not form.coboundary().is_zero():
        raise StructuralError("Curvature is not closed")
    if not is_invariant(action, form):
        raise StructuralError("Curvature is not G-invariant")
    return EquivariantForm(N + 1, {(0, N + 1): form})




def extended_spec(action, N, window=None, cover=None):

    """ The model with every form degree of M, whose total complex resolves π⁻¹T. """

    return ModelSpec(action, N, window or (N, N + 1), cover=cover, top_slot=max(action.space.dimension + 1, N + 2))


def form_cocycle(assembly, N, form):

    """ A global (N+1)-form placed on every level-0 patch in slot N + 2 of the extended model. """

    entries = {}
    for atom in assembly.cover.multi_indices(0, (), 0):
        patch = assembly.cover.patch(0, (), atom)
        for simplex in patch.star.simplices(N + 1):
            value = form.values.get(simplex, 0)
            if value:
                entries[Cell(0, (), atom, N + 2, simplex)] = value
    return TripleCochain(N + 2, entries)


def realize_curvature(action, N, form, cover=None):

    """
    A D-cocycle of total degree N + 1 of the Z(N+1)-model whose curvature is `form`, or a
    Certificate that the form is not a curvature.

    Raises:
    PreconditionError: if the form is not closed or not invariant.
    """

    if form.degree != N + 1:
        raise PreconditionError(f"Expected an {N + 1}-form, got degree {form.degree}", code='degree')
    form = SimplicialCochain(form.degree, form.values, 'Q', action.space)
    if not form.coboundary().is_zero():
        raise PreconditionError("Form is not closed", code='not_closed')
    if not is_invariant(action, form):
        raise PreconditionError("Form is not G-invariant", code='not_invariant')
    assembly = assemble(extended_spec(action, N, cover=cover))
    complex_ = assembly.to_mixed_complex(N + 1, N + 3)
    x = form_cocycle(assembly, N, form)
    verdict = is_coboundary(complex_, N + 2, x.to_vector(assembly))
    if not isinstance(verdict, Witness):
        logger.info(f"Form of degree {N + 1} is not a curvature: {verdict.generator}")
        return verdict
    y = TripleCochain.from_vector(assembly, N + 1, verdict.cochain)
    truncated = TripleCochain(N + 1, {cell: v for cell, v in y.entries.items() if cell.slot <= N + 1})
    return Witness(truncated)
