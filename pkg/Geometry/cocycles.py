import logging
from fractions import Fraction
from dataclasses import dataclass
from Algebra.cohomology import solve_mixed, NoSolution
from Algebra.exceptions import PreconditionError, StructuralError
from Deligne.assembly import ModelSpec, TripleCochain, Cell
from Deligne.engine import assemble




logger = logging.getLogger(__name__)

# (level, Čech degree, slot) of every component, named after the data it models. The
# integer witnesses z, w, v, u fix the logarithm branches of the T-valued components.
BUNDLE_COMPONENTS = {
    (0, 2, 0): 'z', (0, 1, 1): 'a', (0, 0, 2): 'theta',
    (1, 1, 0): 'w', (1, 0, 1): 'b',
    (2, 0, 0): 'u',
}

GERBE_COMPONENTS = {
    (0, 3, 0): 'z', (0, 2, 1): 'f', (0, 1, 2): 'theta1', (0, 0, 3): 'theta2',
    (1, 2, 0): 'w', (1, 1, 1): 'g', (1, 0, 2): 'omega1',
    (2, 1, 0): 'v', (2, 0, 1): 'h',
    (3, 0, 0): 'u',
}

KINDS = {'bundle': (1, BUNDLE_COMPONENTS), 'gerbe': (2, GERBE_COMPONENTS)}




def violation_name(level, slot, N):

    """ Which condition a nonzero component of D(c) at (level, ·, slot) breaks. """

    if level == 0:
        return 'connection_compatibility' if slot >= 2 else 'cech_cocycle'
    if level == 1:
        return 'equivariance'
    return 'lift_cocycle'




@dataclass
class GeomCocycle:

    """
    A bundle (N = 1, total degree 2) or gerbe (N = 2, total degree 3) cocycle of the
    Z(N+1)-model, with its components addressed by name.
    """

    kind: str
    action: object
    cochain: TripleCochain
    N: int = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise StructuralError(f"Unknown cocycle kind {self.kind!r}")
        if self.N is None:
            self.N = KINDS[self.kind][0]
        if self.cochain.degree != self.degree:
            raise PreconditionError(
                f"A {self.kind} cocycle has total degree {self.degree}, got {self.cochain.degree}", code='degree'
            )


    @property
    def degree(self):
        return KINDS[self.kind][0] + 1


    @property
    def names(self):
        return KINDS[self.kind][1]


    def component(self, name):
        for (level, j, slot), label in self.names.items():
            if label == name:
                return self.cochain.component(level, j, slot)
        raise StructuralError(f"A {self.kind} cocycle has no component {name!r}")


    def components(self):
        return {label: self.component(label) for label in self.names.values()}


    def assembly(self, N=None):
        N = self.N if N is None else N
        return assemble(ModelSpec(self.action, N, (self.degree - 1, self.degree - 1)))


    def __add__(self, other):
        return GeomCocycle(self.kind, self.action, self.cochain + other.cochain, self.N)


    def __sub__(self, other):
        return GeomCocycle(self.kind, self.action, self.cochain - other.cochain, self.N)


    @classmethod
    def zero(cls, kind, action):
        return cls(kind, action, TripleCochain(KINDS[kind][0] + 1))




def complete_cocycle(assembly, partial, free):

    """
    Solves D(partial + y) = 0 for y supported on the cells selected by `free`.

    Returns:
    the completed TripleCochain, or the NoSolution certificate.
    """

    n = partial.degree
    labels = assembly.space(n).labels
    coordinates = [k for k, cell in enumerate(labels) if free(cell)]
    target = list(range(assembly.space(n + 1).dim))
    f = assembly.differential(n).restrict(coordinates, target)
    rhs = {k: -v for k, v in assembly.differential(n).apply(partial.to_vector(assembly)).items()}
    solution = solve_mixed(f, rhs)
    if isinstance(solution, NoSolution):
        return solution
    vector = partial.to_vector(assembly)
    for k, value in solution.items():
        vector[coordinates[k]] = vector.get(coordinates[k], 0) + value
    return TripleCochain.from_vector(assembly, n, vector)


def constant_cochain(assembly, level, slot, values, degree):

    """
    The cochain carrying the constant values[copy] on every vertex of every Čech 0-patch of
    `copy` at `level`, in slot 1 (a constant function) of total degree `degree`.
    """

    if slot != 1 or level + slot != degree:
        raise StructuralError(f"Constants sit in slot 1 at level {degree - 1}")
    entries = {}
    for copy, value in values.items():
        value = Fraction(value)
        if not value:
            continue
        for index in assembly.cover.multi_indices(level, tuple(copy), 0):
            patch = assembly.cover.patch(level, tuple(copy), index)
            for vertex in patch.star.simplices(0):
                entries[Cell(level, tuple(copy), index, 1, vertex)] = value
    return TripleCochain(degree, entries)


def group_cochain_cocycle(kind, action, values):

    """
    The cocycle of a T-valued group cochain of degree p = N (a character for bundles, a
    discrete-torsion 2-cocycle for gerbes) given by rational lifts, completed with the
    integer witnesses one level up.

    Raises:
    PreconditionError: if the lifts do not define a cocycle mod Z.
    """

    N = KINDS[kind][0]
    degree = N + 1
    assembly = assemble(ModelSpec(action, N, (N, N)))
    partial = constant_cochain(assembly, N, 1, values, degree)
    completed = complete_cocycle(assembly, partial, lambda cell: cell.level == N + 1 and cell.slot == 0)
    if isinstance(completed, NoSolution):
        raise PreconditionError(f"The group cochain is not a cocycle mod Z", code='not_cocycle')
    return GeomCocycle(kind, action, completed)


def form_cochain(assembly, form, slot):

    """ A global cochain placed on every level-0 Čech 0-patch in `slot` (a (slot-1)-form). """

    entries = {}
    for index in assembly.cover.multi_indices(0, (), 0):
        patch = assembly.cover.patch(0, (), index)
        for simplex in patch.star.simplices(slot - 1):
            value = form.values.get(simplex, 0)
            if value:
                entries[Cell(0, (), index, slot, simplex)] = value
    return TripleCochain(slot, entries)


def global_form_cocycle(kind, action, form):

    """
    The cocycle of a global G-invariant N-form (a flat-on-overlaps connection or curving),
    completed over the higher levels when the group is nontrivial.
    """

    N = KINDS[kind][0]
    if form.degree != N:
        raise PreconditionError(f"A {kind} needs an {N}-form, got degree {form.degree}", code='degree')
    assembly = assemble(ModelSpec(action, N, (N, N)))
    partial = form_cochain(assembly, form, N + 1)
    completed = complete_cocycle(assembly, partial, lambda cell: cell.level >= 1)
    if isinstance(completed, NoSolution):
        raise PreconditionError("The form does not extend to an equivariant cocycle", code='not_invariant')
    return GeomCocycle(kind, action, completed)
